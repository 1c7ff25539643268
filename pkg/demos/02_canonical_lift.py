#!/usr/bin/env python3
"""The canonical lift: unit-determinant normalization and when it exists.

Rescaling vertex representatives V_i -> lambda_i V_i so that every
consecutive triple has determinant one leads to a linear system for the
log-scales. Its integer coefficient matrix has determinant +-3 when
n mod 3 is 0 or 2 and is singular when n mod 3 is 1, so spirals with
n = 7, 10, 13, ... admit no canonical lift at all.
"""

import numpy as np

import spirallax as sx
from spirallax import errors
from spirallax.lift import build_lambda_system

print("determinant of the rescaling system by n:")
for n in range(5, 14):
    det = build_lambda_system(n, np.ones(n + 1)).int_det()
    status = "unique lift" if det != 0 else "NO lift"
    print(f"  n = {n:2d}: det = {det:+d}   ({status})")

seed = sx.random_seed(n=5, rng_seed=3, twist=0.1)
ls = sx.canonical_lift(seed)
print("\nunit-determinant residuals on the seed window (n = 5):")
for i in range(seed.n + 1):
    print(f"  det(V_{i}, V_{i + 1}, V_{i + 2}) - 1 = {ls.det_rho(i) - 1.0:+.3e}")
print(f"  det(rho_{seed.n + 1}) = {ls.det_rho(seed.n + 1):+.6f}  (this is c_n)")

# uniqueness: feeding in wildly rescaled representatives of the same points
# returns the same vectors, not merely the same projective points
rng = np.random.default_rng(0)
factors = rng.uniform(0.1, 10.0, size=seed.n + 1)
rescaled = sx.Seed(
    n=seed.n,
    points=tuple(f * p for f, p in zip(factors[:-1], seed.points)),
    side_point=factors[-1] * seed.side_point,
    monodromy=seed.monodromy,
)
ls2 = sx.canonical_lift(rescaled)
dev = max(float(np.max(np.abs(ls[i] - ls2[i]))) for i in range(-3, seed.n + 6))
print(f"\nmax componentwise change after rescaling the input: {dev:.3e}")

try:
    bad = sx.Seed(
        n=7,
        points=tuple(
            np.array([np.cos(2 * np.pi * k / 7), np.sin(2 * np.pi * k / 7), 1.0])
            for k in range(7)
        ),
        side_point=0.5
        * (
            np.array([np.cos(12 * np.pi / 7), np.sin(12 * np.pi / 7), 1.0])
            + np.array([1.0, 0.0, 1.0])
        ),
        monodromy=np.eye(3),
    )
    sx.canonical_lift(bad)
except errors.NotLiftable as exc:
    print(f"\nn = 7 refuses as expected: {exc}")
