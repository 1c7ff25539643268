#!/usr/bin/env python3
"""Build a twisted spiral from a seed and walk its vertex sequence.

A seed is a convex n-gon, one extra point on the side joining p_n to the
monodromy image of p_1, and the monodromy itself. The spiral continues the
seed forever in both directions: forward vertices are diagonal
intersections of earlier ones, backward vertices undo that construction.
"""

import os

import numpy as np

import spirallax as sx
from spirallax.cli import spiral_svg

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

seed = sx.random_seed(n=6, rng_seed=11, twist=0.15)
print(f"seed: n = {seed.n}, det(monodromy) = {np.linalg.det(seed.monodromy):.12f}")
print("base points (affine chart):")
for i, p in enumerate(seed.points, start=1):
    print(f"  p_{i} = ({p[0] / p[2]:+.4f}, {p[1] / p[2]:+.4f})")
side = seed.side_point
print(f"  side point p_7 = ({side[0] / side[2]:+.4f}, {side[1] / side[2]:+.4f})")

# the canonical lift fixes vertex representatives in 3-space; its window
# covers three backward vertices and the first forward turns of the spiral
ls = sx.canonical_lift(seed)
print(f"\nlift window: [{ls.window.lo}, {ls.window.hi}]")
print("spiral vertices by index (affine chart):")
for i in range(ls.window.lo, ls.window.hi + 1):
    v = ls[i]
    tag = " (seed)" if 1 <= i <= seed.n + 1 else ""
    print(f"  V_{i:+d} -> ({v[0] / v[2]:+.4f}, {v[1] / v[2]:+.4f}){tag}")

# a longer stretch of the spiral, rendered
wide = ls.extended(2 * seed.n, 0)
path = os.path.join(OUT, "spiral_n6.svg")
with open(path, "w") as fh:
    fh.write(spiral_svg(wide))
print(f"\nwrote {path}")

# the classical closed-polygon map returns a pentagon to itself projectively
pentagon = [
    np.array([np.cos(2 * np.pi * k / 5), np.sin(2 * np.pi * k / 5), 1.0])
    for k in range(5)
]
image = sx.closed_pentagram_T(pentagon)
print(
    "\nclassical check: pentagon image projectively equivalent to the original:",
    sx.projectively_equivalent(pentagon, image, tol=1e-8),
)
