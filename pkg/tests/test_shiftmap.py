import numpy as np
import pytest

import spirallax as sx
from spirallax.shiftmap import _sigma, measured_lift_ratio


def test_alpha_beta_satisfy_defining_equations(instances):
    for n in (5, 6, 8, 9):
        c, d = instances[n]["coords"], instances[n]["derived"]
        ab = sx.alpha_beta(c, d)
        q = d.A[1] / (d.A[3] * d.A[0])
        if n % 3 == 2:
            assert ab.alpha**2 * ab.beta == pytest.approx(c.c_n, rel=1e-12)
            assert ab.alpha * ab.beta**2 == pytest.approx(q, rel=1e-12)
        else:
            assert ab.alpha / ab.beta == pytest.approx(c.c_n, rel=1e-12)
            assert ab.alpha**2 * ab.beta == pytest.approx(q, rel=1e-12)


def test_alpha_beta_trivial_instance():
    # c_n = 1 and A_3 A_0 / A_1 = 1 force alpha = beta = 1; build such a
    # chart directly (b = 0 gives every A_i = 1 except A_0, pinned below)
    n = 5
    a = np.array([1.0, 1.0, 1.0, 1.0, 1.0])
    b = np.zeros(5)
    c = sx.Coords(n=n, a=a, b=b, c_n=1.0)
    ab = sx.alpha_beta(c)
    assert ab.alpha == pytest.approx(1.0, abs=1e-14)
    assert ab.beta == pytest.approx(1.0, abs=1e-14)


def test_alpha_beta_invariant_under_scaling(instances):
    for n in (5, 6):
        c = instances[n]["coords"]
        ab = sx.alpha_beta(c)
        for mu in (0.3, 2.5):
            ab2 = sx.alpha_beta(sx.scaling_action(c, mu))
            assert ab2.alpha == pytest.approx(ab.alpha, rel=1e-10)
            assert ab2.beta == pytest.approx(ab.beta, rel=1e-10)


def test_lift_ratios_match_schedule(instances):
    for n in (5, 6, 8, 9):
        seed, ls, c = instances[n]["seed"], instances[n]["lift"], instances[n]["coords"]
        ab = sx.alpha_beta(c)
        sched = sx.exp_schedule(n)
        shifted = sx.canonical_lift(sx.geometric_shift(seed))
        for i in range(0, n + 5):
            meas = measured_lift_ratio(ls, shifted, i)
            pred = _sigma(ab, sched, i)
            assert meas == pytest.approx(pred, rel=1e-8), (n, i)


def test_schedule_period_three_in_the_bulk():
    for n in (5, 6, 8, 9):
        sched = sx.exp_schedule(n)
        for j in range(1, n):
            assert sched.sigma_exponents(j) == sched.sigma_exponents(j + 3)


def test_schedule_rejects_out_of_range():
    sched = sx.exp_schedule(5)
    from spirallax.errors import IndexOutOfRange

    with pytest.raises(IndexOutOfRange):
        sched.sigma_exponents(5 + 5)


def test_shift_matches_geometric_route(instances):
    for n in (5, 6, 8, 9):
        rep = sx.verify_shift_commutation(instances[n]["seed"])
        assert rep["pass"], rep


def test_shift_commutation_many_instances():
    for n in (5, 6):
        for s in range(20):
            seed = sx.random_seed(n, rng_seed=100 + s, twist=0.15)
            rep = sx.verify_shift_commutation(seed)
            assert rep["max_dev"] < 1e-7, (n, s, rep)


def test_shifted_chart_is_canonical(instances):
    # the closed form must land on the chart of the shifted spiral's own
    # canonical lift, whose c-values are again 1 (checked by extract)
    seed = instances[5]["seed"]
    shifted = sx.extract_coords(sx.canonical_lift(sx.geometric_shift(seed)))
    assert shifted.n == 5


def test_product_of_inner_a_preserved_n5(instances):
    c = instances[5]["coords"]
    out = sx.shift_coords(c)
    lhs = np.prod(out.a[1:5])
    rhs = np.prod(c.a[1:5])
    assert lhs == pytest.approx(rhs, rel=1e-9)


def test_shift_advances_the_A_combinations(instances):
    for n in (5, 6, 8):
        c, d = instances[n]["coords"], instances[n]["derived"]
        out = sx.shift_coords(c)
        d_out = sx.derive(out)
        for i in range(0, n - 1):
            assert d_out.A[i] == pytest.approx(d.A[i + 1], rel=1e-8), (n, i)


def test_scaling_action_basics(instances):
    c = instances[5]["coords"]
    same = sx.scaling_action(c, 1.0)
    np.testing.assert_array_equal(same.as_vector(), c.as_vector())
    mu = 1.7
    scaled = sx.scaling_action(c, mu)
    d0, d1 = sx.derive(c), sx.derive(scaled)
    assert d1.a_n == pytest.approx(mu * d0.a_n, rel=1e-12)
    assert d1.b_n == pytest.approx(d0.b_n / mu, rel=1e-12)
    assert d1.c_n1 == pytest.approx(d0.c_n1, rel=1e-12)
    np.testing.assert_allclose(d1.A, d0.A, rtol=1e-12)


def test_scaling_equivariance(instances):
    for n, mu in ((5, 2.5), (6, 0.3), (5, 1.0)):
        rep = sx.verify_equivariance(instances[n]["coords"], mu)
        if mu == 1.0:
            assert rep["max_dev"] == 0.0
        assert rep["max_dev"] < 1e-7, rep


def test_monodromy_class_preserved_by_shift(instances):
    # eigenvalues of the representative agree before and after the shift
    for n in (5, 6):
        c = instances[n]["coords"]
        before = np.linalg.eigvals(sx.monodromy_representative(c))
        after = np.linalg.eigvals(sx.monodromy_representative(sx.shift_coords(c)))

        def ordered(vals):
            return sorted(vals, key=lambda z: (abs(z), np.angle(z)))

        for x, y in zip(ordered(before), ordered(after)):
            assert abs(x - y) <= 1e-6 * max(1.0, abs(x))


def test_orbit_helper_length(instances):
    orbit = sx.shift_orbit(instances[5]["coords"], 4)
    assert len(orbit) == 5
