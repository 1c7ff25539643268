import numpy as np
import pytest

import spirallax as sx
from spirallax import errors
from spirallax.coords import (
    gauge_A,
    gauge_B,
    invariants_at,
    k_at,
    k_matrix,
    monodromy_representative,
    reconstruct_frames,
)
from spirallax.projgeo import mat_inverse, normalize_to_sl3
from spirallax.spiral import Seed


def test_base_c_values_are_one(instances):
    for n in (5, 6, 8, 9):
        ls = instances[n]["lift"]
        for i in range(n):
            assert invariants_at(ls, i)[2] == pytest.approx(1.0, abs=1e-10)


def test_three_term_recurrence_residual(instances):
    for n in (5, 6, 8):
        ls = instances[n]["lift"]
        for i in range(ls.window.lo, ls.window.hi - 2):
            a, b, c = invariants_at(ls, i)
            res = ls[i + 3] - (a * ls[i + 2] + b * ls[i + 1] + c * ls[i])
            assert float(np.max(np.abs(res))) < 1e-8


def test_extraction_is_projectively_invariant(instances, rng):
    seed = instances[6]["seed"]
    h = normalize_to_sl3(np.eye(3) + 0.2 * rng.normal(size=(3, 3)))
    moved = Seed(
        n=seed.n,
        points=tuple(h @ p for p in seed.points),
        side_point=h @ seed.side_point,
        monodromy=h @ seed.monodromy @ mat_inverse(h),
    )
    c0 = instances[6]["coords"]
    c1 = sx.extract_coords(sx.canonical_lift(moved))
    np.testing.assert_allclose(c0.as_vector(), c1.as_vector(), rtol=1e-8, atol=1e-8)


# ---------------------------------------------------------------------------
# derived boundary invariants


def test_derived_against_geometric_extraction(instances):
    for n in (5, 6, 8, 9):
        ls, d = instances[n]["lift"], instances[n]["derived"]
        a_n, b_n, c_n1 = (
            invariants_at(ls, n)[0],
            invariants_at(ls, n)[1],
            invariants_at(ls, n + 1)[2],
        )
        a_m1, b_m1, c_m1 = invariants_at(ls, -1)
        for formula, geo in (
            (d.a_n, a_n),
            (d.b_n, b_n),
            (d.c_n1, c_n1),
            (d.a_m1, a_m1),
            (d.b_m1, b_m1),
            (d.c_m1, c_m1),
        ):
            assert formula == pytest.approx(geo, rel=1e-7, abs=1e-9)


def test_a_n_equals_a_1(instances):
    for n in (5, 6, 8, 9):
        c, ls = instances[n]["coords"], instances[n]["lift"]
        assert invariants_at(ls, n)[0] == pytest.approx(c.a[1], rel=1e-8)


def test_chart_identities(instances):
    for n in (5, 6, 8, 9):
        c, d = instances[n]["coords"], instances[n]["derived"]
        assert d.c_m1 == pytest.approx(c.a[-1] / c.a[0], rel=1e-10)
        assert d.c_m1 == pytest.approx(d.A[0] * d.A[1] / c.c_n, rel=1e-8)
        assert d.c_n1 == pytest.approx(c.c_n / (c.c_n + d.b_n * c.a[-2]), rel=1e-8)
        assert d.B_n == pytest.approx(c.c_n**2 / (d.A[1] * d.A[2]), rel=1e-8)
        # the chained boundary relation
        lhs = d.c_m1 / (1.0 + c.a[0] * d.b_m1)
        rhs = c.c_n / ((c.c_n + d.b_n * c.a[-2]) * (1.0 + c.a[2] * c.b[1]))
        assert lhs == pytest.approx(rhs, rel=1e-8)


def test_derive_raises_on_zero_divisor():
    c = sx.Coords(n=5, a=np.array([0.0, 1.0, 1.0, 1.0, 1.0]), b=np.ones(5), c_n=2.0)
    with pytest.raises(errors.GenericityViolation):
        sx.derive(c)


# ---------------------------------------------------------------------------
# gauge matrices


def test_gauge_A1_determinant(instances):
    for n in (5, 6, 8, 9):
        c, d = instances[n]["coords"], instances[n]["derived"]
        a1 = gauge_A(1, c, d)
        assert np.linalg.det(a1) / d.c_m1 == pytest.approx(c.c_n, rel=1e-8)


def test_seam_matrix_entries(instances):
    # A1^{-1} K_{-1} A2 reproduces the next transfer matrix:
    # c_{n+1} = c_{-1} A_2 / A_0, b_{n+1} = b_{-1} A_2 / A_0, a_{n+1} = a_2
    for n in (5, 6, 8):
        c, d = instances[n]["coords"], instances[n]["derived"]
        k_n1 = mat_inverse(gauge_A(1, c, d)) @ k_at(c, d, -1) @ gauge_A(2, c, d)
        assert k_n1[0, 2] == pytest.approx(d.c_m1 * d.A[2] / d.A[0], rel=1e-8)
        assert k_n1[1, 2] == pytest.approx(d.b_m1 * d.A[2] / d.A[0], rel=1e-8)
        assert k_n1[2, 2] == pytest.approx(c.a[2], rel=1e-8)
        np.testing.assert_allclose(k_n1[:, :2], k_matrix(0, 0, 0)[:, :2], atol=1e-9)


def test_gauge_relation_forward(instances):
    for n in (5, 6, 8):
        ls, c, d = instances[n]["lift"], instances[n]["coords"], instances[n]["derived"]
        ext = ls.extended(2, 0)
        for i in range(1, 5):
            lhs = k_matrix(*invariants_at(ext, n + i))
            rhs = mat_inverse(gauge_A(i, c, d)) @ k_at(c, d, i - 2) @ gauge_A(i + 1, c, d)
            scale = max(1.0, float(np.max(np.abs(lhs))))
            assert float(np.max(np.abs(lhs - rhs))) / scale < 1e-7


def test_gauge_relation_backward_n8(instances):
    ls = instances[8]["lift"].extended(0, 2)

    def inv(j):
        return invariants_at(ls, j)

    for i in (4, 5):
        lhs = k_matrix(*invariants_at(ls, -i))
        rhs = mat_inverse(gauge_B(i, 8, inv)) @ k_matrix(*inv(8 - i - 1)) @ gauge_B(i - 1, 8, inv)
        scale = max(1.0, float(np.max(np.abs(lhs))))
        assert float(np.max(np.abs(lhs - rhs))) / scale < 1e-7
        assert abs(np.linalg.det(gauge_B(i, 8, inv))) > 1e-12


def test_gauge_B_column_structure(instances):
    # zeroing b_{n-i-1} zeroes the second component of the first column
    ls = instances[8]["lift"]
    i = 4
    base = 8 - i - 1

    def inv_zero(j):
        a, b, c = invariants_at(ls, j)
        if j == base:
            b = 0.0
        return (a, b, c)

    bm = gauge_B(i, 8, inv_zero)
    assert bm[1, 0] == 0.0


def test_frames_rebuild_from_chart(instances):
    for n in (5, 8):
        ls, c, d = instances[n]["lift"], instances[n]["coords"], instances[n]["derived"]
        frames = reconstruct_frames(c, n + 2, d)
        for i, f in enumerate(frames[: n + 1]):
            assert np.linalg.det(f) == pytest.approx(1.0, rel=1e-8)
        assert np.linalg.det(frames[n + 1]) == pytest.approx(c.c_n, rel=1e-8)
        # lift frames differ from reconstructed frames by the common factor rho_0
        rho0 = ls.frame(0)
        for i in (1, 3, n):
            np.testing.assert_allclose(
                rho0 @ frames[i], ls.frame(i), rtol=1e-8, atol=1e-8
            )


def test_frames_recover_coordinates(instances):
    c, d = instances[6]["coords"], instances[6]["derived"]
    frames = reconstruct_frames(c, 8, d)
    verts = [frames[i][:, 0] for i in range(8)] + [frames[7][:, 1], frames[7][:, 2]]
    for i in range(5):
        den = np.dot(verts[i], np.cross(verts[i + 1], verts[i + 2]))
        a_i = np.dot(verts[i], np.cross(verts[i + 1], verts[i + 3])) / den
        b_i = np.dot(verts[i], np.cross(verts[i + 3], verts[i + 2])) / den
        assert a_i == pytest.approx(c.a[i], rel=1e-9)
        assert b_i == pytest.approx(c.b[i], rel=1e-9)


def test_monodromy_representative_is_conjugate(instances):
    for n in (5, 6, 8, 9):
        ls, c, d = instances[n]["lift"], instances[n]["coords"], instances[n]["derived"]
        rep = monodromy_representative(c, d)
        rho0 = ls.frame(0)
        want = mat_inverse(rho0) @ instances[n]["seed"].monodromy @ rho0
        np.testing.assert_allclose(rep, want, rtol=1e-7, atol=1e-7)
        assert np.linalg.det(rep) == pytest.approx(1.0, rel=1e-8)


def test_frame_product_relation(instances):
    # rho_{n+1} = M rho_{-1} A_1 ties the window frames to the gauge matrix
    for n in (5, 6):
        ls, c, d = instances[n]["lift"], instances[n]["coords"], instances[n]["derived"]
        lhs = ls.frame(n + 1)
        rhs = instances[n]["seed"].monodromy @ ls.frame(-1) @ gauge_A(1, c, d)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-8, atol=1e-8)


def test_coords_json_roundtrip(instances):
    c, d = instances[5]["coords"], instances[5]["derived"]
    obj = c.to_json(d)
    back = sx.Coords.from_json(obj)
    np.testing.assert_array_equal(back.as_vector(), c.as_vector())
    assert set(obj["derived"]) == {"a_n", "b_n", "c_n1", "a_m1", "b_m1", "c_m1", "A"}
