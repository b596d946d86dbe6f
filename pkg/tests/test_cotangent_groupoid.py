import numpy as np
import pytest
from hypothesis import given, strategies as st

from pgl import cotangent_groupoid as cg
from pgl import poisson_jet as pj
from pgl.errors import NotComposableError, PGLError
from pgl.rng import complex_gaussian

from conftest import seeded

GROUPS = ["su2", "u2", "torus", "so3", "gl2r"]


def transport_oracle(spec, g, xi):
    """(Ad*_g xi)_b = xi(coords(g^-1 x_b g)) with coordinates from an independent lstsq."""
    V = np.array([np.concatenate([b.real.ravel(), b.imag.ravel()]) for b in spec.basis]).T
    gi = np.linalg.inv(g)
    out = []
    for x in spec.basis:
        y = gi @ x @ g
        c = np.linalg.lstsq(V, np.concatenate([y.real.ravel(), y.imag.ravel()]), rcond=None)[0]
        out.append(xi @ c)
    return np.array(out)


@pytest.fixture(params=GROUPS)
def spec(request):
    return cg.builtin_group(request.param)


# -- specs --------------------------------------------------------------------------------------


def test_exp_of_algebra_is_in_group(spec, rng):
    for _ in range(5):
        assert spec.membership_residual(spec.random_group(rng)) <= 1e-9
    assert spec.closure_residual <= 1e-12


def test_so3_structure_constants():
    c = cg.builtin_group("so3").structure_constants
    assert np.isclose(c[0, 1, 2], 1.0) and np.isclose(c[1, 2, 0], 1.0) and np.isclose(c[2, 0, 1], 1.0)


def test_non_closed_basis_rejected():
    e12 = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(PGLError):
        cg.MatrixLieGroupSpec(2, [e12, e12.T], "general-linear")


def test_spec_json_roundtrip():
    spec = cg.builtin_group("u2")
    back = cg.MatrixLieGroupSpec.from_json(spec.to_json())
    assert np.allclose(back.structure_constants, spec.structure_constants)


# -- structure maps -------------------------------------------------------------------------------


def test_identity_point_has_equal_source_and_target(spec, rng):
    xi = rng.standard_normal(spec.dim)
    p = cg.ct_unit(spec, xi)
    assert np.allclose(cg.ct_source(p), xi) and np.allclose(cg.ct_target(p), xi)


def test_zero_covector(spec, rng):
    p = cg.CotangentPoint(spec, spec.random_group(rng), np.zeros(spec.dim))
    assert np.all(cg.ct_source(p) == 0) and np.allclose(cg.ct_target(p), 0)


@given(st.integers(0, 2**32 - 1))
def test_target_matches_transport_oracle(seed):
    rng = seeded(seed)
    spec = cg.builtin_group("su2")
    p = cg.random_point(spec, rng)
    assert np.allclose(cg.ct_target(p), transport_oracle(spec, p.g, p.xi), atol=1e-12)


def test_units_are_neutral(spec, rng):
    p = cg.random_point(spec, rng)
    right = cg.ct_multiply(p, cg.ct_unit(spec, cg.ct_source(p)))
    left = cg.ct_multiply(cg.ct_unit(spec, cg.ct_target(p)), p)
    assert cg.point_distance(right, p) <= 1e-12 and cg.point_distance(left, p) <= 1e-12


@given(st.integers(0, 2**32 - 1), st.sampled_from(["su2", "u2"]))
def test_associativity(seed, name):
    spec = cg.builtin_group(name)
    p, q, r = cg.random_composable(spec, seeded(seed), 3)
    a = cg.ct_multiply(cg.ct_multiply(p, q), r)
    b = cg.ct_multiply(p, cg.ct_multiply(q, r))
    assert cg.point_distance(a, b) <= 1e-9


def test_non_composable_rejected(rng):
    spec = cg.builtin_group("su2")
    p, q = cg.random_point(spec, rng), cg.random_point(spec, rng)
    with pytest.raises(NotComposableError) as exc:
        cg.ct_multiply(p, q)
    assert exc.value.residual > 1e-3


def test_inverses(spec, rng):
    p = cg.random_point(spec, rng)
    pi = cg.ct_invert(p)
    assert cg.point_distance(cg.ct_multiply(p, pi), cg.ct_unit(spec, cg.ct_target(p))) <= 1e-12
    assert cg.point_distance(cg.ct_multiply(pi, p), cg.ct_unit(spec, cg.ct_source(p))) <= 1e-12


def test_unit_inverts_to_itself(rng):
    spec = cg.builtin_group("u2")
    u = cg.ct_unit(spec, rng.standard_normal(4))
    assert cg.point_distance(cg.ct_invert(u), u) <= 1e-15


def test_zero_covector_inverse(rng):
    spec = cg.builtin_group("su2")
    g = spec.random_group(rng)
    inv = cg.ct_invert(cg.CotangentPoint(spec, g, np.zeros(3)))
    assert np.allclose(inv.g, np.linalg.inv(g)) and np.allclose(inv.xi, 0)


def test_dropped_transport_breaks_axioms(rng):
    spec = cg.builtin_group("su2")
    res = cg.axiom_residuals(spec, rng, mutate=True)
    assert max(res.values()) >= 1e-2


# -- canonical form ------------------------------------------------------------------------------------


def test_form_vanishes_on_diagonal(spec, rng):
    p = cg.random_point(spec, rng)
    X = (rng.standard_normal(spec.dim), rng.standard_normal(spec.dim))
    assert abs(cg.canonical_form(p, X, X)) <= 1e-12


def test_form_with_all_terms_zero(spec, rng):
    p = cg.CotangentPoint(spec, spec.random_group(rng), np.zeros(spec.dim))
    X1 = (rng.standard_normal(spec.dim), rng.standard_normal(spec.dim))
    X2 = (np.zeros(spec.dim), np.zeros(spec.dim))
    assert cg.canonical_form(p, X1, X2) == 0.0


def test_form_at_origin_is_flat_pairing(spec, rng):
    p = cg.ct_unit(spec, np.zeros(spec.dim))
    e1, x1, e2, x2 = (rng.standard_normal(spec.dim) for _ in range(4))
    assert np.isclose(cg.canonical_form(p, (e1, x1), (e2, x2)), e1 @ x2 - e2 @ x1)


def test_form_accepts_matrices_and_is_nondegenerate(rng):
    spec = cg.builtin_group("u2")
    p = cg.random_point(spec, rng)
    X = spec.random_algebra(rng)
    e1, e2 = rng.standard_normal(4), rng.standard_normal(4)
    Y = rng.standard_normal(4)
    assert np.isclose(cg.canonical_form(p, (e1, X), (e2, Y)), cg.canonical_form(p, (e1, spec.coords(X)), (e2, Y)))
    Om = cg.form_matrix(spec, cg.ct_target(p))
    assert np.linalg.matrix_rank(Om) == 8 and np.allclose(Om, -Om.T)


# -- symplectic groupoid checks --------------------------------------------------------------------------


def test_symplectic_families(spec, rng):
    for _ in range(5):
        res = cg.symplectic_residuals(spec, rng)
        assert set(res) >= {"omega-multiplicativity", "fiber-orthogonality", "zero-section-lagrangian", "dual-pair"}
        assert max(res.values()) <= 1e-8, res


def test_verify_report_on_torus():
    rep = cg.verify_symplectic_groupoid(cg.builtin_group("torus"), trials=5, seed=3)
    assert rep.max_residual() <= 1e-9


def test_verify_report_detects_mutation():
    rep = cg.verify_symplectic_groupoid(cg.builtin_group("su2"), trials=3, seed=3, mutate=True)
    assert rep.max_residual() >= 1e-2


def test_fibres_have_complementary_dimension(rng):
    spec = cg.builtin_group("su2")
    ds, dt = cg.chart_maps(cg.random_point(spec, rng))
    assert np.linalg.matrix_rank(ds) == 3 and np.linalg.matrix_rank(dt) == 3


# -- KKS ----------------------------------------------------------------------------------------------------


def test_abelian_anchor_vanishes(rng):
    spec = cg.builtin_group("torus")
    assert np.all(cg.kks_anchor(spec, rng.standard_normal(2), rng.standard_normal(2)) == 0)


def test_kks_form_diagonal(spec, rng):
    X = rng.standard_normal(spec.dim)
    assert abs(cg.kks_form(spec, rng.standard_normal(spec.dim), X, X)) <= 1e-12


def test_so3_kks_value():
    spec = cg.builtin_group("so3")
    E = np.eye(3)
    assert np.isclose(cg.kks_form(spec, E[2], E[0], E[1]), 1.0)


def test_anchor_and_form_agree(spec, rng):
    xi, X, Y = (rng.standard_normal(spec.dim) for _ in range(3))
    assert np.isclose(cg.kks_anchor(spec, xi, X) @ Y, cg.kks_form(spec, xi, X, Y))


def test_kks_matches_lie_poisson(spec, rng):
    W = pj.lie_poisson_bivector(spec.structure_constants)
    xi = rng.standard_normal(spec.dim)
    Lam = W.eval(xi)[0]
    E = np.eye(spec.dim)
    direct = np.array([[cg.kks_form(spec, xi, E[i], E[j]) for j in range(spec.dim)] for i in range(spec.dim)])
    assert np.allclose(Lam, direct)


def test_stabilizer_of_zero_is_everything(spec):
    assert cg.stabilizer_algebra(spec, np.zeros(spec.dim)).dim == spec.dim


def test_so3_stabilizer():
    spec = cg.builtin_group("so3")
    st_ = cg.stabilizer_algebra(spec, np.array([0.0, 0.0, 1.0]))
    assert st_.dim == 1 and np.isclose(abs(st_.basis[2, 0]), 1.0)


@pytest.mark.parametrize("name", ["so3", "u2", "gl2r"])
def test_stabilizer_closure_and_rank_nullity(name, rng):
    spec = cg.builtin_group(name)
    for _ in range(5):
        st_ = cg.stabilizer_algebra(spec, rng.standard_normal(spec.dim))
        assert st_.closure_residual <= 1e-8
        assert st_.dim + st_.orbit_rank == spec.dim


def test_kks_suite_residuals(spec, rng):
    res = cg.kks_residuals(spec, rng, points=2)
    assert res["schouten"] <= 1e-9 and res["kks-agreement"] <= 1e-9 and res["rank-nullity"] == 0


def test_symmetrized_anchor_is_caught(rng):
    res = cg.kks_residuals(cg.builtin_group("so3"), rng, mutate=True, points=1)
    assert res["kks-agreement"] >= 1e-3


# -- GL(n, C) orbits ---------------------------------------------------------------------------------------


def test_same_tangent_antisymmetrizes_to_zero(rng):
    pt = cg.OrbitPoint(np.diag([1.0, 2.0]), np.eye(2) + 0.3 * complex_gaussian(rng, (2, 2)))
    t = pt.tangent(complex_gaussian(rng, (2, 2)))
    val, agree = cg.gl_orbit_form(pt, t, t)
    assert agree <= 1e-9 and abs(val) <= 1e-9


def test_diagonalizable_orbit_matches_commutator_trace(rng):
    g = np.eye(3) + 0.3 * complex_gaussian(rng, (3, 3))
    pt = cg.OrbitPoint(np.diag([1.0, -1.0, 2.0]), g)
    t1, t2 = pt.tangent(complex_gaussian(rng, (3, 3))), pt.tangent(complex_gaussian(rng, (3, 3)))
    val, agree = cg.gl_orbit_form(pt, t1, t2)
    gi = np.linalg.inv(g)
    V1, V2 = t1[0] @ gi, t2[0] @ gi
    assert agree <= 1e-9
    assert np.isclose(val, np.trace(pt.A @ (V1 @ V2 - V2 @ V1)))


def test_nilpotent_orbit_by_curve_differentiation(rng):
    J = np.array([[0.0, 1.0], [0.0, 0.0]])
    g = np.eye(2) + 0.3 * complex_gaussian(rng, (2, 2))
    pt = cg.OrbitPoint(J, g)
    h = 1e-5
    tangents = []
    for _ in range(2):
        gd = complex_gaussian(rng, (2, 2))
        A = lambda s: (g + s * gd) @ J @ np.linalg.inv(g + s * gd)  # noqa: E731
        Ad = (A(h) - A(-h)) / (2 * h)
        assert np.allclose(Ad, pt.tangent(gd)[1], atol=1e-8)
        tangents.append((gd, Ad))
    val, agree = cg.gl_orbit_form(pt, tangents[0], tangents[1], tol=1e-6)
    back, _ = cg.gl_orbit_form(pt, tangents[1], tangents[0], tol=1e-6)
    assert agree <= 1e-9
    assert abs(val) > 1e-3 and np.isclose(val, -back)


def test_inconsistent_tangent_rejected(rng):
    pt = cg.OrbitPoint(np.diag([1.0, 2.0]), np.eye(2))
    gd = complex_gaussian(rng, (2, 2))
    good = pt.tangent(gd)
    with pytest.raises(PGLError):
        cg.gl_orbit_form(pt, (gd, good[1] + 1.0), good)


def test_corrupted_orbit_form_disagrees(rng):
    pt = cg.OrbitPoint(np.diag([1.0, 2.0]), np.eye(2) + 0.5 * complex_gaussian(rng, (2, 2)))
    t1, t2 = pt.tangent(complex_gaussian(rng, (2, 2))), pt.tangent(complex_gaussian(rng, (2, 2)))
    assert cg.gl_orbit_form(pt, t1, t2, mutate=True)[1] >= 1e-3
