import numpy as np
import pytest
from hypothesis import given, strategies as st

from pgl import _linalg as la
from pgl.errors import DimensionMismatch, FlatPreservationError, NotCoisotropicError, NotInImageError, PGLError
from pgl.linear_poisson import (
    LinearPoissonSpace,
    Subspace,
    annihilator,
    classify_subspace,
    graph_of,
    identity_relation,
    is_poisson_morphism,
    is_poisson_relation,
    leaf_form,
    orth_flat,
    perp_P,
    product_space,
    relation_apply,
    relation_compose,
    symplectic_space,
    zero_space,
)
from pgl.rng import standard_J
from pgl import sampling

from conftest import assert_span_equal, seeded

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def std_symplectic(m):
    return symplectic_space(standard_J(m))


# -- annihilator / zero space -------------------------------------------------------------


def test_annihilator_of_full_space_is_zero():
    assert annihilator(Subspace(np.eye(3))).dim == 0


def test_annihilator_of_zero_is_full_dual():
    assert annihilator(Subspace(np.zeros((3, 0)), ambient_dim=3)).dim == 3


def test_annihilator_of_coordinate_plane():
    A = annihilator(Subspace(np.eye(3)[:, :2]))
    assert_span_equal(A, Subspace(np.array([0.0, 0.0, 1.0])))


def test_zero_space_of_whole_space_is_zero():
    S = std_symplectic(2)
    assert zero_space(S, Subspace(np.eye(4))).dim == 0


def test_zero_space_equals_annihilator_for_full_flat_dual(rng):
    S = sampling.random_poisson_space(rng, 4)
    F = sampling.random_subspace(rng, 4, 2)
    Z = zero_space(S, F)
    # back to functionals: rows alpha = a B
    funcs = Subspace((Z.basis.T @ S.B).T)
    assert_span_equal(funcs, annihilator(F))


def test_zero_space_with_partial_flat_dual():
    B = np.eye(4)[:2]
    S = LinearPoissonSpace(B, np.zeros((4, 2)))
    F = Subspace(np.eye(4)[:, [0, 2]])
    assert_span_equal(zero_space(S, F), Subspace(np.array([0.0, 1.0])))


# -- perp ---------------------------------------------------------------------------------


def test_perp_of_whole_space_is_zero():
    assert perp_P(std_symplectic(2), Subspace(np.eye(4))).dim == 0


def test_line_in_symplectic_plane_is_its_own_perp():
    S = symplectic_space(J2)
    F = Subspace(np.array([1.0, 0.0]))
    assert_span_equal(perp_P(S, F), F)


@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.booleans())
def test_perp_is_an_involution(seed, m, random_flat):
    rng = seeded(seed)
    S = sampling.random_symplectic_space(rng, m, random_flat=random_flat).space
    F = sampling.random_subspace(rng, 2 * m, int(rng.integers(0, 2 * m + 1)))
    twice = perp_P(S, perp_P(S, F))
    assert_span_equal(twice, F)


def test_perp_dimension_is_complementary(rng):
    S = sampling.random_symplectic_space(rng, 3).space
    for r in range(7):
        F = sampling.random_subspace(rng, 6, r)
        assert perp_P(S, F).dim == 6 - r


# -- orth_flat ----------------------------------------------------------------------------


def test_orth_flat_of_zero_is_everything(rng):
    S = sampling.random_poisson_space(rng, 4)
    assert orth_flat(S, S.flat_subspace(np.zeros((4, 0)))).dim == 4


def test_orth_flat_for_zero_anchor(rng):
    S = LinearPoissonSpace(np.eye(3), np.zeros((3, 3)))
    assert orth_flat(S, S.flat_subspace(rng.standard_normal((3, 2)))).dim == 3


@given(st.integers(0, 2**32 - 1), st.integers(0, 4))
def test_kernel_of_anchor_inside_orth_flat(seed, r):
    rng = seeded(seed)
    S = sampling.random_poisson_space(rng, 4, rank=2)
    ker = la.null_space(S.P, ncols=4)
    O = orth_flat(S, S.flat_subspace(rng.standard_normal((4, r))))
    assert ker.shape[1] == 2
    assert la.max_abs(ker - O.projector() @ ker) <= 1e-9


def test_orth_flat_dimension_mismatch(rng):
    S = sampling.random_poisson_space(rng, 4)
    with pytest.raises(DimensionMismatch):
        orth_flat(S, Subspace(np.eye(3)))


# -- classification -----------------------------------------------------------------------


def test_whole_space_is_coisotropic():
    c = classify_subspace(std_symplectic(2), Subspace(np.eye(4)))
    assert c.coisotropic


def test_line_in_plane_is_lagrangian():
    c = classify_subspace(symplectic_space(J2), Subspace(np.array([1.0, 0.0])))
    assert c.coisotropic and c.lagrangian


def test_standard_lagrangian_plane():
    c = classify_subspace(std_symplectic(2), Subspace(np.eye(4)[:, :2]))
    assert c.lagrangian and c.coisotropic
    assert c.lagrangian_residual <= 1e-12


def test_symplectic_plane_is_not_coisotropic():
    c = classify_subspace(std_symplectic(2), Subspace(np.eye(4)[:, [0, 2]]))
    assert not c.coisotropic and not c.lagrangian
    assert c.coisotropic_residual > 0.1


@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_coisotropy_is_monotone(seed, m):
    rng = seeded(seed)
    S = sampling.random_symplectic_space(rng, m).space
    F1 = sampling.random_coisotropic(rng, S, extra=int(rng.integers(0, m + 1)))
    F2 = S.subspace(np.hstack([F1.basis, rng.standard_normal((2 * m, 1))]))
    assert classify_subspace(S, F1).coisotropic
    assert classify_subspace(S, F2).coisotropic


@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_random_lagrangians_are_lagrangian(seed, m):
    rng = seeded(seed)
    S = sampling.random_symplectic_space(rng, m, random_flat=True).space
    L = sampling.random_lagrangian(rng, S)
    assert L.dim == m
    assert classify_subspace(S, L).lagrangian


# -- products and morphisms -----------------------------------------------------------------


def test_product_with_trivial_space(rng):
    S1 = sampling.random_poisson_space(rng, 3)
    S0 = LinearPoissonSpace(np.zeros((0, 0)), np.zeros((0, 0)))
    S = product_space(S1, S0, 1)
    assert np.allclose(S.P, S1.P) and np.allclose(S.B, S1.B)


def test_product_of_symplectic_is_symplectic(rng):
    a = sampling.random_symplectic_space(rng, 1).space
    b = sampling.random_symplectic_space(rng, 2).space
    assert product_space(a, b, -1).symplectic


@given(st.integers(0, 2**32 - 1), st.sampled_from([1, -1]))
def test_product_anchor_is_skew(seed, sign):
    rng = seeded(seed)
    S = product_space(sampling.random_poisson_space(rng, 3), sampling.random_poisson_space(rng, 4, k=3), sign)
    assert la.max_abs(S.K + S.K.T) <= 1e-12


def test_non_skew_anchor_rejected():
    with pytest.raises(PGLError):
        LinearPoissonSpace(np.eye(2), np.eye(2))


def test_identity_is_morphism(rng):
    S = sampling.random_poisson_space(rng, 4)
    assert is_poisson_morphism(S, S, np.eye(4)).residual <= 1e-14


def test_identity_is_anti_morphism_to_negated(rng):
    S = sampling.random_poisson_space(rng, 4)
    Sm = LinearPoissonSpace(S.B, -S.P)
    assert is_poisson_morphism(S, Sm, np.eye(4), anti=True).residual <= 1e-14
    assert not is_poisson_morphism(S, Sm, np.eye(4)).is_morphism


def test_symplectic_map_graph_is_lagrangian(rng):
    a = sampling.random_symplectic_space(rng, 2)
    b = sampling.random_symplectic_space(rng, 2)
    phi = sampling.random_symplectic_map(rng, a, b)
    assert is_poisson_morphism(a.space, b.space, phi).is_morphism
    c = classify_subspace(product_space(a.space, b.space, -1), graph_of(phi).graph)
    assert c.lagrangian


def test_flat_preservation_failure():
    S1 = LinearPoissonSpace(np.eye(3)[:1], np.zeros((3, 1)))
    S2 = LinearPoissonSpace(np.eye(3), np.zeros((3, 3)))
    with pytest.raises(FlatPreservationError):
        is_poisson_morphism(S1, S2, np.eye(3))


@given(st.integers(0, 2**32 - 1), st.integers(2, 5), st.booleans())
def test_morphism_iff_graph_coisotropic(seed, n1, good):
    rng = seeded(seed)
    n2 = int(rng.integers(2, n1 + 2))
    maker = sampling.pushforward_pair if good else sampling.non_morphism_pair
    S1, S2, phi = maker(rng, n1, n2, k1=n1 - int(rng.integers(0, 2)))
    by_map = is_poisson_morphism(S1, S2, phi).is_morphism
    by_graph = classify_subspace(product_space(S1, S2, -1), graph_of(phi).graph).coisotropic
    assert by_map == by_graph == good


# -- relations ------------------------------------------------------------------------------


def test_graph_composition_is_graph_of_composite(rng):
    phi = rng.standard_normal((3, 2))
    psi = rng.standard_normal((4, 3))
    comp = relation_compose(graph_of(phi), graph_of(psi))
    assert_span_equal(comp.graph, graph_of(psi @ phi).graph)


def test_compose_with_identity(rng):
    S1 = sampling.random_symplectic_space(rng, 1).space
    S2 = sampling.random_symplectic_space(rng, 2).space
    R = sampling.random_poisson_relation(rng, S1, S2)
    assert_span_equal(relation_compose(identity_relation(2), R).graph, R.graph)
    assert_span_equal(relation_compose(R, identity_relation(4)).graph, R.graph)


def test_compose_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        relation_compose(identity_relation(2), identity_relation(3))


@given(st.integers(0, 2**32 - 1))
def test_composition_of_poisson_relations_is_poisson(seed):
    rng = seeded(seed)
    S = [sampling.random_symplectic_space(rng, int(rng.integers(1, 4))).space for _ in range(3)]
    R = sampling.random_poisson_relation(rng, S[0], S[1])
    Q = sampling.random_poisson_relation(rng, S[1], S[2])
    assert is_poisson_relation(S[0], S[1], R).coisotropic
    assert is_poisson_relation(S[0], S[2], relation_compose(R, Q)).coisotropic


def test_apply_identity(rng):
    S = sampling.random_symplectic_space(rng, 2).space
    C = sampling.random_coisotropic(rng, S)
    assert_span_equal(relation_apply(S, S, identity_relation(4), C), C)


def test_apply_morphism_graph_to_zero_subspace():
    S1 = LinearPoissonSpace(np.eye(2), np.zeros((2, 2)))
    S2 = LinearPoissonSpace(np.eye(3), np.zeros((3, 3)))
    phi = np.arange(6.0).reshape(3, 2)
    out = relation_apply(S1, S2, graph_of(phi), Subspace(np.zeros((2, 0)), ambient_dim=2))
    assert out.dim == 0


def test_apply_graph_gives_image(rng):
    S1 = LinearPoissonSpace(np.eye(2), np.zeros((2, 2)))
    S2 = LinearPoissonSpace(np.eye(3), np.zeros((3, 3)))
    phi = rng.standard_normal((3, 2))
    C = Subspace(np.array([1.0, 2.0]))
    out = relation_apply(S1, S2, graph_of(phi), C)
    assert_span_equal(out, Subspace(phi @ np.array([1.0, 2.0])))


@given(st.integers(0, 2**32 - 1))
def test_symplectic_relation_carries_lagrangians(seed):
    rng = seeded(seed)
    a = sampling.random_symplectic_space(rng, 2)
    b = sampling.random_symplectic_space(rng, 2)
    phi = sampling.random_symplectic_map(rng, a, b)
    L = sampling.random_lagrangian(rng, a.space)
    out = relation_apply(a.space, b.space, graph_of(phi), L)
    assert classify_subspace(b.space, out).lagrangian


def test_apply_refuses_non_coisotropic():
    S = std_symplectic(2)
    C = Subspace(np.eye(4)[:, [0, 2]])
    with pytest.raises(NotCoisotropicError) as exc:
        relation_apply(S, S, identity_relation(4), C)
    assert exc.value.residual > 0.1


# -- leaf form ------------------------------------------------------------------------------


def test_leaf_form_diagonal_vanishes(rng):
    S = sampling.random_symplectic_space(rng, 2).space
    u = rng.standard_normal(4)
    assert abs(leaf_form(S, u, u)) <= 1e-12


@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_leaf_form_symplectic_matches_inverse_anchor(seed, m):
    rng = seeded(seed)
    S = sampling.random_symplectic_space(rng, m).space
    u, v = rng.standard_normal(2 * m), rng.standard_normal(2 * m)
    expect = np.linalg.solve(S.P, u) @ v
    assert abs(leaf_form(S, u, v) - expect) <= 1e-9 * (1 + abs(expect))


def test_leaf_form_independent_of_preimage(rng):
    S = sampling.random_poisson_space(rng, 4, rank=2)
    u = S.P @ rng.standard_normal(4)
    v = S.P @ rng.standard_normal(4)
    val, resid = leaf_form(S, u, v, return_residual=True)
    assert resid <= 1e-9
    # an explicit second preimage
    ker = la.null_space(S.P, ncols=4)
    a = np.linalg.lstsq(S.P, u, rcond=None)[0] + ker @ rng.standard_normal(ker.shape[1])
    b = np.linalg.lstsq(S.P, v, rcond=None)[0] + ker @ rng.standard_normal(ker.shape[1])
    assert abs(a @ S.K @ b - val) <= 1e-9 * (1 + abs(val))


def test_leaf_form_outside_image(rng):
    S = sampling.random_poisson_space(rng, 4, rank=2)
    ker = la.null_space(S.P.T)
    with pytest.raises(NotInImageError):
        leaf_form(S, ker[:, 0], S.P @ np.ones(4))


# -- serialization ---------------------------------------------------------------------------


def test_space_json_roundtrip(rng):
    S = sampling.random_poisson_space(rng, 4, k=3)
    T = LinearPoissonSpace.from_json(S.to_json())
    assert np.allclose(T.B, S.B) and np.allclose(T.P, S.P) and T.tol == S.tol


def test_subspace_json_roundtrip_complex(rng):
    F = Subspace(rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2)))
    G = Subspace.from_json(F.to_json())
    assert_span_equal(F, G, 1e-12)
