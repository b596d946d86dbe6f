"""The symplectic groupoid T*G over the dual of a matrix Lie algebra.

Points are held in left trivialization ``(g, xi)``: ``xi`` is a real
coefficient vector ``xi_a = <xi, x_a>`` against the algebra basis, so
``<xi, X> = xi . coords(X)``.  Coadjoint transport is
``(Ad*_g xi)(X) = xi(g^-1 X g)``, a left action.

Structure maps: ``s(g, xi) = xi``, ``t(g, xi) = Ad*_g xi``;
``(g, xi).(h, eta) = (gh, Ad*_{h^-1} xi)`` when ``xi = Ad*_h eta``.
In the right-trivialized chart ``(g, mu)`` with ``mu = t(g, xi)`` the
canonical form is

    omega((eta1, X1), (eta2, X2)) = <eta1, X2> - <eta2, X1> + <mu, [X1, X2]>

with ``X = dg g^-1`` and ``eta = d mu``.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from . import _linalg as la
from .config import default_tol
from .errors import MembershipError, NotComposableError, PGLError
from .jet import Jet2, variables
from .linear_poisson import (
    LinearPoissonSpace,
    classify_subspace,
    is_poisson_morphism,
    symplectic_space,
)
from .poisson_jet import coordinate, lie_poisson_bivector, schouten_residual, coordinate_form

__all__ = [
    "MatrixLieGroupSpec",
    "CotangentPoint",
    "ct_source",
    "ct_target",
    "ct_multiply",
    "ct_invert",
    "ct_unit",
    "canonical_form",
    "kks_anchor",
    "kks_form",
    "stabilizer_algebra",
    "OrbitPoint",
    "gl_orbit_form",
    "verify_symplectic_groupoid",
    "builtin_group",
    "BUILTIN_GROUPS",
]


# -- group specs ----------------------------------------------------------------


def _membership(kind):
    def unitary(g):
        return la.max_abs(g @ g.conj().T - np.eye(g.shape[0]))

    def special_unitary(g):
        return max(unitary(g), abs(np.linalg.det(g) - 1.0))

    def orthogonal(g):
        return max(la.max_abs(g @ g.T - np.eye(g.shape[0])), la.max_abs(np.imag(g)))

    def special_orthogonal(g):
        return max(orthogonal(g), abs(np.linalg.det(g) - 1.0))

    def general_linear(g):
        s = np.linalg.svd(g, compute_uv=False)
        return 0.0 if s[-1] > s[0] * 1e-12 else 1.0

    def general_linear_real(g):
        return max(general_linear(g), la.max_abs(np.imag(g)))

    table = {
        "unitary": unitary,
        "special-unitary": special_unitary,
        "orthogonal": orthogonal,
        "special-orthogonal": special_orthogonal,
        "general-linear": general_linear,
        "general-linear-real": general_linear_real,
    }
    if kind not in table:
        raise ValueError(f"unknown membership {kind!r}; expected one of {sorted(table)}")
    return table[kind]


def _vec_real(Y):
    Y = np.asarray(Y)
    return np.concatenate([np.real(Y).reshape(-1), np.imag(Y).reshape(-1)])


class MatrixLieGroupSpec:
    """Matrix group with a real algebra basis; structure constants extracted once."""

    def __init__(self, n, basis, membership, name=None, tol=None):
        self.n = int(n)
        self.basis = [np.asarray(b, dtype=complex) for b in basis]
        self.membership = membership
        self.membership_residual = _membership(membership)
        self.name = name or membership
        self.tol = default_tol() if tol is None else float(tol)
        m = len(self.basis)
        V = np.array([_vec_real(b) for b in self.basis]).T
        if la.numerical_rank(V) != m:
            raise PGLError("algebra basis is linearly dependent")
        self._coord_map = np.linalg.pinv(V)
        self._V = V
        c = np.zeros((m, m, m))
        closure = 0.0
        for i in range(m):
            for j in range(m):
                br = self.basis[i] @ self.basis[j] - self.basis[j] @ self.basis[i]
                co = self._coord_map @ _vec_real(br)
                closure = max(closure, la.max_abs(V @ co - _vec_real(br)))
                c[i, j] = co
        if closure > self.tol * (1.0 + la.max_abs(c)):
            raise PGLError(f"basis is not closed under the commutator ({closure:.3e})", closure)
        self.closure_residual = closure
        self.structure_constants = c

    @property
    def dim(self):
        return len(self.basis)

    def coords(self, X):
        return self._coord_map @ _vec_real(X)

    def element(self, coeffs):
        return sum(float(c) * b for c, b in zip(coeffs, self.basis))

    def in_algebra_residual(self, X):
        v = _vec_real(X)
        return la.max_abs(self._V @ (self._coord_map @ v) - v)

    def adjoint_matrix(self, g):
        """Ad_g in basis coordinates: column b holds coords(g x_b g^-1)."""
        gi = np.linalg.inv(g)
        return np.array([self.coords(g @ x @ gi) for x in self.basis]).T

    def coadjoint(self, g, xi):
        """Ad*_g xi with (Ad*_g xi)(X) = xi(g^-1 X g)."""
        return self.adjoint_matrix(np.linalg.inv(g)).T @ np.asarray(xi, dtype=float)

    def random_algebra(self, rng, scale=1.0):
        return self.element(rng.standard_normal(self.dim) * scale)

    def random_group(self, rng, scale=1.0):
        return expm(self.random_algebra(rng, scale))

    def to_json(self):
        return {
            "n": self.n,
            "basis": [la.to_json_matrix(b) for b in self.basis],
            "membership": self.membership,
        }

    @classmethod
    def from_json(cls, obj):
        basis = [la.from_json_matrix(b) for b in obj["basis"]]
        return cls(int(obj["n"]), basis, obj["membership"], name=obj.get("name"))


def _e(n, j, k, v=1.0):
    m = np.zeros((n, n), dtype=complex)
    m[j, k] = v
    return m


def _su2():
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return MatrixLieGroupSpec(2, [0.5j * sx, 0.5j * sy, 0.5j * sz], "special-unitary", name="SU(2)")


def _u2():
    base = _su2().basis
    return MatrixLieGroupSpec(2, base + [1j * np.eye(2, dtype=complex)], "unitary", name="U(2)")


def _torus(n=2):
    return MatrixLieGroupSpec(n, [_e(n, j, j, 1j) for j in range(n)], "unitary", name=f"T^{n}")


def _so3():
    L1 = _e(3, 2, 1) - _e(3, 1, 2)
    L2 = _e(3, 0, 2) - _e(3, 2, 0)
    L3 = _e(3, 1, 0) - _e(3, 0, 1)
    return MatrixLieGroupSpec(3, [L1, L2, L3], "special-orthogonal", name="SO(3)")


def _gl2r():
    return MatrixLieGroupSpec(
        2, [_e(2, 0, 0), _e(2, 0, 1), _e(2, 1, 0), _e(2, 1, 1)], "general-linear-real", name="GL(2,R)"
    )


BUILTIN_GROUPS = {"su2": _su2, "u2": _u2, "torus": _torus, "so3": _so3, "gl2r": _gl2r}


def builtin_group(name):
    key = name.lower().replace("(", "").replace(")", "").replace(",", "").replace("-", "")
    aliases = {"su2": "su2", "u2": "u2", "torus": "torus", "t2": "torus", "so3": "so3", "gl2r": "gl2r"}
    if key not in aliases:
        raise ValueError(f"unknown group {name!r}; built-ins: {sorted(BUILTIN_GROUPS)}")
    return BUILTIN_GROUPS[aliases[key]]()


# -- points and structure maps ---------------------------------------------------------


@dataclass(frozen=True)
class CotangentPoint:
    spec: MatrixLieGroupSpec = field(repr=False)
    g: np.ndarray
    xi: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.g, dtype=complex)
        xi = np.asarray(self.xi, dtype=float).reshape(-1)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "xi", xi)
        if xi.shape[0] != self.spec.dim:
            raise PGLError(f"xi must have {self.spec.dim} coefficients")
        r = self.spec.membership_residual(g)
        if r > self.spec.tol * 10:
            raise MembershipError(f"g fails {self.spec.membership} membership ({r:.3e})", r)

    def riesz(self):
        """Matrix representative R with Re Tr(R^* X) = <xi, X> on the algebra (display only)."""
        B = self.spec.basis
        G = np.array([[np.real(np.trace(a.conj().T @ b)) for b in B] for a in B])
        w = np.linalg.solve(G, self.xi)
        return sum(c * b for c, b in zip(w, B))


def ct_source(p):
    return p.xi.copy()


def ct_target(p):
    return p.spec.coadjoint(p.g, p.xi)


def ct_unit(spec, xi):
    return CotangentPoint(spec, np.eye(spec.n, dtype=complex), xi)


def composability_residual(p, q):
    s, t = ct_source(p), ct_target(q)
    return la.relative(la.max_abs(s - t), s, t)


def ct_multiply(p, q, mutate=False):
    """(g, xi).(h, eta) = (gh, Ad*_{h^-1} xi); requires xi = Ad*_h eta.

    ``mutate`` drops the coadjoint transport and keeps xi (a corrupted variant).
    """
    r = composability_residual(p, q)
    if r > p.spec.tol:
        raise NotComposableError(f"points are not composable (mismatch {r:.3e})", r)
    g = p.g @ q.g
    xi = p.xi if mutate else p.spec.coadjoint(np.linalg.inv(q.g), p.xi)
    return CotangentPoint(p.spec, g, xi)


def ct_invert(p):
    return CotangentPoint(p.spec, np.linalg.inv(p.g), ct_target(p))


def point_distance(p, q):
    return max(la.max_abs(p.g - q.g), la.max_abs(p.xi - q.xi))


# -- symplectic form -----------------------------------------------------------


def canonical_form(p, X1, X2):
    """omega at p on tangent pairs (eta_i, X_i) given right-trivialized.

    ``eta_i`` are coefficient vectors, ``X_i`` algebra matrices or coefficient vectors.
    """
    spec = p.spec
    mu = ct_target(p)
    eta1, Y1 = X1
    eta2, Y2 = X2
    c1 = _algebra_coords(spec, Y1)
    c2 = _algebra_coords(spec, Y2)
    br = np.einsum("a,b,abk->k", c1, c2, spec.structure_constants)
    return float(np.dot(eta1, c2) - np.dot(eta2, c1) + np.dot(mu, br))


def _algebra_coords(spec, Y):
    Y = np.asarray(Y)
    if Y.ndim == 2:
        return spec.coords(Y)
    return np.asarray(Y, dtype=float)


def form_matrix(spec, mu):
    """Matrix of omega in chart coordinates (a, b) = (right algebra coords, momentum)."""
    m = spec.dim
    c = spec.structure_constants
    S = np.einsum("abk,k->ab", c, np.asarray(mu, dtype=float))
    Om = np.zeros((2 * m, 2 * m))
    Om[:m, :m] = S
    Om[m:, :m] = np.eye(m)
    Om[:m, m:] = -np.eye(m)
    return Om


def _symplectic(Om, tol):
    """Linear symplectic space whose anchor inverts the form matrix."""
    P = np.linalg.inv(Om)
    P = (P - P.T) / 2.0
    return symplectic_space(P, tol=tol)


# -- jet charts ---------------------------------------------------------------------------


def _obj(M):
    return np.asarray(M, dtype=complex).astype(object)


def _re(v):
    return v.real if isinstance(v, Jet2) else float(np.real(v))


def _im(v):
    return v.imag if isinstance(v, Jet2) else float(np.imag(v))


def _coords_jet(spec, Y):
    flat = [_re(v) for v in Y.reshape(-1)] + [_im(v) for v in Y.reshape(-1)]
    C = spec._coord_map
    return [sum((flat[j] * C[a, j] for j in range(len(flat)) if C[a, j] != 0.0), 0.0) for a in range(spec.dim)]


def _algebra_jet(spec, a):
    n = spec.n
    A = np.empty((n, n), dtype=object)
    A[:] = 0.0
    for i, ai in enumerate(a):
        A = A + _obj(spec.basis[i]) * ai
    return A


def _chart_group(spec, g0, a):
    """g(a) = (I + A + A^2/2) g0 and its inverse to the same order."""
    A = _algebra_jet(spec, a)
    I = _obj(np.eye(spec.n))
    A2 = A @ A
    g = (I + A + A2 * 0.5) @ _obj(g0)
    gi = _obj(np.linalg.inv(g0)) @ (I - A + A2 * 0.5)
    return g, gi


def _coadjoint_jet(spec, gi, g, xi):
    """Ad*_g xi with jets: (Ad*_g xi)_b = xi(g^-1 x_b g)."""
    out = []
    for xb in spec.basis:
        co = _coords_jet(spec, gi @ _obj(xb) @ g)
        out.append(sum((xi[a] * co[a] for a in range(1, spec.dim)), xi[0] * co[0]))
    return out


def _grad_rows(vals, d):
    return np.array([v.grad if isinstance(v, Jet2) else np.zeros(d) for v in vals], dtype=float)


def chart_maps(p):
    """Differentials of s and t at p in chart coordinates (a, b), 2m columns each."""
    spec = p.spec
    m = spec.dim
    mu0 = ct_target(p)
    z = variables(np.zeros(2 * m))
    a, b = z[:m], z[m:]
    g, gi = _chart_group(spec, p.g, a)
    mu = [mu0[i] + b[i] for i in range(m)]
    # source = Ad*_{g^-1} mu, i.e. xi(X) = mu(g X g^-1)
    s = _coadjoint_jet(spec, g, gi, mu)
    ds = _grad_rows(s, 2 * m)
    dt = _grad_rows(mu, 2 * m)
    return ds, dt


def _log_coords(spec, M, base_inv):
    """Chart coordinates of M near a base point: log(M base^-1) ~ E - E^2/2."""
    I = _obj(np.eye(spec.n))
    E = M @ base_inv - I
    L = E - (E @ E) * 0.5
    return _coords_jet(spec, L)


def multiplication_differential(p, q, mutate=False):
    """Differential of m at (p, q) from chart coordinates (z_p, z_q) to chart coordinates at pq."""
    spec = p.spec
    m = spec.dim
    pq = ct_multiply(p, q, mutate=mutate)
    z = variables(np.zeros(4 * m))
    ap, bp, aq, bq = z[:m], z[m : 2 * m], z[2 * m : 3 * m], z[3 * m :]
    gp, gpi = _chart_group(spec, p.g, ap)
    gq, gqi = _chart_group(spec, q.g, aq)
    mup = [ct_target(p)[i] + bp[i] for i in range(m)]
    # left-trivialized covector of p, then the product rule in left trivialization
    xip = _coadjoint_jet(spec, gp, gpi, mup)
    xi_new = xip if mutate else _coadjoint_jet(spec, gq, gqi, xip)
    g = gp @ gq
    gi = gqi @ gpi
    mu_new = _coadjoint_jet(spec, gi, g, xi_new)
    a_new = _log_coords(spec, g, _obj(np.linalg.inv(pq.g)))
    b_new = [mu_new[i] - ct_target(pq)[i] for i in range(m)]
    return _grad_rows(a_new + b_new, 4 * m), pq


# -- KKS ---------------------------------------------------------------------------


def kks_anchor(spec, xi, X, mutate=False):
    """ad*_X xi in basis coordinates: (ad*_X xi)_b = sum_a X_a c_abk xi_k.

    ``mutate`` symmetrizes the anchor matrix (a corrupted variant).
    """
    A = kks_matrix(spec, xi, mutate=mutate)
    return _algebra_coords(spec, X) @ A


def kks_matrix(spec, xi, mutate=False):
    A = np.einsum("abk,k->ab", spec.structure_constants, np.asarray(xi, dtype=float))
    if mutate:
        A = (A + A.T) / 2.0
    return A


def kks_form(spec, xi, X, Y):
    """<xi, [X, Y]>."""
    c1, c2 = _algebra_coords(spec, X), _algebra_coords(spec, Y)
    br = np.einsum("a,b,abk->k", c1, c2, spec.structure_constants)
    return float(np.dot(xi, br))


@dataclass(frozen=True)
class Stabilizer:
    basis: np.ndarray
    closure_residual: float
    orbit_rank: int

    @property
    def dim(self):
        return self.basis.shape[1]


def stabilizer_algebra(spec, xi, mutate=False):
    """ker sigma_xi = {X : ad*_X xi = 0}, with its commutator-closure residual."""
    A = kks_matrix(spec, xi, mutate=mutate)
    K = la.null_space(A.T, ncols=spec.dim)
    Q = la.orth(K) if K.shape[1] else K
    c = spec.structure_constants
    worst = 0.0
    for i in range(Q.shape[1]):
        for j in range(Q.shape[1]):
            br = np.einsum("a,b,abk->k", Q[:, i], Q[:, j], c)
            worst = max(worst, la.max_abs(br - Q @ (Q.T @ br)))
    return Stabilizer(Q, worst / (1.0 + la.max_abs(c)), la.numerical_rank(A))


# -- GL(n, C) orbit form ------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitPoint:
    """A = g J g^-1 on the adjoint orbit of the Jordan matrix J."""

    J: np.ndarray
    g: np.ndarray

    @property
    def A(self):
        g = np.asarray(self.g, dtype=complex)
        return g @ np.asarray(self.J, dtype=complex) @ np.linalg.inv(g)

    def tangent(self, gdot):
        """Tangent (gdot, Adot) of the curve t -> g(t) J g(t)^-1 with g(0) = g."""
        gdot = np.asarray(gdot, dtype=complex)
        V = gdot @ np.linalg.inv(self.g)
        A = self.A
        return gdot, V @ A - A @ V


def gl_orbit_form(point, tangent1, tangent2, tol=None, mutate=False):
    """KKS value Tr(V1 Adot2) = -Tr(V2 Adot1) with V_i = gdot_i g^-1 (complex).

    ``mutate`` uses gdot_i g in place of gdot_i g^-1 (a corrupted variant).
    Returns ``(value, agreement_residual)``.
    """
    tol = default_tol() if tol is None else tol
    g = np.asarray(point.g, dtype=complex)
    gi = np.linalg.inv(g)
    A = point.A
    scale = 1.0 + la.max_abs(A)
    for gd, Ad in (tangent1, tangent2):
        V = np.asarray(gd) @ gi
        r = la.max_abs(np.asarray(Ad) - (V @ A - A @ V)) / (scale * (1.0 + la.max_abs(V)))
        if r > tol:
            raise PGLError(f"tangent data is inconsistent with the orbit ({r:.3e})", r)
    mid = g if mutate else gi
    g1, A1 = (np.asarray(v, dtype=complex) for v in tangent1)
    g2, A2 = (np.asarray(v, dtype=complex) for v in tangent2)
    e1 = np.trace(g1 @ mid @ A2)
    e2 = -np.trace(g2 @ mid @ A1)
    r = abs(e1 - e2) / (1.0 + la.max_abs(g1 @ mid) * la.max_abs(A2) + la.max_abs(g2 @ mid) * la.max_abs(A1))
    return complex(e1), float(r)


# -- the verification suite --------------------------------------------------------------


def random_point(spec, rng, scale=1.0):
    return CotangentPoint(spec, spec.random_group(rng), rng.standard_normal(spec.dim) * scale)


def random_composable(spec, rng, k):
    """k points p_1, ..., p_k with s(p_i) = t(p_{i+1})."""
    pts = [random_point(spec, rng)]
    for _ in range(k - 1):
        h = spec.random_group(rng)
        eta = spec.coadjoint(np.linalg.inv(h), ct_source(pts[-1]))
        pts.append(CotangentPoint(spec, h, eta))
    return pts


def axiom_residuals(spec, rng, mutate=False):
    """Associativity, unit, inverse and source/target coherence residuals for one trial."""
    p, q, r = random_composable(spec, rng, 3)
    mul = lambda a, b: ct_multiply(a, b, mutate=mutate)  # noqa: E731
    out = {}
    try:
        out["associativity"] = point_distance(mul(mul(p, q), r), mul(p, mul(q, r)))
    except NotComposableError as exc:
        out["associativity"] = exc.residual
    pq = mul(p, q)
    out["source-coherence"] = la.max_abs(ct_source(pq) - ct_source(q))
    out["target-coherence"] = la.max_abs(ct_target(pq) - ct_target(p))
    out["left-unit"] = point_distance(mul(ct_unit(spec, ct_target(p)), p), p)
    out["right-unit"] = point_distance(mul(p, ct_unit(spec, ct_source(p))), p)
    pinv = ct_invert(p)
    try:
        out["right-inverse"] = point_distance(mul(p, pinv), ct_unit(spec, ct_target(p)))
    except NotComposableError as exc:
        out["right-inverse"] = exc.residual
    try:
        out["left-inverse"] = point_distance(mul(pinv, p), ct_unit(spec, ct_source(p)))
    except NotComposableError as exc:
        out["left-inverse"] = exc.residual
    scale = 1.0 + max(la.max_abs(p.xi), la.max_abs(q.xi), la.max_abs(r.xi))
    return {k: v / scale for k, v in out.items()}


def symplectic_residuals(spec, rng, mutate=False, sign=None):
    """omega-multiplicativity, fiber orthogonality, Lagrangian zero section and
    units, dual-pair bracket, unit coisotropy and the Poisson property of s and t."""
    tol = spec.tol
    m = spec.dim
    p, q = random_composable(spec, rng, 2)
    out = {}

    # (b) multiplicativity on the tangent space of composable pairs
    dsp, dtp = chart_maps(p)
    dsq, dtq = chart_maps(q)
    Dm, pq = multiplication_differential(p, q, mutate=mutate)
    T = la.null_space(np.hstack([dsp, -dtq]), ncols=4 * m)
    Op, Oq, Opq = form_matrix(spec, ct_target(p)), form_matrix(spec, ct_target(q)), form_matrix(spec, ct_target(pq))
    lhs = T[: 2 * m].T @ Op @ T[: 2 * m] + T[2 * m :].T @ Oq @ T[2 * m :]
    rhs = (Dm @ T).T @ Opq @ (Dm @ T)
    out["omega-multiplicativity"] = la.relative(la.max_abs(lhs - rhs), Op, Oq)

    # (c) fibres of s and t are omega-orthogonal
    ds, dt = dsp, dtp
    Ks = la.null_space(ds, ncols=2 * m)
    Kt = la.null_space(dt, ncols=2 * m)
    out["fiber-orthogonality"] = la.relative(la.max_abs(Ks.T @ Op @ Kt), Op)

    # (d) zero section and unit manifold are Lagrangian
    g0 = CotangentPoint(spec, p.g, np.zeros(m))
    S0 = _symplectic(form_matrix(spec, np.zeros(m)), tol)
    zero_tan = S0.subspace(np.vstack([np.eye(m), np.zeros((m, m))]))
    c0 = classify_subspace(S0, zero_tan)
    out["zero-section-lagrangian"] = max(c0.lagrangian_residual, c0.coisotropic_residual)
    del g0
    u = ct_unit(spec, ct_source(p))
    Su = _symplectic(form_matrix(spec, ct_target(u)), tol)
    unit_tan = Su.subspace(np.vstack([np.zeros((m, m)), np.eye(m)]))
    cu = classify_subspace(Su, unit_tan)
    out["units-lagrangian"] = cu.lagrangian_residual

    # (f) unit manifold coisotropic
    out["units-coisotropic"] = cu.coisotropic_residual

    # (e) dual pair: {s^* f1, t^* f2} = 0 for linear f1, f2
    Pi = np.linalg.inv(Op)
    c1, c2 = rng.standard_normal(m), rng.standard_normal(m)
    out["dual-pair"] = la.relative(abs((c1 @ ds) @ Pi @ (c2 @ dt)), c1, c2, Pi)

    # s is Poisson and t anti-Poisson onto the KKS structure
    Sp = _symplectic(Op, tol)
    sg = -1.0 if sign is None else sign
    kks_s = LinearPoissonSpace(np.eye(m), sg * kks_matrix(spec, ct_source(p)), tol=tol)
    kks_t = LinearPoissonSpace(np.eye(m), sg * kks_matrix(spec, ct_target(p)), tol=tol)
    out["source-poisson"] = is_poisson_morphism(Sp, kks_s, ds).residual
    out["target-anti-poisson"] = is_poisson_morphism(Sp, kks_t, dt, anti=True).residual
    return out


def kks_residuals(spec, rng, mutate=False, points=5):
    """Lie-Poisson Schouten, agreement of kks_form with the linear bivector, and stabilizer closure."""
    c = spec.structure_constants
    m = spec.dim
    W = lie_poisson_bivector(c, tol=spec.tol)
    out = {"schouten": 0.0, "kks-agreement": 0.0, "stabilizer-closure": 0.0, "rank-nullity": 0.0}
    for _ in range(points):
        xi = rng.standard_normal(m)
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    if len({i, j, k}) < 3 and m >= 3:
                        continue
                    sr = schouten_residual(W, [coordinate_form(i), coordinate_form(j), coordinate_form(k)], xi)
                    out["schouten"] = max(out["schouten"], abs(sr))
        Lam = W.eval(xi)[0]
        A = kks_matrix(spec, xi, mutate=mutate)
        E = np.eye(m)
        viaform = np.array([[E[i] @ A @ E[j] for j in range(m)] for i in range(m)])
        direct = np.array([[kks_form(spec, xi, E[i], E[j]) for j in range(m)] for i in range(m)])
        out["kks-agreement"] = max(out["kks-agreement"], la.max_abs(Lam - direct), la.max_abs(viaform - direct))
        st = stabilizer_algebra(spec, xi, mutate=mutate)
        out["stabilizer-closure"] = max(out["stabilizer-closure"], st.closure_residual)
        out["rank-nullity"] = max(out["rank-nullity"], abs(st.dim + st.orbit_rank - m))
    return out


@dataclass
class GroupoidReport:
    spec_name: str
    trials: int
    residuals: dict

    def max_residual(self):
        return max(self.residuals.values()) if self.residuals else 0.0


def verify_symplectic_groupoid(spec, trials, seed, mutate=False):
    """Run axiom and symplectic residual families over seeded trials; max per family."""
    from .rng import stream

    out = {}
    for t in range(trials):
        rng = stream(seed, t)
        for k, v in axiom_residuals(spec, rng, mutate=mutate).items():
            out[k] = max(out.get(k, 0.0), v)
        for k, v in symplectic_residuals(spec, rng, mutate=mutate).items():
            out[k] = max(out.get(k, 0.0), v)
    return GroupoidReport(spec.name, trials, out)
