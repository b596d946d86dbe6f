"""Multiplicative Poisson structure on U(n) from the Iwasawa split.

``gl(n, C) = u(n) + b(n)``: skew-Hermitian plus upper-triangular with real
diagonal.  Both summands are isotropic for ``<A, B> = Im Tr(AB)``, which
identifies ``b(n)`` with the dual of ``u(n)``.  The right-trivialized
tensor is

    Lambda_R(g)(a1, a2) = Im Tr(p2(g^-1 a1 g) p1(g^-1 a2 g))

with ``p1``/``p2`` the two projections.  Coadjoint transport of a dual
element is ``Ad*_g a = p2(g^-1 a g)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _linalg as la
from .config import default_tol
from .errors import IncompatibleFamilyError, MembershipError, WrongSideError
from .jet import Jet2
from .poisson_jet import BivectorField, coordinate, jacobiator

__all__ = [
    "GroupElement",
    "AlgebraElement",
    "TowerElement",
    "iwasawa_project",
    "p1",
    "p2",
    "pairing",
    "u_basis",
    "b_basis",
    "dual_basis",
    "u_coords",
    "lambda_R",
    "multiplicativity_residual",
    "tangent_lambda",
    "cocycle_algebra_residual",
    "derived_bracket",
    "derived_bracket_element",
    "derived_jacobi_residual",
    "chart_bivector",
    "chart_jacobi_residual",
    "promote",
    "restrict",
    "tower_bracket",
    "tower_level_residual",
    "random_b",
    "random_u",
]


def _sq(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    return a


def unitarity_residual(g):
    g = _sq(g)
    return la.max_abs(g @ g.conj().T - np.eye(g.shape[0]))


def u_residual(x):
    x = _sq(x)
    return la.max_abs(x + x.conj().T)


def b_residual(a):
    a = _sq(a)
    lower = la.max_abs(np.tril(a, -1))
    return max(lower, la.max_abs(np.imag(np.diag(a))))


@dataclass(frozen=True)
class GroupElement:
    mat: np.ndarray

    def __post_init__(self):
        m = _sq(self.mat)
        object.__setattr__(self, "mat", m)
        r = unitarity_residual(m)
        if r > default_tol() * 10:
            raise MembershipError(f"matrix is not unitary (residual {r:.3e})", r)

    @property
    def n(self):
        return self.mat.shape[0]


@dataclass(frozen=True)
class AlgebraElement:
    mat: np.ndarray
    side: str

    def __post_init__(self):
        m = _sq(self.mat)
        object.__setattr__(self, "mat", m)
        if self.side not in ("u", "b"):
            raise ValueError("side must be 'u' or 'b'")
        r = u_residual(m) if self.side == "u" else b_residual(m)
        if r > default_tol() * (1.0 + la.max_abs(m)):
            raise WrongSideError(f"matrix is not in {self.side}(n) (residual {r:.3e})", r)

    @property
    def n(self):
        return self.mat.shape[0]


def _group(g):
    return g.mat if isinstance(g, GroupElement) else _sq(g)


def _side(a, side):
    if isinstance(a, AlgebraElement):
        if a.side != side:
            raise WrongSideError(f"expected an element of {side}(n), got {a.side}(n)")
        return a.mat
    m = _sq(a)
    r = u_residual(m) if side == "u" else b_residual(m)
    if r > default_tol() * (1.0 + la.max_abs(m)):
        raise WrongSideError(f"matrix is not in {side}(n) (residual {r:.3e})", r)
    return m


# -- Iwasawa split -----------------------------------------------------------


def iwasawa_project(A):
    """Split A = K + B with K skew-Hermitian, B upper triangular with real diagonal."""
    A = _sq(A)
    low = np.tril(A, -1)
    K = low - low.conj().T + 1j * np.diag(np.imag(np.diag(A)))
    B = A - K
    # enforce the exact pattern of B (the strictly lower part cancels identically)
    B = np.triu(B)
    B[np.diag_indices_from(B)] = np.real(np.diag(A))
    return K, B


def p1(A):
    return iwasawa_project(A)[0]


def p2(A):
    return iwasawa_project(A)[1]


def pairing(A, B):
    return float(np.imag(np.trace(np.asarray(A) @ np.asarray(B))))


def u_basis(n):
    out = []
    for j in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[j, j] = 1j
        out.append(e)
    for j in range(n):
        for k in range(j + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[j, k], e[k, j] = 1.0, -1.0
            out.append(e)
            e = np.zeros((n, n), dtype=complex)
            e[j, k], e[k, j] = 1j, 1j
            out.append(e)
    return out


def b_basis(n):
    out = []
    for j in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[j, j] = 1.0
        out.append(e)
    for j in range(n):
        for k in range(j + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[j, k] = 1.0
            out.append(e)
            e = np.zeros((n, n), dtype=complex)
            e[j, k] = 1j
            out.append(e)
    return out


_DUAL_CACHE = {}


def dual_basis(n, pair=pairing):
    """b(n) elements beta_a with pair(beta_a, x_b) = delta_ab for the u(n) basis."""
    key = (n, pair)
    if key not in _DUAL_CACHE:
        xb, bb = u_basis(n), b_basis(n)
        G = np.array([[pair(b, x) for x in xb] for b in bb])
        C = np.linalg.inv(G)
        _DUAL_CACHE[key] = [sum(C[a, c] * bb[c] for c in range(len(bb))) for a in range(len(bb))]
    return _DUAL_CACHE[key]


def u_coords(X):
    n = np.asarray(X).shape[0]
    return np.array([pairing(beta, X) for beta in dual_basis(n)])


def random_u(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z - z.conj().T) / 2.0


def random_b(rng, n):
    z = np.triu(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    z[np.diag_indices(n)] = np.real(np.diag(z))
    return z


# -- the tensor and its cocycle identities ---------------------------------------


def _lambda(g, a1, a2):
    gi = g.conj().T
    return float(np.imag(np.trace(p2(gi @ a1 @ g) @ p1(gi @ a2 @ g))))


def lambda_R(g, a1, a2):
    return _lambda(_group(g), _side(a1, "b"), _side(a2, "b"))


def coadjoint(g, a):
    """Ad*_g a = p2(g^-1 a g) on the b(n) side."""
    g = _group(g)
    return p2(g.conj().T @ _side(a, "b") @ g)


def multiplicativity_residual(g, h, a1, a2, mutate=False):
    """|Lambda(gh) - Lambda(g) - Lambda(h)(Ad*_g a1, Ad*_g a2)| relative to |a1||a2|.

    ``mutate`` skips the p2 re-projection after Ad (a corrupted variant).
    """
    g, h = _group(g), _group(h)
    a1, a2 = _side(a1, "b"), _side(a2, "b")
    gi = g.conj().T
    if mutate:
        t1, t2 = gi @ a1 @ g, gi @ a2 @ g
    else:
        t1, t2 = p2(gi @ a1 @ g), p2(gi @ a2 @ g)
    r = _lambda(g @ h, a1, a2) - _lambda(g, a1, a2) - _lambda(h, t1, t2)
    return la.relative(abs(r), a1, a2)


def tangent_lambda(x, a1, a2):
    """d/dt Lambda_R(exp(tx))(a1, a2) at t = 0, by d/dt Ad_{exp(-tx)} a = -[x, a]."""
    x = np.asarray(x, dtype=complex)
    da1 = -(x @ a1 - a1 @ x)
    da2 = -(x @ a2 - a2 @ x)
    # p1(a2) = 0 for a2 in b(n), so only the derivative of the second factor survives
    return float(np.imag(np.trace(p2(da1) @ p1(a2) + p2(a1) @ p1(da2))))


def _act(x, theta, a1, a2, reproject=True):
    """Infinitesimal coadjoint action on a bilinear form on b(n)."""
    c1 = -(x @ a1 - a1 @ x)
    c2 = -(x @ a2 - a2 @ x)
    if reproject:
        c1, c2 = p2(c1), p2(c2)
    return theta(c1, a2) + theta(a1, c2)


def cocycle_algebra_residual(x, y, a1, a2):
    """delta([x, y]) - (x . delta(y) - y . delta(x)) on (a1, a2)."""
    x, y = _side(x, "u"), _side(y, "u")
    a1, a2 = _side(a1, "b"), _side(a2, "b")
    xy = x @ y - y @ x
    lhs = tangent_lambda(xy, a1, a2)
    dy = lambda b1, b2: tangent_lambda(y, b1, b2)  # noqa: E731
    dx = lambda b1, b2: tangent_lambda(x, b1, b2)  # noqa: E731
    rhs = _act(x, dy, a1, a2) - _act(y, dx, a1, a2)
    return la.relative(abs(lhs - rhs), x, y, a1, a2)


def derived_bracket(a1, a2):
    """The map x -> T_e Lambda_R(x)(a1, a2) on u(n)."""
    a1, a2 = _side(a1, "b"), _side(a2, "b")
    return lambda x: tangent_lambda(_side(x, "u"), a1, a2)


def derived_bracket_element(a1, a2):
    """The b(n) element representing :func:`derived_bracket` under the pairing."""
    a1, a2 = _side(a1, "b"), _side(a2, "b")
    n = a1.shape[0]
    ev = derived_bracket(a1, a2)
    return sum(ev(x) * beta for x, beta in zip(u_basis(n), dual_basis(n)))


def derived_jacobi_residual(n=2):
    """Max Jacobi defect of the derived bracket over all b(n) basis triples."""
    bb = b_basis(n)
    br = derived_bracket_element
    worst = 0.0
    for a in bb:
        for b in bb:
            for c in bb:
                j = br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))
                worst = max(worst, la.max_abs(j))
    return worst


# -- exponential chart ---------------------------------------------------------------


def _ad(X, Y):
    return X @ Y - Y @ X


def _dexp_terms(X, xj, xk=None, terms=40):
    """R_j = sum_m ad_X^m xj/(m+1)! and, if xk given, its derivative along xk."""
    R = np.zeros_like(X)
    dR = np.zeros_like(X)
    powers = [xj]
    for m in range(1, terms):
        powers.append(_ad(X, powers[-1]))
    for m, pm in enumerate(powers):
        R = R + pm / math.factorial(m + 1)
    if xk is None:
        return R
    # d/dt ad_X^m xj along X -> X + t xk = sum_l ad_X^l ad_xk ad_X^(m-1-l) xj
    for m in range(1, terms):
        acc = np.zeros_like(X)
        for l in range(m):
            v = powers[m - 1 - l]
            v = _ad(xk, v)
            for _ in range(l):
                v = _ad(X, v)
            acc = acc + v
        dR = dR + acc / math.factorial(m + 1)
    return R, dR


def _expm(X):
    from scipy.linalg import expm

    return expm(X)


def chart_bivector(g0, tol=None, terms=25, mutate=False):
    """Poisson tensor pulled back through t -> exp(sum t_a x_a) g0 (coordinates t).

    ``mutate`` skips the p2 re-projection when differentiating the tensor.
    """
    g0 = _group(g0)
    n = g0.shape[0]
    xb = u_basis(n)
    betas = dual_basis(n)
    d = len(xb)

    cache = {}

    def eval_fn(t):
        key = tuple(np.asarray(t, dtype=float))
        if key not in cache:
            cache.clear()
            cache[key] = _eval(np.asarray(t, dtype=float))
        return cache[key]

    def _eval(t):
        X = sum(t[a] * xb[a] for a in range(d))
        g = _expm(X) @ g0
        R = [_dexp_terms(X, xb[j], terms=terms) for j in range(d)]
        M = np.array([u_coords(Rj) for Rj in R]).T
        Mi = np.linalg.inv(M)
        L = np.array([[_lambda(g, ba, bb) for bb in betas] for ba in betas])
        Pi = Mi @ L @ Mi.T
        dPi = np.zeros((d, d, d))
        for k in range(d):
            Rk = R[k]
            dM = np.array([u_coords(_dexp_terms(X, xb[j], xb[k], terms=terms)[1]) for j in range(d)]).T
            # dL from the cocycle: move g by exp(s Rk)
            lam = lambda b1, b2: _lambda(g, b1, b2)  # noqa: E731
            dL = np.array(
                [[tangent_lambda(Rk, ba, bb) + _act(Rk, lam, ba, bb, not mutate) for bb in betas] for ba in betas]
            )
            dMi = -Mi @ dM @ Mi
            dPi[:, :, k] = dMi @ L @ Mi.T + Mi @ dL @ Mi.T + Mi @ L @ dMi.T
        return Pi, dPi

    return BivectorField(d, eval_fn=eval_fn, tol=tol, name="unitary-chart")


def chart_jacobi_residual(g0, t=None, tol=None, mutate=False):
    """Max jacobiator over coordinate triples of the chart bivector at t."""
    W = chart_bivector(g0, tol=tol, mutate=mutate)
    d = W.dim
    t = np.zeros(d) if t is None else np.asarray(t, dtype=float)
    worst = 0.0
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                worst = max(worst, abs(jacobiator(W, coordinate(i), coordinate(j), coordinate(k), t)))
    return worst


# -- tower U(n) in U(n+1) in ... ------------------------------------------------


@dataclass(frozen=True)
class TowerElement:
    level: int
    payload: np.ndarray
    kind: str = "group"

    def __post_init__(self):
        m = _sq(self.payload)
        object.__setattr__(self, "payload", m)
        if m.shape[0] != self.level:
            raise ValueError("payload size does not match its level")
        if self.kind not in ("group", "algebra"):
            raise ValueError("kind must be 'group' or 'algebra'")


def promote(elem, k):
    if k < elem.level:
        raise ValueError("cannot promote to a lower level")
    out = np.eye(k, dtype=complex) if elem.kind == "group" else np.zeros((k, k), dtype=complex)
    out[: elem.level, : elem.level] = elem.payload
    return TowerElement(k, out, elem.kind)


def restrict(elem, n):
    if n > elem.level:
        raise ValueError("cannot restrict to a higher level")
    return TowerElement(n, elem.payload[:n, :n].copy(), elem.kind)


def _jet_matrix(G):
    """n x n complex jets over the 2 n^2 real coordinates (re, im) of G."""
    n = G.shape[0]
    d = 2 * n * n
    out = [[None] * n for _ in range(n)]
    for p in range(n):
        for q in range(n):
            idx = 2 * (p * n + q)
            gr = np.zeros(d, dtype=complex)
            gr[idx] = 1.0
            gr[idx + 1] = 1j
            out[p][q] = Jet2(complex(G[p, q]), gr, np.zeros((d, d), dtype=complex))
    return out


def _vec_real(Z):
    n = Z.shape[0]
    v = np.empty(2 * n * n)
    v[0::2] = np.real(Z).reshape(-1)
    v[1::2] = np.imag(Z).reshape(-1)
    return v


def _scalar_value(v):
    if isinstance(v, Jet2):
        return v
    return None


def _right_differential(family, level, G, pair):
    """Coefficients of the right-trivialized differential against the u(level) basis."""
    val = family(level, _jet_matrix(G))
    if not isinstance(val, Jet2):
        return float(np.real(val)), np.zeros(level * level)
    grad = np.real(val.grad)
    coeffs = np.array([grad @ _vec_real(x @ G) for x in u_basis(level)])
    return float(np.real(val.value)), coeffs


def tower_bracket(f, h, elem, level, mutate=False, check_tol=None):
    """{f, h} at the promotion of ``elem`` to ``level``.

    ``f`` and ``h`` are families ``family(level, G)`` over complex-jet
    matrices; compatibility with the element's native level is checked at
    the evaluation point.  ``mutate`` uses a level-normalized pairing.
    """
    if elem.kind != "group":
        raise ValueError("tower brackets are evaluated at group elements")
    tol = default_tol() if check_tol is None else check_tol
    G = promote(elem, level).payload
    pair = pairing
    if mutate:
        pair = _normalized_pairing(level)
    fv, cf = _right_differential(f, level, G, pair)
    hv, ch = _right_differential(h, level, G, pair)
    for fam, v in ((f, fv), (h, hv)):
        native = fam(elem.level, _jet_matrix(elem.payload))
        nv = float(np.real(native.value if isinstance(native, Jet2) else native))
        if abs(nv - v) > tol * (1.0 + abs(nv)):
            raise IncompatibleFamilyError(
                f"field family is not compatible across levels ({abs(nv - v):.3e})", abs(nv - v)
            )
    betas = dual_basis(level, pair)
    a1 = sum(c * b for c, b in zip(cf, betas))
    a2 = sum(c * b for c, b in zip(ch, betas))
    if np.isscalar(a1) or np.isscalar(a2):
        return 0.0
    return _lambda(G, a1, a2)


_NORMALIZED = {}


def _normalized_pairing(level):
    if level not in _NORMALIZED:
        _NORMALIZED[level] = lambda A, B: pairing(A, B) / level
    return _NORMALIZED[level]


def tower_level_residual(f, h, elem, extra=2, mutate=False):
    """Max spread of tower_bracket over levels n, n+1, ..., n+extra."""
    vals = [tower_bracket(f, h, elem, elem.level + e, mutate=mutate) for e in range(extra + 1)]
    return max(vals) - min(vals), vals
