"""Finite-dimensional linear partial Poisson spaces.

A space is a triple (E, E_flat, P): ``E = R^n``, ``E_flat`` is spanned by
the rows of a k x n matrix ``B`` (functionals on E), and the anchor ``P`` is
an n x k matrix sending flat coordinates to vectors.  A flat covector with
coordinates ``a`` is the functional ``a @ B``; the pairing of two flat
covectors through the anchor is therefore ``a @ (B @ P) @ b`` and skewness
of the structure is skewness of ``K = B @ P``.

The pinned convention is ``omega(a, b) = <a, P b> = a @ K @ b``.
"""

from dataclasses import dataclass

import numpy as np

from . import _linalg as la
from .config import default_tol
from .errors import (
    DimensionMismatch,
    FlatPreservationError,
    NotCoisotropicError,
    NotInImageError,
    PGLError,
)

__all__ = [
    "Subspace",
    "LinearPoissonSpace",
    "LinearRelation",
    "Classification",
    "MorphismCheck",
    "annihilator",
    "zero_space",
    "perp_P",
    "orth_flat",
    "classify_subspace",
    "product_space",
    "is_poisson_morphism",
    "graph_of",
    "identity_relation",
    "relation_compose",
    "relation_apply",
    "is_poisson_relation",
    "leaf_form",
    "symplectic_space",
]


class Subspace:
    """A subspace of ``R^n`` (or ``C^n``) held as orthonormal columns."""

    def __init__(self, span, ambient_dim=None, tol=None):
        span = np.asarray(span)
        if span.ndim == 1:
            span = span.reshape(-1, 1)
        if ambient_dim is None:
            ambient_dim = span.shape[0]
        if span.size == 0:
            span = np.zeros((ambient_dim, 0), dtype=span.dtype)
        if span.shape[0] != ambient_dim:
            raise DimensionMismatch(
                f"span columns have length {span.shape[0]}, expected {ambient_dim}"
            )
        self.ambient_dim = int(ambient_dim)
        self.tol = default_tol() if tol is None else float(tol)
        basis = la.orth(span)
        if not np.iscomplexobj(span):
            basis = np.real(basis)
        self.basis = basis
        self.basis.setflags(write=False)

    @property
    def dim(self):
        return self.basis.shape[1]

    def projector(self):
        return self.basis @ self.basis.conj().T

    def contains(self, v):
        v = np.asarray(v).reshape(-1)
        if v.shape[0] != self.ambient_dim:
            raise DimensionMismatch("vector length does not match the ambient dimension")
        r = np.linalg.norm(v - self.basis @ (self.basis.conj().T @ v))
        return r <= self.tol * (1.0 + np.linalg.norm(v))

    def distance(self, other):
        _check_same_ambient(self, other)
        return la.span_distance(self.basis, other.basis)

    def equals(self, other, tol=None):
        tol = self.tol if tol is None else tol
        return self.dim == other.dim and self.distance(other) <= tol

    def to_json(self):
        return {
            "dim": self.ambient_dim,
            "matrix": la.to_json_matrix(self.basis.T),
            "tol": self.tol,
        }

    @classmethod
    def from_json(cls, obj):
        rows = la.from_json_matrix(obj["matrix"])
        n = int(obj["dim"])
        span = rows.T if rows.size else np.zeros((n, 0))
        return cls(span, ambient_dim=n, tol=obj.get("tol"))

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


def _check_same_ambient(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


class LinearPoissonSpace:
    """(E, E_flat, P) with flat basis rows ``B`` (k x n) and anchor ``P`` (n x k)."""

    def __init__(self, flat_basis, anchor, tol=None):
        B = np.atleast_2d(np.asarray(flat_basis, dtype=float))
        P = np.asarray(anchor, dtype=float)
        if B.size == 0:
            n = P.shape[0] if P.ndim == 2 else 0
            B = np.zeros((0, n))
        if P.ndim != 2:
            P = P.reshape(B.shape[1], B.shape[0])
        k, n = B.shape
        if P.shape != (n, k):
            raise DimensionMismatch(f"anchor must be {n}x{k}, got {P.shape[0]}x{P.shape[1]}")
        self.tol = default_tol() if tol is None else float(tol)
        if k and la.numerical_rank(B) != k:
            raise PGLError("flat basis rows are linearly dependent")
        self.B = B
        self.P = P
        self.K = B @ P
        skew = la.relative(la.max_abs(self.K + self.K.T), B, P)
        if skew > self.tol:
            raise PGLError(f"anchor is not skew against the pairing (residual {skew:.3e})", skew)
        self.skew_residual = skew
        for a in (self.B, self.P, self.K):
            a.setflags(write=False)

    @property
    def dim_E(self):
        return self.B.shape[1]

    @property
    def k(self):
        return self.B.shape[0]

    @property
    def symplectic(self):
        return self.k == self.dim_E and la.numerical_rank(self.P) == self.dim_E

    def omega(self, a, b):
        """Pinned pairing <a, P b> of two flat covectors given in flat coordinates."""
        return float(np.asarray(a) @ self.K @ np.asarray(b))

    def flat_coordinates(self, functional):
        """Flat coordinates of a dual-space row vector, or raise if it is not flat."""
        f = np.asarray(functional, dtype=float).reshape(-1)
        a, *_ = np.linalg.lstsq(self.B.T, f, rcond=None)
        r = la.relative(np.linalg.norm(self.B.T @ a - f), f)
        if r > self.tol:
            raise PGLError("functional is not in the flat subspace", r)
        return a

    def subspace(self, span):
        return Subspace(span, ambient_dim=self.dim_E, tol=self.tol)

    def flat_subspace(self, span):
        return Subspace(span, ambient_dim=self.k, tol=self.tol)

    def to_json(self):
        return {
            "dim": self.dim_E,
            "flat_basis": la.to_json_matrix(self.B),
            "matrix": la.to_json_matrix(self.P),
            "tol": self.tol,
        }

    @classmethod
    def from_json(cls, obj):
        n = int(obj["dim"])
        B = la.from_json_matrix(obj["flat_basis"]) if obj.get("flat_basis") else np.zeros((0, n))
        P = la.from_json_matrix(obj["matrix"]) if obj.get("matrix") else np.zeros((n, 0))
        if P.size == 0:
            P = np.zeros((n, B.shape[0]))
        return cls(B, P, tol=obj.get("tol"))

    def __repr__(self):
        return f"LinearPoissonSpace(dim_E={self.dim_E}, k={self.k})"


def symplectic_space(P, tol=None):
    """Space with E_flat the full dual (B = I) and invertible anchor ``P``."""
    P = np.asarray(P, dtype=float)
    return LinearPoissonSpace(np.eye(P.shape[0]), P, tol=tol)


def _check_in(S, F):
    if F.ambient_dim != S.dim_E:
        raise DimensionMismatch(f"subspace lives in R^{F.ambient_dim}, space is R^{S.dim_E}")


def annihilator(F):
    """All functionals vanishing on F, as a subspace of dual coordinates."""
    return Subspace(la.null_space(F.basis.T, ncols=F.ambient_dim), ambient_dim=F.ambient_dim, tol=F.tol)


def zero_space(S, F):
    """Flat covectors vanishing on F, in flat coordinates."""
    _check_in(S, F)
    M = (S.B @ F.basis).T
    return Subspace(la.null_space(M, ncols=S.k), ambient_dim=S.k, tol=S.tol)


def perp_P(S, F):
    F0 = zero_space(S, F)
    return Subspace(S.P @ F0.basis, ambient_dim=S.dim_E, tol=S.tol)


def orth_flat(S, A):
    """Flat covectors w with <w, P a> = 0 for every a in A (flat coordinates)."""
    if A.ambient_dim != S.k:
        raise DimensionMismatch(f"flat subspace lives in R^{A.ambient_dim}, flat dimension is {S.k}")
    M = (S.K @ A.basis).T
    return Subspace(la.null_space(M, ncols=S.k), ambient_dim=S.k, tol=S.tol)


@dataclass(frozen=True)
class Classification:
    coisotropic: bool
    lagrangian: bool
    coisotropic_residual: float
    lagrangian_residual: float


def classify_subspace(S, F):
    F0 = zero_space(S, F)
    Z = F0.basis
    coiso = la.relative(la.max_abs(Z.T @ S.K @ Z), S.K)
    image = Subspace(S.P @ Z, ambient_dim=S.dim_E, tol=S.tol)
    if image.dim != F.dim:
        lag = 1.0
    else:
        lag = la.span_distance(image.basis, F.basis) if F.dim else 0.0
    return Classification(coiso <= S.tol, lag <= S.tol, coiso, lag)


def product_space(S1, S2, sign=1):
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    k1, n1 = S1.B.shape
    k2, n2 = S2.B.shape
    B = np.zeros((k1 + k2, n1 + n2))
    B[:k1, :n1] = S1.B
    B[k1:, n1:] = S2.B
    P = np.zeros((n1 + n2, k1 + k2))
    P[:n1, :k1] = S1.P
    P[n1:, k1:] = sign * S2.P
    return LinearPoissonSpace(B, P, tol=min(S1.tol, S2.tol))


@dataclass(frozen=True)
class MorphismCheck:
    residual: float
    preservation_residual: float
    pullback: np.ndarray
    tol: float

    @property
    def is_morphism(self):
        return self.residual <= self.tol


def is_poisson_morphism(S1, S2, phi, anti=False):
    """Check P2 = phi P1 phi^* (or -phi P1 phi^* when ``anti``).

    The pullback of flat covectors is first solved as ``B2 phi = M B1``; a
    nonzero residual there means phi^* does not preserve the flat subspaces
    and raises :class:`FlatPreservationError`.
    """
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (S2.dim_E, S1.dim_E):
        raise DimensionMismatch(f"phi must be {S2.dim_E}x{S1.dim_E}, got {phi.shape}")
    tol = min(S1.tol, S2.tol)
    target = S2.B @ phi
    if S1.k:
        Mt, *_ = np.linalg.lstsq(S1.B.T, target.T, rcond=None)
        M = Mt.T
    else:
        M = np.zeros((S2.k, 0))
    pres = la.relative(la.max_abs(target - M @ S1.B), S2.B, phi)
    if pres > tol:
        raise FlatPreservationError(
            f"pullback does not preserve flat subspaces (residual {pres:.3e})", pres
        )
    pushed = phi @ S1.P @ M.T
    sign = -1.0 if anti else 1.0
    scale = max(la.max_abs(S2.P), la.max_abs(phi) * la.max_abs(S1.P) * la.max_abs(M))
    r = la.max_abs(S2.P - sign * pushed) / (1.0 + scale)
    return MorphismCheck(r, pres, M, tol)


class LinearRelation:
    def __init__(self, dim_1, dim_2, graph):
        if graph.ambient_dim != dim_1 + dim_2:
            raise DimensionMismatch(
                f"graph ambient dimension {graph.ambient_dim} != {dim_1} + {dim_2}"
            )
        self.dim_1 = int(dim_1)
        self.dim_2 = int(dim_2)
        self.graph = graph

    @property
    def source_block(self):
        return self.graph.basis[: self.dim_1]

    @property
    def target_block(self):
        return self.graph.basis[self.dim_1 :]

    def __repr__(self):
        return f"LinearRelation({self.dim_1} -> {self.dim_2}, dim={self.graph.dim})"


def graph_of(phi, tol=None):
    phi = np.asarray(phi)
    n2, n1 = phi.shape
    span = np.vstack([np.eye(n1), phi])
    return LinearRelation(n1, n2, Subspace(span, tol=tol))


def identity_relation(n, tol=None):
    return graph_of(np.eye(n), tol=tol)


def relation_compose(R, Sr):
    """Graph of ``Sr o R``: pairs (x, z) with (x, y) in R and (y, z) in Sr."""
    if R.dim_2 != Sr.dim_1:
        raise DimensionMismatch(f"middle dimensions differ: {R.dim_2} vs {Sr.dim_1}")
    R1, R2 = R.source_block, R.target_block
    S1, S2 = Sr.source_block, Sr.target_block
    r = R1.shape[1]
    ker = la.null_space(np.hstack([R2, -S1]), ncols=r + S1.shape[1])
    span = np.vstack([R1 @ ker[:r], S2 @ ker[r:]])
    tol = min(R.graph.tol, Sr.graph.tol)
    return LinearRelation(R.dim_1, Sr.dim_2, Subspace(span, ambient_dim=R.dim_1 + Sr.dim_2, tol=tol))


def is_poisson_relation(S1, S2, R):
    """Classification of the graph of R in E1 x E2 with the second anchor negated."""
    if (R.dim_1, R.dim_2) != (S1.dim_E, S2.dim_E):
        raise DimensionMismatch("relation does not match the spaces")
    return classify_subspace(product_space(S1, S2, -1), R.graph)


def relation_apply(S1, S2, R, C):
    """Image R(C) = {y : (x, y) in R, x in C}, certified coisotropic."""
    _check_in(S1, C)
    c = classify_subspace(S1, C)
    if not c.coisotropic:
        raise NotCoisotropicError(
            f"input subspace is not coisotropic (residual {c.coisotropic_residual:.3e})",
            c.coisotropic_residual,
        )
    rc = is_poisson_relation(S1, S2, R)
    if not rc.coisotropic:
        raise NotCoisotropicError(
            f"relation is not coisotropic (residual {rc.coisotropic_residual:.3e})",
            rc.coisotropic_residual,
        )
    R1, R2 = R.source_block, R.target_block
    outside = np.eye(S1.dim_E) - C.projector()
    ker = la.null_space(outside @ R1, ncols=R1.shape[1])
    image = Subspace(R2 @ ker, ambient_dim=S2.dim_E, tol=S2.tol)
    out = classify_subspace(S2, image)
    if not out.coisotropic:
        raise NotCoisotropicError(
            f"image failed the coisotropy certificate (residual {out.coisotropic_residual:.3e})",
            out.coisotropic_residual,
        )
    return image


def _preimage(S, u):
    a, *_ = np.linalg.lstsq(S.P, u, rcond=None)
    r = la.relative(np.linalg.norm(S.P @ a - u), S.P, a)
    if r > S.tol:
        raise NotInImageError(f"vector is not in the image of the anchor (residual {r:.3e})", r)
    return a


def leaf_form(S, u, v, return_residual=False):
    """Leafwise 2-form <a, P b> with P a = u, P b = v.

    Preimages are minimum-norm least-squares solutions; the value is
    recomputed with preimages shifted by a kernel element of P and the
    difference is the well-definedness residual.
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    v = np.asarray(v, dtype=float).reshape(-1)
    if u.shape[0] != S.dim_E or v.shape[0] != S.dim_E:
        raise DimensionMismatch("vectors do not match the ambient dimension")
    a = _preimage(S, u)
    b = _preimage(S, v)
    value = float(a @ S.B @ v)
    ker = la.null_space(S.P, ncols=S.k)
    if ker.shape[1]:
        shift = ker @ np.linspace(1.0, 2.0, ker.shape[1])
        a2, b2 = a + shift, b - shift
        alt = float(a2 @ S.K @ b2)
    else:
        alt = float(a @ S.K @ b)
    resid = la.relative(abs(alt - value), a, S.K, b)
    if return_residual:
        return value, resid
    return value
