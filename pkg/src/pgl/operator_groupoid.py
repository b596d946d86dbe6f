"""The partial-isometry groupoid of a finite-dimensional matrix *-algebra.

The algebra is block diagonal: ``blocks = [b_1, ..., b_k]`` with
``sum(b_i) <= n``; everything outside the blocks is zero.  Every element
``x`` has a polar decomposition ``x = u |x|`` with ``u`` a partial
isometry; the groupoid structure is ``s(x) = u*u``, ``t(x) = uu*``,
multiplication the matrix product of composable elements (``s(x) = t(y)``)
and inverse ``i(x) = |x|^+ u*``.  The zero operator has ``s = t = 0`` and
inverts to itself.

All rank decisions use one cut: a singular value counts when it exceeds
``n * sigma_max * 1e-12``, with ``sigma_max`` taken over the whole matrix.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import _linalg as la
from .config import default_tol
from .errors import MembershipError, NotComposableError, PGLError
from .linear_poisson import (
    Subspace,
    classify_subspace,
    is_poisson_morphism,
    product_space,
    symplectic_space,
)

__all__ = [
    "StarAlgebraSpec",
    "OperatorElement",
    "ProjectionElement",
    "polar_decompose",
    "op_source",
    "op_target",
    "op_multiply",
    "op_invert",
    "mvn_equivalent",
    "orbit_partition",
    "schatten_norm",
    "norm_chain_report",
    "pair_groupoid_subpoisson_check",
    "rank_vector",
]


@dataclass(frozen=True)
class StarAlgebraSpec:
    n: int
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(int(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if any(b <= 0 for b in blocks) or sum(blocks) > self.n:
            raise ValueError("block sizes must be positive and sum to at most n")

    @classmethod
    def full(cls, n):
        return cls(n, (n,))

    @property
    def slices(self):
        out, start = [], 0
        for b in self.blocks:
            out.append(slice(start, start + b))
            start += b
        return out

    def mask(self):
        m = np.zeros((self.n, self.n), dtype=bool)
        for s in self.slices:
            m[s, s] = True
        return m

    def membership_residual(self, x):
        x = np.asarray(x)
        return la.max_abs(np.where(self.mask(), 0.0, x))

    def unit(self):
        return self.mask() * np.eye(self.n)

    def random_element(self, rng, ranks=None, cond=None):
        """Random member; optional per-block ranks and per-block condition number."""
        x = np.zeros((self.n, self.n), dtype=complex)
        for k, s in enumerate(self.slices):
            b = s.stop - s.start
            r = b if ranks is None else int(ranks[k])
            if r == 0:
                continue
            W = la.orth(rng.standard_normal((b, r)) + 1j * rng.standard_normal((b, r)))
            V = la.orth(rng.standard_normal((b, r)) + 1j * rng.standard_normal((b, r)))
            if cond is None:
                sig = np.abs(rng.standard_normal(r)) + 0.5
            else:
                sig = np.geomspace(1.0, 1.0 / cond, r) if r > 1 else np.ones(1)
            x[s, s] = W @ np.diag(sig) @ V.conj().T
        return x

    def random_projection(self, rng, ranks):
        p = np.zeros((self.n, self.n), dtype=complex)
        for k, s in enumerate(self.slices):
            b, r = s.stop - s.start, int(ranks[k])
            if r:
                Q = la.orth(rng.standard_normal((b, r)) + 1j * rng.standard_normal((b, r)))
                p[s, s] = Q @ Q.conj().T
        return p

    def to_json(self):
        return {"n": self.n, "blocks": list(self.blocks)}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["n"]), tuple(obj["blocks"]))


def _threshold(spec, x):
    s = np.linalg.svd(np.asarray(x), compute_uv=False)
    return spec.n * (s[0] if s.size else 0.0) * la.RANK_EPS


@dataclass(frozen=True)
class OperatorElement:
    spec: StarAlgebraSpec = field(repr=False)
    x: np.ndarray
    u: np.ndarray
    modulus: np.ndarray
    p: np.ndarray
    q: np.ndarray
    ranks: tuple
    threshold: float

    @property
    def rank(self):
        return sum(self.ranks)


def polar_decompose(spec, x, mutate=False, tol=None):
    """x = u |x| per block, u = W_r V_r^* built from singular values above the cut.

    ``mutate`` keeps the full unitary ``W V^*`` instead of truncating (a corrupted variant).
    """
    x = np.asarray(x, dtype=complex)
    tol = default_tol() if tol is None else tol
    if x.shape != (spec.n, spec.n):
        raise MembershipError(f"expected a {spec.n}x{spec.n} matrix")
    mem = spec.membership_residual(x)
    if mem > tol * (1.0 + la.max_abs(x)):
        raise MembershipError(f"matrix is not in the algebra (residual {mem:.3e})", mem)
    thr = _threshold(spec, x)
    u = np.zeros_like(x)
    mod = np.zeros_like(x)
    ranks = []
    for s in spec.slices:
        blk = x[s, s]
        W, sig, Vh = np.linalg.svd(blk)
        r = int(np.sum(sig > thr)) if sig.size and sig[0] > 0 else 0
        ranks.append(r)
        if mutate:
            u[s, s] = W @ Vh
        else:
            u[s, s] = W[:, :r] @ Vh[:r]
        mod[s, s] = Vh[:r].conj().T @ np.diag(sig[:r]) @ Vh[:r]
    p = u.conj().T @ u
    q = u @ u.conj().T
    return OperatorElement(spec, x, u, mod, p, q, tuple(ranks), thr)


def op_source(e):
    return e.p


def op_target(e):
    return e.q


def _as_element(spec, e, mutate=False):
    return e if isinstance(e, OperatorElement) else polar_decompose(spec, e, mutate=mutate)


def composability(x, y):
    return la.max_abs(op_source(x) - op_target(y))


def op_multiply(x, y, tol=None, mutate=False):
    tol = default_tol() if tol is None else tol
    r = composability(x, y)
    if r > tol:
        raise NotComposableError(f"elements are not composable (mismatch {r:.3e})", r)
    return polar_decompose(x.spec, x.x @ y.x, mutate=mutate)


def _pinv_modulus(e):
    M = np.zeros_like(e.modulus)
    for s in e.spec.slices:
        blk = e.modulus[s, s]
        w, V = np.linalg.eigh(blk)
        keep = w > e.threshold
        M[s, s] = V[:, keep] @ np.diag(1.0 / w[keep]) @ V[:, keep].conj().T
    return M


def op_invert(e, mutate=False):
    """i(x) = |x|^+ u^*; the zero element inverts to itself."""
    inv = _pinv_modulus(e) @ e.u.conj().T
    return polar_decompose(e.spec, inv, mutate=mutate)


# -- projections and Murray-von Neumann equivalence ----------------------------------------


@dataclass(frozen=True)
class ProjectionElement:
    p: np.ndarray
    adjustment: float = 0.0

    @classmethod
    def from_matrix(cls, p, tol=None, snap=False):
        """Validate a projection; with ``snap`` re-project (Hermitian part + eigenvalue rounding)."""
        tol = default_tol() if tol is None else tol
        p = np.asarray(p, dtype=complex)
        if snap:
            h = (p + p.conj().T) / 2.0
            w, V = np.linalg.eigh(h)
            keep = w > 0.5
            proj = V[:, keep] @ V[:, keep].conj().T
            return cls(proj, la.max_abs(proj - p))
        r = max(la.max_abs(p @ p - p), la.max_abs(p - p.conj().T))
        if r > tol:
            raise PGLError(f"matrix is not a projection (residual {r:.3e})", r)
        return cls(p, 0.0)


def _proj(p):
    return p.p if isinstance(p, ProjectionElement) else np.asarray(p, dtype=complex)


def rank_vector(spec, p):
    p = _proj(p)
    thr = _threshold(spec, p) if la.max_abs(p) else 0.0
    out = []
    for s in spec.slices:
        sig = np.linalg.svd(p[s, s], compute_uv=False)
        out.append(int(np.sum(sig > max(thr, 0.0))) if sig.size and sig[0] > 0 else 0)
    return tuple(out)


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    witness: np.ndarray
    residual: float


def mvn_equivalent(spec, p, q, total_rank_only=False):
    """p ~ q iff the per-block ranks match; the witness u has uu* = p, u*u = q.

    ``total_rank_only`` compares only the total rank (a corrupted variant).
    """
    P, Q = _proj(p), _proj(q)
    rp, rq = rank_vector(spec, P), rank_vector(spec, Q)
    same = sum(rp) == sum(rq) if total_rank_only else rp == rq
    if not same:
        return Equivalence(False, np.zeros_like(P), float("nan"))
    u = np.zeros_like(P)
    if rp == rq:
        for s, r in zip(spec.slices, rp):
            if r:
                bp = la.orth(P[s, s])[:, :r]
                bq = la.orth(Q[s, s])[:, :r]
                u[s, s] = bp @ bq.conj().T
    res = max(la.max_abs(u @ u.conj().T - P), la.max_abs(u.conj().T @ u - Q))
    return Equivalence(True, u, res)


@dataclass
class PartitionReport:
    classes: dict
    within_residual: float
    cross_violations: int

    @property
    def sizes(self):
        return sorted(len(v) for v in self.classes.values())


def orbit_partition(spec, sample, total_rank_only=False):
    """Group elements by the Murray-von Neumann class of s(x) and audit the classes."""
    elems = [_as_element(spec, e) for e in sample]
    classes = {}
    for i, e in enumerate(elems):
        rv = rank_vector(spec, e.p)
        key = (sum(rv),) if total_rank_only else rv
        classes.setdefault(key, []).append(i)
    within = 0.0
    for idx in classes.values():
        projs = [elems[i].p for i in idx] + [elems[i].q for i in idx]
        for a, b in combinations(range(len(projs)), 2):
            eq = mvn_equivalent(spec, projs[a], projs[b], total_rank_only=total_rank_only)
            within = max(within, eq.residual if eq.equivalent else 1.0)
    cross = 0
    keys = list(classes)
    for ka, kb in combinations(keys, 2):
        a, b = elems[classes[ka][0]], elems[classes[kb][0]]
        if mvn_equivalent(spec, a.p, b.p, total_rank_only=total_rank_only).equivalent:
            cross += 1
    return PartitionReport(classes, within, cross)


# -- Schatten norms ---------------------------------------------------------------------------


def _spectrum(x, mutate=False):
    x = np.asarray(x, dtype=complex)
    if mutate:
        return np.sort(np.abs(np.linalg.eigvals(x)))[::-1]
    return np.linalg.svd(x, compute_uv=False)


def schatten_norm(x, p, mutate=False):
    """(sum sigma_i^p)^(1/p) from singular values; p = inf gives sigma_max.

    ``mutate`` uses eigenvalue moduli instead of singular values (a corrupted variant).
    """
    if p != np.inf and p < 1:
        raise ValueError("Schatten norms need p >= 1")
    s = _spectrum(x, mutate)
    if p == np.inf:
        return float(s.max()) if s.size else 0.0
    return float(np.sum(s**p) ** (1.0 / p))


def norm_chain_report(x, ps=(1.5,), qs=(3.0,), mutate=False):
    """Violations of ||x||_inf <= ||x||_q <= ||x||_2 <= ||x||_p <= ||x||_1 and |Tr x| <= ||x||_1,
    and the mismatch between ||x||_2 and (Tr x x^*)^(1/2); all relative, zero when satisfied."""
    x = np.asarray(x, dtype=complex)
    n = lambda p: schatten_norm(x, p, mutate=mutate)  # noqa: E731
    scale = 1.0 + n(1)
    out = {}
    chain = [n(np.inf)] + [n(q) for q in sorted(qs, reverse=True)] + [n(2)] + [n(p) for p in sorted(ps, reverse=True)] + [n(1)]
    out["chain"] = max(max(a - b, 0.0) for a, b in zip(chain, chain[1:])) / scale
    out["trace-bound"] = max(abs(np.trace(x)) - n(1), 0.0) / scale
    out["hilbert-schmidt"] = abs(n(2) - np.sqrt(np.real(np.trace(x @ x.conj().T)))) / scale
    return out


# -- sub-Poisson pair groupoid ------------------------------------------------------------


def _subalgebra_dims(spec, p0):
    """Real dimension of the right ideal M p0 (a real vector space)."""
    P = _proj(p0)
    dim = 0
    for s in spec.slices:
        b = s.stop - s.start
        r = int(round(np.real(np.trace(P[s, s]))))
        dim += 2 * b * r
    return dim


def _sample_P0(spec, p0, rng):
    """Generic x = a p0 with s(x) = p0."""
    P = _proj(p0)
    a = spec.random_element(rng)
    x = a @ P
    e = polar_decompose(spec, x)
    return x, la.max_abs(e.p - P)


def pair_groupoid_subpoisson_check(spec, p0, trials, seed, mutate=False, tol=None):
    """Pointwise coisotropy of the pair-groupoid multiplication graph on T*(M p0).

    ``mutate`` symmetrizes the canonical anchor (a corrupted variant).
    """
    from .rng import stream

    tol = default_tol() if tol is None else tol
    P = ProjectionElement.from_matrix(_proj(p0), tol=tol).p
    N = _subalgebra_dims(spec, P)
    out = {"base-membership": 0.0, "graph-coisotropic": 0.0, "target-poisson": 0.0,
           "source-anti-poisson": 0.0, "anchor-skew": 0.0}
    if N == 0:
        return out
    Z, I = np.zeros((N, N)), np.eye(N)
    anchor = np.block([[Z, I], [-I, Z]])
    if mutate:
        anchor = np.block([[Z, I], [I, Z]])
    skew = la.max_abs(anchor + anchor.T)
    if skew > 0:
        out["anchor-skew"] = skew
        return out
    M = symplectic_space(anchor, tol=tol)
    G = product_space(M, M, -1)
    GGG = product_space(product_space(G, G, 1), G, -1)
    d = 2 * N
    E = np.eye(d)
    Zd = np.zeros((d, d))
    # (u, v, v, w, u, w) parametrised by (u, v, w)
    graph = np.block(
        [[E, Zd, Zd], [Zd, E, Zd], [Zd, E, Zd], [Zd, Zd, E], [E, Zd, Zd], [Zd, Zd, E]]
    )
    t_map = np.hstack([E, Zd])
    s_map = np.hstack([Zd, E])
    for trial in range(trials):
        rng = stream(seed, trial)
        _, mres = _sample_P0(spec, P, rng)
        out["base-membership"] = max(out["base-membership"], mres)
        c = classify_subspace(GGG, Subspace(graph, tol=tol))
        out["graph-coisotropic"] = max(out["graph-coisotropic"], c.coisotropic_residual)
        out["target-poisson"] = max(out["target-poisson"], is_poisson_morphism(G, M, t_map).residual)
        out["source-anti-poisson"] = max(
            out["source-anti-poisson"], is_poisson_morphism(G, M, s_map, anti=True).residual
        )
    return out
