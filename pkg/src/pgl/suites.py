"""Seeded verification suites and the report they produce.

Every suite is a function ``suite(ctx) -> list[Check]``.  A check carries
its own tolerance: the run tolerance scaled by the check's pinned factor
(``factor / 1e-9``), so ``--tol`` tightens or loosens every check together
while checks with a stricter contract (polar reconstruction at 1e-12, say)
stay proportionally stricter.  Count checks (disagreements, misclassified
samples) use factor 0: any nonzero count fails.
"""

import math
import time
import zlib
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.linalg import expm

from . import _linalg as la
from . import algebras
from . import cotangent_groupoid as cg
from . import linear_poisson as lp
from . import operator_groupoid as og
from . import poisson_jet as pj
from . import poisson_lie as pl
from . import sampling
from .config import default_tol
from .errors import NotComposableError, PGLError
from .rng import complex_gaussian, random_unitary, random_well_conditioned, stream

SCHEMA = 1
RANK_RULE = "max(m,n) * sigma_max * 1e-12"


@dataclass
class SuiteConfig:
    suite: str
    trials: int = 10
    seed: int = 0
    dims: list = field(default_factory=list)
    tol: float = None
    report_path: str = None
    format: str = "json"
    instance: dict = None
    mutate: bool = False

    def __post_init__(self):
        if self.tol is None:
            self.tol = default_tol()
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.dims = [int(d) for d in (self.dims or [])]


@dataclass
class Check:
    name: str
    residual: float
    tol: float

    @property
    def passed(self):
        return bool(np.isfinite(self.residual)) and self.residual <= self.tol


class Context:
    def __init__(self, cfg, suite):
        self.cfg = cfg
        self.suite = suite
        self.key = zlib.crc32(suite.encode())
        self.checks = {}

    @property
    def trials(self):
        return self.cfg.trials

    @property
    def mutate(self):
        return self.cfg.mutate

    def rng(self, *path):
        key = [zlib.crc32(p.encode()) if isinstance(p, str) else int(p) for p in path]
        return stream(self.cfg.seed, self.key, *key)

    def dims(self, default):
        return list(self.cfg.dims) if self.cfg.dims else list(default)

    def tol(self, pinned=1e-9):
        return self.cfg.tol * pinned / 1e-9

    def record(self, name, residual, pinned=1e-9):
        """Keep the worst residual seen for ``name``."""
        residual = float(residual)
        old = self.checks.get(name)
        if old is None:
            self.checks[name] = Check(name, residual, self.tol(pinned))
        elif not np.isfinite(residual) or residual > old.residual:
            old.residual = residual

    def count(self, name, n):
        self.record(name, self.checks[name].residual + n if name in self.checks else n, 0.0)

    def result(self):
        return list(self.checks.values())


# -- linear Poisson spaces -------------------------------------------------------------------


def _linear_perp(ctx):
    inst = ctx.cfg.instance
    fixed = None
    if inst is not None and inst.get("kind") == "poisson-space":
        fixed = lp.LinearPoissonSpace.from_json(inst)
        if not fixed.symplectic:
            raise PGLError("linear-perp needs a symplectic space instance")
    dims = ctx.dims([2, 4, 6, 8])
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        if fixed is None:
            m = max(1, dims[t % len(dims)] // 2)
            S = sampling.random_symplectic_space(rng, m, random_flat=bool(t % 2)).space
        else:
            S = fixed
        n = S.dim_E
        F = sampling.random_subspace(rng, n, int(rng.integers(0, n + 1)))
        if ctx.mutate:
            # annihilator taken in ambient coordinates, ignoring the flat basis
            once = S.subspace(S.P @ lp.annihilator(F).basis)
            twice = S.subspace(S.P @ lp.annihilator(once).basis)
        else:
            twice = lp.perp_P(S, lp.perp_P(S, F))
        ctx.record("perp-involution", 1.0 if twice.dim != F.dim else F.distance(twice))
        # perp reverses inclusions
        G = S.subspace(np.hstack([F.basis, rng.standard_normal((n, 1))]))
        pf, pg = lp.perp_P(S, F), lp.perp_P(S, G)
        ctx.record("perp-reverses-inclusion", la.max_abs(pg.basis - pf.projector() @ pg.basis) if pg.dim else 0.0)
        # Lagrangians are their own perp
        L = sampling.random_lagrangian(rng, S)
        ctx.record("lagrangian-self-perp", lp.classify_subspace(S, L).lagrangian_residual)
    # partial spaces: ker P lies inside every orth_flat
    for t in range(ctx.trials):
        rng = ctx.rng("partial", t)
        n = max(2, dims[t % len(dims)])
        S = sampling.random_poisson_space(rng, n, k=n, rank=2 * ((n - 1) // 2))
        kerP = la.null_space(S.P, ncols=S.k)
        A = S.flat_subspace(rng.standard_normal((S.k, int(rng.integers(0, S.k + 1)))))
        O = lp.orth_flat(S, A)
        ctx.record("kernel-in-orth-flat", la.max_abs(kerP - O.projector() @ kerP) if kerP.size else 0.0)
    return ctx.result()


def _bad_morphism_residual(S1, S2, phi):
    # pullback by the transpose of the flat basis instead of solving B2 phi = M B1
    M = S2.B @ phi @ S1.B.T
    pushed = phi @ S1.P @ M.T
    scale = max(la.max_abs(S2.P), la.max_abs(phi) * la.max_abs(S1.P) * la.max_abs(M))
    return la.max_abs(S2.P - pushed) / (1.0 + scale)


def _linear_morphism(ctx):
    dims = ctx.dims([3, 4, 5])
    disagree = miss = 0
    worst_good = 0.0
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        n1 = dims[t % len(dims)]
        n2 = int(rng.integers(2, n1 + 2))
        k1 = n1 - (t % 2)
        for expect, maker in ((True, sampling.pushforward_pair), (False, sampling.non_morphism_pair)):
            S1, S2, phi = maker(rng, n1, n2, k1=k1)
            if ctx.mutate:
                r = _bad_morphism_residual(S1, S2, phi)
            else:
                r = lp.is_poisson_morphism(S1, S2, phi).residual
            by_map = r <= S1.tol
            by_graph = lp.classify_subspace(lp.product_space(S1, S2, -1), lp.graph_of(phi).graph).coisotropic
            disagree += by_map != by_graph
            miss += (by_map != expect) + (by_graph != expect)
            if expect:
                worst_good = max(worst_good, r)
    ctx.count("path-disagreements", disagree)
    ctx.count("misclassified", miss)
    ctx.record("morphism-residual", worst_good)
    return ctx.result()


def _linear_relations(ctx):
    dims = ctx.dims([2, 4, 6])
    sign = 1 if ctx.mutate else -1
    failed = 0
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        S1, S2, S3 = (
            sampling.random_symplectic_space(rng, max(1, dims[int(rng.integers(len(dims)))] // 2)).space
            for _ in range(3)
        )
        R = sampling.random_poisson_relation(rng, S1, S2)
        Q = sampling.random_poisson_relation(rng, S2, S3)
        comp = lp.relation_compose(R, Q)
        c = lp.classify_subspace(lp.product_space(S1, S3, sign), comp.graph)
        failed += not c.coisotropic
        ctx.record("composite-coisotropic", c.coisotropic_residual)
        # a symplectic map carries Lagrangians to Lagrangians
        a = sampling.random_symplectic_space(rng, S1.dim_E // 2)
        b = sampling.random_symplectic_space(rng, S1.dim_E // 2)
        phi = sampling.random_symplectic_map(rng, a, b)
        L = sampling.random_lagrangian(rng, a.space)
        image = lp.relation_apply(a.space, b.space, lp.graph_of(phi), L)
        ctx.record("image-lagrangian", lp.classify_subspace(b.space, image).lagrangian_residual)
    ctx.count("non-poisson-composites", failed)
    return ctx.result()


# -- bivector fields -----------------------------------------------------------------------


def _random_quadratic(rng, d):
    comps = {}
    for i in range(d):
        for j in range(i + 1, d):
            monos = []
            for a in range(d):
                for b in range(a, d):
                    e = [0] * d
                    e[a] += 1
                    e[b] += 1
                    monos.append((e, float(rng.standard_normal())))
            comps[(i, j)] = monos
    return comps


def _random_poly(rng, d, deg=2):
    monos = []
    for e in product(range(deg + 1), repeat=d):
        if sum(e) <= deg:
            monos.append((list(e), float(rng.standard_normal())))
    return pj.polynomial(monos)


def _field_instance(ctx, t, rng):
    names = list(algebras.CATALOGUE)
    inst = ctx.cfg.instance
    if inst is not None and inst.get("kind") == "structure-constants":
        c = pj.structure_constants_from_json(inst)
    else:
        c0 = algebras.CATALOGUE[names[(t // 2) % len(names)]]()
        c = algebras.change_basis(c0, algebras.random_basis_change(rng, c0.shape[0]))
    W = pj.lie_poisson_bivector(c)
    poisson = t % 2 == 0
    if not poisson:
        d = c.shape[0]
        W = W + pj.polynomial_bivector(d, _random_quadratic(rng, d))
    return W, poisson


def _schouten_jacobi(ctx):
    disagree = weak = 0
    tolJ = ctx.tol()
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        W, poisson = _field_instance(ctx, t, rng)
        d = W.dim
        jac = sch = 0.0
        pts = [rng.standard_normal(d) for _ in range(3)]
        for x in pts:
            for i, j, k in ((i, j, k) for i in range(d) for j in range(i + 1, d) for k in range(j + 1, d)):
                cs = [pj.coordinate(i), pj.coordinate(j), pj.coordinate(k)]
                jac = max(jac, abs(pj.jacobiator(W, *cs, x)))
                fs = [pj.coordinate_form(i), pj.coordinate_form(j), pj.coordinate_form(k)]
                sch = max(sch, abs(pj.schouten_residual(W, fs, x, mutate=ctx.mutate)))
        disagree += (jac <= tolJ) != (sch <= tolJ)
        if poisson:
            ctx.record("poisson-jacobiator", jac)
            ctx.record("poisson-schouten", sch)
            x = pts[0]
            f, g = _random_poly(rng, d), _random_poly(rng, d)
            kz = pj.koszul_bracket(W, pj.exact(f), pj.exact(g), x)
            ctx.record("koszul-exact", la.relative(la.max_abs(kz - pj.bracket_differential(W, f, g, x)), kz))
            ctx.record("hamiltonian-homomorphism", pj.hamiltonian_residual(W, f, g, x))
            X = pj.linear_vector_field(rng.standard_normal((d, d)))
            Y = pj.linear_vector_field(rng.standard_normal((d, d)))
            al, be = pj.constant_form(rng.standard_normal(d)), pj.constant_form(rng.standard_normal(d))
            ctx.record("bialgebroid", abs(pj.bialgebroid_residual(W, X, Y, al, be, x)), 1e-8)
            dP = pj.dP_vector_field(W, X, al, be, x)
            LX = pj.lie_derivative_bivector(W, X, al, be, x)
            ctx.record("dP-is-minus-lie-derivative", la.relative(abs(dP + LX), dP))
        else:
            weak += min(jac, sch) < 1e-3
    ctx.count("verdict-disagreements", disagree)
    ctx.count("non-poisson-below-1e-3", weak)
    return ctx.result()


# -- U(n) ------------------------------------------------------------------------------------


def _unitary_multiplicative(ctx):
    dims = ctx.dims([3])
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        n = dims[t % len(dims)]
        g, h = random_unitary(rng, n), random_unitary(rng, n)
        a1, a2 = pl.random_b(rng, n), pl.random_b(rng, n)
        ctx.record("multiplicativity", pl.multiplicativity_residual(g, h, a1, a2, mutate=ctx.mutate))
        ctx.record("skewness", la.relative(abs(pl.lambda_R(g, a1, a2) + pl.lambda_R(g, a2, a1)), a1, a2))
        ctx.record("identity-vanishes", abs(pl.lambda_R(np.eye(n), a1, a2)), 0.0)
    return ctx.result()


def _unitary_cocycle(ctx):
    dims = ctx.dims([2])
    for n in dims:
        ub, bb = pl.u_basis(n), pl.b_basis(n)
        worst = 0.0
        for x, y in product(ub, ub):
            for a1, a2 in product(bb, bb):
                worst = max(worst, pl.cocycle_algebra_residual(x, y, a1, a2))
        ctx.record("algebra-cocycle", worst, 1e-8)
        ctx.record("derived-jacobi", pl.derived_jacobi_residual(n), 1e-7)
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        n = dims[t % len(dims)]
        x = pl.random_u(rng, n)
        a1, a2 = pl.random_b(rng, n), pl.random_b(rng, n)
        h = 1e-5
        fd = (pl.lambda_R(expm(h * x), a1, a2) - pl.lambda_R(expm(-h * x), a1, a2)) / (2 * h)
        ctx.record("tangent-vs-difference-quotient", la.relative(abs(fd - pl.tangent_lambda(x, a1, a2)), x, a1, a2), 1e-7)
        g0 = random_unitary(rng, 2)
        ctx.record("chart-jacobi", pl.chart_jacobi_residual(g0, mutate=ctx.mutate), 1e-7)
    return ctx.result()


def _tower_family(rng, level_dependent=False):
    a = rng.standard_normal((2, 2))
    b = rng.standard_normal((2, 2))
    c = rng.standard_normal(2)

    def fam(level, G):
        v = 0.0
        for p in range(2):
            for q in range(2):
                v = v + a[p, q] * G[p][q].real + b[p, q] * G[p][q].imag
        v = v + c[0] * (G[0][0] * G[1][1]).real + c[1] * (G[0][1] * G[1][0].conjugate()).imag
        if level_dependent:
            v = v + level * G[0][0].real
        return v

    return fam


def _tower_stability(ctx):
    missed = 0
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        elem = pl.TowerElement(2, random_unitary(rng, 2))
        f, h = _tower_family(rng), _tower_family(rng)
        spread, vals = pl.tower_level_residual(f, h, elem, extra=2, mutate=ctx.mutate)
        ctx.record("level-invariance", spread, 1e-10)
        ctx.record("antisymmetry", abs(vals[0] + pl.tower_bracket(h, f, elem, 2, mutate=ctx.mutate)), 1e-10)
        try:
            pl.tower_bracket(_tower_family(rng, level_dependent=True), h, elem, 3)
            missed += 1
        except PGLError:
            pass
    ctx.count("incompatible-family-accepted", missed)
    return ctx.result()


# -- cotangent groupoid --------------------------------------------------------------------


def _groups(ctx, default):
    inst = ctx.cfg.instance
    if inst is not None and inst.get("kind") == "group-spec":
        return [cg.MatrixLieGroupSpec.from_json(inst)]
    return [cg.builtin_group(name) for name in default]


def _cotangent_axioms(ctx):
    for spec in _groups(ctx, ["su2", "u2"]):
        for t in range(ctx.trials):
            rng = ctx.rng(spec.name, t)
            for k, v in cg.axiom_residuals(spec, rng, mutate=ctx.mutate).items():
                ctx.record(f"{spec.name}/{k}", v)
    return ctx.result()


def _cotangent_symplectic(ctx):
    for spec in _groups(ctx, ["su2", "u2"]):
        for t in range(ctx.trials):
            rng = ctx.rng(spec.name, t)
            for k, v in cg.symplectic_residuals(spec, rng, mutate=ctx.mutate).items():
                ctx.record(f"{spec.name}/{k}", v, 1e-8)
    return ctx.result()


def _kks(ctx):
    pinned = {"schouten": 1e-9, "kks-agreement": 1e-9, "stabilizer-closure": 1e-8, "rank-nullity": 0.0}
    for spec in _groups(ctx, ["so3", "u2", "su2", "gl2r"]):
        for t in range(ctx.trials):
            rng = ctx.rng(spec.name, t)
            for k, v in cg.kks_residuals(spec, rng, mutate=ctx.mutate, points=1).items():
                ctx.record(f"{spec.name}/{k}", v, pinned[k])
    return ctx.result()


def _jordan(n, which):
    blocks = {
        2: [np.diag([1.0, 2.0]), np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[1 + 1j, 1.0], [0.0, 1 + 1j]])],
        3: [
            np.diag([1.0, -1.0, 2.0]),
            np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
            np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]),
        ],
    }
    opts = blocks[n]
    return np.asarray(opts[which % len(opts)], dtype=complex)


def _gl_orbits(ctx):
    dims = ctx.dims([2, 3])
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        n = dims[t % len(dims)]
        J = _jordan(n, t // len(dims))
        g = np.eye(n) + 0.3 * complex_gaussian(rng, (n, n))
        pt = cg.OrbitPoint(J, g)
        t1 = pt.tangent(complex_gaussian(rng, (n, n)))
        t2 = pt.tangent(complex_gaussian(rng, (n, n)))
        val, agree = cg.gl_orbit_form(pt, t1, t2, mutate=ctx.mutate)
        ctx.record("two-expression-agreement", agree)
        gi = np.linalg.inv(g)
        V1, V2 = t1[0] @ gi, t2[0] @ gi
        A = pt.A
        oracle = np.trace(A @ (V1 @ V2 - V2 @ V1))
        ctx.record("commutator-trace-oracle", la.relative(abs(val - oracle), A, V1, V2))
        back, _ = cg.gl_orbit_form(pt, t2, t1, mutate=ctx.mutate)
        ctx.record("antisymmetry", la.relative(abs(val + back), A, V1, V2))
    return ctx.result()


# -- operator groupoid ---------------------------------------------------------------------


def _algebra(ctx, t, default):
    inst = ctx.cfg.instance
    if inst is not None and inst.get("kind") == "algebra-spec":
        return og.StarAlgebraSpec.from_json(inst)
    return default[t % len(default)]


def _polar(ctx):
    dims = ctx.dims([2, 3, 4, 5])
    defaults = [og.StarAlgebraSpec.full(n) for n in dims] + [og.StarAlgebraSpec(4, (2, 2))]
    inst = ctx.cfg.instance
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        if inst is not None and inst.get("kind") == "operator-sample":
            x = la.from_json_matrix(inst["matrix"])
            spec = og.StarAlgebraSpec.from_json(inst["algebra"]) if "algebra" in inst else og.StarAlgebraSpec.full(x.shape[0])
        else:
            spec = _algebra(ctx, t, defaults)
            deficient = t % 2 == 1
            ranks = [int(rng.integers(0, b)) if deficient else b for b in spec.blocks]
            cond = 10.0 ** rng.uniform(0, 4 if deficient else 8)
            x = spec.random_element(rng, ranks=ranks, cond=cond)
        e = og.polar_decompose(spec, x, mutate=ctx.mutate)
        nx = np.linalg.norm(x, 2)
        ctx.record("reconstruction", np.linalg.norm(e.u @ e.modulus - x, 2) / nx if nx else 0.0, 1e-12)
        ctx.record("partial-isometry", la.max_abs(e.u @ e.u.conj().T @ e.u - e.u), 1e-10)
        # independent projection onto the initial space from one SVD of the whole matrix
        _, s, Vh = np.linalg.svd(x)
        r = int(np.sum(s > x.shape[0] * (s[0] if s.size else 0.0) * la.RANK_EPS)) if s.size and s[0] > 0 else 0
        p_ref = Vh[:r].conj().T @ Vh[:r]
        ctx.record("source-projection-oracle", la.max_abs(e.p - p_ref))
        ctx.record("initial-space", la.max_abs(e.u @ (np.eye(spec.n) - p_ref)))
        w = np.linalg.eigvalsh(e.modulus) if spec.n else np.zeros(0)
        ctx.record("modulus-positive", max(0.0, -w.min()) / (1.0 + nx) if w.size else 0.0)
        ctx.record("block-membership", spec.membership_residual(e.u))
    return ctx.result()


def _chain_matrix(spec, rng, ranks):
    es = [spec.random_projection(rng, ranks) for _ in range(4)]
    mats = [es[i] @ spec.random_element(rng) @ es[i + 1] for i in range(3)]
    return es, mats


def _mat_residual(a, b, *scales):
    return la.relative(la.max_abs(np.asarray(a) - np.asarray(b)), *scales)


def _vn_axioms(ctx):
    defaults = [og.StarAlgebraSpec.full(3), og.StarAlgebraSpec.full(4), og.StarAlgebraSpec(4, (2, 2))]
    mut = ctx.mutate

    def mul(a, b):
        return og.op_multiply(a, b, mutate=mut)

    for t in range(ctx.trials):
        rng = ctx.rng(t)
        spec = _algebra(ctx, t, defaults)
        ranks = [int(rng.integers(1, b)) if b > 1 else 1 for b in spec.blocks]
        _, (xa, ya, za) = _chain_matrix(spec, rng, ranks)
        x, y, z = (og.polar_decompose(spec, m, mutate=mut) for m in (xa, ya, za))
        try:
            lhs, rhs = mul(mul(x, y), z), mul(x, mul(y, z))
            ctx.record("associativity", _mat_residual(lhs.x, rhs.x, xa, ya, za))
            xy = mul(x, y)
            ctx.record("source-coherence", la.max_abs(xy.p - y.p))
            ctx.record("target-coherence", la.max_abs(xy.q - x.q))
        except NotComposableError as exc:
            ctx.record("associativity", exc.residual)
        try:
            sx = og.polar_decompose(spec, x.p, mutate=mut)
            tx = og.polar_decompose(spec, x.q, mutate=mut)
            ctx.record("right-unit", _mat_residual(mul(x, sx).x, xa, xa))
            ctx.record("left-unit", _mat_residual(mul(tx, x).x, xa, xa))
        except NotComposableError as exc:
            ctx.record("right-unit", exc.residual)
        inv = og.op_invert(x, mutate=mut)
        try:
            ctx.record("right-inverse", la.max_abs(mul(x, inv).x - x.q))
            ctx.record("left-inverse", la.max_abs(mul(inv, x).x - x.p))
        except NotComposableError as exc:
            ctx.record("right-inverse", exc.residual)
        ctx.record("double-inverse", _mat_residual(og.op_invert(inv, mutate=mut).x, xa, xa))
        # partial isometries form a wide subgroupoid
        U, V = og.polar_decompose(spec, x.u, mutate=mut), og.polar_decompose(spec, y.u, mutate=mut)
        try:
            w = mul(U, V).x
            ctx.record("partial-isometries-closed", la.max_abs(w @ w.conj().T @ w - w), 1e-10)
        except NotComposableError as exc:
            ctx.record("partial-isometries-closed", exc.residual, 1e-10)
        ctx.record("partial-isometry-inverse", la.max_abs(og.op_invert(U, mutate=mut).x - x.u.conj().T), 1e-10)
    return ctx.result()


def _rank_vectors(spec):
    return list(product(*[range(b + 1) for b in spec.blocks]))


def _mvn_orbits(ctx):
    specs = [og.StarAlgebraSpec.full(n) for n in range(1, 5)] + [og.StarAlgebraSpec(4, (2, 2))]
    inst = ctx.cfg.instance
    if inst is not None and inst.get("kind") == "algebra-spec":
        specs = [og.StarAlgebraSpec.from_json(inst)]
    mismatch = cross = 0
    for t in range(ctx.trials):
        for si, spec in enumerate(specs):
            rng = ctx.rng(si, t)
            sample, expect = [], {}
            for rv in _rank_vectors(spec):
                for _ in range(2):
                    expect.setdefault(rv, []).append(len(sample))
                    sample.append(spec.random_element(rng, ranks=rv))
            rep = og.orbit_partition(spec, sample, total_rank_only=ctx.mutate)
            want = sorted(sorted(v) for v in expect.values())
            got = sorted(sorted(v) for v in rep.classes.values())
            mismatch += len([c for c in want if c not in got]) + len([c for c in got if c not in want])
            cross += rep.cross_violations
            ctx.record("within-class", rep.within_residual)
    ctx.count("partition-mismatch", mismatch)
    ctx.count("cross-class-equivalences", cross)
    return ctx.result()


def _schatten(ctx):
    dims = ctx.dims([2, 3, 4, 5])
    ps = (1.25, 1.5)
    qs = (3.0, 4.0)
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        n = dims[t % len(dims)]
        spec = og.StarAlgebraSpec.full(n)
        ranks = [int(rng.integers(1, n + 1))]
        x = spec.random_element(rng, ranks=ranks) * 10.0 ** rng.uniform(-2, 2)
        rep = og.norm_chain_report(x, ps=ps, qs=qs, mutate=ctx.mutate)
        for k, v in rep.items():
            ctx.record(k, v)
        U, V = random_unitary(rng, n), random_unitary(rng, n)
        base = og.schatten_norm(x, 1.5, mutate=ctx.mutate)
        moved = og.schatten_norm(U @ x @ V, 1.5, mutate=ctx.mutate)
        ctx.record("unitary-invariance", abs(base - moved) / (1.0 + base))
        ident = max(abs(og.schatten_norm(np.eye(n), p, mutate=ctx.mutate) - n ** (1.0 / p)) for p in (1, 1.5, 2, 3))
        ctx.record("identity-norms", ident / n)
    return ctx.result()


def _pair_subpoisson(ctx):
    rng = ctx.rng("p0")
    m2 = og.StarAlgebraSpec.full(2)
    m22 = og.StarAlgebraSpec(4, (2, 2))
    cases = [
        ("M2/unit", m2, np.eye(2)),
        ("M2/zero", m2, np.zeros((2, 2))),
        ("M2/rank-1", m2, m2.random_projection(rng, [1])),
        ("M2+M2/rank-(1,1)", m22, m22.random_projection(rng, [1, 1])),
    ]
    for label, spec, p0 in cases:
        seed = (ctx.cfg.seed + zlib.crc32(label.encode())) % 2**64
        out = og.pair_groupoid_subpoisson_check(spec, p0, ctx.trials, seed, mutate=ctx.mutate)
        for k, v in out.items():
            ctx.record(f"{label}/{k}", v)
    return ctx.result()


SUITES = {
    "linear-perp": _linear_perp,
    "linear-morphism": _linear_morphism,
    "linear-relations": _linear_relations,
    "schouten-jacobi": _schouten_jacobi,
    "unitary-multiplicative": _unitary_multiplicative,
    "unitary-cocycle": _unitary_cocycle,
    "tower-stability": _tower_stability,
    "cotangent-axioms": _cotangent_axioms,
    "cotangent-symplectic": _cotangent_symplectic,
    "kks": _kks,
    "gl-orbits": _gl_orbits,
    "polar": _polar,
    "vn-groupoid-axioms": _vn_axioms,
    "mvn-orbits": _mvn_orbits,
    "schatten": _schatten,
    "pair-subpoisson": _pair_subpoisson,
}

MUTATIONS = {
    "linear-perp": "annihilator taken in ambient coordinates, ignoring the flat basis",
    "linear-morphism": "flat pullback by the transposed flat basis instead of solving for it",
    "linear-relations": "composite certified with the unsigned product anchor",
    "schouten-jacobi": "exact term dropped from the Koszul bracket",
    "unitary-multiplicative": "re-projection skipped after coadjoint transport",
    "unitary-cocycle": "re-projection skipped in the chart bivector",
    "tower-stability": "level-normalized pairing",
    "cotangent-axioms": "coadjoint transport dropped in multiplication",
    "cotangent-symplectic": "coadjoint transport dropped in multiplication",
    "kks": "symmetrized anchor",
    "gl-orbits": "gdot g used in place of gdot g^-1",
    "polar": "untruncated unitary factor",
    "vn-groupoid-axioms": "untruncated unitary factor",
    "mvn-orbits": "classes compared by total rank only",
    "schatten": "eigenvalue moduli in place of singular values",
    "pair-subpoisson": "symmetrized anchor",
}


def suite_names():
    return list(SUITES) + ["all"]


def _finite(v):
    return float(v) if np.isfinite(v) else None


def run_suite(cfg):
    """Run ``cfg.suite`` and return the report dictionary."""
    if cfg.suite not in SUITES and cfg.suite != "all":
        raise KeyError(f"unknown suite '{cfg.suite}'; known: {', '.join(suite_names())}")
    t0 = time.perf_counter()
    names = list(SUITES) if cfg.suite == "all" else [cfg.suite]
    checks = []
    for name in names:
        ctx = Context(cfg, name)
        for c in SUITES[name](ctx):
            if cfg.suite == "all":
                c = Check(f"{name}/{c.name}", c.residual, c.tol)
            checks.append(c)
    per = [{"name": c.name, "residual": _finite(c.residual), "tol": c.tol, "pass": c.passed} for c in checks]
    finite = [c.residual for c in checks if np.isfinite(c.residual)]
    worst = max(finite) if finite else 0.0
    if any(not np.isfinite(c.residual) for c in checks):
        worst = math.inf
    return {
        "schema": SCHEMA,
        "suite": cfg.suite,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "dims": list(cfg.dims),
        "tol": cfg.tol,
        "rank_threshold": RANK_RULE,
        "mutation": (MUTATIONS.get(cfg.suite, "per-suite corrupted variants") if cfg.mutate else None),
        "failures": sum(not c.passed for c in checks),
        "max_residual": _finite(worst),
        "per_check": per,
        "wall_time_ms": int(round((time.perf_counter() - t0) * 1000)),
    }
