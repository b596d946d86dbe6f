"""Pointwise Poisson calculus on R^d through second-order jets.

A bivector field is given as the skew matrix ``pi(x)``; the bracket of two
functions is ``{f, g} = df . pi . dg``.  Written with the anchor
``P alpha = pi^T alpha`` this is ``{f, g} = <dg, P df>`` and
``Lambda(alpha, beta) = <beta, P alpha> = alpha . pi . beta``, so the
Hamiltonian field of ``f`` is ``X_f = P df``.

Fields are plain callables acting on a list of :class:`~pgl.jet.Jet2`
coordinates: scalar fields return one jet, vector fields and one-forms a
sequence of ``d`` jets.  Every derived quantity is itself a jet whose value
and gradient are exact; orders that were never computed are NaN, so a
result that needed them comes back NaN instead of silently wrong.
"""

import numpy as np

from . import _linalg as la
from .config import default_tol
from .errors import DimensionMismatch, NotFlatError, PGLError, StructureConstantError
from .jet import Jet2, constant, variables

__all__ = [
    "BivectorField",
    "bracket",
    "bracket_differential",
    "hamiltonian_field",
    "hamiltonian_residual",
    "koszul_bracket",
    "schouten_residual",
    "schouten_matrix",
    "jacobiator",
    "dP_vector_field",
    "lie_derivative_bivector",
    "bialgebroid_residual",
    "lie_poisson_bivector",
    "check_structure_constants",
    "structure_constants_to_json",
    "structure_constants_from_json",
    "polynomial",
    "polynomial_from_json",
    "polynomial_bivector",
    "coordinate",
    "exact",
    "coordinate_form",
    "constant_form",
    "linear_vector_field",
]


class BivectorField:
    """Skew bivector ``pi`` on R^d with flat covector rows (identity by default).

    Either ``func(xs) -> d x d`` entries over jet coordinates (any smooth
    expression; derivatives to second order are exact), or ``eval_fn(x) ->
    (pi, dpi)`` with ``dpi[i, j, l] = d pi_ij / dx_l`` (second derivatives
    are then unknown and anything needing them evaluates to NaN).
    """

    def __init__(self, dim, func=None, eval_fn=None, flat_rows=None, tol=None, name=None):
        if (func is None) == (eval_fn is None):
            raise ValueError("give exactly one of func / eval_fn")
        self.dim = int(dim)
        self.func = func
        self.eval_fn = eval_fn
        self.flat_rows = np.eye(self.dim) if flat_rows is None else np.atleast_2d(np.asarray(flat_rows, dtype=float))
        if self.flat_rows.shape[1] != self.dim:
            raise DimensionMismatch("flat rows must have d columns")
        self.tol = default_tol() if tol is None else float(tol)
        self.name = name

    def jets(self, x):
        """Coordinate jets and the d x d object array of pi entries as jets."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"point must have {self.dim} coordinates")
        xs = variables(x)
        d = self.dim
        pi = np.empty((d, d), dtype=object)
        if self.func is not None:
            raw = self.func(xs)
            for i in range(d):
                for j in range(d):
                    v = raw[i][j]
                    pi[i, j] = v if isinstance(v, Jet2) else constant(float(v), d)
        else:
            val, der = self.eval_fn(x)
            nan = np.full((d, d), np.nan)
            for i in range(d):
                for j in range(d):
                    pi[i, j] = Jet2(float(val[i, j]), np.array(der[i, j], dtype=float), nan)
        skew = max(abs(pi[i, j].value + pi[j, i].value) for i in range(d) for j in range(d)) if d else 0.0
        scale = max((abs(pi[i, j].value) for i in range(d) for j in range(d)), default=0.0)
        if skew / (1.0 + scale) > self.tol:
            raise PGLError(f"bivector is not skew at x (residual {skew:.3e})", skew)
        return xs, pi

    def eval(self, x):
        """(pi(x), dpi(x)) in ambient coordinates."""
        _, pi = self.jets(x)
        d = self.dim
        val = np.array([[pi[i, j].value for j in range(d)] for i in range(d)], dtype=float)
        der = np.array([[pi[i, j].grad for j in range(d)] for i in range(d)], dtype=float)
        return val, der

    def eval_flat(self, x):
        """Bivector restricted to flat coordinates: ``B pi B^T`` and its derivative."""
        val, der = self.eval(x)
        B = self.flat_rows
        return B @ val @ B.T, np.einsum("ai,ijl,bj->abl", B, der, B)

    def audit_derivatives(self, x, h=1e-5):
        """Max discrepancy between dpi and central finite differences of pi."""
        x = np.asarray(x, dtype=float)
        _, der = self.eval(x)
        worst = 0.0
        for l in range(self.dim):
            e = np.zeros(self.dim)
            e[l] = h
            fd = (self.eval(x + e)[0] - self.eval(x - e)[0]) / (2 * h)
            worst = max(worst, la.max_abs(fd - der[:, :, l]))
        return worst

    def __add__(self, other):
        if self.func is None or other.func is None or self.dim != other.dim:
            raise PGLError("only jet-defined fields of equal dimension can be added")
        f, g = self.func, other.func
        d = self.dim

        def func(xs):
            a, b = f(xs), g(xs)
            return [[a[i][j] + b[i][j] for j in range(d)] for i in range(d)]

        return BivectorField(d, func=func, flat_rows=self.flat_rows, tol=self.tol)


# -- jet-level building blocks ---------------------------------------------


def _lift(v, d):
    return v if isinstance(v, Jet2) else constant(v, d)


def _scalar(f, xs):
    return _lift(f(xs), len(xs))


def _vector(F, xs):
    d = len(xs)
    out = list(F(xs))
    if len(out) != d:
        raise DimensionMismatch(f"field returned {len(out)} components, expected {d}")
    return [_lift(v, d) for v in out]


def _anchor(pi, a):
    d = len(a)
    return [sum((a[i] * pi[i, j] for i in range(d)), _lift(0.0, a[0].dim)) for j in range(d)]


def _pair(a, v):
    return sum((a[i] * v[i] for i in range(1, len(a))), a[0] * v[0])


def _apply_vector(V, h):
    return sum((V[i] * h.d(i) for i in range(1, len(V))), V[0] * h.d(0))


def _vector_bracket(X, Y):
    d = len(X)
    return [
        sum((X[j] * Y[i].d(j) - Y[j] * X[i].d(j) for j in range(1, d)), X[0] * Y[i].d(0) - Y[0] * X[i].d(0))
        for i in range(d)
    ]


def _lie_form(V, b):
    d = len(V)
    return [
        sum((V[j] * b[i].d(j) + b[j] * V[j].d(i) for j in range(1, d)), V[0] * b[i].d(0) + b[0] * V[0].d(i))
        for i in range(d)
    ]


def _lam(pi, a, b):
    d = len(a)
    return sum((a[i] * pi[i, j] * b[j] for i in range(d) for j in range(d)), _lift(0.0, a[0].dim))


def _koszul(pi, a, b, drop_exact=False):
    Pa, Pb = _anchor(pi, a), _anchor(pi, b)
    la_ = _lie_form(Pa, b)
    lb_ = _lie_form(Pb, a)
    if drop_exact:
        return [la_[i] - lb_[i] for i in range(len(a))]
    lam = _lam(pi, a, b)
    return [la_[i] - lb_[i] - lam.d(i) for i in range(len(a))]


def _pp(pi, s1, s2, drop_exact=False):
    k = _anchor(pi, _koszul(pi, s1, s2, drop_exact))
    br = _vector_bracket(_anchor(pi, s1), _anchor(pi, s2))
    return [k[i] - br[i] for i in range(len(s1))]


def _dP(pi, X, a, b):
    Pa, Pb = _anchor(pi, a), _anchor(pi, b)
    return _apply_vector(Pa, _pair(b, X)) - _apply_vector(Pb, _pair(a, X)) - _pair(_koszul(pi, a, b), X)


def _lie_bivector(X, omega, a, b):
    return _apply_vector(X, omega(a, b)) - omega(_lie_form(X, a), b) - omega(a, _lie_form(X, b))


def _values(v):
    return np.array([c.value for c in v], dtype=float)


def _check_flat(W, covector, what):
    B = W.flat_rows
    if B.shape[0] == W.dim:
        return
    c, *_ = np.linalg.lstsq(B.T, covector, rcond=None)
    r = la.relative(np.linalg.norm(B.T @ c - covector), covector)
    if r > W.tol:
        raise NotFlatError(f"{what} is not an admissible covector (residual {r:.3e})", r)


def _forms(W, xs, forms):
    out = []
    for k, a in enumerate(forms):
        v = _vector(a, xs)
        _check_flat(W, _values(v), f"one-form #{k + 1}")
        out.append(v)
    return out


def _scalars(W, xs, fs):
    out = []
    for k, f in enumerate(fs):
        v = _scalar(f, xs)
        _check_flat(W, v.grad, f"differential of function #{k + 1}")
        out.append(v)
    return out


def _bracket_jet(pi, F, G):
    d = F.dim
    return sum((F.d(i) * pi[i, j] * G.d(j) for i in range(d) for j in range(d)), _lift(0.0, d))


# -- public operations -----------------------------------------------------


def bracket(W, f, g, x):
    """{f, g}(x) = <dg, P df> = df . pi . dg."""
    xs, pi = W.jets(x)
    F, G = _scalars(W, xs, (f, g))
    val = np.array([[p.value for p in row] for row in pi], dtype=float)
    return float(F.grad @ val @ G.grad)


def bracket_differential(W, f, g, x):
    """d{f, g}(x), differentiating the bracket expression itself."""
    xs, pi = W.jets(x)
    F, G = _scalars(W, xs, (f, g))
    return np.asarray(_bracket_jet(pi, F, G).grad, dtype=float)


def hamiltonian_field(W, f, x):
    """X_f(x) = P df = pi^T df."""
    xs, pi = W.jets(x)
    (F,) = _scalars(W, xs, (f,))
    val = np.array([[p.value for p in row] for row in pi], dtype=float)
    return val.T @ F.grad


def hamiltonian_residual(W, f, g, x):
    """Max-norm of [X_f, X_g] - X_{f,g} at x."""
    xs, pi = W.jets(x)
    F, G = _scalars(W, xs, (f, g))
    Xf = _anchor(pi, [F.d(i) for i in range(len(xs))])
    Xg = _anchor(pi, [G.d(i) for i in range(len(xs))])
    lhs = _values(_vector_bracket(Xf, Xg))
    fg = _bracket_jet(pi, F, G)
    val = np.array([[p.value for p in row] for row in pi], dtype=float)
    rhs = val.T @ fg.grad
    return la.max_abs(lhs - rhs)


def koszul_bracket(W, alpha, beta, x):
    """[alpha, beta]_P = L_{P alpha} beta - L_{P beta} alpha - d Lambda(alpha, beta)."""
    xs, pi = W.jets(x)
    a, b = _forms(W, xs, (alpha, beta))
    return _values(_koszul(pi, a, b))


def schouten_matrix(W, s1, s2, x):
    """[P, P](s1, s2) = P[s1, s2]_P - [P s1, P s2] as a vector at x."""
    xs, pi = W.jets(x)
    a, b = _forms(W, xs, (s1, s2))
    return _values(_pp(pi, a, b))


def schouten_residual(W, sigmas, x, mutate=False):
    """[Lambda, Lambda](s1, s2, s3)(x) = <s3, [P, P](s2, s1)>.

    ``mutate`` drops the exact term of the Koszul bracket (a corrupted variant).
    """
    s1, s2, s3 = sigmas
    xs, pi = W.jets(x)
    a, b, c = _forms(W, xs, (s1, s2, s3))
    return float(_values(c) @ _values(_pp(pi, b, a, mutate)))


def jacobiator(W, f, g, h, x):
    """{f, {g, h}} + {g, {h, f}} + {h, {f, g}} at x."""
    xs, pi = W.jets(x)
    F, G, H = _scalars(W, xs, (f, g, h))
    val = np.array([[p.value for p in row] for row in pi], dtype=float)
    total = 0.0
    for A, Bj, C in ((F, G, H), (G, H, F), (H, F, G)):
        inner = _bracket_jet(pi, Bj, C)
        total += A.grad @ val @ inner.grad
    return float(total)


def dP_vector_field(W, X, alpha, beta, x):
    """d_P X(alpha, beta) = P alpha <beta, X> - P beta <alpha, X> - <[alpha, beta]_P, X>."""
    xs, pi = W.jets(x)
    a, b = _forms(W, xs, (alpha, beta))
    V = _vector(X, xs)
    return float(_dP(pi, V, a, b).value)


def lie_derivative_bivector(W, X, alpha, beta, x):
    """(L_X Lambda)(alpha, beta), evaluated independently of d_P."""
    xs, pi = W.jets(x)
    a, b = _forms(W, xs, (alpha, beta))
    V = _vector(X, xs)
    return float(_lie_bivector(V, lambda p, q: _lam(pi, p, q), a, b).value)


def bialgebroid_residual(W, X, Y, alpha, beta, x):
    """d_P[X, Y] - (L_X d_P Y - L_Y d_P X), evaluated on (alpha, beta).

    Needs second derivatives of pi, X, Y and the forms, so W must be
    jet-defined.
    """
    xs, pi = W.jets(x)
    a, b = _forms(W, xs, (alpha, beta))
    V, U = _vector(X, xs), _vector(Y, xs)
    lhs = _dP(pi, _vector_bracket(V, U), a, b)
    dPY = lambda p, q: _dP(pi, U, p, q)  # noqa: E731
    dPX = lambda p, q: _dP(pi, V, p, q)  # noqa: E731
    rhs = _lie_bivector(V, dPY, a, b) - _lie_bivector(U, dPX, a, b)
    r = float(lhs.value - rhs.value)
    if np.isnan(r):
        raise PGLError("bialgebroid residual needs second derivatives of the bivector")
    return r


# -- Lie-Poisson structures --------------------------------------------------


def check_structure_constants(c, tol=None):
    """Antisymmetry and Jacobi residuals of c[i, j, k] with [e_i, e_j] = c_ijk e_k."""
    c = np.asarray(c, dtype=float)
    tol = default_tol() if tol is None else tol
    if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
        raise StructureConstantError("structure constants must be an n x n x n tensor")
    anti = la.max_abs(c + c.transpose(1, 0, 2))
    jac = np.einsum("ijm,mkl->ijkl", c, c)
    jac = jac + jac.transpose(1, 2, 0, 3) + jac.transpose(2, 0, 1, 3)
    scale = la.max_abs(c)
    return anti / (1.0 + scale), la.max_abs(jac) / (1.0 + scale**2)


def lie_poisson_bivector(c, tol=None):
    """Linear bivector Lambda_ij(xi) = sum_k c_ijk xi_k on the dual of the algebra."""
    c = np.asarray(c, dtype=float)
    tol = default_tol() if tol is None else tol
    anti, jac = check_structure_constants(c, tol)
    if anti > tol:
        raise StructureConstantError(f"structure constants are not antisymmetric ({anti:.3e})", anti)
    if jac > tol:
        raise StructureConstantError(f"structure constants violate Jacobi ({jac:.3e})", jac)
    n = c.shape[0]

    def func(xs):
        return [
            [sum((xs[k] * c[i, j, k] for k in range(n) if c[i, j, k] != 0.0), 0.0) for j in range(n)]
            for i in range(n)
        ]

    W = BivectorField(n, func=func, tol=tol, name="lie-poisson")
    W.structure_constants = c
    return W


def structure_constants_to_json(c):
    c = np.asarray(c, dtype=float)
    n = c.shape[0]
    entries = [
        [i, j, k, float(c[i, j, k])]
        for i in range(n)
        for j in range(n)
        for k in range(n)
        if c[i, j, k] != 0.0
    ]
    return {"dim": n, "entries": entries}


def structure_constants_from_json(obj):
    n = int(obj["dim"])
    c = np.zeros((n, n, n))
    for i, j, k, v in obj["entries"]:
        c[int(i), int(j), int(k)] = float(v)
    return c


# -- field constructors ------------------------------------------------------


def polynomial(monomials):
    """Scalar polynomial from [(exponent vector, coeff), ...]."""
    terms = [(tuple(int(e) for e in exps), float(coef)) for exps, coef in monomials]

    def f(xs):
        total = 0.0
        for exps, coef in terms:
            term = coef
            for xi, e in zip(xs, exps):
                if e:
                    term = term * xi**e
            total = total + term
        return total

    return f


def polynomial_from_json(obj):
    return polynomial(obj["monomials"])


def polynomial_bivector(dim, components, tol=None):
    """Bivector with pi_ij given by polynomial monomial lists for i < j."""
    polys = {(int(i), int(j)): polynomial(m) for (i, j), m in components.items()}

    def func(xs):
        out = [[0.0] * dim for _ in range(dim)]
        for (i, j), p in polys.items():
            v = p(xs)
            out[i][j] = v
            out[j][i] = -v
        return out

    return BivectorField(dim, func=func, tol=tol, name="polynomial")


def coordinate(i):
    return lambda xs: xs[i]


def exact(f):
    """The one-form df."""

    def form(xs):
        F = _scalar(f, xs)
        return [F.d(i) for i in range(len(xs))]

    return form


def coordinate_form(i):
    def form(xs):
        return [1.0 if j == i else 0.0 for j in range(len(xs))]

    return form


def constant_form(a):
    a = [float(v) for v in a]
    return lambda xs: list(a)


def linear_vector_field(A, b=None):
    A = np.asarray(A, dtype=float)
    b = np.zeros(A.shape[0]) if b is None else np.asarray(b, dtype=float)

    def field(xs):
        d = len(xs)
        return [sum((xs[j] * A[i, j] for j in range(d)), float(b[i])) for i in range(d)]

    return field
