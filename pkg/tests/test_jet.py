import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pgl.jet import Jet2, constant, grad_of, hess_of, value_of, variables
from pgl.rng import stream

D = 3
H = 1e-5


def _u(name):
    def f(v):
        return getattr(v, name)() if isinstance(v, Jet2) else getattr(np, name)(v)

    return f


UNARY = [_u("sin"), _u("cos"), _u("exp"), lambda v: v * v, lambda v: (v * v + 1.0).sqrt() if isinstance(v, Jet2) else np.sqrt(v * v + 1.0)]


def random_program(rng):
    """A random composition of polynomials and elementary functions of D variables."""
    ops = []
    for _ in range(int(rng.integers(2, 6))):
        kind = int(rng.integers(0, 4))
        a, b = (int(i) for i in rng.integers(0, D + len(ops), size=2))
        c = float(rng.uniform(-1, 1))
        ops.append((kind, a, b, c, int(rng.integers(len(UNARY))), int(rng.integers(1, 4))))

    def f(xs):
        vals = list(xs)
        for kind, a, b, c, u, k in ops:
            if kind == 0:
                vals.append(vals[a] * vals[b] + c)
            elif kind == 1:
                vals.append(c * vals[a] - vals[b])
            elif kind == 2:
                vals.append(UNARY[u](vals[a] * 0.5))
            else:
                vals.append((vals[a] * 0.5) ** k)
        return vals[-1]

    return f


def fd_derivatives(f, x):
    g = np.zeros(D)
    Hm = np.zeros((D, D))
    for i in range(D):
        e = np.zeros(D)
        e[i] = H
        g[i] = (f(list(x + e)) - f(list(x - e))) / (2 * H)
        # Hessian rows by central differences of the exact gradient
        gp = f(variables(x + e)).grad
        gm = f(variables(x - e)).grad
        Hm[i] = (gp - gm) / (2 * H)
    return g, Hm


def test_random_compositions_match_finite_differences():
    worst = 0.0
    for t in range(100):
        rng = stream(5, t)
        f = random_program(rng)
        x = rng.uniform(-1, 1, D)
        J = f(variables(x))
        if not isinstance(J, Jet2):
            continue
        assert math.isclose(J.value, f(list(x)), rel_tol=1e-12, abs_tol=1e-12)
        g, Hm = fd_derivatives(f, x)
        worst = max(worst, np.max(np.abs(J.grad - g) / (1 + np.abs(g))))
        worst = max(worst, np.max(np.abs(J.hess - Hm) / (1 + np.abs(Hm))))
        assert np.allclose(J.hess, J.hess.T, atol=1e-12)
    assert worst <= 1e-6


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_product_rule(a, b):
    x, y = variables([a, b])
    p = x * y
    assert p.value == a * b
    assert np.allclose(p.grad, [b, a])
    assert np.allclose(p.hess, [[0, 1], [1, 0]])


def test_chain_rule_exp_sin():
    (x,) = variables([0.3])
    v = (x.sin()).exp()
    e = math.exp(math.sin(0.3))
    assert math.isclose(v.grad[0], e * math.cos(0.3))
    assert math.isclose(v.hess[0, 0], e * (math.cos(0.3) ** 2 - math.sin(0.3)))


def test_division_and_reciprocal():
    x, y = variables([2.0, 4.0])
    q = x / y
    assert math.isclose(q.value, 0.5)
    assert np.allclose(q.grad, [0.25, -2.0 / 16])
    assert np.allclose(q.hess, [[0, -1 / 16], [-1 / 16, 2 * 2 / 64]])
    r = 1.0 / x
    assert np.allclose(r.grad, [-0.25, 0.0])


def test_log_and_sqrt():
    (x,) = variables([4.0])
    assert math.isclose(x.log().grad[0], 0.25)
    assert math.isclose(x.sqrt().hess[0, 0], -0.25 / 8)


def test_integer_and_real_powers():
    (x,) = variables([1.5])
    assert math.isclose((x**3).hess[0, 0], 6 * 1.5)
    assert math.isclose((x**0.5).grad[0], 0.5 / math.sqrt(1.5))


def test_complex_jets():
    z = Jet2(1 + 2j, np.array([1.0, 1j]), np.zeros((2, 2), dtype=complex))
    w = z * z.conjugate()
    assert math.isclose(w.real.value, 5.0)
    assert np.allclose(w.real.grad, [2.0, 4.0])
    assert np.allclose(z.imag.grad, [0.0, 1.0])


def test_derivative_marks_unknown_hessian():
    x, y = variables([1.0, 2.0])
    f = x * x * y
    dx = f.d(0)
    assert math.isclose(dx.value, 4.0)
    assert np.allclose(dx.grad, [4.0, 2.0])
    assert np.isnan(dx.hess).all()
    assert np.isnan((dx * dx).hess).all()


def test_helpers_and_numpy_interop():
    x, y = variables([1.0, 2.0])
    assert value_of(3.0) == 3.0 and value_of(x) == 1.0
    assert np.all(grad_of(2.0, 2) == 0) and np.all(hess_of(2.0, 2) == 0)
    c = constant(5.0, 2)
    assert (c + x).value == 6.0
    arr = np.array([x, y], dtype=object)
    s = (np.float64(2.0) * arr).sum()
    assert np.allclose(s.grad, [2.0, 2.0])
    assert np.allclose((np.eye(2) @ arr)[1].grad, [0.0, 1.0])
