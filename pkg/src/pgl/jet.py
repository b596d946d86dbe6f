"""Second-order forward-mode jets.

A :class:`Jet2` carries the value, gradient and Hessian of a scalar with
respect to ``d`` independent variables.  Arithmetic propagates all three
exactly (Leibniz and chain rules), so brackets built from jets carry no
truncation error.

``Jet2.d(i)`` differentiates a jet along variable ``i``.  The result has a
valid value and gradient, but its Hessian is unknown and is stored as NaN;
NaN then propagates through any further arithmetic, which makes "used a
derivative order that was never computed" visible rather than silently
wrong.
"""

import numbers

import numpy as np

__all__ = ["Jet2", "variables", "constant", "value_of", "grad_of", "hess_of"]


class Jet2:
    __slots__ = ("value", "grad", "hess")

    def __init__(self, value, grad, hess):
        self.value = value
        self.grad = grad
        self.hess = hess

    @property
    def dim(self):
        return self.grad.shape[0]

    def __repr__(self):
        return f"Jet2(value={self.value!r}, grad={self.grad!r})"

    # -- construction helpers -------------------------------------------
    def _lift(self, other):
        if isinstance(other, Jet2):
            return other
        d = self.dim
        return Jet2(other, np.zeros(d), np.zeros((d, d)))

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)
        if isinstance(other, numbers.Number):
            return Jet2(self.value + other, self.grad, self.hess)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, (Jet2, numbers.Number)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, numbers.Number):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Jet2):
            a, b = self, other
            hess = (
                a.hess * b.value
                + b.hess * a.value
                + np.outer(a.grad, b.grad)
                + np.outer(b.grad, a.grad)
            )
            return Jet2(a.value * b.value, a.grad * b.value + b.grad * a.value, hess)
        if isinstance(other, numbers.Number):
            return Jet2(self.value * other, self.grad * other, self.hess * other)
        return NotImplemented

    __rmul__ = __mul__

    def _apply(self, f0, f1, f2):
        # chain rule for a scalar function with derivatives f1, f2 at value
        g = self.grad
        return Jet2(f0, f1 * g, f1 * self.hess + f2 * np.outer(g, g))

    def reciprocal(self):
        v = self.value
        return self._apply(1.0 / v, -1.0 / v**2, 2.0 / v**3)

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return self * other.reciprocal()
        if isinstance(other, numbers.Number):
            return self * (1.0 / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, numbers.Number):
            return self.reciprocal() * other
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, numbers.Number):
            return NotImplemented
        if isinstance(k, numbers.Integral) and k >= 0:
            if k == 0:
                return self._lift(1.0) * 1.0
            v = self.value
            f1 = k * v ** (k - 1)
            f2 = k * (k - 1) * v ** (k - 2) if k >= 2 else 0.0
            return self._apply(v**k, f1, f2)
        v = self.value
        return self._apply(v**k, k * v ** (k - 1), k * (k - 1) * v ** (k - 2))

    # -- complex support -------------------------------------------------
    @property
    def real(self):
        return Jet2(np.real(self.value), np.real(self.grad), np.real(self.hess))

    @property
    def imag(self):
        return Jet2(np.imag(self.value), np.imag(self.grad), np.imag(self.hess))

    def conjugate(self):
        return Jet2(np.conj(self.value), np.conj(self.grad), np.conj(self.hess))

    # -- elementary functions -------------------------------------------
    def exp(self):
        e = np.exp(self.value)
        return self._apply(e, e, e)

    def log(self):
        v = self.value
        return self._apply(np.log(v), 1.0 / v, -1.0 / v**2)

    def sin(self):
        v = self.value
        return self._apply(np.sin(v), np.cos(v), -np.sin(v))

    def cos(self):
        v = self.value
        return self._apply(np.cos(v), -np.sin(v), -np.cos(v))

    def sqrt(self):
        s = np.sqrt(self.value)
        return self._apply(s, 0.5 / s, -0.25 / s**3)

    # -- differentiation -------------------------------------------------
    def d(self, i):
        """Derivative along variable ``i``; the Hessian of the result is unknown (NaN)."""
        d = self.dim
        return Jet2(self.grad[i], self.hess[i].copy(), np.full((d, d), np.nan))


def variables(x):
    """Independent jet variables seeded at the point ``x``."""
    x = np.asarray(x, dtype=float)
    d = x.shape[0]
    eye = np.eye(d)
    zero = np.zeros((d, d))
    return [Jet2(float(x[i]), eye[i].copy(), zero.copy()) for i in range(d)]


def constant(c, d):
    return Jet2(c, np.zeros(d), np.zeros((d, d)))


def value_of(v):
    return v.value if isinstance(v, Jet2) else v


def grad_of(v, d):
    return v.grad if isinstance(v, Jet2) else np.zeros(d)


def hess_of(v, d):
    return v.hess if isinstance(v, Jet2) else np.zeros((d, d))
