"""Rank-revealing helpers shared by every module.

All rank decisions use one cutoff: a singular value counts when it exceeds
``max(m, n) * sigma_max * RANK_EPS``.
"""

import numpy as np

RANK_EPS = 1e-12


def as_matrix(a, ncols_if_empty=None):
    a = np.asarray(a)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    return a


def rank_cutoff(s, shape):
    if s.size == 0:
        return 0.0
    return max(shape) * s[0] * RANK_EPS


def numerical_rank(a):
    a = np.asarray(a)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rank_cutoff(s, a.shape)))


def orth(a):
    """Orthonormal basis of the column space of ``a`` (columns)."""
    a = np.asarray(a)
    m = a.shape[0]
    if a.size == 0:
        return np.zeros((m, 0), dtype=a.dtype if np.iscomplexobj(a) else float)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s[0] == 0.0:
        return np.zeros((m, 0), dtype=u.dtype)
    r = int(np.sum(s > rank_cutoff(s, a.shape)))
    return u[:, :r]


def null_space(a, ncols=None):
    """Basis of {v : a v = 0} (bilinear, no conjugation of ``v``).

    ``conj(Vh[r:]).T`` satisfies ``a @ v = 0`` for complex ``a`` as well.
    """
    a = np.asarray(a)
    n = a.shape[1] if a.ndim == 2 else ncols
    if a.size == 0 or a.shape[0] == 0:
        return np.eye(n, dtype=complex if np.iscomplexobj(a) else float)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        r = 0
    else:
        r = int(np.sum(s > rank_cutoff(s, a.shape)))
    return vh[r:].conj().T


def projector(basis):
    basis = np.asarray(basis)
    return basis @ basis.conj().T


def span_distance(a, b):
    """2-norm distance between the orthogonal projectors onto two spans."""
    pa = projector(orth(a)) if np.asarray(a).size else 0.0
    pb = projector(orth(b)) if np.asarray(b).size else 0.0
    d = pa - pb
    if np.isscalar(d):
        return 0.0
    return float(np.linalg.norm(d, 2))


def max_abs(a):
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def relative(r, *operands):
    """Scale-free residual ``r / (1 + prod max-norms)``."""
    scale = 1.0
    for op in operands:
        scale *= max_abs(op)
    return float(r) / (1.0 + scale)


def to_json_matrix(a):
    a = np.asarray(a)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if np.iscomplexobj(a):
        return [[[float(z.real), float(z.imag)] for z in row] for row in a]
    return [[float(z) for z in row] for row in a]


def from_json_matrix(rows):
    if len(rows) == 0:
        return np.zeros((0, 0))
    first = rows[0][0] if len(rows[0]) else None
    if isinstance(first, (list, tuple)):
        return np.array([[complex(re, im) for re, im in row] for row in rows])
    return np.array(rows, dtype=float)
