"""Seeded random streams and samplers.

Every stream is numpy's Philox counter-based generator keyed by
``SeedSequence([seed, *path])``; a trial ``i`` of a suite uses the path
``(i,)`` so trials are independent of each other and of the trial count.
"""

import numpy as np
from scipy.linalg import expm


def stream(seed, *path):
    key = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [int(p) for p in path]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_unitary(rng, n):
    """Haar unitary: QR of a complex Gaussian, phases fixed so diag(R) > 0."""
    z = complex_gaussian(rng, (n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_special_unitary(rng, n):
    u = random_unitary(rng, n)
    det = np.linalg.det(u)
    return u / det ** (1.0 / n)


def random_orthogonal(rng, n):
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * np.sign(np.diag(r))


def random_skew_hermitian(rng, n):
    z = complex_gaussian(rng, (n, n))
    return (z - z.conj().T) / 2.0


def random_well_conditioned(rng, n, cond=10.0):
    """Real matrix with singular values spread over [1, cond]."""
    u = random_orthogonal(rng, n)
    v = random_orthogonal(rng, n)
    s = np.geomspace(1.0, cond, n)
    return u @ np.diag(s) @ v.T


def random_symmetric(rng, n):
    h = rng.standard_normal((n, n))
    return (h + h.T) / 2.0


def standard_J(m):
    """Standard 2m x 2m skew form pairing e_i with e_{m+i}."""
    z = np.zeros((m, m))
    eye = np.eye(m)
    return np.block([[z, eye], [-eye, z]])


def random_symplectic_matrix(rng, m, scale=0.5):
    j = standard_J(m)
    h = random_symmetric(rng, 2 * m) * scale
    return expm(j @ h)
