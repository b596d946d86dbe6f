"""Random instances for linear Poisson spaces, relations and morphisms."""

from dataclasses import dataclass

import numpy as np

from . import _linalg as la
from .linear_poisson import (
    LinearPoissonSpace,
    LinearRelation,
    Subspace,
    orth_flat,
    product_space,
)
from .rng import random_symplectic_matrix, random_well_conditioned, standard_J


@dataclass(frozen=True)
class SymplecticSample:
    """A symplectic space with P = M J M^T, B = I; ``frame`` is M."""

    space: LinearPoissonSpace
    frame: np.ndarray

    @property
    def m(self):
        return self.frame.shape[0] // 2


def random_symplectic_space(rng, m, cond=10.0, tol=None, random_flat=False):
    """Symplectic space with B P = M J M^T; B = I unless ``random_flat``."""
    M = random_well_conditioned(rng, 2 * m, cond)
    K = M @ standard_J(m) @ M.T
    K = (K - K.T) / 2.0
    if random_flat:
        B = random_well_conditioned(rng, 2 * m, 4.0)
        return SymplecticSample(LinearPoissonSpace(B, np.linalg.solve(B, K), tol=tol), M)
    return SymplecticSample(LinearPoissonSpace(np.eye(2 * m), K, tol=tol), M)


def random_poisson_space(rng, n, k=None, rank=None, tol=None):
    """Partial Poisson space on R^n with k flat rows and skew form of given rank."""
    k = n if k is None else k
    B = random_well_conditioned(rng, n, 5.0)[:k]
    r = k - (k % 2) if rank is None else rank
    W = rng.standard_normal((k, r))
    K = W @ standard_J(r // 2) @ W.T if r else np.zeros((k, k))
    K = (K - K.T) / 2.0
    # P with B P = K: any solution works; the minimum-norm one is in the row space of B
    P = np.linalg.pinv(B) @ K
    return LinearPoissonSpace(B, P, tol=tol)


def random_subspace(rng, n, r, tol=None):
    return Subspace(rng.standard_normal((n, r)), ambient_dim=n, tol=tol)


def random_lagrangian(rng, S):
    """Lagrangian P(G) for a greedily built maximal isotropic flat subspace G."""
    m = la.numerical_rank(S.K) // 2
    G = np.zeros((S.k, 0))
    for _ in range(m):
        room = orth_flat(S, S.flat_subspace(G)).basis if G.shape[1] else np.eye(S.k)
        a = room @ rng.standard_normal(room.shape[1])
        G = np.hstack([G, a.reshape(-1, 1)])
    return S.subspace(S.P @ G)


def random_coisotropic(rng, S, extra=1):
    """A Lagrangian enlarged by ``extra`` random directions (still coisotropic)."""
    L = random_lagrangian(rng, S)
    add = rng.standard_normal((S.dim_E, extra)) if extra else np.zeros((S.dim_E, 0))
    return S.subspace(np.hstack([L.basis, add]))


def random_symplectic_map(rng, s1, s2):
    """phi = M2 S M1^{-1}, which pushes s1's anchor exactly onto s2's."""
    if s1.m != s2.m:
        raise ValueError("symplectic maps need equal dimensions")
    S = random_symplectic_matrix(rng, s1.m)
    return s2.frame @ S @ np.linalg.inv(s1.frame)


def random_poisson_relation(rng, S1, S2, extra=None):
    """Coisotropic subspace of S1 x S2^- read as a relation."""
    prod = product_space(S1, S2, -1)
    if extra is None:
        extra = int(rng.integers(0, 2))
    F = random_coisotropic(rng, prod, extra)
    return LinearRelation(S1.dim_E, S2.dim_E, F)


def pushforward_pair(rng, n1, n2, k1=None, tol=None):
    """(S1, S2, phi) with S2 the pushforward of S1 along phi; S2 has full flat rows."""
    S1 = random_poisson_space(rng, n1, k=k1, tol=tol)
    C = rng.standard_normal((n2, S1.k))
    phi = C @ S1.B
    P2 = C @ S1.K @ C.T
    P2 = (P2 - P2.T) / 2.0
    S2 = LinearPoissonSpace(np.eye(n2), P2, tol=tol)
    return S1, S2, phi


def non_morphism_pair(rng, n1, n2, k1=None, tol=None):
    """Same shape as :func:`pushforward_pair` but with an unrelated target anchor."""
    S1, S2, phi = pushforward_pair(rng, n1, n2, k1=k1, tol=tol)
    W = rng.standard_normal((n2, n2))
    P2 = S2.P + (W - W.T) / 2.0
    return S1, LinearPoissonSpace(np.eye(n2), P2, tol=tol), phi
