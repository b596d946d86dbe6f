"""Structure constants of small real Lie algebras, with basis changes and sums.

``c[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``.
"""

import numpy as np


def _from_brackets(n, brackets):
    c = np.zeros((n, n, n))
    for (i, j), terms in brackets.items():
        for k, v in terms.items():
            c[i, j, k] = v
            c[j, i, k] = -v
    return c


def so3():
    return _from_brackets(3, {(0, 1): {2: 1.0}, (1, 2): {0: 1.0}, (2, 0): {1: 1.0}})


def sl2():
    # h, e, f
    return _from_brackets(3, {(0, 1): {1: 2.0}, (0, 2): {2: -2.0}, (1, 2): {0: 1.0}})


def heisenberg():
    return _from_brackets(3, {(0, 1): {2: 1.0}})


def aff1_plus_r():
    return _from_brackets(3, {(0, 1): {1: 1.0}})


def solvable_r3(lam=0.5):
    return _from_brackets(3, {(2, 0): {0: 1.0}, (2, 1): {1: lam}})


def gl2():
    # E11, E12, E21, E22
    return _from_brackets(
        4,
        {
            (0, 1): {1: 1.0},
            (0, 2): {2: -1.0},
            (1, 2): {0: 1.0, 3: -1.0},
            (1, 3): {1: 1.0},
            (2, 3): {2: -1.0},
        },
    )


def u2():
    # su(2) with [e_i, e_j] = eps_ijk e_k plus a central element
    return direct_sum(so3(), abelian(1))


def abelian(n):
    return np.zeros((n, n, n))


def direct_sum(*cs):
    n = sum(c.shape[0] for c in cs)
    out = np.zeros((n, n, n))
    o = 0
    for c in cs:
        m = c.shape[0]
        out[o : o + m, o : o + m, o : o + m] = c
        o += m
    return out


def change_basis(c, T):
    """Constants in the basis e'_i = sum_j T_ij e_j."""
    T = np.asarray(T, dtype=float)
    Ti = np.linalg.inv(T)
    return np.einsum("ia,jb,abl,lk->ijk", T, T, c, Ti)


CATALOGUE = {
    "so3": so3,
    "sl2": sl2,
    "heisenberg": heisenberg,
    "aff1+r": aff1_plus_r,
    "r3": solvable_r3,
    "gl2": gl2,
    "u2": u2,
}


def random_basis_change(rng, n, cond=4.0):
    from .rng import random_well_conditioned

    return random_well_conditioned(rng, n, cond)
