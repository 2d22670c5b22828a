"""
Permutations of ``range(m)`` in one-line notation.

``compose(u, v)`` is u after v.  The simple transposition ``s(m, k)`` swaps
k and k+1 (0-based); acting on exponent vectors it swaps coordinates k, k+1.

>>> all_perms(3)[:3]
[(0, 1, 2), (0, 2, 1), (1, 0, 2)]
>>> length((2, 1, 0))
3
>>> reduced_word((2, 0, 1))
(1, 0)
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

Perm = tuple[int, ...]


def identity(m: int) -> Perm:
    return tuple(range(m))


def s(m: int, k: int) -> Perm:
    p = list(range(m))
    p[k], p[k + 1] = p[k + 1], p[k]
    return tuple(p)


def compose(u: Perm, v: Perm) -> Perm:
    return tuple(u[v[j]] for j in range(len(v)))


def inverse(u: Perm) -> Perm:
    out = [0] * len(u)
    for j, x in enumerate(u):
        out[x] = j
    return tuple(out)


@lru_cache(maxsize=None)
def length(u: Perm) -> int:
    """Number of inversions."""
    n = len(u)
    return sum(1 for i in range(n) for j in range(i + 1, n) if u[i] > u[j])


@lru_cache(maxsize=None)
def all_perms(m: int) -> list[Perm]:
    """S_m sorted by length, then lexicographically."""
    return sorted(permutations(range(m)), key=lambda p: (length(p), p))


@lru_cache(maxsize=None)
def reduced_word(u: Perm) -> tuple[int, ...]:
    """Indices k with u = s_{k1} s_{k2} ... s_{kl}, l = length(u)."""
    m = len(u)
    for k in range(m - 1):
        sk = s(m, k)
        v = compose(sk, u)
        if length(v) < length(u):
            return (k,) + reduced_word(v)
    return ()


def swap(lam: tuple[int, ...], k: int) -> tuple[int, ...]:
    """s_k acting on an exponent vector."""
    out = list(lam)
    out[k], out[k + 1] = out[k + 1], out[k]
    return tuple(out)
