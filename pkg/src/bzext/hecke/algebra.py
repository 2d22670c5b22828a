"""
Affine Hecke algebra of GL(m) in the Bernstein presentation.

Elements are kept in the theta-left normal form  sum c * theta^lam T_w  with
Laurent-polynomial coefficients in q.  The only non-obvious rule is moving a
generator past a torus monomial.  With x = theta_k, y = theta_{k+1},
z = y/x and d = lam_k - lam_{k+1}:

    T_k theta^lam = theta^(s_k lam) T_k + (q - 1) * Phi_k(lam)
    Phi_k(lam)    = (theta^lam - theta^(s_k lam)) / (1 - z)

and the quotient is the finite geometric sum theta^lam (1 + z + ... + z^(d-1))
for d > 0, minus theta^lam (z^d + ... + z^(-1)) for d < 0, zero for d = 0.
At lam = e_k this is exactly T_k x - y T_k = (q - 1) x.  The companion rule

    theta^lam T_k = T_k theta^(s_k lam) + (q - 1) * Phi_k(lam)

gives the T-left form used for principal series.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

from ..segments import DomainError
from .laurent import LaurentPoly
from .permutations import Perm, all_perms, compose, identity, length, reduced_word, s, swap

__all__ = [
    "Q", "HeckeElement", "phi", "t_theta", "theta_t", "finite_product",
    "gen_left", "gen_right",
]

Q = LaurentPoly.q()
_QM1 = Q - 1
_ONE = LaurentPoly.const(1)

Exp = tuple[int, ...]


def _add(acc: dict, key, c) -> None:
    v = acc.get(key)
    v = c if v is None else v + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


@lru_cache(maxsize=None)
def phi(lam: Exp, k: int) -> tuple[tuple[Exp, int], ...]:
    """(theta^lam - theta^(s_k lam)) / (1 - theta_{k+1}/theta_k) as (exponent, coeff) pairs."""
    d = lam[k] - lam[k + 1]

    def z_pow(j: int) -> Exp:
        out = list(lam)
        out[k] -= j
        out[k + 1] += j
        return tuple(out)

    if d > 0:
        return tuple((z_pow(j), 1) for j in range(d))
    if d < 0:
        return tuple((z_pow(j), -1) for j in range(d, 0))
    return ()


@lru_cache(maxsize=None)
def gen_left(k: int, u: Perm) -> tuple[tuple[Perm, LaurentPoly], ...]:
    """T_{s_k} T_u in the T basis."""
    su = compose(s(len(u), k), u)
    if length(su) > length(u):
        return ((su, _ONE),)
    return ((u, _QM1), (su, Q))


@lru_cache(maxsize=None)
def gen_right(u: Perm, k: int) -> tuple[tuple[Perm, LaurentPoly], ...]:
    """T_u T_{s_k} in the T basis."""
    us = compose(u, s(len(u), k))
    if length(us) > length(u):
        return ((us, _ONE),)
    return ((u, _QM1), (us, Q))


@lru_cache(maxsize=None)
def finite_product(u: Perm, v: Perm) -> tuple[tuple[Perm, LaurentPoly], ...]:
    """T_u T_v in the finite Hecke algebra."""
    acc: dict[Perm, LaurentPoly] = {v: _ONE}
    for k in reversed(reduced_word(u)):
        nxt: dict = {}
        for x, c in acc.items():
            for y, d in gen_left(k, x):
                _add(nxt, y, c * d)
        acc = nxt
    return tuple(sorted(acc.items()))


@lru_cache(maxsize=None)
def t_theta(w: Perm, mu: Exp) -> tuple[tuple[tuple[Exp, Perm], LaurentPoly], ...]:
    """T_w theta^mu in theta-left form: pairs ((nu, u), coeff)."""
    word = reduced_word(w)
    if not word:
        return (((mu, w), _ONE),)
    k = word[0]
    rest = compose(s(len(w), k), w)
    acc: dict = {}
    for (nu, u), c in t_theta(rest, mu):
        for v, d in gen_left(k, u):
            _add(acc, (swap(nu, k), v), c * d)
        cq = c * _QM1
        for rho, e in phi(nu, k):
            _add(acc, (rho, u), cq * e)
    return tuple(acc.items())


@lru_cache(maxsize=None)
def theta_t(lam: Exp, w: Perm) -> tuple[tuple[tuple[Perm, Exp], LaurentPoly], ...]:
    """theta^lam T_w in T-left form: pairs ((u, nu), coeff)."""
    word = reduced_word(w)
    if not word:
        return (((w, lam), _ONE),)
    k = word[-1]
    rest = compose(w, s(len(w), k))
    acc: dict = {}
    for (u, nu), c in theta_t(lam, rest):
        for v, d in gen_right(u, k):
            _add(acc, (v, swap(nu, k)), c * d)
        cq = c * _QM1
        for rho, e in phi(nu, k):
            _add(acc, (u, rho), cq * e)
    return tuple(acc.items())


class HeckeElement:
    """sum of c * theta^lam T_w over (lam, w), c a LaurentPoly in q."""

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms: Mapping[tuple[Exp, Perm], LaurentPoly] | None = None):
        self.m = m
        self.terms = {}
        for (lam, w), c in (terms or {}).items():
            lam, w = tuple(lam), tuple(w)
            if len(lam) != m or len(w) != m:
                raise DomainError(f"term ({lam}, {w}) does not have rank {m}")
            c = LaurentPoly.coerce(c)
            if c:
                self.terms[(lam, w)] = c

    # constructors

    @classmethod
    def one(cls, m: int) -> "HeckeElement":
        return cls(m, {((0,) * m, identity(m)): _ONE})

    @classmethod
    def theta(cls, m: int, lam: Iterable[int]) -> "HeckeElement":
        return cls(m, {(tuple(lam), identity(m)): _ONE})

    @classmethod
    def theta_i(cls, m: int, i: int, power: int = 1) -> "HeckeElement":
        lam = [0] * m
        lam[i] = power
        return cls.theta(m, lam)

    @classmethod
    def T(cls, w: Perm) -> "HeckeElement":
        w = tuple(w)
        return cls(len(w), {((0,) * len(w), w): _ONE})

    @classmethod
    def Ts(cls, m: int, k: int) -> "HeckeElement":
        return cls.T(s(m, k))

    @classmethod
    def monomial(cls, lam: Exp, w: Perm, c=1) -> "HeckeElement":
        return cls(len(w), {(tuple(lam), tuple(w)): c})

    @classmethod
    def scalar(cls, m: int, c) -> "HeckeElement":
        return cls(m, {((0,) * m, identity(m)): c})

    # arithmetic

    def _check(self, other: "HeckeElement"):
        if self.m != other.m:
            raise DomainError(f"rank mismatch: {self.m} vs {other.m}")

    def __add__(self, other):
        if not isinstance(other, HeckeElement):
            other = HeckeElement.scalar(self.m, other)
        self._check(other)
        acc = dict(self.terms)
        for key, c in other.terms.items():
            _add(acc, key, c)
        return HeckeElement(self.m, acc)

    __radd__ = __add__

    def __neg__(self):
        return HeckeElement(self.m, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, HeckeElement):
            c = LaurentPoly.coerce(other)
            return HeckeElement(self.m, {k: v * c for k, v in self.terms.items()})
        self._check(other)
        acc: dict = {}
        for (lam, w), c in self.terms.items():
            for (mu, v), d in other.terms.items():
                cd = c * d
                for (nu, u), e in t_theta(w, mu):
                    shifted = tuple(a + b for a, b in zip(lam, nu))
                    ce = cd * e
                    for x, f in finite_product(u, v):
                        _add(acc, (shifted, x), ce * f)
        return HeckeElement(self.m, acc)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        out = HeckeElement.one(self.m)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = HeckeElement.scalar(self.m, other)
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.m == other.m and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (lam, w), c in sorted(self.terms.items()):
            th = "" if not any(lam) else f"theta^{lam}"
            t = "" if length(w) == 0 else f"T{w}"
            mono = "*".join(x for x in (th, t) if x) or "1"
            parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    def basis_support(self) -> list[tuple[Exp, Perm]]:
        return sorted(self.terms)


def random_monomial(rng, m: int, spread: int = 2) -> HeckeElement:
    lam = tuple(rng.randint(-spread, spread) for _ in range(m))
    w = rng.choice(all_perms(m))
    return HeckeElement.monomial(lam, w)
