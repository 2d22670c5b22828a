"""Laurent polynomials in the Hecke parameter q with exact coefficients."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Mapping, Union

Number = Union[int, Fraction]


class LaurentPoly:
    """Finitely supported map exponent -> coefficient; zero coefficients dropped.

    >>> q = LaurentPoly.q()
    >>> (q - 1) * (q + 1)
    q^2 - 1
    >>> (q ** -1 * q) == 1
    True
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, Number] | None = None):
        self._c = {e: c for e, c in (coeffs or {}).items() if c != 0}
        self._hash = None

    @classmethod
    def q(cls) -> "LaurentPoly":
        return cls({1: 1})

    @classmethod
    def const(cls, c: Number) -> "LaurentPoly":
        return cls({0: c})

    @staticmethod
    def coerce(x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, (int, Rational)):
            return LaurentPoly({0: x})
        raise TypeError(f"cannot use {type(x).__name__} as a Laurent scalar")

    @property
    def coeffs(self) -> dict[int, Number]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __add__(self, other):
        if not isinstance(other, (LaurentPoly, int, Rational)):
            return NotImplemented
        other = self.coerce(other)
        out = dict(self._c)
        for e, c in other._c.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, (LaurentPoly, int, Rational)):
            return NotImplemented
        return self + (-self.coerce(other))

    def __rsub__(self, other):
        return self.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return LaurentPoly({e: c * other for e, c in self._c.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict[int, Number] = {}
        for e1, c1 in self._c.items():
            for e2, c2 in other._c.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if len(self._c) == 1:
            (e, c), = self._c.items()
            c = Fraction(c) ** k
            return LaurentPoly({e * k: int(c) if c.denominator == 1 else c})
        if k < 0:
            raise ValueError("only monomials can be inverted")
        out = LaurentPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def evaluate(self, q: Number) -> Fraction:
        q = Fraction(q)
        if q == 0 and any(e < 0 for e in self._c):
            raise ZeroDivisionError("negative power of q at q = 0")
        return sum((Fraction(c) * q ** e for e, c in self._c.items()), Fraction(0))

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c, reverse=True):
            c = self._c[e]
            mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            if mono and c == 1:
                s = mono
            elif mono and c == -1:
                s = "-" + mono
            else:
                s = f"{c}{'*' + mono if mono else ''}"
            parts.append(s)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def to_json(self) -> list:
        return [[e, [Fraction(c).numerator, Fraction(c).denominator]] for e, c in sorted(self._c.items())]
