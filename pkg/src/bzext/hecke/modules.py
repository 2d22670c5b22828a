"""
Modules over the affine Hecke algebra at small rank.

* ``SignInducedModule``: H (x)_{H_S} sgn, free over the torus part A with
  basis theta^lam (x) 1.  Vectors are dicts lam -> LaurentPoly.
* ``FiniteModule``: a finite-dimensional module at a rational value of q,
  given by exact matrices for T_{s_k} and theta_i.
* ``principal_series``, ``steinberg_module`` and ``central_quotient`` build
  FiniteModules; ``central_quotient`` also analyses the submodule lattice.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import prod

import sympy

from ..segments import DomainError
from .algebra import Q, HeckeElement, phi, random_monomial, theta_t
from .laurent import LaurentPoly
from .permutations import Perm, all_perms, length, reduced_word

__all__ = [
    "SignInducedModule", "FiniteModule", "principal_series", "steinberg_module",
    "sign_isotypic_dim", "central_quotient", "CentralQuotient", "poincare_value",
    "verify_relations", "RelationReport", "generator",
]

Exp = tuple[int, ...]
Vector = dict[Exp, LaurentPoly]


def _sign(w: Perm) -> int:
    return -1 if length(w) % 2 else 1


def _add(acc: dict, key, c) -> None:
    v = acc.get(key)
    v = c if v is None else v + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class SignInducedModule:
    """Sigma = H (x)_{H_S} sgn with A-basis theta^lam (x) 1.

    >>> S = SignInducedModule(2)
    >>> S.act(HeckeElement.Ts(2, 0), S.basis((1, 0)))
    {(0, 1): -1, (1, 0): q - 1}
    """

    def __init__(self, m: int):
        if m < 1:
            raise DomainError("rank must be positive")
        self.m = m

    def basis(self, lam) -> Vector:
        lam = tuple(lam)
        if len(lam) != self.m:
            raise DomainError(f"exponent {lam} does not have rank {self.m}")
        return {lam: LaurentPoly.const(1)}

    def act(self, h: HeckeElement, v: Vector) -> Vector:
        """h . v: multiply into theta-left form, then T_w (x) 1 = (-1)^l(w) (x) 1."""
        if h.m != self.m:
            raise DomainError(f"rank mismatch: {h.m} vs {self.m}")
        out: Vector = {}
        for lam, c in v.items():
            for (mu, w), d in (h * HeckeElement.theta(self.m, lam)).terms.items():
                _add(out, mu, c * d * _sign(w))
        return dict(sorted(out.items()))

    def act_generator(self, gen: str, v: Vector) -> Vector:
        """``gen`` is "T<k>", "theta<i>" or "theta<i>^-1", 1-based."""
        return self.act(generator(self.m, gen), v)


def generator(m: int, name: str) -> HeckeElement:
    """Parse "T1", "theta2", "theta2^-1" (1-based indices)."""
    try:
        if name.startswith("theta"):
            body, _, power = name[5:].partition("^")
            i = int(body)
            p = int(power) if power else 1
            if not 1 <= i <= m:
                raise ValueError
            return HeckeElement.theta_i(m, i - 1, p)
        if name.startswith("T"):
            k = int(name[1:])
            if not 1 <= k < m:
                raise ValueError
            return HeckeElement.Ts(m, k - 1)
    except ValueError:
        pass
    raise DomainError(f"no generator {name!r} at rank {m}")


def _q(q) -> Fraction:
    if isinstance(q, float):
        raise TypeError("q must be exact")
    q = Fraction(q)
    if q == 0:
        raise DomainError("q = 0 is not allowed")
    return q


def _mat(rows) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction)
                          else sympy.Rational(x) for x in row] for row in rows])


@dataclass
class FiniteModule:
    """A module of finite dimension at q specialised to a rational.

    ``T[k]`` is the matrix of T_{s_{k+1}}, ``theta[i]`` the matrix of
    theta_{i+1}; columns are images of basis vectors.
    """

    m: int
    q: Fraction
    labels: list
    T: list[sympy.Matrix]
    theta: list[sympy.Matrix]
    name: str = ""
    _theta_inv: list = field(default_factory=list, repr=False)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def theta_power(self, i: int, p: int) -> sympy.Matrix:
        if p >= 0:
            return self.theta[i] ** p
        if not self._theta_inv:
            self._theta_inv = [t.inv() for t in self.theta]
        return self._theta_inv[i] ** (-p)

    def t_matrix(self, w: Perm) -> sympy.Matrix:
        out = sympy.eye(self.dim)
        for k in reduced_word(w):
            out = out * self.T[k]
        return out

    def act(self, h: HeckeElement) -> sympy.Matrix:
        """Matrix of h: sum of c(q) Theta^lam T_w."""
        if h.m != self.m:
            raise DomainError(f"rank mismatch: {h.m} vs {self.m}")
        out = sympy.zeros(self.dim, self.dim)
        for (lam, w), c in h.terms.items():
            th = sympy.eye(self.dim)
            for i, p in enumerate(lam):
                if p:
                    th = th * self.theta_power(i, p)
            cq = c.evaluate(self.q)
            out += sympy.Rational(cq.numerator, cq.denominator) * th * self.t_matrix(w)
        return out

    def relation_violations(self) -> list[str]:
        """Defining relations checked on the matrices."""
        bad = []
        n, q = self.dim, sympy.Rational(self.q.numerator, self.q.denominator)
        one = sympy.eye(n)
        for i, j in combinations(range(self.m), 2):
            if self.theta[i] * self.theta[j] != self.theta[j] * self.theta[i]:
                bad.append(f"theta{i + 1} theta{j + 1} do not commute")
        for k, t in enumerate(self.T):
            if (t - q * one) * (t + one) != sympy.zeros(n, n):
                bad.append(f"quadratic relation fails for T{k + 1}")
            if t * self.theta[k] - self.theta[k + 1] * t != (q - 1) * self.theta[k]:
                bad.append(f"commutation with theta{k + 1} fails for T{k + 1}")
            for l in range(self.m):
                if l not in (k, k + 1) and t * self.theta[l] != self.theta[l] * t:
                    bad.append(f"T{k + 1} does not commute with theta{l + 1}")
        for k in range(self.m - 2):
            a, b = self.T[k], self.T[k + 1]
            if a * b * a != b * a * b:
                bad.append(f"braid relation fails for T{k + 1}, T{k + 2}")
        return bad


def sign_isotypic_dim(module: FiniteModule) -> int:
    """dim { v : T_{s_k} v = -v for all k }."""
    if not module.T:
        return module.dim
    stacked = sympy.Matrix.vstack(*[t + sympy.eye(module.dim) for t in module.T])
    return len(stacked.nullspace())


def _chi(chi, m: int) -> tuple[Fraction, ...]:
    chi = tuple(Fraction(c) for c in chi)
    if len(chi) != m:
        raise DomainError(f"character has {len(chi)} coordinates, rank is {m}")
    if any(c == 0 for c in chi):
        raise DomainError("character coordinates must be nonzero")
    return chi


def _chi_power(chi: tuple[Fraction, ...], nu: Exp) -> Fraction:
    return prod((c ** e for c, e in zip(chi, nu)), start=Fraction(1))


def principal_series(m: int, chi, q) -> FiniteModule:
    """H (x)_A chi with basis T_w (x) 1, w in S_m (ordered by length)."""
    chi, q = _chi(chi, m), _q(q)
    basis = all_perms(m)
    index = {w: j for j, w in enumerate(basis)}
    n = len(basis)

    def matrix_of(h: HeckeElement) -> sympy.Matrix:
        cols = [[Fraction(0)] * n for _ in range(n)]
        for w in basis:
            for (lam, u), c in (h * HeckeElement.T(w)).terms.items():
                for (v, nu), d in theta_t(lam, u):
                    cols[index[w]][index[v]] += (c * d).evaluate(q) * _chi_power(chi, nu)
        return _mat(cols).T

    T = [matrix_of(HeckeElement.Ts(m, k)) for k in range(m - 1)]
    theta = [matrix_of(HeckeElement.theta_i(m, i)) for i in range(m)]
    return FiniteModule(m, q, list(basis), T, theta, name=f"principal series chi={chi}")


def steinberg_module(m: int, c, q) -> FiniteModule:
    """The one-dimensional module T_{s_k} -> -1, theta_i -> c q^(i-1)."""
    c, q = Fraction(c), _q(q)
    if c == 0:
        raise DomainError("c must be nonzero")
    T = [_mat([[-1]]) for _ in range(m - 1)]
    theta = [_mat([[c * q ** i]]) for i in range(m)]
    return FiniteModule(m, q, ["1"], T, theta, name="twisted Steinberg")


def poincare_value(m: int, q: Fraction) -> Fraction:
    """prod_{k=1..m} (1 + q + ... + q^(k-1))."""
    return prod((sum((q ** j for j in range(k)), Fraction(0)) for k in range(1, m + 1)),
                start=Fraction(1))


@dataclass
class CentralQuotient:
    module: FiniteModule
    orbit: tuple[Fraction, ...]
    regular: bool
    sign_dim: int
    # None when the orbit is degenerate and the lattice is not analysed
    irreducible_quotients: int | None = None
    sign_quotients: int | None = None
    submodules: int | None = None

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def unique_sign_quotient(self) -> bool | None:
        if self.sign_quotients is None:
            return None
        return self.sign_quotients == 1


def central_quotient(m: int, orbit, q) -> CentralQuotient:
    """Sigma / J Sigma for J generated by e_k(theta) - e_k(orbit), k = 1..m.

    The quotient of A by these relations has the standard monomials of a lex
    Groebner basis as a basis; T_{s_k} acts by -theta^(s_k lam) +
    (q - 1) Phi_k(lam) on theta^lam, reduced modulo the same basis.
    """
    chi, q = _chi(orbit, m), _q(q)
    if poincare_value(m, q) == 0:
        raise DomainError(f"q = {q} is a root of the Poincare polynomial of S_{m}")
    xs = sympy.symbols(f"x1:{m + 1}")
    rat = [sympy.Rational(c.numerator, c.denominator) for c in chi]
    elem = [sympy.Add(*[sympy.Mul(*c) for c in combinations(xs, k)]) for k in range(1, m + 1)]
    values = [sympy.Add(*[sympy.Mul(*c) for c in combinations(rat, k)]) for k in range(1, m + 1)]
    gens = list(reversed(xs))
    G = sympy.groebner([e - v for e, v in zip(elem, values)], *gens, order="lex")
    lead = [sympy.Poly(g, *gens).monoms()[0] for g in G.exprs]

    # standard monomials: exponent vectors (in gens order) divisible by no leading monomial
    bound = m  # each variable's degree is below m in the quotient
    std = []
    for e in sorted(_boxes(m, bound)):
        if not any(all(a >= b for a, b in zip(e, ld)) for ld in lead):
            std.append(e)
    basis_exp = [tuple(reversed(e)) for e in std]  # back to x1..xm order
    basis_exp.sort(key=lambda lam: (sum(lam), tuple(-x for x in lam)))
    index = {lam: j for j, lam in enumerate(basis_exp)}
    n = len(basis_exp)

    # x_i^-1 from the characteristic polynomial prod_j (t - x_j)
    e_m = values[-1]
    inv = []
    for x in xs:
        poly = sum(((-1) ** k * (values[k - 1] if k else 1) * x ** (m - 1 - k) for k in range(m)),
                   sympy.Integer(0))
        inv.append(sympy.expand(poly / ((-1) ** (m + 1) * e_m)))

    cache: dict[Exp, list] = {}

    def reduce_monomial(lam: Exp) -> list:
        if lam not in cache:
            expr = sympy.Integer(1)
            for x, xi, p in zip(xs, inv, lam):
                expr *= x ** p if p >= 0 else xi ** (-p)
            _, r = sympy.reduced(sympy.expand(expr), G.exprs, *gens, order="lex")
            coords = [sympy.Integer(0)] * n
            for mono, c in sympy.Poly(r, *gens).terms():
                coords[index[tuple(reversed(mono))]] += c
            cache[lam] = coords
        return cache[lam]

    def column(vec: dict[Exp, Fraction]) -> list:
        out = [sympy.Integer(0)] * n
        for lam, c in vec.items():
            cc = sympy.Rational(c.numerator, c.denominator)
            for j, v in enumerate(reduce_monomial(lam)):
                out[j] += cc * v
        return out

    def t_image(k: int, lam: Exp) -> dict[Exp, Fraction]:
        out: dict[Exp, Fraction] = {}
        sw = list(lam)
        sw[k], sw[k + 1] = sw[k + 1], sw[k]
        out[tuple(sw)] = out.get(tuple(sw), Fraction(0)) - 1
        for mu, c in phi(lam, k):
            out[mu] = out.get(mu, Fraction(0)) + (q - 1) * c
        return out

    def theta_image(i: int, lam: Exp) -> dict[Exp, Fraction]:
        mu = list(lam)
        mu[i] += 1
        return {tuple(mu): Fraction(1)}

    T = [sympy.Matrix([column(t_image(k, lam)) for lam in basis_exp]).T for k in range(m - 1)]
    theta = [sympy.Matrix([column(theta_image(i, lam)) for lam in basis_exp]).T for i in range(m)]
    module = FiniteModule(m, q, basis_exp, T, theta, name=f"Sigma/J Sigma at orbit {chi}")
    regular = len(set(chi)) == m
    out = CentralQuotient(module, chi, regular, sign_isotypic_dim(module))
    if regular:
        _analyse_lattice(out)
    return out


def _boxes(m: int, bound: int):
    if m == 0:
        yield ()
        return
    for head in range(bound):
        for tail in _boxes(m - 1, bound):
            yield (head,) + tail


def _analyse_lattice(cq: CentralQuotient) -> None:
    # At a regular orbit the thetas act semisimply with distinct joint
    # eigenvalues, so every submodule is a sum of joint eigenlines.
    mod = cq.module
    n = mod.dim
    lines = []
    for point in sorted(set(permutations(cq.orbit))):
        stacked = sympy.Matrix.vstack(*[
            th - sympy.Rational(p.numerator, p.denominator) * sympy.eye(n)
            for th, p in zip(mod.theta, point)])
        ns = stacked.nullspace()
        if len(ns) != 1:
            raise RuntimeError(f"joint eigenspace at {point} has dimension {len(ns)}")
        lines.append(ns[0])
    if len(lines) != n:
        raise RuntimeError("eigenlines do not span the module")

    def span(idx) -> sympy.Matrix:
        return sympy.Matrix.hstack(*[lines[i] for i in idx]) if idx else sympy.zeros(n, 0)

    def stable(idx) -> bool:
        if not idx:
            return True
        basis = span(idx)
        for t in mod.T:
            if sympy.Matrix.hstack(basis, t * basis).rank() != len(idx):
                return False
        return True

    subs = [frozenset(c) for r in range(n + 1) for c in combinations(range(n), r) if stable(c)]
    proper = [x for x in subs if len(x) < n]
    maximal = [x for x in proper if not any(x < y for y in proper)]
    sign_quotients = 0
    for sub in maximal:
        if _sign_dim_modulo(mod, span(sorted(sub))) > 0:
            sign_quotients += 1
    cq.submodules = len(subs)
    cq.irreducible_quotients = len(maximal)
    cq.sign_quotients = sign_quotients


def _sign_dim_modulo(mod: FiniteModule, basis: sympy.Matrix) -> int:
    """Sign-isotypic dimension of V/N for N spanned by the columns of ``basis``."""
    n, d = mod.dim, basis.cols
    if not mod.T:
        return n - d
    # unknowns (v, c_1, ..., c_K) with (T_k + 1) v = basis c_k
    rows = []
    for k, t in enumerate(mod.T):
        blocks = [t + sympy.eye(n)]
        blocks += [-basis if j == k else sympy.zeros(n, d) for j in range(len(mod.T))]
        rows.append(sympy.Matrix.hstack(*blocks))
    vs = [sol[:n, 0] for sol in sympy.Matrix.vstack(*rows).nullspace()]
    if not vs:
        return 0
    return sympy.Matrix.hstack(basis, *vs).rank() - d


@dataclass
class RelationReport:
    m: int
    trials: int
    seed: int
    checks: dict[str, int] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_relations(m: int, trials: int = 1000, seed: int = 0, spread: int = 2) -> RelationReport:
    """Defining relations, braid relation, reduced words and associativity, symbolic q."""
    rep = RelationReport(m, trials, seed)

    def check(name: str, ok: bool, detail: str):
        rep.checks[name] = rep.checks.get(name, 0) + 1
        if not ok:
            rep.violations.append(f"{name}: {detail}")

    one = HeckeElement.one(m)
    th = [HeckeElement.theta_i(m, i) for i in range(m)]
    th_inv = [HeckeElement.theta_i(m, i, -1) for i in range(m)]
    T = [HeckeElement.Ts(m, k) for k in range(m - 1)]
    for i in range(m):
        check("theta inverse", th[i] * th_inv[i] == one, f"theta{i + 1}")
        for j in range(m):
            check("thetas commute", th[i] * th[j] == th[j] * th[i], f"theta{i + 1}, theta{j + 1}")
    for k in range(m - 1):
        check("T theta_k - theta_k+1 T = (q-1) theta_k", T[k] * th[k] - th[k + 1] * T[k] == (Q - 1) * th[k], f"T{k + 1}")
        for l in range(m):
            if l not in (k, k + 1):
                check("T commutes with distant thetas", T[k] * th[l] == th[l] * T[k], f"T{k + 1}, theta{l + 1}")
        check("quadratic", (T[k] - Q) * (T[k] + 1) == HeckeElement(m), f"T{k + 1}")
    for k in range(m - 2):
        a, b = T[k], T[k + 1]
        check("braid", a * b * a == b * a * b, f"T{k + 1}, T{k + 2}")
    for k in range(m - 1):
        for j in range(k + 2, m - 1):
            check("distant generators commute", T[k] * T[j] == T[j] * T[k], f"T{k + 1}, T{j + 1}")
    for w in all_perms(m):
        word = one
        for k in reduced_word(w):
            word = word * T[k]
        check("T_w is the product of a reduced word", word == HeckeElement.T(w), str(w))
    rng = random.Random(seed)
    for t in range(trials):
        x, y, z = (random_monomial(rng, m, spread) for _ in range(3))
        check("associativity", (x * y) * z == x * (y * z), f"trial {t}")
    return rep
