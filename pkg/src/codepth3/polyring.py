"""Sparse multivariate polynomials over a prime field with graded orders.

A monomial is a plain tuple of exponents.  A `Polynomial` keeps its terms
as a tuple of ``(monomial, coefficient)`` pairs sorted strictly descending
under the ring's monomial order, with coefficients nonzero residues.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .exactlin import PrimeField

Monomial = tuple[int, ...]

LT, EQ, GT = -1, 0, 1


class NotDivisible(ValueError):
    pass


class NotHomogeneous(ValueError):
    pass


def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(i + j for i, j in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(i, j) for i, j in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if `a` divides `b`."""
    return all(i <= j for i, j in zip(a, b))


def mono_quotient(b: Monomial, a: Monomial) -> Monomial:
    """b / a; requires a | b."""
    if not mono_divides(a, b):
        raise NotDivisible(f"{a} does not divide {b}")
    return tuple(j - i for i, j in zip(a, b))


def monomials_of_degree(nvars: int, d: int) -> list[Monomial]:
    """All exponent vectors of total degree d (unsorted)."""
    if nvars == 0:
        return [()] if d == 0 else []
    if nvars == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - first):
            out.append((first,) + rest)
    return out


class MonomialOrder:
    """Graded monomial order: ``degrevlex`` or ``deglex``.

    `precedence` lists variable indices from most to least significant,
    e.g. ``(0, 1, 2)`` for x > y > z.
    """

    KINDS = ("degrevlex", "deglex")

    def __init__(self, kind: str = "degrevlex", precedence: Sequence[int] | None = None, nvars: int = 3):
        if kind not in self.KINDS:
            raise ValueError(f"unsupported monomial order {kind!r}; graded orders only: {self.KINDS}")
        if precedence is None:
            precedence = tuple(range(nvars))
        precedence = tuple(precedence)
        if sorted(precedence) != list(range(len(precedence))):
            raise ValueError(f"precedence {precedence} is not a permutation")
        self.kind = kind
        self.precedence = precedence

    def __repr__(self):
        return f"MonomialOrder({self.kind!r}, {self.precedence})"

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.precedence) == (other.kind, other.precedence)

    def __hash__(self):
        return hash((self.kind, self.precedence))

    def key(self, m: Monomial):
        """Sort key; larger key means larger monomial."""
        e = [m[i] for i in self.precedence]
        if self.kind == "deglex":
            return (sum(e), tuple(e))
        return (sum(e), tuple(-v for v in reversed(e)))

    def compare(self, a: Monomial, b: Monomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return GT if ka > kb else LT if ka < kb else EQ


def mono_compare(a: Monomial, b: Monomial, order: MonomialOrder) -> int:
    return order.compare(a, b)


class PolynomialRing:
    """k[x_1, ..., x_n] with a fixed field, variable names and order."""

    def __init__(self, field: PrimeField, names: Sequence[str] = ("x", "y", "z"), order: MonomialOrder | None = None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"variable names must be distinct: {names}")
        self.field = field
        self.names = names
        self.nvars = len(names)
        self.order = order or MonomialOrder("degrevlex", nvars=self.nvars)
        if len(self.order.precedence) != self.nvars:
            raise ValueError("order precedence does not match number of variables")

    def __repr__(self):
        return f"PolynomialRing(F_{self.field.p}, {self.names}, {self.order.kind})"

    def __eq__(self, other):
        return (
            isinstance(other, PolynomialRing)
            and (self.field, self.names, self.order) == (other.field, other.names, other.order)
        )

    def __hash__(self):
        return hash((self.field, self.names, self.order))

    @property
    def one_monomial(self) -> Monomial:
        return (0,) * self.nvars

    def zero(self) -> Polynomial:
        return Polynomial(self, ())

    def one(self) -> Polynomial:
        return self.monomial(self.one_monomial)

    def gen(self, i: int) -> Polynomial:
        e = [0] * self.nvars
        e[i] = 1
        return self.monomial(tuple(e))

    def gens(self) -> list[Polynomial]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, m: Monomial, coeff: int = 1) -> Polynomial:
        return self.from_dict({tuple(m): coeff})

    def from_dict(self, terms: Mapping[Monomial, int]) -> Polynomial:
        p = self.field.p
        items = [(tuple(m), c % p) for m, c in terms.items() if c % p]
        items.sort(key=lambda t: self.order.key(t[0]), reverse=True)
        return Polynomial(self, tuple(items))

    def sorted_monomials(self, monos: Iterable[Monomial]) -> list[Monomial]:
        return sorted(monos, key=self.order.key, reverse=True)

    def monomials_of_degree(self, d: int) -> list[Monomial]:
        return self.sorted_monomials(monomials_of_degree(self.nvars, d))

    def mono_str(self, m: Monomial) -> str:
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class Polynomial:
    ring: PolynomialRing
    terms: tuple[tuple[Monomial, int], ...]

    def as_dict(self) -> dict[Monomial, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def lead_monomial(self) -> Monomial:
        return self.terms[0][0]

    @property
    def lead_coeff(self) -> int:
        return self.terms[0][1]

    def monomials(self) -> list[Monomial]:
        return [m for m, _ in self.terms]

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m, _ in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m, _ in self.terms}) <= 1

    def _check(self, other: Polynomial):
        if other.ring != self.ring:
            raise ValueError("polynomials from different rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.one().scale(other)
        self._check(other)
        acc = self.as_dict()
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return self.ring.from_dict(acc)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.p
        return Polynomial(self.ring, tuple((m, (-c) % p) for m, c in self.terms))

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.one().scale(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> Polynomial:
        p = self.ring.field.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, tuple((m, (a * c) % p) for m, a in self.terms))

    def mul_term(self, m: Monomial, c: int) -> Polynomial:
        """Multiply by the term c*m; order is preserved by monomial multiplication."""
        p = self.ring.field.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return Polynomial(
            self.ring, tuple((mono_mul(a, m), (b * c) % p) for a, b in self.terms)
        )

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        acc: dict[Monomial, int] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = mono_mul(m1, m2)
                acc[m] = acc.get(m, 0) + c1 * c2
        return self.ring.from_dict(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def monic(self) -> Polynomial:
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.lead_coeff))

    def __str__(self):
        if not self.terms:
            return "0"
        field = self.ring.field
        out = []
        for i, (m, c) in enumerate(self.terms):
            s = field.signed(c)
            sign = "-" if s < 0 else "+"
            a = abs(s)
            body = self.ring.mono_str(m)
            if body == "1":
                text = str(a)
            elif a == 1:
                text = body
            else:
                text = f"{a}*{body}"
            if i == 0:
                out.append(("-" if sign == "-" else "") + text)
            else:
                out.append(f" {sign} {text}")
        return "".join(out)

    def __repr__(self):
        return f"Polynomial({self})"


def poly_arith(f: Polynomial, g, op: str) -> Polynomial:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(int(g))
    raise ValueError(f"unknown polynomial operation {op!r}")
