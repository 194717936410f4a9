"""Quotients R = k[x_1..x_n]/I by homogeneous ideals.

A reduced Groebner basis gives standard monomials, and these give finite
coordinates on every graded piece R_j.  On top of that sit the Hilbert
function, multiplication in coordinates, the socle (0 : m), the minimal
number of generators of I, and the gate deciding whether R is a graded
ring of embedding dimension 3 and depth 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .exactlin import FieldMatrix, PrimeField, kernel_basis, rank
from .polyring import (
    Monomial,
    MonomialOrder,
    NotHomogeneous,
    Polynomial,
    PolynomialRing,
    mono_degree,
    mono_divides,
    mono_lcm,
    mono_mul,
    mono_quotient,
    monomials_of_degree,
)


class UnboundedSocleSearch(RuntimeError):
    pass


# ---------- Groebner bases ----------

def _reduce_dict(f: dict, basis: Sequence[tuple[Monomial, dict]], key, p: int) -> dict:
    """Full reduction of f by monic polynomials given as (lead, terms)."""
    f = {m: c for m, c in f.items() if c % p}
    rem: dict = {}
    while f:
        m = max(f, key=key)
        c = f.pop(m)
        for lead, g in basis:
            if mono_divides(lead, m):
                q = mono_quotient(m, lead)
                for gm, gc in g.items():
                    if gm == lead:
                        continue
                    t = mono_mul(gm, q)
                    v = (f.get(t, 0) - c * gc) % p
                    if v:
                        f[t] = v
                    else:
                        f.pop(t, None)
                break
        else:
            rem[m] = c
    return rem


def _monic_dict(f: dict, key, p: int) -> tuple[Monomial, dict]:
    lead = max(f, key=key)
    inv = pow(f[lead], -1, p)
    return lead, {m: (c * inv) % p for m, c in f.items()}


@dataclass(frozen=True)
class GroebnerBasis:
    ring: PolynomialRing
    generators: tuple[Polynomial, ...]
    original: tuple[Polynomial, ...]

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    @property
    def leads(self) -> list[Monomial]:
        return [g.lead_monomial for g in self.generators]

    def reduce(self, f: Polynomial) -> Polynomial:
        ring = self.ring
        basis = [(g.lead_monomial, g.as_dict()) for g in self.generators]
        rem = _reduce_dict(f.as_dict(), basis, ring.order.key, ring.field.p)
        return ring.from_dict(rem)

    def s_polynomial(self, f: Polynomial, g: Polynomial) -> Polynomial:
        lcm = mono_lcm(f.lead_monomial, g.lead_monomial)
        a = f.mul_term(mono_quotient(lcm, f.lead_monomial), g.lead_coeff)
        b = g.mul_term(mono_quotient(lcm, g.lead_monomial), f.lead_coeff)
        return a - b

    def is_groebner(self) -> bool:
        """Re-check the Buchberger criterion on every pair."""
        for f, g in itertools.combinations(self.generators, 2):
            if not self.reduce(self.s_polynomial(f, g)).is_zero():
                return False
        return True

    def is_reduced(self) -> bool:
        leads = self.leads
        for i, g in enumerate(self.generators):
            if g.lead_coeff != 1:
                return False
            for m in g.monomials():
                for k, lead in enumerate(leads):
                    if k != i and mono_divides(lead, m):
                        return False
        return True


def buchberger(gens: Sequence[Polynomial], ring: PolynomialRing | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of a homogeneous ideal.

    Pairs are processed by lowest lcm degree first; pairs with coprime
    leads and pairs covered by the chain criterion are skipped.
    """
    gens = list(gens)
    if ring is None:
        if not gens:
            raise ValueError("empty generator list needs an explicit ring")
        ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError("generators from different rings")
        if not g.is_homogeneous():
            raise NotHomogeneous(f"generator {g} is not homogeneous")
    key = ring.order.key
    p = ring.field.p

    basis: list[tuple[Monomial, dict]] = []
    pairs: set[tuple[int, int]] = set()

    def add(h: dict):
        lead, hm = _monic_dict(h, key, p)
        k = len(basis)
        basis.append((lead, hm))
        for i in range(k):
            pairs.add((i, k))

    for g in sorted((g for g in gens if g), key=lambda g: (g.degree(), key(g.lead_monomial))):
        r = _reduce_dict(g.as_dict(), basis, key, p)
        if r:
            add(r)

    while pairs:
        def weight(ij):
            lcm = mono_lcm(basis[ij[0]][0], basis[ij[1]][0])
            return (mono_degree(lcm), key(lcm), ij)

        i, j = min(pairs, key=weight)
        pairs.discard((i, j))
        li, fi = basis[i]
        lj, fj = basis[j]
        lcm = mono_lcm(li, lj)
        if mono_mul(li, lj) == lcm:
            continue
        if any(
            k not in (i, j)
            and mono_divides(basis[k][0], lcm)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(basis))
        ):
            continue
        qi = mono_quotient(lcm, li)
        qj = mono_quotient(lcm, lj)
        s: dict = {}
        for m, c in fi.items():
            t = mono_mul(m, qi)
            s[t] = (s.get(t, 0) + c) % p
        for m, c in fj.items():
            t = mono_mul(m, qj)
            s[t] = (s.get(t, 0) - c) % p
        s = {m: c for m, c in s.items() if c}
        h = _reduce_dict(s, basis, key, p)
        if h:
            add(h)

    # minimalize, then interreduce
    keep = []
    for idx, (lead, _) in enumerate(basis):
        redundant = False
        for jdx, (other, _) in enumerate(basis):
            if jdx == idx or not mono_divides(other, lead):
                continue
            if other != lead or jdx < idx:
                redundant = True
                break
        if not redundant:
            keep.append(basis[idx])
    reduced = []
    for idx, (lead, f) in enumerate(keep):
        others = [b for k, b in enumerate(keep) if k != idx]
        tail = {m: c for m, c in f.items() if m != lead}
        tail = _reduce_dict(tail, others, key, p)
        tail[lead] = 1
        reduced.append(ring.from_dict(tail))
    reduced.sort(key=lambda g: key(g.lead_monomial))
    return GroebnerBasis(ring, tuple(reduced), tuple(gens))


# ---------- quotient rings ----------

@dataclass(frozen=True)
class RingElementCoords:
    """Homogeneous element of R_degree in standard-monomial coordinates."""

    degree: int
    coords: np.ndarray = field(compare=False)

    def __eq__(self, other):
        return (
            isinstance(other, RingElementCoords)
            and self.degree == other.degree
            and np.array_equal(self.coords, other.coords)
        )

    def is_zero(self) -> bool:
        return not np.any(self.coords)


class GateResult(str, Enum):
    ELIGIBLE = "Eligible"
    ZERO_IDEAL = "ZeroIdeal"
    EMBEDDING_DIM_DROP = "EmbeddingDimDrop"
    POSITIVE_DEPTH = "PositiveDepth"


def taylor_bounds(leads: Sequence[Monomial], imax: int) -> dict[int, int]:
    """max deg lcm(S) over i-subsets S of leads, for i = 1..imax.

    Missing keys mean the subsets do not exist, so the corresponding
    Taylor module (and hence Tor) vanishes.
    """
    out = {}
    for i in range(1, imax + 1):
        best = None
        for S in itertools.combinations(leads, i):
            lcm = S[0]
            for m in S[1:]:
                lcm = mono_lcm(lcm, m)
            d = mono_degree(lcm)
            best = d if best is None else max(best, d)
        if best is not None:
            out[i] = best
    return out


class QuotientRing:
    """R = ring / (generators), graded, with standard-monomial coordinates.

    Graded data (standard monomials, coordinates of monomials, product
    tensors) is memoized on first use; nothing observable ever changes.
    """

    def __init__(self, ring: PolynomialRing, generators: Sequence[Polynomial]):
        self.ring = ring
        self.field: PrimeField = ring.field
        self.generators = tuple(g for g in generators)
        for g in self.generators:
            if g.ring != ring:
                raise ValueError("generator from a different ring")
            if not g.is_homogeneous():
                raise NotHomogeneous(f"generator {g} is not homogeneous")
        nonzero = [g for g in self.generators if g]
        if nonzero:
            self.gb = buchberger(nonzero, ring)
        else:
            self.gb = GroebnerBasis(ring, (), self.generators)
        self._leads = self.gb.leads
        self._basis = [(g.lead_monomial, g.as_dict()) for g in self.gb.generators]
        self._std: dict[int, list[Monomial]] = {}
        self._index: dict[int, dict[Monomial, int]] = {}
        self._mono_coords: dict[Monomial, np.ndarray] = {}
        self._var_mats: dict[tuple[int, int], np.ndarray] = {}
        self._tensors: dict[tuple[int, int], np.ndarray] = {}

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    @property
    def leads(self) -> list[Monomial]:
        return list(self._leads)

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"QuotientRing({self.ring.names}, ({gens}))"

    # graded pieces
    def std_monomials(self, j: int) -> list[Monomial]:
        if j < 0:
            return []
        if j not in self._std:
            monos = [
                m for m in self.ring.monomials_of_degree(j)
                if not any(mono_divides(lead, m) for lead in self._leads)
            ]
            self._std[j] = monos
            self._index[j] = {m: i for i, m in enumerate(monos)}
        return self._std[j]

    def hilbert(self, j: int) -> int:
        return len(self.std_monomials(j))

    def hilbert_values(self, upto: int) -> list[int]:
        return [self.hilbert(j) for j in range(upto + 1)]

    def index_of(self, m: Monomial) -> int | None:
        d = mono_degree(m)
        self.std_monomials(d)
        return self._index[d].get(m)

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise ValueError("polynomial from a different ring")
        if f.is_zero():
            return f
        rem = _reduce_dict(f.as_dict(), self._basis, self.ring.order.key, self.field.p)
        return self.ring.from_dict(rem)

    def contains(self, f: Polynomial) -> bool:
        """Ideal membership f in I."""
        return self.normal_form(f).is_zero()

    def monomial_coords(self, m: Monomial) -> np.ndarray:
        m = tuple(m)
        if m not in self._mono_coords:
            d = mono_degree(m)
            v = np.zeros(self.hilbert(d), dtype=np.int64)
            idx = self._index[d]
            if m in idx:
                v[idx[m]] = 1
            else:
                rem = _reduce_dict({m: 1}, self._basis, self.ring.order.key, self.field.p)
                for mm, c in rem.items():
                    v[idx[mm]] = c
            self._mono_coords[m] = v
        return self._mono_coords[m]

    def coords(self, f: Polynomial, degree: int | None = None) -> RingElementCoords:
        """Coordinates of the class of a homogeneous polynomial."""
        if not f.is_homogeneous():
            raise NotHomogeneous(f"{f} is not homogeneous")
        d = f.degree() if degree is None else degree
        if d < 0:
            d = 0
        if not f.is_zero() and f.degree() != d:
            raise ValueError(f"{f} is not of degree {d}")
        v = np.zeros(self.hilbert(d), dtype=np.int64)
        for m, c in f.terms:
            v = (v + c * self.monomial_coords(m)) % self.field.p
        return RingElementCoords(d, v)

    def to_polynomial(self, a: RingElementCoords) -> Polynomial:
        monos = self.std_monomials(a.degree)
        return self.ring.from_dict({m: int(c) for m, c in zip(monos, a.coords) if c})

    def element(self, f: Polynomial | str) -> RingElementCoords:
        return self.coords(f)

    def var_matrix(self, v: int, j: int) -> np.ndarray:
        """Matrix of multiplication by variable v: R_j -> R_{j+1}."""
        key = (v, j)
        if key not in self._var_mats:
            cols = []
            e = [0] * self.nvars
            e[v] = 1
            for m in self.std_monomials(j):
                cols.append(self.monomial_coords(mono_mul(m, tuple(e))))
            rows = self.hilbert(j + 1)
            M = np.stack(cols, axis=1) if cols else np.zeros((rows, 0), dtype=np.int64)
            self._var_mats[key] = M
        return self._var_mats[key]

    def product_tensor(self, d1: int, d2: int) -> np.ndarray:
        """T[a, b, :] = coordinates of std_a * std_b, shape (h(d1), h(d2), h(d1+d2))."""
        key = (d1, d2)
        if key not in self._tensors:
            m1 = self.std_monomials(d1)
            m2 = self.std_monomials(d2)
            h = self.hilbert(d1 + d2)
            T = np.zeros((len(m1), len(m2), h), dtype=np.int64)
            if h:
                for a, u in enumerate(m1):
                    for b, w in enumerate(m2):
                        T[a, b] = self.monomial_coords(mono_mul(u, w))
            self._tensors[key] = T
        return self._tensors[key]

    def multiply_coords(self, d1: int, a: np.ndarray, d2: int, b: np.ndarray) -> np.ndarray:
        field = self.field
        T = self.product_tensor(d1, d2)
        h1, h2, h = T.shape
        if h == 0 or h1 == 0 or h2 == 0:
            return np.zeros(h, dtype=np.int64)
        t = field.matmul(np.asarray(a, dtype=np.int64), T.reshape(h1, h2 * h)).reshape(h2, h)
        return field.matmul(np.asarray(b, dtype=np.int64), t)

    def multiply(self, a: RingElementCoords, b: RingElementCoords) -> RingElementCoords:
        return RingElementCoords(
            a.degree + b.degree, self.multiply_coords(a.degree, a.coords, b.degree, b.coords)
        )

    # invariants
    def degree_bounds(self) -> dict[int, int]:
        """Taylor bounds on the minimal generators of the initial ideal."""
        return taylor_bounds(self._leads, self.nvars)

    def socle_in_degree(self, j: int) -> list[np.ndarray]:
        h = self.hilbert(j)
        if h == 0:
            return []
        mats = [self.var_matrix(v, j) for v in range(self.nvars)]
        M = np.concatenate(mats, axis=0)
        return kernel_basis(FieldMatrix(self.field, M))

    def socle_scan_bound(self) -> int:
        """Largest degree in which a socle element can live.

        Socle elements of degree s give Koszul homology in top homological
        degree and internal degree s + n, which the Taylor bound caps.
        """
        bounds = self.degree_bounds()
        top = bounds.get(self.nvars)
        if top is None:
            return -1
        return top - self.nvars

    def _tail_certificate(self, D: int) -> bool:
        width = max((g.degree() for g in self.gb.generators), default=1)
        width = max(width, 1)
        h = self.hilbert(D)
        for j in range(D - width + 1, D + width + 1):
            if j < 0 or self.hilbert(j) != h:
                return False
        for j in range(max(D - width + 1, 0), D + 1):
            mats = [self.var_matrix(v, j) for v in range(self.nvars)]
            M = FieldMatrix(self.field, np.concatenate(mats, axis=0))
            if rank(M) != self.hilbert(j):
                return False
        return True

    def socle_basis(self, max_degree: int | None = None) -> list[RingElementCoords]:
        """Basis of (0 : m), degree by degree.

        Without `max_degree` the scan stops at the Taylor bound, which is
        rigorous.  A smaller user bound needs a stabilization certificate
        (constant Hilbert function and injective multiplication on a window
        of width the largest generator degree), else UnboundedSocleSearch.
        """
        rigorous = self.socle_scan_bound()
        if max_degree is None or max_degree >= rigorous:
            D = rigorous if max_degree is None else max_degree
        else:
            D = max_degree
            if any(self.hilbert(j) for j in range(D + 1, rigorous + 1)) and not self._tail_certificate(D):
                raise UnboundedSocleSearch(
                    f"socle scan stopped at degree {D} without a stabilization certificate"
                )
        out = []
        for j in range(D + 1):
            for v in self.socle_in_degree(j):
                out.append(RingElementCoords(j, v))
        return out

    def is_socle_element(self, a: RingElementCoords) -> bool:
        for v in range(self.nvars):
            if self.field.matmul(self.var_matrix(v, a.degree), a.coords).any():
                return False
        return True

    def min_generator_count_by_degree(self) -> dict[int, int]:
        """mu_j = dim I_j - dim (m I)_j, computed from the input generators."""
        field = self.field
        gens = [g for g in self.generators if g]
        degrees = sorted({g.degree() for g in gens})
        out = {}
        for j in degrees:
            monos = self.ring.monomials_of_degree(j)
            index = {m: k for k, m in enumerate(monos)}
            full, inner = [], []
            for g in gens:
                d = g.degree()
                if d > j:
                    continue
                for q in monomials_of_degree(self.nvars, j - d):
                    row = np.zeros(len(monos), dtype=np.int64)
                    for m, c in g.terms:
                        row[index[mono_mul(m, q)]] = c
                    full.append(row)
                    if d < j:
                        inner.append(row)
            r_full = rank(FieldMatrix(field, np.array(full))) if full else 0
            r_inner = rank(FieldMatrix(field, np.array(inner))) if inner else 0
            if r_full - r_inner:
                out[j] = r_full - r_inner
        return out

    def min_generator_count(self) -> int:
        return sum(self.min_generator_count_by_degree().values())

    def embedding_dim_ok(self) -> bool:
        """I contained in m^2, i.e. no constants or linear forms in I."""
        return self.hilbert(0) == 1 and self.hilbert(1) == self.nvars

    def codepth3_gate(self) -> GateResult:
        if not any(self.generators):
            return GateResult.ZERO_IDEAL
        if not self.embedding_dim_ok():
            return GateResult.EMBEDDING_DIM_DROP
        if not self.socle_basis():
            return GateResult.POSITIVE_DEPTH
        return GateResult.ELIGIBLE


def normal_form(f: Polynomial, R: QuotientRing) -> Polynomial:
    return R.normal_form(f)


def std_monomials(R: QuotientRing, j: int) -> list[Monomial]:
    return R.std_monomials(j)


def hilbert(R: QuotientRing, j: int) -> int:
    return R.hilbert(j)


def multiply_in_R(a: RingElementCoords, b: RingElementCoords, R: QuotientRing) -> RingElementCoords:
    return R.multiply(a, b)


def socle_basis(R: QuotientRing, max_degree: int | None = None) -> list[RingElementCoords]:
    return R.socle_basis(max_degree)


def min_generator_count(R: QuotientRing) -> int:
    return R.min_generator_count()


def codepth3_gate(R: QuotientRing) -> GateResult:
    return R.codepth3_gate()
