"""The Koszul complex of R on its variables and its homology.

``K_{i,j}`` is spanned by ``m * e_S`` with ``|S| = i`` and ``m`` a standard
monomial of degree ``j - i``; elements are stored as flat coordinate
vectors in that basis, with subsets in lexicographic order and standard
monomials in descending monomial order inside each subset block.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .exactlin import CoordinateSolver, FieldMatrix, SpanReducer, kernel_basis, rank
from .quotient import QuotientRing, RingElementCoords

HARD_DEGREE_CAP = 64


class DegreeOutOfRange(ValueError):
    pass


class BoundExceeded(RuntimeError):
    pass


class NotACycle(ValueError):
    pass


def merge_sign(S: tuple[int, ...], T: tuple[int, ...]) -> int:
    """Sign of e_S ^ e_T = sign * e_{S u T}; 0 when S and T meet."""
    if set(S) & set(T):
        return 0
    inversions = sum(1 for s in S for t in T if s > t)
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class KoszulElement:
    complex: KoszulComplex = field(repr=False, compare=False)
    i: int
    j: int
    vector: np.ndarray = field(compare=False)

    def __eq__(self, other):
        return (
            isinstance(other, KoszulElement)
            and (self.i, self.j) == (other.i, other.j)
            and np.array_equal(self.vector, other.vector)
        )

    @property
    def coefficients(self) -> dict[tuple[int, ...], RingElementCoords]:
        K = self.complex
        h = K.R.hilbert(self.j - self.i)
        out = {}
        for k, S in enumerate(K.subsets(self.i)):
            out[S] = RingElementCoords(self.j - self.i, self.vector[k * h:(k + 1) * h])
        return out

    def is_zero(self) -> bool:
        return not self.vector.any()

    def __add__(self, other: KoszulElement) -> KoszulElement:
        if (self.i, self.j) != (other.i, other.j):
            raise ValueError("adding Koszul elements of different bidegrees")
        p = self.complex.field.p
        return KoszulElement(self.complex, self.i, self.j, (self.vector + other.vector) % p)

    def __neg__(self):
        p = self.complex.field.p
        return KoszulElement(self.complex, self.i, self.j, (-self.vector) % p)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> KoszulElement:
        p = self.complex.field.p
        return KoszulElement(self.complex, self.i, self.j, (self.vector * (c % p)) % p)

    def __str__(self):
        return self.complex.format(self)


class KoszulComplex:
    def __init__(self, R: QuotientRing):
        self.R = R
        self.field = R.field
        self.n = R.nvars
        self._subsets = {i: list(itertools.combinations(range(self.n), i)) for i in range(self.n + 1)}
        self._subset_index = {
            i: {S: k for k, S in enumerate(subs)} for i, subs in self._subsets.items()
        }
        self._diffs: dict[tuple[int, int], np.ndarray] = {}

    def subsets(self, i: int) -> list[tuple[int, ...]]:
        return self._subsets.get(i, [])

    def subset_name(self, S: tuple[int, ...]) -> str:
        if not S:
            return "1"
        return "e_" + "".join(self.R.ring.names[s] for s in S)

    def dim(self, i: int, j: int) -> int:
        if i < 0 or i > self.n:
            return 0
        return comb(self.n, i) * self.R.hilbert(j - i)

    def basis(self, i: int, j: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        monos = self.R.std_monomials(j - i)
        return [(S, m) for S in self.subsets(i) for m in monos]

    def zero(self, i: int, j: int) -> KoszulElement:
        return KoszulElement(self, i, j, np.zeros(self.dim(i, j), dtype=np.int64))

    def element(self, i: int, j: int, vector) -> KoszulElement:
        v = np.asarray(vector, dtype=np.int64) % self.field.p
        if len(v) != self.dim(i, j):
            raise ValueError("vector length does not match K_{%d,%d}" % (i, j))
        return KoszulElement(self, i, j, v)

    def from_polys(self, terms: dict) -> KoszulElement:
        """Build an element from {subset: homogeneous polynomial}."""
        items = [(tuple(S), f) for S, f in terms.items() if not f.is_zero()]
        if not items:
            raise ValueError("cannot infer bidegree of the zero element")
        i = len(items[0][0])
        j = items[0][1].degree() + i
        h = self.R.hilbert(j - i)
        v = np.zeros(self.dim(i, j), dtype=np.int64)
        for S, f in items:
            if len(S) != i or f.degree() + i != j:
                raise ValueError("terms of mixed bidegree")
            k = self._subset_index[i][S]
            c = self.R.coords(f, j - i).coords
            v[k * h:(k + 1) * h] = (v[k * h:(k + 1) * h] + c) % self.field.p
        return KoszulElement(self, i, j, v)

    def differential_matrix(self, i: int, j: int) -> np.ndarray:
        """Matrix of d: K_{i,j} -> K_{i-1,j}; d(e_S) = sum_k (-1)^k x_{S_k} e_{S minus S_k}."""
        if i < 1 or i > self.n:
            raise DegreeOutOfRange(f"homological degree {i} outside 1..{self.n}")
        if j < 0:
            raise DegreeOutOfRange(f"negative internal degree {j}")
        key = (i, j)
        if key in self._diffs:
            return self._diffs[key]
        p = self.field.p
        h_src = self.R.hilbert(j - i)
        h_dst = self.R.hilbert(j - i + 1)
        D = np.zeros((self.dim(i - 1, j), self.dim(i, j)), dtype=np.int64)
        if h_src and h_dst:
            for col_block, S in enumerate(self.subsets(i)):
                for k, s in enumerate(S):
                    T = S[:k] + S[k + 1:]
                    row_block = self._subset_index[i - 1][T]
                    block = self.R.var_matrix(s, j - i)
                    if k % 2:
                        block = (-block) % p
                    D[row_block * h_dst:(row_block + 1) * h_dst, col_block * h_src:(col_block + 1) * h_src] = block
        self._diffs[key] = D
        return D

    def d(self, u: KoszulElement) -> KoszulElement:
        if u.i == 0:
            return self.zero(-1, u.j)
        D = self.differential_matrix(u.i, u.j)
        return KoszulElement(self, u.i - 1, u.j, self.field.matmul(D, u.vector))

    def is_cycle(self, u: KoszulElement) -> bool:
        return u.i == 0 or self.d(u).is_zero()

    def wedge(self, u: KoszulElement, v: KoszulElement) -> KoszulElement:
        i = u.i + v.i
        j = u.j + v.j
        if i > self.n:
            raise ValueError("product exceeds top exterior degree")
        p = self.field.p
        du, dv = u.j - u.i, v.j - v.i
        hu, hv = self.R.hilbert(du), self.R.hilbert(dv)
        h = self.R.hilbert(j - i)
        out = np.zeros(self.dim(i, j), dtype=np.int64)
        if h == 0:
            return KoszulElement(self, i, j, out)
        for a, S in enumerate(self.subsets(u.i)):
            cu = u.vector[a * hu:(a + 1) * hu]
            if not cu.any():
                continue
            for b, T in enumerate(self.subsets(v.i)):
                sign = merge_sign(S, T)
                if not sign:
                    continue
                cv = v.vector[b * hv:(b + 1) * hv]
                if not cv.any():
                    continue
                prod = self.R.multiply_coords(du, cu, dv, cv)
                U = tuple(sorted(S + T))
                k = self._subset_index[i][U]
                out[k * h:(k + 1) * h] = (out[k * h:(k + 1) * h] + sign * prod) % p
        return KoszulElement(self, i, j, out)

    def format(self, u: KoszulElement) -> str:
        parts = []
        for S, c in u.coefficients.items():
            if c.is_zero():
                continue
            f = self.R.to_polynomial(c)
            body = str(f)
            if len(f.terms) > 1:
                body = f"({body})"
            name = self.subset_name(S)
            parts.append(body if name == "1" else (name if body == "1" else f"{body}*{name}"))
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")


def differential_matrix(R: QuotientRing, i: int, j: int) -> FieldMatrix:
    return FieldMatrix(R.field, KoszulComplex(R).differential_matrix(i, j))


def wedge(u: KoszulElement, v: KoszulElement) -> KoszulElement:
    return u.complex.wedge(u, v)


def degree_bound(R: QuotientRing, i: int, override: int | None = None) -> int | None:
    """Largest internal degree where H_i(K) can be nonzero, or None if H_i = 0.

    Taylor bound on the minimal generators of the initial ideal; an
    override caps it further.
    """
    b = R.degree_bounds().get(i)
    if b is None:
        return None
    if override is not None:
        b = min(b, override)
    return b


@dataclass
class HomologyPiece:
    i: int
    j: int
    reps: list[np.ndarray]
    boundaries: list[np.ndarray]
    solver: CoordinateSolver


class HomologyBasis:
    """Cycle representatives of H_i(K) for i = 1..n, grouped by internal degree.

    Representatives are chosen by extending a basis of the boundaries
    inside the cycles, scanning the kernel basis in its deterministic
    order; the same input always gives the same representatives.
    """

    def __init__(self, R: QuotientRing, max_degree: int | None = None, K: KoszulComplex | None = None):
        self.R = R
        self.K = K or KoszulComplex(R)
        self.field = R.field
        self.max_degree = max_degree
        self.bounds: dict[int, int | None] = {}
        self.pieces: dict[tuple[int, int], HomologyPiece] = {}
        n = self.K.n
        for i in range(1, n + 1):
            b = degree_bound(R, i, max_degree)
            self.bounds[i] = b
            if b is None:
                continue
            if b > HARD_DEGREE_CAP:
                raise BoundExceeded(f"degree bound {b} for H_{i} exceeds cap {HARD_DEGREE_CAP}")
            for j in range(i, b + 1):
                piece = self._compute_piece(i, j)
                if piece.reps:
                    self.pieces[(i, j)] = piece
        self._index()

    def _compute_piece(self, i: int, j: int, reps: list[np.ndarray] | None = None) -> HomologyPiece:
        K = self.K
        n_dim = K.dim(i, j)
        D = K.differential_matrix(i, j)
        cycles = kernel_basis(FieldMatrix(self.field, D))
        reducer = SpanReducer(self.field, n_dim)
        boundaries = []
        if i < K.n:
            D_up = K.differential_matrix(i + 1, j)
            for c in range(D_up.shape[1]):
                col = D_up[:, c]
                if reducer.add(col):
                    boundaries.append(col.copy())
        if reps is None:
            reps = [z for z in cycles if reducer.add(z)]
        solver = CoordinateSolver(self.field, list(reps) + boundaries, n_dim)
        return HomologyPiece(i, j, list(reps), boundaries, solver)

    def _index(self):
        self.offsets: dict[tuple[int, int], int] = {}
        self.reps: dict[int, list[KoszulElement]] = {i: [] for i in range(1, self.K.n + 1)}
        for (i, j) in sorted(self.pieces):
            piece = self.pieces[(i, j)]
            self.offsets[(i, j)] = len(self.reps[i])
            for v in piece.reps:
                self.reps[i].append(KoszulElement(self.K, i, j, v))

    def rank(self, i: int) -> int:
        if i == 0:
            return 1
        return len(self.reps.get(i, []))

    def ranks(self) -> tuple[int, ...]:
        return tuple(self.rank(i) for i in range(1, self.K.n + 1))

    def degrees(self, i: int) -> list[int]:
        return [u.j for u in self.reps.get(i, [])]

    def in_range(self, i: int, j: int) -> bool:
        b = self.bounds.get(i)
        return b is not None and i <= j <= b

    def reduce(self, z: KoszulElement) -> np.ndarray:
        """Coordinates of the class of cycle z over the representatives of H_i."""
        if not self.K.is_cycle(z):
            raise NotACycle("element is not a cycle")
        i, j = z.i, z.j
        out = np.zeros(self.rank(i), dtype=np.int64)
        if z.is_zero():
            return out
        piece = self.pieces.get((i, j))
        if piece is None:
            if self.in_range(i, j):
                # homology vanishes here: z must be a boundary
                piece = self._compute_piece(i, j)
            else:
                return out
        c = piece.solver.express(z.vector)
        k = len(piece.reps)
        if k:
            off = self.offsets[(i, j)]
            out[off:off + k] = c[:k]
        return out

    def with_representatives(self, reps: dict[int, list[KoszulElement]]) -> HomologyBasis:
        """Same homology, different cycle representatives (same counts per piece)."""
        new = object.__new__(HomologyBasis)
        new.R, new.K, new.field = self.R, self.K, self.field
        new.max_degree, new.bounds = self.max_degree, dict(self.bounds)
        new.pieces = {}
        for (i, j), piece in self.pieces.items():
            chosen = [u.vector for u in reps[i] if u.j == j]
            if len(chosen) != len(piece.reps):
                raise ValueError(f"wrong number of representatives in H_{i} degree {j}")
            for v in chosen:
                if not self.K.is_cycle(KoszulElement(self.K, i, j, v)):
                    raise NotACycle("replacement representative is not a cycle")
            new.pieces[(i, j)] = new._compute_piece(i, j, chosen)
            # independence modulo boundaries
            red = SpanReducer(self.field, self.K.dim(i, j))
            for b in piece.boundaries:
                red.add(b)
            if not all(red.add(v) for v in chosen):
                raise ValueError("replacement representatives are dependent modulo boundaries")
        new._index()
        return new

    def perturbed(self, rng: np.random.Generator) -> HomologyBasis:
        """Add a random boundary to every representative."""
        reps: dict[int, list[KoszulElement]] = {}
        p = self.field.p
        for i, lst in self.reps.items():
            out = []
            for u in lst:
                bnd = self.pieces[(i, u.j)].boundaries
                v = u.vector.copy()
                for b in bnd:
                    v = (v + int(rng.integers(0, p)) * b) % p
                out.append(KoszulElement(self.K, i, u.j, v))
            reps[i] = out
        return self.with_representatives(reps)


def homology_basis(R: QuotientRing, max_degree: int | None = None) -> HomologyBasis:
    return HomologyBasis(R, max_degree)


def reduce_to_homology(z: KoszulElement, H: HomologyBasis) -> np.ndarray:
    return H.reduce(z)


def homology_ranks_by_degree(R: QuotientRing, max_degree: int | None = None) -> dict[tuple[int, int], int]:
    """dim H_i(K)_j for all (i, j) inside the degree bounds, i = 0..n."""
    K = KoszulComplex(R)
    out = {}
    if R.hilbert(0):
        out[(0, 0)] = 1
    for i in range(1, K.n + 1):
        b = degree_bound(R, i, max_degree)
        if b is None:
            continue
        for j in range(i, b + 1):
            D = FieldMatrix(R.field, K.differential_matrix(i, j))
            z = D.cols - (0 if D.rows == 0 else rank(D))
            bd = 0
            if i < K.n:
                U = FieldMatrix(R.field, K.differential_matrix(i + 1, j))
                bd = 0 if U.cols == 0 or U.rows == 0 else rank(U)
            if z - bd:
                out[(i, j)] = z - bd
    return out
