"""Exact arithmetic in prime fields and dense linear algebra over them.

Matrices are numpy ``int64`` arrays holding residues in ``[0, p)``.  The
modulus is capped below ``2**31`` so that a product of two residues, and a
difference of such products, never leaves the ``int64`` range.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_CHARACTERISTIC = 32003
_MAX_MODULUS = 2**31


class DivisionByZero(ZeroDivisionError):
    pass


class NotInSpan(ValueError):
    """A target vector is not a linear combination of the generators."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """The field F_p.  Scalars are plain ints; `element` wraps them."""

    def __init__(self, p: int = DEFAULT_CHARACTERISTIC):
        p = int(p)
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not a prime")
        if p >= _MAX_MODULUS:
            raise ValueError(f"characteristic {p} too large (must be < 2**31)")
        self.p = p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(int(value) % self.p, self)

    def normalize(self, value: int) -> int:
        return int(value) % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.p}")
        return pow(a, -1, self.p)

    def div(self, a: int, b: int) -> int:
        return (a * self.inv(b)) % self.p

    def signed(self, a: int) -> int:
        """Representative of `a` in (-p/2, p/2], for display."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a

    # matrix/vector helpers
    def array(self, data) -> np.ndarray:
        return np.asarray(data, dtype=np.int64) % self.p

    def zeros(self, *shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # Blocked accumulation keeps partial sums inside int64.
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.shape[-1] == 0:
            shape = a.shape[:-1] + b.shape[1:]
            return np.zeros(shape, dtype=np.int64)
        step = max(1, (2**62) // (self.p * self.p))
        out = None
        for start in range(0, a.shape[-1], step):
            part = (a[..., start:start + step] @ b[start:start + step]) % self.p
            out = part if out is None else (out + part) % self.p
        return out

    def random_vector(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.integers(0, self.p, size=n, dtype=np.int64)


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    def _lift(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        return int(other) % self.field.p

    def __add__(self, other):
        return FieldElement(self.field.add(self.value, self._lift(other)), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field.sub(self.value, self._lift(other)), self.field)

    def __rsub__(self, other):
        return FieldElement(self.field.sub(self._lift(other), self.value), self.field)

    def __mul__(self, other):
        return FieldElement(self.field.mul(self.value, self._lift(other)), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field.div(self.value, self._lift(other)), self.field)

    def __rtruediv__(self, other):
        return FieldElement(self.field.div(self._lift(other), self.value), self.field)

    def __neg__(self):
        return FieldElement(self.field.neg(self.value), self.field)

    def inverse(self):
        return FieldElement(self.field.inv(self.value), self.field)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.p))

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"


@dataclass
class FieldMatrix:
    """Dense matrix over a prime field; entries kept reduced."""

    field: PrimeField
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.int64)
        if arr.ndim != 2:
            arr = arr.reshape(arr.shape[0] if arr.size else 0, -1)
        self.entries = arr % self.field.p

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> FieldMatrix:
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def from_rows(cls, field: PrimeField, rows: Sequence[Sequence[int]], cols: int | None = None) -> FieldMatrix:
        if len(rows) == 0:
            return cls.zeros(field, 0, cols or 0)
        return cls(field, np.array(rows, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def T(self) -> FieldMatrix:
        return FieldMatrix(self.field, self.entries.T.copy())

    def __matmul__(self, other):
        if isinstance(other, FieldMatrix):
            return FieldMatrix(self.field, self.field.matmul(self.entries, other.entries))
        return self.field.matmul(self.entries, np.asarray(other, dtype=np.int64))

    def __eq__(self, other):
        return (
            isinstance(other, FieldMatrix)
            and self.field == other.field
            and self.entries.shape == other.entries.shape
            and bool(np.array_equal(self.entries, other.entries))
        )

    def is_zero(self) -> bool:
        return not self.entries.any()


def _as_array(M) -> tuple[PrimeField, np.ndarray]:
    if isinstance(M, FieldMatrix):
        return M.field, M.entries
    raise TypeError("expected a FieldMatrix")


def _rref_array(field: PrimeField, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    p = field.p
    A = np.array(A, dtype=np.int64) % p
    nrows, ncols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * field.inv(int(A[r, c]))) % p
        col = A[:, c].copy()
        col[r] = 0
        if col.any():
            A = (A - np.outer(col, A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rref(M: FieldMatrix) -> tuple[FieldMatrix, list[int], int]:
    """Reduced row echelon form, pivot columns and rank.

    The pivot in each column is the first nonzero entry at or below the
    current row, so the result is fully deterministic.
    """
    field, A = _as_array(M)
    R, pivots = _rref_array(field, A)
    return FieldMatrix(field, R), pivots, len(pivots)


def rank(M: FieldMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return rref(M)[2]


def kernel_basis(M: FieldMatrix) -> list[np.ndarray]:
    """Basis of {v : M v = 0}, one vector per non-pivot column."""
    field, A = _as_array(M)
    ncols = A.shape[1]
    R, pivots = _rref_array(field, A)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = np.zeros(ncols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-R[i, f]) % field.p
        basis.append(v)
    return basis


class SpanReducer:
    """Incrementally maintained echelon basis of a subspace of F_p^n.

    `add` reports whether a vector enlarged the span; `reduce` returns the
    remainder of a vector modulo the current span (zero iff it is a member).
    """

    def __init__(self, field: PrimeField, n: int):
        self.field = field
        self.n = n
        self._rows: list[np.ndarray] = []
        self._pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self._rows)

    def reduce(self, v) -> np.ndarray:
        p = self.field.p
        v = np.asarray(v, dtype=np.int64) % p
        for row, c in zip(self._rows, self._pivots):
            if v[c]:
                v = (v - v[c] * row) % p
        return v

    def add(self, v) -> bool:
        w = self.reduce(v)
        nz = np.nonzero(w)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        w = (w * self.field.inv(int(w[c]))) % self.field.p
        self._rows.append(w)
        self._pivots.append(c)
        return True

    def __contains__(self, v) -> bool:
        return not self.reduce(v).any()


class CoordinateSolver:
    """Solve ``G c = t`` for many targets against fixed generator columns.

    Dependent generators are allowed; the solution then puts zero weight on
    every generator outside a deterministic independent subset.
    """

    def __init__(self, field: PrimeField, generators: Sequence[np.ndarray] | np.ndarray, n: int | None = None):
        self.field = field
        gens = [np.asarray(g, dtype=np.int64) % field.p for g in generators]
        if n is None:
            if not gens:
                raise ValueError("vector length required when there are no generators")
            n = len(gens[0])
        if any(len(g) != n for g in gens):
            raise ValueError("generators of unequal length")
        self.n = n
        self.k = len(gens)
        G = np.stack(gens, axis=1) if gens else np.zeros((n, 0), dtype=np.int64)
        self._G = G
        # independent columns of G
        if self.k:
            _, cols = _rref_array(field, G)
        else:
            cols = []
        self._cols = cols
        Gc = G[:, cols]
        # rows of Gc forming an invertible square block
        if cols:
            _, rows = _rref_array(field, Gc.T)
        else:
            rows = []
        self._rows = rows
        sq = Gc[rows, :]
        size = len(cols)
        aug = np.concatenate([sq, np.eye(size, dtype=np.int64)], axis=1)
        red, _ = _rref_array(field, aug)
        self._inv = red[:, size:]

    def solve(self, target) -> np.ndarray | None:
        t = np.asarray(target, dtype=np.int64) % self.field.p
        if len(t) != self.n:
            raise ValueError("target length mismatch")
        c_sub = self.field.matmul(self._inv, t[self._rows]) if self._cols else np.zeros(0, dtype=np.int64)
        c = np.zeros(self.k, dtype=np.int64)
        c[self._cols] = c_sub
        if not np.array_equal(self.field.matmul(self._G, c), t):
            return None
        return c

    def express(self, target) -> np.ndarray:
        c = self.solve(target)
        if c is None:
            raise NotInSpan("target is not in the span of the generators")
        return c


def solve_in_span(
    field: PrimeField,
    targets: Iterable[np.ndarray],
    generators: Sequence[np.ndarray],
    n: int | None = None,
) -> list[np.ndarray | None]:
    """Coordinates of each target over the generators, or None if outside the span."""
    targets = [np.asarray(t, dtype=np.int64) for t in targets]
    if n is None and not generators and targets:
        n = len(targets[0])
    solver = CoordinateSolver(field, generators, n)
    return [solver.solve(t) for t in targets]


def express_in_span(field: PrimeField, target, generators: Sequence[np.ndarray]) -> np.ndarray:
    """Like `solve_in_span` for a single target, raising `NotInSpan`."""
    solver = CoordinateSolver(field, generators, len(target))
    return solver.express(target)
