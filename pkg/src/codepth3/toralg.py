"""Multiplication in A = H(K) and classification of codepth-3 Tor algebras.

The class is read off three basis-free ranks:

* ``p`` -- rank of the span of A_1 * A_1 in A_2,
* ``q`` -- rank of the span of A_1 * A_2 in A_3,
* ``r`` -- rank of A_2 -> Hom(A_1, A_3), f |-> (e |-> e f).

Normal forms give C(3) = (3, 1, 3), T = (3, 0, 0), B = (1, 1, 2),
G(r) = (0, 1, r) and H(p, q) = (p, q, q).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exactlin import FieldMatrix, PrimeField, _rref_array, rank
from .koszul import HomologyBasis
from .quotient import GateResult, QuotientRing


class Unclassified(RuntimeError):
    def __init__(self, pqr):
        super().__init__(f"no codepth-3 class has invariants (p, q, r) = {tuple(pqr)}")
        self.pqr = tuple(pqr)


class PipelineError(RuntimeError):
    """An upstream failure, tagged with the pipeline stage it came from."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause


class InvariantViolation(RuntimeError):
    def __init__(self, check: str, detail: str = ""):
        super().__init__(f"invariant {check} violated" + (f": {detail}" if detail else ""))
        self.check = check


@dataclass
class MultTables:
    """t11[a, b] in A_2 coordinates; t12[a, b] in A_3 coordinates.

    t21[b, a] holds the products taken in the opposite order, f_b * e_a,
    kept only so that graded commutativity can be checked.
    """

    field: PrimeField
    t11: np.ndarray
    t12: np.ndarray
    t21: np.ndarray

    def antisymmetric(self) -> bool:
        p = self.field.p
        t = self.t11
        if not np.array_equal(t, (-t.transpose(1, 0, 2)) % p):
            return False
        return not any(t[a, a].any() for a in range(t.shape[0]))

    def symmetric(self) -> bool:
        return bool(np.array_equal(self.t12, self.t21.transpose(1, 0, 2)))

    def change_basis(self, P1: np.ndarray, P2: np.ndarray, P3: np.ndarray) -> MultTables:
        """Tables in the basis e'_a = sum_c P1[a, c] e_c (likewise P2, P3)."""
        f = self.field
        inv2 = _inverse(f, P2)
        inv3 = _inverse(f, P3)
        t11 = _bilinear(f, self.t11, P1, P1, inv2)
        t12 = _bilinear(f, self.t12, P1, P2, inv3)
        t21 = _bilinear(f, self.t21, P2, P1, inv3)
        return MultTables(f, t11, t12, t21)


def _inverse(field: PrimeField, P: np.ndarray) -> np.ndarray:
    n = P.shape[0]
    if n == 0:
        return P.copy()
    red, piv = _rref_array(field, np.concatenate([P, np.eye(n, dtype=np.int64)], axis=1))
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is not invertible")
    return red[:, n:]


def _bilinear(field: PrimeField, T: np.ndarray, A: np.ndarray, B: np.ndarray, Cinv: np.ndarray) -> np.ndarray:
    # T'[a, b, :] = sum_{c, d} A[a, c] B[b, d] T[c, d, :] re-expressed via Cinv
    n1, n2, n3 = T.shape
    if 0 in (n1, n2, n3):
        return np.zeros((A.shape[0], B.shape[0], Cinv.shape[1] if Cinv.size else n3), dtype=np.int64)
    X = field.matmul(A, T.reshape(n1, n2 * n3)).reshape(n1, n2, n3)
    X = field.matmul(B, X.transpose(1, 0, 2).reshape(n2, n1 * n3)).reshape(n2, n1, n3).transpose(1, 0, 2)
    return field.matmul(X.reshape(n1 * n2, n3), Cinv).reshape(n1, n2, n3)


def random_invertible(field: PrimeField, n: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        P = rng.integers(0, field.p, size=(n, n), dtype=np.int64)
        if n == 0 or rank(FieldMatrix(field, P)) == n:
            return P


def build_mult_tables(H: HomologyBasis) -> MultTables:
    """Products of representatives reduced to homology.

    Products landing above the degree bound of their target are zero in
    homology and are not computed.
    """
    K = H.K
    f = H.field
    e, fs = H.reps[1], H.reps[2]
    l1, l2, l3 = H.rank(1), H.rank(2), H.rank(3)
    t11 = np.zeros((l1, l1, l2), dtype=np.int64)
    t12 = np.zeros((l1, l2, l3), dtype=np.int64)
    t21 = np.zeros((l2, l1, l3), dtype=np.int64)
    if l2:
        for a, u in enumerate(e):
            for b, v in enumerate(e):
                if H.in_range(2, u.j + v.j):
                    t11[a, b] = H.reduce(K.wedge(u, v))
    if l3:
        for a, u in enumerate(e):
            for b, v in enumerate(fs):
                if H.in_range(3, u.j + v.j):
                    t12[a, b] = H.reduce(K.wedge(u, v))
                    t21[b, a] = H.reduce(K.wedge(v, u))
    return MultTables(f, t11, t12, t21)


@dataclass(frozen=True)
class MultInvariants:
    p: int
    q: int
    r: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.p, self.q, self.r)


def invariants_pqr(T: MultTables) -> MultInvariants:
    f = T.field
    l1, _, l2 = T.t11.shape
    _, m, l3 = T.t12.shape

    def rk(mat):
        if mat.size == 0:
            return 0
        return rank(FieldMatrix(f, mat))

    p = rk(T.t11.reshape(l1 * l1, l2))
    q = rk(T.t12.reshape(l1 * m, l3))
    r = rk(T.t12.transpose(1, 0, 2).reshape(m, l1 * l3))
    return MultInvariants(p, q, r)


@dataclass(frozen=True)
class ClassLabel:
    name: str
    param: tuple[int, ...] | int | None = None

    def __str__(self):
        if self.param is None:
            return self.name
        if isinstance(self.param, tuple):
            return f"{self.name}({','.join(map(str, self.param))})"
        return f"{self.name}({self.param})"

    @property
    def classified(self) -> bool:
        return self.name != "UNCLASSIFIED"

    def to_json(self):
        param = list(self.param) if isinstance(self.param, tuple) else self.param
        return {"name": self.name, "param": param}


def classify(inv: MultInvariants) -> ClassLabel:
    p, q, r = inv.as_tuple()
    if (p, q, r) == (3, 1, 3):
        return ClassLabel("C", 3)
    if (p, q) == (3, 0):
        return ClassLabel("T")
    if (p, q, r) == (1, 1, 2):
        return ClassLabel("B")
    if p == 0 and q == 1 and r >= 2:
        return ClassLabel("G", r)
    if r == q:
        return ClassLabel("H", (p, q))
    return ClassLabel("UNCLASSIFIED", (p, q, r))


def classify_strict(inv: MultInvariants) -> ClassLabel:
    label = classify(inv)
    if not label.classified:
        raise Unclassified(inv.as_tuple())
    return label


@dataclass
class ClassificationReport:
    char: int
    order: str
    ideal: list[str]
    gate: str
    mu: int | None = None
    type: int | None = None
    ranks: list[int] | None = None
    hilbert: list[int] | None = None
    pqr: list[int] | None = None
    label: ClassLabel | None = None
    checks: dict[str, str] = field(default_factory=dict)

    @property
    def eligible(self) -> bool:
        return self.gate == GateResult.ELIGIBLE.value

    def failed_checks(self) -> list[str]:
        return [k for k, v in self.checks.items() if v == "fail"]

    def to_json(self) -> dict:
        return {
            "char": self.char,
            "order": self.order,
            "ideal": list(self.ideal),
            "gate": self.gate,
            "mu": self.mu,
            "type": self.type,
            "ranks": self.ranks,
            "hilbert": self.hilbert,
            "pqr": self.pqr,
            "class": self.label.to_json() if self.label else None,
            "checks": dict(self.checks),
        }

    @classmethod
    def from_json(cls, d: dict) -> ClassificationReport:
        label = None
        if d.get("class"):
            param = d["class"]["param"]
            if isinstance(param, list):
                param = tuple(param)
            label = ClassLabel(d["class"]["name"], param)
        return cls(
            char=d["char"], order=d["order"], ideal=list(d["ideal"]), gate=d["gate"],
            mu=d["mu"], type=d["type"], ranks=d["ranks"], hilbert=d["hilbert"],
            pqr=d["pqr"], label=label, checks=dict(d["checks"]),
        )


def _is_artinian(R: QuotientRing) -> bool:
    pure = set()
    for m in R.leads:
        support = [k for k, e in enumerate(m) if e]
        if len(support) == 1:
            pure.add(support[0])
    return len(pure) == R.nvars


@dataclass
class Computation:
    """Everything full_report computes, kept for callers that want more than the report."""

    R: QuotientRing
    report: ClassificationReport
    H: HomologyBasis | None = None
    tables: MultTables | None = None
    socle: list = field(default_factory=list)


def analyze(R: QuotientRing, max_degree: int | None = None, ideal_text: Sequence[str] | None = None) -> Computation:
    """Run the whole pipeline on one quotient ring."""
    if R.nvars != 3:
        raise ValueError("classification needs exactly 3 variables")
    ideal = list(ideal_text) if ideal_text is not None else [str(g) for g in R.generators]
    report = ClassificationReport(
        char=R.field.p, order=R.ring.order.kind, ideal=ideal, gate=""
    )
    try:
        gate = R.codepth3_gate()
    except Exception as exc:
        raise PipelineError("gate", exc) from exc
    report.gate = gate.value
    if gate is not GateResult.ELIGIBLE:
        return Computation(R, report)

    try:
        mu = R.min_generator_count()
        socle = R.socle_basis()
        top = R.socle_scan_bound() + 1
        if max_degree is not None:
            top = min(top, max_degree)
        report.hilbert = R.hilbert_values(top)
    except Exception as exc:
        raise PipelineError("quotient", exc) from exc
    try:
        H = HomologyBasis(R, max_degree)
    except Exception as exc:
        raise PipelineError("koszul", exc) from exc
    try:
        T = build_mult_tables(H)
        inv = invariants_pqr(T)
    except Exception as exc:
        raise PipelineError("toralg", exc) from exc

    ranks = list(H.ranks())
    n = len(socle)
    report.mu = mu
    report.type = n
    report.ranks = ranks
    report.pqr = list(inv.as_tuple())
    report.label = classify(inv)
    report.checks = consistency_checks(R, H, T, inv, mu, n, report.label)
    return Computation(R, report, H, T, socle)


def consistency_checks(R, H, T, inv, mu, n, label) -> dict[str, str]:
    h1, h2, h3 = H.ranks()

    def ok(b):
        return "pass" if b else "fail"

    checks = {
        "euler": ok(1 - h1 + h2 - h3 == 0),
        "mu_equals_h1": ok(mu == h1),
        "type_equals_h3": ok(n == h3),
        "h2_rank_identity": ok(h2 == (mu - 1) + n),
        "table_antisymmetry": ok(T.antisymmetric()),
        "table_symmetry": ok(T.symmetric()),
        "pqr_bounds": ok(inv.p <= h2 and inv.q <= h3 and inv.r <= h2),
    }
    # advisory: known structural restrictions, reported as warnings
    if label.name == "G" and n == 1:
        checks["gorenstein_mu_odd_ge5"] = "pass" if (mu % 2 == 1 and mu >= 5 and label.param == mu) else "warn"
    else:
        checks["gorenstein_mu_odd_ge5"] = "skip"
    if label.name == "B" and n == 2 and _is_artinian(R):
        checks["artinian_type2_B_mu_odd_ge5"] = "pass" if (mu % 2 == 1 and mu >= 5) else "warn"
    else:
        checks["artinian_type2_B_mu_odd_ge5"] = "skip"
    return checks


def full_report(R: QuotientRing, max_degree: int | None = None, ideal_text: Sequence[str] | None = None) -> ClassificationReport:
    return analyze(R, max_degree, ideal_text).report
