"""Invariant suite run by ``codepth3 verify`` and by the tests."""

from __future__ import annotations

from collections import OrderedDict

import numpy as np

from .koszul import HomologyBasis, KoszulComplex, KoszulElement
from .toralg import Computation, build_mult_tables, invariants_pqr, random_invertible


def random_element(K: KoszulComplex, rng: np.random.Generator, i: int, j: int) -> KoszulElement:
    return K.element(i, j, K.field.random_vector(rng, K.dim(i, j)))


def _nonempty_pieces(K: KoszulComplex, top: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(K.n + 1) for j in range(i, top + 1) if K.dim(i, j)]


def check_d_squared(K: KoszulComplex, top: int) -> bool:
    f = K.field
    for i in range(2, K.n + 1):
        for j in range(i, top + 1):
            if f.matmul(K.differential_matrix(i - 1, j), K.differential_matrix(i, j)).any():
                return False
    return True


def check_leibniz(K: KoszulComplex, rng: np.random.Generator, top: int, pairs: int = 10) -> bool:
    """d(u v) = d(u) v + (-1)^|u| u d(v) on random homogeneous u, v."""
    pieces = _nonempty_pieces(K, top)
    if not pieces:
        return True
    done = 0
    attempts = 0
    while done < pairs and attempts < 50 * pairs:
        attempts += 1
        (i1, j1) = pieces[rng.integers(len(pieces))]
        (i2, j2) = pieces[rng.integers(len(pieces))]
        if i1 + i2 > K.n or i1 + i2 == 0:
            continue
        u = random_element(K, rng, i1, j1)
        v = random_element(K, rng, i2, j2)
        lhs = K.d(K.wedge(u, v))
        terms = []
        if i1:
            terms.append(K.wedge(K.d(u), v))
        if i2:
            w = K.wedge(u, K.d(v))
            terms.append(w if i1 % 2 == 0 else -w)
        rhs = terms[0]
        for t in terms[1:]:
            rhs = rhs + t
        if lhs != rhs:
            return False
        done += 1
    return True


def check_graded_commutativity(K: KoszulComplex, rng: np.random.Generator, top: int, pairs: int = 10) -> bool:
    pieces = _nonempty_pieces(K, top)
    done = 0
    attempts = 0
    while pieces and done < pairs and attempts < 50 * pairs:
        attempts += 1
        (i1, j1) = pieces[rng.integers(len(pieces))]
        (i2, j2) = pieces[rng.integers(len(pieces))]
        if i1 + i2 > K.n:
            continue
        u = random_element(K, rng, i1, j1)
        v = random_element(K, rng, i2, j2)
        uv = K.wedge(u, v)
        vu = K.wedge(v, u)
        if uv != (vu if (i1 * i2) % 2 == 0 else -vu):
            return False
        done += 1
    return True


def check_basis_change(comp: Computation, rng: np.random.Generator, trials: int = 5) -> bool:
    f = comp.R.field
    H, T = comp.H, comp.tables
    base = invariants_pqr(T)
    for _ in range(trials):
        P = [random_invertible(f, H.rank(i), rng) for i in (1, 2, 3)]
        if invariants_pqr(T.change_basis(*P)) != base:
            return False
    return True


def check_boundary_perturbation(comp: Computation, rng: np.random.Generator, trials: int = 5) -> bool:
    base = invariants_pqr(comp.tables)
    for _ in range(trials):
        H2 = comp.H.perturbed(rng)
        T2 = build_mult_tables(H2)
        if invariants_pqr(T2) != base or not T2.antisymmetric() or not T2.symmetric():
            return False
    return True


def check_socle_annihilated(comp: Computation) -> bool:
    return all(comp.R.is_socle_element(s) for s in comp.socle)


def run_audit(comp: Computation, seed: int = 0, pairs: int = 10, trials: int = 5) -> "OrderedDict[str, bool]":
    """All invariant checks for an eligible ring, in a fixed order."""
    if comp.H is None:
        raise ValueError("audit needs an eligible ring")
    rng = np.random.default_rng(seed)
    H: HomologyBasis = comp.H
    K = H.K
    top = max((b for b in H.bounds.values() if b is not None), default=0)
    h1, h2, h3 = H.ranks()
    rep = comp.report
    out: OrderedDict[str, bool] = OrderedDict()
    out["d_squared"] = check_d_squared(K, top)
    out["leibniz"] = check_leibniz(K, rng, top, pairs)
    out["graded_commutativity"] = check_graded_commutativity(K, rng, top, pairs)
    out["euler"] = 1 - h1 + h2 - h3 == 0
    out["mu_equals_h1"] = rep.mu == h1
    out["type_equals_h3"] = rep.type == h3
    out["socle_annihilated"] = check_socle_annihilated(comp)
    out["table_antisymmetry"] = comp.tables.antisymmetric()
    out["table_symmetry"] = comp.tables.symmetric()
    out["basis_change_invariance"] = check_basis_change(comp, rng, trials)
    out["boundary_perturbation_invariance"] = check_boundary_perturbation(comp, rng, trials)
    return out
