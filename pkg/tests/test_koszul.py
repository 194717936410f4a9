from math import comb

import numpy as np
import pytest

from codepth3.exactlin import FieldMatrix, rank
from codepth3.koszul import (
    DegreeOutOfRange,
    HomologyBasis,
    KoszulComplex,
    NotACycle,
    degree_bound,
    differential_matrix,
    homology_basis,
    merge_sign,
    reduce_to_homology,
    wedge,
)

VARS = {"x": 0, "y": 1, "z": 2}


def cyc(K, P, terms):
    """{'xy': 'x^3*z', ...} -> Koszul element."""
    return K.from_polys({tuple(VARS[c] for c in name): P(text) for name, text in terms.items()})


def to_terms(K, u):
    """Koszul element -> {subset: polynomial}, to move it into another ring."""
    return {S: K.R.to_polynomial(c) for S, c in u.coefficients.items()}


def push(K_src, K_dst, u):
    terms = {S: f for S, f in to_terms(K_src, u).items() if f}
    if not terms:
        return K_dst.zero(u.i, u.j)
    # rebuild in the target ring from the same polynomials
    return K_dst.from_polys(terms)


def random_element(K, rng, i, j):
    p = K.field.p
    return K.element(i, j, rng.integers(0, p, K.dim(i, j)))


G1_E = [
    {"x": "x^3", "y": "-y^2*z"},
    {"x": "z^3", "y": "-y^3"},
    {"x": "y*z"},
    {"y": "z^2"},
    {"x": "y^2"},
]
G1_F = [
    {"xy": "-y*z", "xz": "y^2"},
    {"xz": "y*z"},
    {"xy": "x^3*z"},
    {"xy": "x*z^3"},
    {"xy": "x^3*y - z^4"},
    {"xz": "x^3*z^2"},
]
G1_G = [{"xyz": "x^4*y"}, {"xyz": "x^3*z^2"}]

B1_E = [{"x": "x^2"}, {"z": "z^2"}, {"x": "x*y"}, {"y": "z^2"}]
B1_F = [{"yz": "z^2"}, {"xy": "x^2"}, {"xz": "x^2*z^2"}, {"xz": "x*y*z"}]
B1_G = [{"xyz": "x^2*z^2"}]


@pytest.fixture(scope="module")
def KH(corpus):
    out = {}
    for name, R in corpus.items():
        K = KoszulComplex(R)
        out[name] = (K, HomologyBasis(R, K=K))
    return out


# ---------- differentials ----------

def test_d_squared_zero(corpus, KH):
    for name, (K, H) in KH.items():
        for j in range(0, H.bounds[3] + 2):
            for i in (2, 3):
                D1 = K.differential_matrix(i - 1, j)
                D2 = K.differential_matrix(i, j)
                if D1.size and D2.size:
                    assert not K.field.matmul(D1, D2).any(), (name, i, j)


def test_d3_formula_in_b1(KH, P):
    K, _ = KH["b1"]
    for a in ["x*y", "z^2", "x^2 + y*z", "y^3"]:
        u = cyc(K, P, {"xyz": a})
        expect = cyc(K, P, {"yz": f"({a})*x", "xz": f"-({a})*y", "xy": f"({a})*z"})
        assert K.d(u) == expect


def test_d1_is_multiplication(KH, P):
    K, _ = KH["g1"]
    u = cyc(K, P, {"x": "y*z", "y": "x^2", "z": "y^2"})
    (c,) = K.d(u).coefficients.values()
    assert c == K.R.element(P("x*y*z + x^2*y + y^2*z"))


def test_piece_dimensions(corpus):
    for R in corpus.values():
        K = KoszulComplex(R)
        for j in range(10):
            for i in range(4):
                assert K.dim(i, j) == comb(3, i) * R.hilbert(j - i)
            assert K.dim(2, j) == 3 * R.hilbert(j - 2)


def test_differential_matrix_shape_and_errors(corpus):
    R = corpus["b1"]
    M = differential_matrix(R, 2, 5)
    assert (M.rows, M.cols) == (3 * R.hilbert(4), 3 * R.hilbert(3))
    with pytest.raises(DegreeOutOfRange):
        differential_matrix(R, 0, 3)
    with pytest.raises(DegreeOutOfRange):
        differential_matrix(R, 4, 3)
    with pytest.raises(DegreeOutOfRange):
        differential_matrix(R, 1, -1)


# ---------- wedge ----------

def test_merge_sign():
    assert merge_sign((0,), (1,)) == 1
    assert merge_sign((1,), (0,)) == -1
    assert merge_sign((0,), (0, 1)) == 0
    assert merge_sign((1,), (0, 2)) == -1
    assert merge_sign((0, 2), (1,)) == -1
    assert merge_sign((2,), (0, 1)) == 1


def test_ex_wedge_ey(KH, P):
    K, _ = KH["g1"]
    ex, ey = cyc(K, P, {"x": "1"}), cyc(K, P, {"y": "1"})
    exy = cyc(K, P, {"xy": "1"})
    assert wedge(ex, ey) == exy
    assert wedge(ey, ex) == -exy
    assert wedge(ex, ex).is_zero()


def test_g1_e1_f1_product(KH, P):
    K, _ = KH["g1"]
    e1, f1 = cyc(K, P, G1_E[0]), cyc(K, P, G1_F[0])
    assert wedge(e1, f1) == cyc(K, P, {"xyz": "y^4*z"})
    e2, f2 = cyc(K, P, G1_E[1]), cyc(K, P, G1_F[1])
    assert wedge(e2, f2) == wedge(e1, f1)


def test_b1_e1_e2_product(KH, P):
    K, _ = KH["b1"]
    prod = wedge(cyc(K, P, B1_E[0]), cyc(K, P, B1_E[1]))
    assert prod == cyc(K, P, {"xz": "x^2*z^2"}) == cyc(K, P, B1_F[2])


def test_b1_e1_e4_is_boundary(KH, P):
    K, H = KH["b1"]
    prod = wedge(cyc(K, P, B1_E[0]), cyc(K, P, B1_E[3]))
    assert prod == cyc(K, P, {"xy": "x^2*z^2"})
    assert prod == K.d(cyc(K, P, {"xyz": "x^2*z"}))
    assert not H.reduce(prod).any()


def test_g1_e1_e4_is_boundary(KH, P):
    K, H = KH["g1"]
    prod = wedge(cyc(K, P, G1_E[0]), cyc(K, P, G1_E[3]))
    assert prod == K.d(cyc(K, P, {"xyz": "x^3*z"}))
    assert not reduce_to_homology(prod, H).any()


def test_leibniz(KH):
    rng = np.random.default_rng(0)
    for name in ("g1", "b4"):
        K, _ = KH[name]
        for _ in range(10):
            a, b = int(rng.integers(1, 3)), 1
            ja, jb = a + int(rng.integers(0, 4)), b + int(rng.integers(0, 4))
            u, v = random_element(K, rng, a, ja), random_element(K, rng, b, jb)
            lhs = K.d(wedge(u, v))
            sign = -1 if a % 2 else 1
            rhs = wedge(K.d(u), v) + wedge(u, K.d(v)).scale(sign)
            assert lhs == rhs


def test_graded_commutativity(KH):
    rng = np.random.default_rng(1)
    K, _ = KH["g2"]
    for a, b in [(1, 1), (1, 2), (2, 1), (0, 2), (1, 0)]:
        u = random_element(K, rng, a, a + 2)
        v = random_element(K, rng, b, b + 1)
        sign = -1 if (a * b) % 2 else 1
        assert wedge(u, v) == wedge(v, u).scale(sign)


# ---------- degree bounds ----------

def test_degree_bounds(corpus, Q):
    b1 = corpus["b1"]
    assert degree_bound(b1, 1) == 3
    assert degree_bound(b1, 3) == 7 >= 4 + 3
    assert degree_bound(Q("x^2*y^3"), 1) == 5
    assert degree_bound(Q("x^2*y^3"), 2) is None
    assert degree_bound(corpus["g1"], 3) >= 8
    assert degree_bound(b1, 3, override=5) == 5


# ---------- homology ----------

@pytest.mark.parametrize(
    "name,ranks",
    [("g1", (5, 6, 2)), ("g2", (6, 7, 2)), ("g3", (7, 8, 2)), ("g4", (8, 9, 2)),
     ("b1", (4, 4, 1)), ("b2", (5, 5, 1)), ("b3", (6, 8, 3)), ("b4", (7, 9, 3))],
)
def test_corpus_ranks(KH, name, ranks):
    assert KH[name][1].ranks() == ranks


def test_complete_intersection_ranks(Q):
    assert homology_basis(Q("x^2, y^2, z^2")).ranks() == (3, 3, 1)
    assert homology_basis(Q("x^3, y^2, z^4")).ranks() == (3, 3, 1)


def test_representatives_are_cycles_and_independent(KH):
    for name, (K, H) in KH.items():
        for (i, j), piece in H.pieces.items():
            for v in piece.reps:
                assert K.is_cycle(K.element(i, j, v))
            M = np.stack(piece.reps + piece.boundaries)
            assert rank(FieldMatrix(K.field, M)) == len(piece.reps) + len(piece.boundaries), (name, i, j)


def test_h3_is_socle_times_top(corpus, KH):
    for name, (K, H) in KH.items():
        R = corpus[name]
        soc = R.socle_basis()
        assert H.rank(3) == len(soc)
        assert sorted(H.degrees(3)) == sorted(s.degree + 3 for s in soc)
        for u in H.reps[3]:
            (c,) = u.coefficients.values()
            assert R.is_socle_element(c)


def test_reduce_units_boundaries_and_perturbations(KH):
    rng = np.random.default_rng(4)
    for name in ("g1", "b3"):
        K, H = KH[name]
        for i in (1, 2, 3):
            for k, u in enumerate(H.reps[i]):
                c = H.reduce(u)
                assert c.tolist() == [1 if t == k else 0 for t in range(H.rank(i))]
                if i < 3:
                    b = K.d(random_element(K, rng, i + 1, u.j))
                    assert not H.reduce(b).any()
                    assert np.array_equal(H.reduce(u + b), c)


def test_reduce_rejects_non_cycle(KH, P):
    K, H = KH["g1"]
    with pytest.raises(NotACycle):
        H.reduce(cyc(K, P, {"x": "x"}))


def test_reduce_outside_bounds_is_zero(KH):
    K, H = KH["g2"]
    # R vanishes from degree 6 on, so K_{1,20} is zero
    assert not H.reduce(K.zero(1, 20)).any()


# ---------- the explicit cycles of the g1 and b1 computations ----------

@pytest.mark.parametrize("name,gens,i", [
    ("g1", G1_E, 1), ("g1", G1_F, 2), ("g1", G1_G, 3),
    ("b1", B1_E, 1), ("b1", B1_F, 2), ("b1", B1_G, 3),
])
def test_explicit_cycles_form_homology_bases(KH, P, name, gens, i):
    K, H = KH[name]
    elems = [cyc(K, P, t) for t in gens]
    assert all(K.is_cycle(u) for u in elems)
    C = np.stack([H.reduce(u) for u in elems])
    assert C.shape == (H.rank(i), H.rank(i))
    assert rank(FieldMatrix(K.field, C)) == H.rank(i)


def test_explicit_cycles_as_representatives(KH, P):
    K, H = KH["b1"]
    reps = {1: [cyc(K, P, t) for t in B1_E], 2: [cyc(K, P, t) for t in B1_F], 3: [cyc(K, P, t) for t in B1_G]}
    H2 = H.with_representatives(reps)
    assert H2.ranks() == H.ranks()
    # representatives are regrouped by internal degree; locate f3
    k = next(t for t, u in enumerate(H2.reps[2]) if u == reps[2][2])
    prod = wedge(reps[1][0], reps[1][1])
    assert H2.reduce(prod).tolist() == [1 if t == k else 0 for t in range(4)]
    assert H2.reduce(wedge(reps[1][0], reps[2][0])).tolist() == [1]


# ---------- functoriality along the corpus chains ----------

@pytest.mark.parametrize("chain", [("g1", "g2", "g3", "g4"), ("b1", "b2", "b3", "b4")])
def test_cycles_and_boundaries_map_forward(KH, chain):
    rng = np.random.default_rng(6)
    for src, dst in zip(chain, chain[1:]):
        Ks, Hs = KH[src]
        Kd, Hd = KH[dst]
        for i in (1, 2, 3):
            for u in Hs.reps[i]:
                assert Kd.is_cycle(push(Ks, Kd, u)), (src, dst, i, u.j)
            if i < 3:
                for u in Hs.reps[i][:3]:
                    b = Ks.d(random_element(Ks, rng, i + 1, u.j))
                    pb = push(Ks, Kd, b)
                    assert Kd.is_cycle(pb)
                    assert not Hd.reduce(pb).any()


def test_g1_cycles_pushed_into_g2(KH, P):
    Ks, _ = KH["g1"]
    Kd, Hd = KH["g2"]
    for t in G1_E + G1_F + G1_G:
        u = push(Ks, Kd, cyc(Ks, P, t))
        assert Kd.is_cycle(u)
