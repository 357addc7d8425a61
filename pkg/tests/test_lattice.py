from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tworefl import intmat
from tworefl.discform import discriminant_form
from tworefl.errors import LatticeError
from tworefl.lattice import (
    GramLattice,
    ade_root_count,
    direct_sum,
    divisibility,
    hyperbolic_plane,
    orth_complement,
    parse_lattice,
    project_to,
    rank_one,
    root_lattice,
    root_sublattice,
    roots,
    short_vectors,
    signature,
)

import oracles


def lat(G):
    return GramLattice(tuple(map(tuple, G)))


# -- integer linear algebra ------------------------------------------------------------

small_int_matrix = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n))


@given(small_int_matrix)
def test_det_matches_rational_elimination(M):
    assert intmat.det(M) == oracles.frac_det(M)


@given(small_int_matrix)
def test_smith_form_is_diagonal_and_divides(M):
    U, D, V = intmat.smith(M)
    assert intmat.matmul(intmat.matmul(U, M), V) == D
    assert abs(intmat.det(U)) == 1 and abs(intmat.det(V)) == 1
    diag = [D[i][i] for i in range(len(D))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D)) if i != j)
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@given(small_int_matrix)
def test_left_kernel_annihilates(M):
    K = intmat.left_kernel(M)
    for row in K:
        assert intmat.vecmat(row, M) == [0] * len(M[0])
    assert len(K) == len(M) - intmat.rank(M)


def test_lll_reduces_a_skewed_basis():
    G = [[2, 7], [7, 26]]
    T = intmat.lll_gram(G)
    assert abs(intmat.det(T)) == 1
    R = intmat.congruent(T, G)
    assert sorted([R[0][0], R[1][1]]) == [2, 2] and abs(R[0][1]) == 1


# -- construction and signature -----------------------------------------------------------

def test_signature_examples():
    assert signature(hyperbolic_plane()) == (1, 1)
    assert signature(parse_lattice("<4>+<4>+<-2>")) == (2, 1)
    assert signature(parse_lattice("2U+E8")) == (2, 10)


def test_signature_degenerate_errors():
    with pytest.raises(LatticeError, match="degenerate"):
        signature(lat([[0, 0], [0, 0]]))


def test_direct_sum_examples():
    UU = direct_sum(hyperbolic_plane(), hyperbolic_plane())
    assert [list(r) for r in UU.gram] == [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    assert direct_sum(rank_one(-2), rank_one(-2)).gram == parse_lattice("2A1").gram
    assert signature(direct_sum(hyperbolic_plane(), rank_one(4))) == (2, 1)


def test_odd_lattice_rejected():
    with pytest.raises(LatticeError):
        lat([[1, 0], [0, 2]])


def test_parse_errors():
    with pytest.raises(LatticeError):
        parse_lattice("2U+Q7")


@given(st.integers(0, 10**6))
def test_signature_additive(seed):
    rng = oracles.rng_for(seed)
    A = oracles.random_even_lattice(rng, max_rank=5)
    B = oracles.random_even_lattice(rng, max_rank=5)
    sa, sb = signature(lat(A)), signature(lat(B))
    s = signature(direct_sum(lat(A), lat(B)))
    assert s == (sa[0] + sb[0], sa[1] + sb[1])
    assert sa == oracles.inertia(A)


@given(st.integers(0, 10**6))
def test_det_equals_discriminant_order(seed):
    G = oracles.random_even_lattice(oracles.rng_for(seed), max_rank=6, max_det=200)
    assert discriminant_form(lat(G)).order == abs(oracles.frac_det(G))


# -- divisibility ---------------------------------------------------------------------------

def test_divisibility_examples():
    assert divisibility((1, -1), hyperbolic_plane()) == 1
    assert divisibility((0, 0, 0, 0, 1), parse_lattice("2U+<-2>")) == 2
    assert divisibility((1, 2, 0, 0), parse_lattice("2U")) == 1


def test_divisibility_errors():
    with pytest.raises(LatticeError):
        divisibility((0, 0), hyperbolic_plane())
    with pytest.raises(LatticeError, match="not primitive"):
        divisibility((2, 0), hyperbolic_plane())


# -- orthogonal complements and projections --------------------------------------------------

def test_orth_complement_case_a_shape():
    L = parse_lattice("2U+E8")
    # m in E8 with (m, m) = -620 would be overkill here; any negative vector of M works
    m = (0, 0, 0, 0) + (1, 0, 0, 0, 0, 0, 0, 0)
    S = [(1, 2, 0, 0) + (0,) * 8, (0, 0, 1, 2) + (0,) * 8, m]
    C = orth_complement(S, L)
    assert C.rank == L.rank - 3
    assert signature(C.lattice) == (0, C.rank)
    # the two hyperbolic pieces contribute <-4> + <-4>
    v1 = (1, -2, 0, 0) + (0,) * 8
    assert L.norm(v1) == -4 and all(L.pair(v1, s) == 0 for s in S)
    assert abs(C.lattice.det) == 16 * abs(orth_complement([m[4:]], root_lattice("E", 8)).lattice.det)


def test_orth_complement_of_everything_is_zero():
    L = parse_lattice("U+A2")
    assert orth_complement([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)], L).rank == 0


def test_orth_complement_isotropic_is_flagged_degenerate():
    C = orth_complement([(1, 0)], hyperbolic_plane())
    assert C.rank == 1 and C.degenerate


@given(st.integers(0, 10**6))
def test_double_complement_contains_span(seed):
    rng = oracles.rng_for(seed)
    G = oracles.random_even_lattice(rng, max_rank=6)
    L = lat(G)
    v = tuple(rng.randint(-3, 3) for _ in range(L.rank))
    if not any(v):
        return
    C = orth_complement([v], L)
    CC = orth_complement(list(C.basis), L)
    # v lies in the Q-span of CC's basis
    assert intmat.rank([list(b) for b in CC.basis] + [list(v)]) == intmat.rank([list(b) for b in CC.basis])


def test_project_examples():
    L = parse_lattice("2U+A2")
    K = [(1, 2, 0, 0, 0, 0), (0, 0, 0, 0, 1, 0)]
    v = (1, 2, 0, 0, 0, 0)
    proj, nrm = project_to(v, K, L)
    assert proj == tuple(Fraction(x) for x in v) and nrm == L.norm(v)
    w = (0, 0, 1, 0, 0, 0)
    proj, nrm = project_to(w, K, L)
    assert nrm == 0 and not any(proj)
    # one-dimensional formula c^2 / (m, m) for a root l and m in an A2
    A2 = root_lattice("A", 2)
    m, l = (1, 0), (0, 1)
    c = A2.pair(l, m)
    _, nrm = project_to(l, [m], A2)
    assert nrm == Fraction(c * c, A2.norm(m)) and nrm < 0


# -- short vectors and roots ----------------------------------------------------------------

def test_short_vector_examples():
    assert short_vectors(rank_one(-2), 2) == [(1,)]
    assert len(short_vectors(root_lattice("A", 2), 2)) == 3
    assert len(roots(root_lattice("E", 8))) == 120
    assert roots(rank_one(-4)) == []


def test_indefinite_rejected():
    with pytest.raises(LatticeError, match="definite"):
        short_vectors(hyperbolic_plane(), 4)


def random_definite(rng, rank, max_box=200_000):
    """Random definite even Gram of B^T B type with a box oracle of manageable size."""
    while True:
        B = [[rng.randint(-2, 2) for _ in range(rank)] for _ in range(rank)]
        if oracles.frac_det(B) == 0:
            continue
        G = [[sum(B[k][i] * B[k][j] for k in range(rank)) for j in range(rank)] for i in range(rank)]
        if any(G[i][i] % 2 for i in range(rank)):
            G = [[2 * x for x in row] for row in G]
        Gi = oracles.frac_inverse(G)
        size = 1
        for i in range(rank):
            size *= 2 * (int((8 * Gi[i][i]) ** 0.5) + 1) + 1
        if size > max_box:
            continue
        sign = rng.choice([1, -1])
        return [[sign * x for x in row] for row in G]


@given(st.integers(1, 5), st.integers(1, 8), st.integers(0, 10**6))
def test_short_vectors_match_box_oracle(rank, bound, seed):
    G = random_definite(oracles.rng_for(seed), rank)
    got = set(short_vectors(lat(G), bound))
    assert got == oracles.box_short_vectors(G, bound)


@pytest.mark.parametrize("kind,k", [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("D", 4), ("D", 5),
                                    ("E", 6), ("E", 7), ("E", 8)])
def test_ade_root_counts(kind, k):
    closed = {"A": k * (k + 1), "D": 2 * k * (k - 1), "E": {6: 72, 7: 126, 8: 240}.get(k)}[kind]
    assert ade_root_count(kind, k) == closed
    assert 2 * len(roots(root_lattice(kind, k))) == closed
    if k <= 4:
        assert 2 * len(oracles.box_short_vectors(oracles.cartan(kind, k), 2)) == closed


def test_reflections_preserve_roots():
    L = root_lattice("D", 4)
    rts = {tuple(r) for r in roots(L)}
    full = rts | {tuple(-x for x in r) for r in rts}
    for l in rts:
        assert L.norm(l) == -2
        for v in rts:
            c = L.pair(v, l)
            image = tuple(vi + c * li for vi, li in zip(v, l))
            assert image in full


def test_root_sublattice_examples():
    rd = root_sublattice(parse_lattice("2A1+<-6>"))
    assert rd.labels == ["A1", "A1"]
    assert root_sublattice(root_lattice("E", 8)).labels == ["E8"]
    assert root_sublattice(rank_one(-4)).labels == []


@pytest.mark.parametrize("expr,labels", [("A2+D4+<-4>", ["A2", "D4"]), ("E6+A1", ["A1", "E6"]),
                                         ("3A1+A3", ["A1", "A1", "A1", "A3"])])
def test_root_sublattice_components(expr, labels):
    rd = root_sublattice(parse_lattice(expr))
    assert sorted(rd.labels) == sorted(labels)
    for comp in rd.components:
        kind, k = comp.label[0], int(comp.label[1:])
        assert 2 * len(comp.roots) == ade_root_count(kind, k)
    assert rd.rank == sum(int(x[1:]) for x in labels)
