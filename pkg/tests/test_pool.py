import dataclasses
import itertools

import pytest
from hypothesis import given, strategies as st

from tworefl.discform import HeegnerLabel, discriminant_form, pi_L
from tworefl.errors import LatticeError
from tworefl.lattice import GramLattice, direct_sum, parse_lattice, project_to, root_lattice, signature
from tworefl.pool import (
    CASE_A,
    CASE_B,
    CASE_MU,
    HYPERBOLIC,
    PRIME_FOUR,
    PoolMember,
    build_pool,
    check_condition_i,
    check_condition_ii,
    compute_a_n,
    compute_b_n,
    construct_generic_K,
    enumerate_Rn,
    max_nonorthogonal_norm,
    min_chamber_norm,
    min_chamber_norm_witness,
    qualifies,
    u_plus_kA1,
    verify_certificate,
)

import oracles


def as_types(labels):
    return tuple(sorted((lab[0], int(lab[1:])) for lab in labels))


@pytest.fixture(scope="module")
def chamber_values():
    return {t: oracles.dominant_box_chamber_value(*t) for t in oracles.ade_types_up_to(10)}


# -- R_n ------------------------------------------------------------------------------------

def test_enumerate_Rn_examples():
    assert {as_types(R) for R in enumerate_Rn(4)} == {(("A", 1),), (("A", 1), ("A", 1)), (("A", 2),)}
    five = {as_types(R) for R in enumerate_Rn(5)}
    assert {(("A", 3),), (("A", 1), ("A", 2)), (("A", 1),) * 3} <= five
    assert all(R != ("D4",) for R in enumerate_Rn(4))


@pytest.mark.parametrize("n", range(4, 10))
def test_enumerate_Rn_matches_oracle(n):
    ours = sorted(as_types(R) for R in enumerate_Rn(n))
    ref = sorted(tuple(sorted(R)) for R in oracles.root_lattices_of_rank_at_most(n - 2))
    assert ours == ref


# -- chamber values -----------------------------------------------------------------------------

@pytest.mark.parametrize("expr,expected", [("A1", -2), ("A2", -2), ("2A1", -4)])
def test_max_nonorthogonal_examples(expr, expected):
    R = parse_lattice(expr)
    assert max_nonorthogonal_norm(R) == expected
    assert oracles.naive_max_nonorthogonal_norm([list(r) for r in R.gram]) == expected


@pytest.mark.parametrize("expr", ["A3", "A1+A2", "3A1"])
def test_max_nonorthogonal_rank_three_box(expr):
    R = parse_lattice(expr)
    assert max_nonorthogonal_norm(R) == oracles.naive_max_nonorthogonal_norm([list(r) for r in R.gram], 5)


def test_ade_values_match_dominant_oracle(chamber_values):
    for (kind, k), val in chamber_values.items():
        assert max_nonorthogonal_norm([f"{kind}{k}"]) == -val
        assert max_nonorthogonal_norm(root_lattice(kind, k)) == -val


small_types = st.sampled_from([("A", k) for k in range(1, 5)] + [("D", 4), ("D", 5)])


@given(small_types, small_types)
def test_additivity(t1, t2):
    if t1[1] + t2[1] > 6:
        return
    R1, R2 = root_lattice(*t1), root_lattice(*t2)
    total = max_nonorthogonal_norm(direct_sum(R1, R2))
    assert total == max_nonorthogonal_norm(R1) + max_nonorthogonal_norm(R2)


# -- a_n ------------------------------------------------------------------------------------------

def test_a_n_examples():
    assert compute_a_n(3) == 2
    assert compute_a_n(4) == 4
    vals = [compute_a_n(n) for n in range(4, 26)]
    assert vals == sorted(vals)


@pytest.mark.parametrize("n", range(4, 13))
def test_a_n_matches_oracle(n, chamber_values):
    assert compute_a_n(n) == oracles.oracle_a_n(n, chamber_values)


# -- chambers of U + kA_1 and b_n ---------------------------------------------------------------

def test_k_zero_chamber():
    t, m = min_chamber_norm_witness(0)
    assert t == 4 and m == (1, 2)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_min_chamber_norm_matches_box_oracle(k):
    assert min_chamber_norm(k) == oracles.oracle_min_chamber_norm(k, radius=6)


@pytest.mark.parametrize("k", range(0, 9))
def test_witness_qualifies_by_oracle(k):
    t, m = min_chamber_norm_witness(k)
    L = u_plus_kA1(k)
    assert L.norm(m) == t
    assert oracles.chamber_qualifies(m)


@pytest.mark.parametrize("k", range(0, 5))
def test_norm_two_candidates_agree_with_oracle(k):
    L = u_plus_kA1(k)
    for a, b in itertools.product(range(1, 5), repeat=2):
        for xs in itertools.product(range(0, 3), repeat=k):
            m = (a, b, *xs)
            if L.norm(m) == 2:
                assert qualifies(m, L) == oracles.chamber_qualifies(m)


@given(st.integers(0, 3).flatmap(lambda k: st.tuples(*[st.integers(-4, 4)] * (k + 2))))
def test_qualification_sign_symmetric(m):
    L = u_plus_kA1(len(m) - 2)
    if L.norm(m) <= 0:
        return
    neg = tuple(-x for x in m)
    assert qualifies(m, L) == qualifies(neg, L) == oracles.chamber_qualifies(m)


def test_b_n_examples():
    bs = [compute_b_n(n) for n in range(4, 11)]
    assert all(b >= 4 for b in bs) and bs == sorted(bs)
    assert compute_b_n(4) == max(min_chamber_norm(k) for k in range(3))


@pytest.mark.parametrize("n", range(4, 11))
def test_b_n_matches_oracle(n):
    # exact minima for k = 0, 1 from the full box; for larger k the oracle confirms
    # the package witness, which bounds the minimum from above
    exact = [oracles.oracle_min_chamber_norm(k, radius=6) for k in (0, 1)]
    upper = []
    for k in range(2, n - 1):
        t, m = min_chamber_norm_witness(k)
        assert oracles.chamber_qualifies(m)
        upper.append(t)
    assert all(u <= max(exact) for u in upper)
    assert compute_b_n(n) == max(exact)


# -- the pool -----------------------------------------------------------------------------------

def test_pool_examples():
    pool = build_pool(4)
    keys = {m.key for m in pool}
    assert "<4>+<4>+<-2>" in keys and "U+<4>" in keys
    for m in pool:
        G = m.gram
        assert signature(G) == (2, 1)
        assert all(G.gram[i][i] % 2 == 0 for i in range(3))
    sizes = [len(build_pool(n)) for n in range(4, 10)]
    assert sizes == sorted(sizes)


# -- certificates ---------------------------------------------------------------------------------

def assert_certificate_ok(cert, L):
    checks = verify_certificate(cert, L)
    assert all(checks.values()), checks


def test_certificate_e8_case_a():
    L = parse_lattice("2U+E8")
    cert = construct_generic_K(L)
    assert cert.case_tag == CASE_A
    assert cert.pool_member == PoolMember(PRIME_FOUR, 620)
    assert_certificate_ok(cert, L)


def test_certificate_root_free_case_b():
    L = parse_lattice("2U+<-4>+<-4>")
    cert = construct_generic_K(L)
    assert cert.case_tag == CASE_B
    assert cert.pool_member == PoolMember(HYPERBOLIC, 4)
    assert cert.witness_root in [(1, -1, 0, 0, 0, 0), (-1, 1, 0, 0, 0, 0)]
    _, nrm = project_to(cert.witness_root, list(cert.K), L)
    assert nrm == -2
    assert_certificate_ok(cert, L)


def test_certificate_case_b_with_a1_summands():
    L = parse_lattice("2U+2A1+<-4>")
    cert = construct_generic_K(L)
    assert cert.case_tag == CASE_B
    assert cert.pool_member.family == HYPERBOLIC
    assert cert.pool_member.param == min_chamber_norm(2)
    assert_certificate_ok(cert, L)


def test_certificate_mu_target():
    L = parse_lattice("2U+E8+A1")
    mu = pi_L(discriminant_form(L))[0]
    cert = construct_generic_K(L, HeegnerLabel("Hmu", mu))
    assert cert.case_tag == CASE_MU
    assert_certificate_ok(cert, L)


def test_mu_target_errors():
    L = parse_lattice("2U+E8+A1")
    with pytest.raises(LatticeError):
        construct_generic_K(L, HeegnerLabel("Hmu", (0,)))


def test_condition_i_examples():
    L = parse_lattice("2U+2A1")
    K = [(1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (0, 0, 0, 0, 1, 0)]
    assert not check_condition_i(K, L)
    root_free = GramLattice(((4, 0, 0), (0, 4, 0), (0, 0, -4)))
    assert check_condition_i([(1, 0, 0), (0, 1, 0), (0, 0, 1)], root_free)
    with pytest.raises(LatticeError):
        check_condition_i([(1, 0, 0, 0, 0, 0), (1, 0, 0, 0, 0, 0), (0, 0, 0, 0, 1, 0)], L)


def test_condition_ii_fake_witness():
    L = parse_lattice("2U+E8")
    cert = construct_generic_K(L)
    assert check_condition_ii(cert, L)
    # condition (i) leaves no root in K^perp, so a perpendicular fake is e1 - 2 f1 (norm -4)
    fake = (1, -2) + (0,) * 10
    assert project_to(fake, list(cert.K), L)[1] == 0
    assert not check_condition_ii(dataclasses.replace(cert, witness_root=fake), L)
    with pytest.raises(LatticeError, match="missing witness"):
        check_condition_ii(dataclasses.replace(cert, witness_root=(0,) * 12), L)
