import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reidemeister import automorphisms as aut
from reidemeister.automorphisms import Inner
from reidemeister.errors import InvalidAutomorphism, ResourceLimit, UsageError
from reidemeister.groups import GroupFamily, in_congruence_subgroup, is_member_integral
from reidemeister.matrices import IntMatrix
from reidemeister.orbits import inner_trace_invariant, twisted_partition
from reidemeister.witnesses import (A, X, certify_distinct, column, clear_caches, make_witness, random_sl_matrix,
                                    separating_family, tau_action_identity_check, tau_no_solution_oracle,
                                    trace_formula_case1)


@pytest.fixture(autouse=True)
def _fresh_caches():
    clear_caches()
    yield
    clear_caches()


def test_make_witness_examples():
    assert make_witness("A", 3, 2) == IntMatrix([[1, 0, 0], [2, 1, 0], [0, 0, 1]])
    assert make_witness("X", 2, 1) == IntMatrix([[2, 1], [1, 1]])
    for n in (2, 3, 5):
        assert make_witness("A", n, 0) == IntMatrix.identity(n)
    assert make_witness("A_at", 3, 5, 1, 2) == A(3, 5)
    assert make_witness("X_at", 4, 5, 1, 2) == X(4, 5)
    assert make_witness("A_at", 3, 4, 2, 3) == IntMatrix([[1, 0, 0], [0, 1, 0], [0, 4, 1]])
    assert make_witness("X_at", 3, 2, 3, 1) == IntMatrix([[1, 0, 2], [0, 1, 0], [2, 0, 5]])


@pytest.mark.parametrize("args", [("A", 1, 1), ("B", 3, 1), ("A_at", 3, 1, 2, 2), ("X_at", 3, 1, 0, 1),
                                  ("X_at", 3, 1, 1, 4)])
def test_make_witness_rejects(args):
    with pytest.raises(UsageError):
        make_witness(*args)


@given(st.sampled_from(["A", "X", "A_at", "X_at"]), st.integers(2, 6), st.integers(-40, 40), st.data())
def test_witness_invariants(kind, n, k, data):
    i = data.draw(st.integers(1, n))
    j = data.draw(st.integers(1, n).filter(lambda v: v != i))
    w = make_witness(kind, n, k, i, j)
    assert w.det() == 1
    for m in (2, 3, 5):
        assert in_congruence_subgroup(w, m) == (k % m == 0)


def test_x_is_symplectic():
    for dim in (4, 6):
        assert all(is_member_integral(X(dim, k), GroupFamily("Sp", dim)) for k in range(51))


def test_tau_identity_examples():
    rng = np.random.default_rng(1)
    for n in (2, 3, 4):
        assert all(tau_action_identity_check(random_sl_matrix(n, rng), int(rng.integers(0, 11)))
                   for _ in range(200))
    for k in range(5):
        assert tau_action_identity_check(IntMatrix.identity(3), k)
    x = random_sl_matrix(3, rng)
    assert tau_action_identity_check(x, 0)


def test_tau_identity_detects_a_wrong_right_side():
    # the product c1 c2^T (instead of c2 c1^T) is a different matrix for a generic X
    x = IntMatrix([[2, 1, 0], [1, 1, 0], [0, 3, 1]])
    wrong = x @ x.T + 3 * (column(x, 0) @ column(x, 1).T)
    assert x @ A(3, 3) @ x.T != wrong
    assert tau_action_identity_check(x, 3)


@given(st.integers(-100, 100), st.integers(0, 2**32 - 1), st.integers(3, 5))
def test_case1_trace_formula(k, seed, n):
    M = random_sl_matrix(n, np.random.default_rng(seed))
    assert (X(n, k) @ M).trace() == trace_formula_case1(k, M)


def test_no_solution_oracle_examples():
    rep = tau_no_solution_oracle(1, 2, 2, 6)
    assert rep.found == 0 and rep.candidates > 0
    rep = tau_no_solution_oracle(3, 3, 2, 1)
    assert IntMatrix.identity(2) in rep.solutions
    assert tau_no_solution_oracle(2, 4, 2, 6).found == 0
    with pytest.raises(ResourceLimit):
        tau_no_solution_oracle(1, 2, 3, 6)


def test_no_solution_oracle_counts_det_one_matrices():
    # det-1 integer matrices with entries in [-1, 1]: 20 of the 81 candidates
    assert tau_no_solution_oracle(1, 1, 2, 1).candidates == 20


def test_certificate_examples():
    cert = certify_distinct("A", aut.tau, 2, 1, 2, [3, 5, 7])
    assert cert.distinct and cert.modulus in (3, 5, 7)
    assert cert.class_ids[0] != cert.class_ids[1]
    same = certify_distinct("A", aut.tau, 2, 2, 2, [3, 5, 7])
    assert same.verdict == "inconclusive" and same.modulus is None and same.moduli_tried == [3, 5, 7]


def test_certificate_json_field_order():
    cert = certify_distinct("A", aut.tau, 2, 1, 2, [3])
    data = json.loads(cert.to_json())
    assert list(data)[:8] == ["family", "automorphism", "n", "k", "l", "modulus", "class_ids", "verdict"]


def test_certificate_rechecked_against_partition(quotient):
    cert = certify_distinct("X", aut.sigma, 2, 1, 2, [3, 5, 7])
    assert cert.distinct
    g = quotient("SL", 2, cert.modulus)
    p = twisted_partition(g, aut.sigma.induced_mod(cert.modulus))
    ids = [p.class_id(X(2, k).mod(cert.modulus)) for k in (1, 2)]
    assert ids == cert.class_ids


def test_theta_certificate_mod3_rejects_the_finite_model():
    with pytest.raises(InvalidAutomorphism):
        certify_distinct("X", aut.theta, 4, 1, 2, [3])


def test_witnesses_equal_mod_m_are_skipped():
    cert = certify_distinct("A", aut.tau, 2, 1, 4, [3, 5])
    assert 3 in cert.moduli_tried
    assert cert.modulus != 3


@pytest.mark.parametrize("seed", range(4))
def test_inner_certificates_agree_with_trace_invariant(seed):
    """A differing trace invariant always comes with a partition that separates."""
    rng = np.random.default_rng(seed)
    M = random_sl_matrix(2, rng, steps=6, max_mult=2)
    phi = Inner(M)
    for m in (3, 5):
        for k in range(1, 5):
            for l in range(k + 1, 5):
                cert = certify_distinct("A", phi, 2, k, l, [m])
                ta = inner_trace_invariant(A(2, k).mod(m), M.mod(m))
                tb = inner_trace_invariant(A(2, l).mod(m), M.mod(m))
                if ta != tb:
                    assert cert.distinct


def test_separating_family_examples():
    fam = separating_family(IntMatrix.identity(3), 2, 3)
    assert fam == [X(3, 2), X(3, 4), X(3, 6)]
    assert [w.trace() for w in fam] == [7, 19, 39]
    M = IntMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    fam = separating_family(M, 3, 2)
    assert fam == [A(3, 3), A(3, 6)]
    assert [(w @ M).trace() for w in fam] == [3, 6]
    assert len(separating_family(M, 5, 1)) == 1


def test_separating_family_rejects():
    with pytest.raises(UsageError):
        separating_family(IntMatrix.identity(2), 2, 3)
    with pytest.raises(UsageError):
        separating_family(IntMatrix.diag(1, 1, -1), 2, 3)
    with pytest.raises(UsageError):
        separating_family(IntMatrix.identity(3), 1, 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(3, 5), st.integers(2, 7), st.integers(1, 12))
def test_separating_family_properties(seed, n, m, count):
    M = random_sl_matrix(n, np.random.default_rng(seed), steps=10, max_mult=4)
    fam = separating_family(M, m, count)
    assert len(fam) == count
    fam_sl = GroupFamily("SL", n)
    assert all(in_congruence_subgroup(w, m) and is_member_integral(w, fam_sl) for w in fam)
    assert len({(w @ M).trace() for w in fam}) == count


def test_separating_family_negative_diagonal():
    # m11 < 0 with a large off-diagonal sum: the k0 rule must still avoid collisions
    M = IntMatrix([[-1, 7, 0], [9, -64, 0], [0, 0, 1]])
    assert M.det() == 1
    fam = separating_family(M, 2, 8)
    assert len({(w @ M).trace() for w in fam}) == 8
