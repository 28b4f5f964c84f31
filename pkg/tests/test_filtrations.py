import copy
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwv.filtrations import (HodgeDiamond, NotNilpotentError, PreconditionError,
                             build_operator_suite, deligne_filtration, even_odd_check,
                             monodromy_filtration, multiplicativity_check,
                             nilpotent_consistency, oracle_mismatches, perverse_decomposition,
                             perverse_filtration, perverse_hodge, restrict,
                             so5_dictionary_check, type_iii_check, verify_pw,
                             weight_filtration_from_grading)
from pwv.linalg import Matrix, Subspace, image
from pwv.quadratic import balance_eta, find_positive_orthogonal
from pwv.synthetic import expected_graded_dims, jordan_pair, random_jordan_sample

K3_HODGE = HodgeDiamond.from_rows([[1, 0, 1], [0, 20, 0], [1, 0, 1]])


def dims_of(W, d, ks):
    return [W.piece(d, k).dim for k in ks]


# -- Deligne filtration on hand examples


def test_single_jordan_block():
    N, _ = jordan_pair([3])
    W = deligne_filtration(N, 2, Subspace.full(3))
    assert dims_of(W, 2, range(0, 5)) == [1, 1, 2, 2, 3]


def test_zero_operator_is_pure():
    W = deligne_filtration(Matrix.zeros(3, 3), 5, Subspace.full(3))
    assert dims_of(W, 5, [4, 5, 6]) == [0, 3, 3]


def test_blocks_one_and_three():
    N, _ = jordan_pair([1, 3])
    W = deligne_filtration(N, 2, Subspace.full(4))
    assert W.graded_dims(2, [0, 1, 2, 3, 4]) == [1, 0, 2, 0, 1]


def test_mixed_block_sizes():
    sizes = [1, 1, 2, 2, 3]
    N, H = jordan_pair(sizes)
    V = Subspace.full(N.rows)
    W = deligne_filtration(N, 4, V)
    ks = range(0, 9)
    assert W.graded_dims(4, ks) == expected_graded_dims(sizes, 4, ks)
    G = weight_filtration_from_grading(H, 4, V, 4)
    assert all(W.piece(4, k) == G.piece(4, k) for k in range(-1, 10))


def test_not_nilpotent():
    with pytest.raises(NotNilpotentError):
        deligne_filtration(Matrix([[1, 0], [0, 0]]), 0, Subspace.full(2))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 6))
def test_random_conjugated_jordan(seed, d):
    sample = random_jordan_sample(random.Random(seed))
    V = Subspace.full(sample.N.rows)
    W = deligne_filtration(sample.N, d, V)
    G = weight_filtration_from_grading(sample.H, d, V, 4)
    for k in range(d - 6, d + 7):
        assert W.piece(d, k) == G.piece(d, k)
    ks = range(d - 4, d + 5)
    assert W.graded_dims(d, ks) == expected_graded_dims(sample.sizes, d, ks)


# -- K3 suite


def test_suite_invariants(suite):
    assert suite.failures() == []
    assert suite.triple().is_valid()
    assert all(M.is_rational() for M in suite.matrices().values())


def test_suite_precondition(k3, Q, classes):
    eta, beta, rho = classes
    with pytest.raises(PreconditionError):
        build_operator_suite(k3, Q, eta, beta, [x + y for x, y in zip(rho, eta)])


def test_unbalanced_eta_is_rejected(k3, Q, classes):
    eta, beta, rho = classes
    with pytest.raises(PreconditionError, match="q\\(rho\\) = 2 q\\(eta, beta\\)"):
        build_operator_suite(k3, Q, [3 * x for x in eta], beta, rho)


def test_type_iii_and_images(suite, k3):
    assert type_iii_check(suite).ok
    N2 = restrict(k3, suite.N, 2)
    assert image(N2) == Subspace.span([suite.beta, suite.rho], 22)
    assert image(N2 @ N2) == Subspace.span([suite.beta], 22)
    v = nilpotent_consistency(suite)
    assert v.ok and "-2 * (beta" in v.details[0]


def test_blocks(dec):
    assert dec.dims() == {(0, 0): 1, (0, 2): 1, (1, 1): 20, (2, 0): 1, (2, 2): 1}


def test_k3_filtrations(suite, dec, k3):
    P = perverse_filtration(dec, k3)
    W = monodromy_filtration(suite, dec)
    assert P.check_shape() == [] and W.check_shape() == []
    assert P.graded_dims(2, [0, 1, 2]) == [1, 20, 1]
    assert W.graded_dims(2, range(0, 5)) == [1, 0, 20, 0, 1]
    assert P.graded_dims(0, [0, 1, 2]) == [1, 0, 0]
    assert P.jump_indices(4) == [2]
    assert W.jump_indices(0) == [0]
    assert verify_pw(P, W, 1).ok and even_odd_check(W, 1).ok
    assert oracle_mismatches(suite, W) == []


def test_corrupted_weight_filtration(suite, dec, k3):
    P = perverse_filtration(dec, k3)
    W = monodromy_filtration(suite, dec)
    bad = copy.copy(W)
    bad.jumps = dict(W.jumps)
    bad.jumps[2] = [(k - 1 if i == 1 else k, S) for i, (k, S) in enumerate(W.jumps[2])]
    v = verify_pw(P, bad, 1)
    assert not v.ok and "H^2" in v.details[0]
    assert oracle_mismatches(suite, bad)


def test_multiplicativity(k3, dec):
    P = perverse_filtration(dec, k3)
    assert multiplicativity_check(k3, P).ok
    # beta in P_0 H^2, beta . beta = 0
    assert P.piece(2, 0).contains_vector(k3.total_vector(k3.basis_class(2, 0)))


def test_multiplicativity_detects_bad_filtration(k3, dec):
    P = perverse_filtration(dec, k3)
    broken = copy.copy(P)
    broken.jumps = dict(P.jumps)
    # claim all of H^2 sits in P_0: then rho . rho lands outside P_0 H^4
    broken.jumps[2] = [(0, P.spaces[2])]
    assert not multiplicativity_check(k3, broken).ok


def test_perverse_hodge(dec):
    assert perverse_hodge(dec, K3_HODGE, [1, 0, 22, 0, 1]).ok
    bad = HodgeDiamond.from_rows([[1, 0, 1], [0, 19, 0], [1, 0, 1]])
    with pytest.raises(ValueError):
        perverse_hodge(dec, bad, [1, 0, 22, 0, 1])
    # consistent with other Betti numbers but not with the blocks
    shifted = HodgeDiamond.from_rows([[1, 0, 0], [0, 22, 0], [0, 0, 1]])
    assert not perverse_hodge(dec, shifted, [1, 0, 22, 0, 1]).ok


def test_so5_dictionary(suite, dec):
    v = so5_dictionary_check(suite, dec)
    assert v.ok, v.details
    names = " ".join(v.details)
    assert "i K_23 = H_N" in names and "Lam_3 = i Lam_{eta-beta}" in names


def test_swap_transposes_blocks(k3, Q, classes, dec):
    eta, beta, rho = classes
    swapped = build_operator_suite(k3, Q, beta, eta, rho)
    sdec = perverse_decomposition(swapped)
    assert swapped.triple().is_valid()
    for (i, j), S in dec.blocks.items():
        assert sdec.blocks[(j, i)] == S
    for (i, j), S in sdec.blocks.items():
        for v in S.vectors():
            assert swapped.H_N.apply(v) == tuple((j - i) * x for x in v)


def test_rho_rescaling(k3, Q, classes, dec):
    eta, beta, rho = classes
    rho2 = [2 * x for x in rho]
    s2 = build_operator_suite(k3, Q, balance_eta(Q, eta, beta, rho2), beta, rho2)
    assert perverse_decomposition(s2).blocks == dec.blocks


def test_alternative_rho(k3, Q, classes, dec):
    eta, beta, rho = classes
    h = find_positive_orthogonal(Q, [eta, beta, rho])
    s2 = build_operator_suite(k3, Q, balance_eta(Q, eta, beta, h), beta, h)
    d2 = perverse_decomposition(s2)
    assert d2.dims() == dec.dims()
    P = perverse_filtration(d2, k3)
    assert verify_pw(P, monodromy_filtration(s2, d2), 1).ok
    # P depends only on eta and beta
    assert P.piece(2, 0) == perverse_filtration(dec, k3).piece(2, 0)
