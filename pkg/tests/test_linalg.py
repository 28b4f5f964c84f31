import random
from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from pwv.k3 import k3_gram
from pwv.linalg import (I, GaussianRational, InconsistentSystemError, LinalgError, Matrix,
                        NonSemisimpleError, NotCommutingError, Subspace,
                        UnexpectedEigenvalueError, congruence_diagonalize, direct_sum,
                        format_scalar, image, inverse, kernel, rank, scalar,
                        simultaneous_eigenspaces, solve_linear, subspace_contains,
                        subspace_equal, subspace_intersect, subspace_sum)

# -- scalars


def test_scalar_parsing_round_trip():
    for text in ["0", "-3", "1/2", "1/2+3/4*i", "-1/3-2*i", "5*i", "-i"]:
        x = scalar(text)
        assert scalar(format_scalar(x)) == x
    assert format_scalar(scalar("i")) == "0+1*i"
    assert format_scalar(mpq(1, 2)) == "1/2"
    assert format_scalar(scalar("2/4")) == "1/2"


def test_scalar_refuses_inexact():
    with pytest.raises(TypeError):
        scalar(0.5)
    with pytest.raises(TypeError):
        scalar(True)
    with pytest.raises(ValueError):
        scalar("0.5")


def test_gaussian_collapses_to_rational():
    z = I * I
    assert z == -1 and not isinstance(z, GaussianRational)
    assert (1 + I) * (1 - I) == 2
    assert scalar(Fraction(3, 4)) == mpq(3, 4)


def test_gaussian_division():
    z = scalar("1+2*i")
    assert z / z == 1
    assert (1 / z) * z == 1


# -- kernels, images, solving


def test_kernel_examples():
    assert kernel(Matrix.identity(2)).dim == 0
    assert kernel(Matrix.zeros(2, 2)) == Subspace.full(2)
    K = kernel(Matrix([[1, I], [0, 0]]))
    assert K == Subspace.span([(-I, 1)], 2)


def test_image_examples():
    assert image(Matrix.identity(3)) == Subspace.full(3)
    assert image(Matrix.zeros(3, 3)).dim == 0
    assert image(Matrix([[1] * 3] * 3)) == Subspace.span([(1, 1, 1)], 3)


def test_solve_linear_examples():
    b = Matrix([[3], [-1], [mpq(1, 2)]])
    x, K = solve_linear(Matrix.identity(3), b)
    assert x == b and K.dim == 0
    x, K = solve_linear(Matrix.zeros(2, 2), Matrix.zeros(2, 1))
    assert x.is_zero() and K == Subspace.full(2)
    x, K = solve_linear(Matrix([[1, 1]]), Matrix([[2]]))
    assert x.column(0) == (2, 0)
    assert K == Subspace.span([(1, -1)], 2)


def test_solve_linear_inconsistent():
    with pytest.raises(InconsistentSystemError):
        solve_linear(Matrix([[1, 1], [1, 1]]), Matrix([[1], [2]]))


def test_subspace_examples():
    U = Subspace.span([(1, 2, 3)], 3)
    assert subspace_sum(U, Subspace.zero(3)) == U
    assert subspace_intersect(U, Subspace.full(3)) == U
    e1, e2 = Subspace.span([(1, 0)], 2), Subspace.span([(0, 1)], 2)
    assert subspace_intersect(e1, e2).dim == 0
    both = Subspace.span([(1, 0), (0, 1)], 2)
    diag = Subspace.span([(1, 1)], 2)
    assert subspace_intersect(both, diag) == diag
    assert subspace_contains(both, diag) and not subspace_contains(diag, both)
    assert subspace_equal(subspace_sum(e1, e2), Subspace.full(2))


def test_direct_sum_refuses_overlap():
    e1 = Subspace.span([(1, 0)], 2)
    with pytest.raises(LinalgError):
        direct_sum([e1, Subspace.span([(2, 0)], 2)], 2)


def test_inverse():
    A = Matrix([[2, 1], [1, 1]])
    assert A @ inverse(A) == Matrix.identity(2)
    with pytest.raises(LinalgError):
        inverse(Matrix([[1, 1], [1, 1]]))


# -- eigenspaces


def test_simultaneous_eigenspaces_examples():
    blocks = simultaneous_eigenspaces([Matrix.diagonal([2, -2])], [[2, -2]])
    assert {k: v.dim for k, v in blocks.items()} == {(-2,): 1, (2,): 1}
    blocks = simultaneous_eigenspaces([Matrix.identity(3)], [[1]])
    assert {k: v.dim for k, v in blocks.items()} == {(1,): 3}
    ops = [Matrix.diagonal([1, 1, -1]), Matrix.diagonal([1, -1, 1])]
    blocks = simultaneous_eigenspaces(ops, [[1, -1], [1, -1]])
    assert {k: v.dim for k, v in blocks.items()} == {(1, 1): 1, (1, -1): 1, (-1, 1): 1}


def test_simultaneous_eigenspaces_errors():
    J = Matrix([[1, 1], [0, 1]])
    with pytest.raises(NonSemisimpleError):
        simultaneous_eigenspaces([J], [[1]])
    with pytest.raises(UnexpectedEigenvalueError):
        simultaneous_eigenspaces([Matrix.diagonal([1, 3])], [[1, -1]])
    with pytest.raises(NotCommutingError):
        simultaneous_eigenspaces([Matrix.diagonal([1, -1]), Matrix([[0, 1], [1, 0]])],
                                 [[1, -1], [1, -1]])


# -- quadratic forms


def test_congruence_examples():
    assert congruence_diagonalize(Matrix([[0, 1], [1, 0]]))[2] == (1, 1, 0)
    assert congruence_diagonalize(Matrix.identity(2))[2] == (2, 0, 0)
    G = k3_gram()
    D, P, sig = congruence_diagonalize(G)
    assert sig == (3, 19, 0)
    assert P.T @ G @ P == D


def test_congruence_zero_diagonal_repair():
    G = Matrix([[0, 0, 1], [0, 0, 0], [1, 0, 0]])
    D, P, sig = congruence_diagonalize(G)
    assert sig == (1, 1, 1)
    assert P.T @ G @ P == D


# -- properties

small = st.integers(min_value=-3, max_value=3)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: matrices(r, c))))
def test_rank_nullity(data):
    A = Matrix(data)
    K = kernel(A)
    assert rank(A) + K.dim == A.cols
    for v in K.vectors():
        assert not any(A.apply(v))
    assert image(A).dim == rank(A)


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4), st.permutations(range(4)))
def test_kernel_is_basis_independent(data, perm):
    A = Matrix(data)
    P = Matrix([[1 if perm[i] == j else 0 for j in range(4)] for i in range(4)])
    # ker(A P) = P^{-1} ker A
    K = kernel(A @ P)
    mapped = Subspace.span([P.apply(v) for v in K.vectors()], 4)
    assert mapped == kernel(A)


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=4, max_size=4), matrices(4, 4))
def test_eigenspaces_are_invariant(diag, conj):
    # a diagonalizable operator conjugated by an invertible matrix
    C = Matrix(conj)
    if rank(C) < 4:
        C = C + Matrix.identity(4).scale(10)
    if rank(C) < 4:
        return
    D = Matrix.diagonal(diag)
    A = C @ D @ inverse(C)
    blocks = simultaneous_eigenspaces([A], [sorted(set(diag))])
    assert sum(S.dim for S in blocks.values()) == 4
    for (lam,), S in blocks.items():
        for v in S.vectors():
            assert A.apply(v) == tuple(lam * x for x in v)


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4), matrices(4, 4))
def test_signature_is_congruence_invariant(sym, change):
    G = Matrix(sym)
    G = G + G.T
    Pm = Matrix(change)
    if rank(Pm) < 4:
        return
    _, _, s1 = congruence_diagonalize(G)
    _, _, s2 = congruence_diagonalize(Pm.T @ G @ Pm)
    assert s1 == s2 and sum(s1) == 4 and s1[2] == 4 - rank(G)


def test_random_intersections_formula():
    rng = random.Random(7)
    for _ in range(20):
        n = 5
        U = Subspace.span([[rng.randint(-2, 2) for _ in range(n)] for _ in range(rng.randint(0, 4))], n)
        V = Subspace.span([[rng.randint(-2, 2) for _ in range(n)] for _ in range(rng.randint(0, 4))], n)
        assert subspace_sum(U, V).dim + subspace_intersect(U, V).dim == U.dim + V.dim
