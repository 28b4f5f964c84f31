import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from pwv.k3 import k3_gram
from pwv.linalg import Matrix, image
from pwv.quadratic import (NoPositiveVectorError, QuadraticError, QuadraticSpace, balance_eta,
                           complement_signature, find_positive_orthogonal, mukai_extend,
                           normalize_eta, primitive_integral, signature, wedge_operator)

from conftest import B2, unit_vector

K3Q = QuadraticSpace(k3_gram())
vectors = st.lists(st.integers(-3, 3), min_size=B2, max_size=B2)


def test_signatures(Q, classes):
    eta, beta, rho = classes
    assert signature(Q) == (3, 19, 0)
    assert signature(Q.restrict([eta, beta, rho])) == (2, 1, 0)
    assert signature(QuadraticSpace.from_rows([[0, 1], [1, 0]])) == (1, 1, 0)


def test_mukai_extension(Q, classes):
    assert signature(mukai_extend(QuadraticSpace(Matrix.zeros(0, 0)))) == (1, 1, 0)
    assert signature(mukai_extend(Q)) == (4, 20, 0)
    assert signature(mukai_extend(Q.restrict(list(classes)))) == (3, 2, 0)


def test_wedge_examples():
    E = QuadraticSpace(Matrix.identity(2))
    W = wedge_operator(E, (1, 0), (0, 1))
    assert W.apply((1, 0)) == (0, mpq(1, 2))
    assert W.apply((0, 1)) == (mpq(-1, 2), 0)
    assert wedge_operator(E, (1, 2), (1, 2)).is_zero()


def test_wedge_of_beta_rho(Q, classes):
    _, beta, rho = classes
    N = wedge_operator(Q, beta, rho)
    assert image(N).dim == 2 and image(N @ N).dim == 1
    assert image(N @ N).contains_vector(beta)
    assert (N @ N @ N).is_zero()


@settings(max_examples=30, deadline=None)
@given(vectors, vectors, vectors, st.integers(-3, 3))
def test_wedge_bilinear_skew(a, b, c, s):
    W = wedge_operator(K3Q, a, b)
    assert wedge_operator(K3Q, b, a) == W.scale(-1)
    ac = [x * s + y for x, y in zip(a, c)]
    assert wedge_operator(K3Q, ac, b) == W.scale(s) + wedge_operator(K3Q, c, b)
    G = K3Q.gram
    # q(Wx, y) = -q(x, Wy)
    assert W.T @ G == (G @ W).scale(-1)


def test_normalize_eta_examples():
    Q = QuadraticSpace.from_rows([[2, 1], [1, 0]])
    assert normalize_eta(Q, (1, 0), (0, 1)) == (1, -1)
    H = QuadraticSpace.from_rows([[0, 1], [1, 0]])
    assert normalize_eta(H, (1, 0), (0, 1)) == (1, 0)
    eta = normalize_eta(K3Q, tuple(-1 if k == 0 else (1 if k == 1 else 0) for k in range(B2)),
                        unit_vector(0))
    assert K3Q.norm(eta) == 0 and eta == unit_vector(1)


def test_normalize_eta_errors():
    H = QuadraticSpace.from_rows([[0, 1], [1, 0]])
    with pytest.raises(QuadraticError):
        normalize_eta(H, (1, 0), (1, 1))
    with pytest.raises(QuadraticError):
        normalize_eta(H, (0, 1), (0, 1))


def test_balance_eta(Q, classes):
    eta, beta, rho = classes
    e2 = balance_eta(Q, [3 * x for x in eta], beta, rho)
    assert tuple(e2) == tuple(eta)
    assert Q.pair(e2, beta) == Q.norm(rho) / 2


def test_find_positive_orthogonal(Q, classes):
    eta, beta, rho = classes
    assert Q.norm(rho) > 0 and Q.pair(rho, eta) == 0 and Q.pair(rho, beta) == 0
    assert complement_signature(Q, [eta, beta]) == (2, 18, 0)
    h = find_positive_orthogonal(Q, [eta, beta, rho])
    assert Q.norm(h) > 0 and all(Q.pair(h, c) == 0 for c in (eta, beta, rho))
    assert complement_signature(Q, [eta, beta, rho]) == (1, 18, 0)
    neg = QuadraticSpace(Matrix.identity(3).scale(-1))
    with pytest.raises(NoPositiveVectorError):
        find_positive_orthogonal(neg, [])


def test_positive_choice_is_deterministic(Q, classes):
    eta, beta, _ = classes
    assert find_positive_orthogonal(Q, [eta, beta]) == find_positive_orthogonal(Q, [eta, beta])


def test_primitive_integral():
    assert primitive_integral([mpq(-1, 2), 1, 0]) == (1, -2, 0)
    with pytest.raises(QuadraticError):
        primitive_integral([0, 0])
