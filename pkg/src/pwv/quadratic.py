"""The quadratic space (H^2, q): signatures, Mukai extension, wedge operators,
and the deterministic choice of auxiliary positive classes."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence, Tuple

from gmpy2 import mpq

from .linalg import (ZERO, LinalgError, Matrix, Subspace, congruence_diagonalize, kernel,
                     scalar)


class QuadraticError(ValueError):
    pass


class NoPositiveVectorError(QuadraticError):
    pass


Vector = Tuple


def _vec(v) -> tuple:
    return tuple(scalar(x) for x in v)


@dataclass(frozen=True)
class QuadraticSpace:
    gram: Matrix

    def __post_init__(self):
        if not self.gram.is_square():
            raise QuadraticError("Gram matrix must be square")
        if not self.gram.is_symmetric():
            raise QuadraticError("Gram matrix must be symmetric")

    @classmethod
    def from_rows(cls, rows) -> "QuadraticSpace":
        return cls(Matrix(rows))

    @property
    def dim(self) -> int:
        return self.gram.rows

    def pair(self, a, b):
        Gb = self.gram.apply(b)
        acc = ZERO
        for x, y in zip(_vec(a), Gb):
            acc = acc + x * y
        return acc

    def norm(self, a):
        """q(a) = q(a, a)."""
        return self.pair(a, a)

    def restrict(self, vectors: Sequence) -> "QuadraticSpace":
        """Gram matrix of q on the given vectors (taken as a basis)."""
        vs = [_vec(v) for v in vectors]
        return QuadraticSpace(Matrix([[self.pair(a, b) for b in vs] for a in vs], cols=len(vs)))

    def orthogonal_complement(self, constraints: Sequence) -> Subspace:
        if not constraints:
            return Subspace.full(self.dim)
        rows = Matrix([self.gram.apply(c) for c in constraints], cols=self.dim)
        return kernel(rows)


def signature(Q: QuadraticSpace) -> Tuple[int, int, int]:
    if Q.dim == 0:
        return (0, 0, 0)
    return congruence_diagonalize(Q.gram)[2]


def mukai_extend(Q: QuadraticSpace) -> QuadraticSpace:
    """Q ⊕ Q² with the extra block [[0, -1], [-1, 0]]."""
    return QuadraticSpace(Matrix.block_diagonal([Q.gram, Matrix([[0, -1], [-1, 0]])]))


def wedge_operator(Q: QuadraticSpace, a, b) -> Matrix:
    """(a ∧ b)(v) = ½ q(a, v) b − ½ q(b, v) a."""
    a, b = _vec(a), _vec(b)
    Ga, Gb = Q.gram.apply(a), Q.gram.apply(b)
    half = mpq(1, 2)
    n = Q.dim
    return Matrix([[half * (b[r] * Ga[c] - a[r] * Gb[c]) for c in range(n)] for r in range(n)],
                  cols=n)


def normalize_eta(Q: QuadraticSpace, eta0, beta) -> tuple:
    """Shift eta0 along the isotropic beta until it is isotropic too."""
    eta0, beta = _vec(eta0), _vec(beta)
    if Q.norm(beta) != 0:
        raise QuadraticError("beta must be isotropic")
    e = Q.pair(eta0, beta)
    if e == 0:
        raise QuadraticError("q(eta, beta) = 0: <eta, beta> is degenerate")
    t = -Q.norm(eta0) / (2 * e)
    return tuple(x + t * y for x, y in zip(eta0, beta))


def balance_eta(Q: QuadraticSpace, eta, beta, rho) -> tuple:
    """Rescale eta so that q(eta, beta) = q(rho) / 2.

    With this normalization the classes rho, eta + beta and -i(eta - beta)
    have equal square, which the three-triple so(5) relations require.
    """
    eta = _vec(eta)
    e = Q.pair(eta, beta)
    if e == 0:
        raise QuadraticError("q(eta, beta) = 0")
    s = Q.norm(rho) / (2 * e)
    if s == 0:
        raise QuadraticError("rho is isotropic")
    return tuple(s * x for x in eta)


def primitive_integral(v) -> tuple:
    """Scale a nonzero rational vector to a primitive integer vector with
    positive first nonzero entry."""
    v = _vec(v)
    if not any(v):
        raise QuadraticError("zero vector has no primitive scaling")
    den = 1
    for x in v:
        d = int(mpq(x).denominator)
        den = den * d // gcd(den, d)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    first = next(x for x in ints if x)
    sign = 1 if first > 0 else -1
    return tuple(mpq(sign * x // g) for x in ints)


def find_positive_orthogonal(Q: QuadraticSpace, constraints: Sequence) -> tuple:
    """First positive diagonal vector of the diagonalized orthogonal complement.

    The result v satisfies q(v) > 0 and q(v, c) = 0 for every constraint c,
    and is returned as a primitive integer vector.
    """
    comp = Q.orthogonal_complement([_vec(c) for c in constraints])
    if comp.dim == 0:
        raise NoPositiveVectorError("orthogonal complement is zero")
    B = comp.vectors()
    G = Q.restrict(B).gram
    D, P, _ = congruence_diagonalize(G)
    k = next((k for k in range(D.rows) if D[k, k] > 0), None)
    if k is None:
        raise NoPositiveVectorError("orthogonal complement has no positive vector")
    coeffs = P.column(k)
    v = [ZERO] * Q.dim
    for c, b in zip(coeffs, B):
        if c:
            v = [x + c * y for x, y in zip(v, b)]
    v = primitive_integral(v)
    if not (Q.norm(v) > 0 and all(Q.pair(v, c) == 0 for c in constraints)):
        raise LinalgError("internal error: positive orthogonal vector fails its checks")
    return v


def complement_signature(Q: QuadraticSpace, constraints: Sequence) -> Tuple[int, int, int]:
    comp = Q.orthogonal_complement([_vec(c) for c in constraints])
    return signature(Q.restrict(comp.vectors()))
