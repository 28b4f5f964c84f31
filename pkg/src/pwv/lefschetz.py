"""Hard Lefschetz tests, sl2-triple completion and Lie-algebra closure."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import CohomologyClass, GradedAlgebra
from .linalg import (ZERO, Echelon, Matrix, NonSemisimpleError, Scalar, Subspace,
                     UnexpectedEigenvalueError, commutator, rank, simultaneous_eigenspaces,
                     solve_sparse)
from .linalg import InconsistentSystemError


class Sl2CompletionError(ValueError):
    pass


@dataclass(frozen=True)
class Sl2Triple:
    L: Matrix
    S: Matrix
    Lam: Matrix

    def failures(self) -> List[str]:
        out = []
        if commutator(self.S, self.L) != self.L.scale(2):
            out.append("[S, L] = 2L")
        if commutator(self.S, self.Lam) != self.Lam.scale(-2):
            out.append("[S, Λ] = -2Λ")
        if commutator(self.L, self.Lam) != self.S:
            out.append("[L, Λ] = S")
        return out

    def is_valid(self) -> bool:
        return not self.failures()


def grading_operator(A: GradedAlgebra) -> Matrix:
    """Acts on H^d as (d - 2n)."""
    return Matrix.diagonal([A.degree_of(g) - 2 * A.n for g in range(A.total_dim)])


def hard_lefschetz_test(A: GradedAlgebra, omega: CohomologyClass) -> bool:
    if omega.degree != 2:
        raise ValueError("hard Lefschetz is tested for degree-2 classes")
    L = A.cup_operator(omega)
    mid = 2 * A.n
    power = Matrix.identity(A.total_dim)
    for k in range(1, mid + 1):
        power = power @ L
        src, dst = A.degree_range(mid - k), A.degree_range(mid + k)
        if len(src) != len(dst):
            return False
        if len(src) and rank(power.submatrix(list(dst), list(src))) != len(src):
            return False
    return True


def sl2_system(L: Matrix, S: Matrix):
    """Sparse equations for Λ: [L, Λ] = S and [S, Λ] + 2Λ = 0.

    Unknown Λ[a, b] has index a * n + b.  Returns (equations, rhs).
    """
    n = L.rows
    Lrows, Srows = L.sparse_rows(), S.sparse_rows()
    Lcols: List[Dict[int, Scalar]] = [dict() for _ in range(n)]
    Scols: List[Dict[int, Scalar]] = [dict() for _ in range(n)]
    for a, r in enumerate(Lrows):
        for c, x in r.items():
            Lcols[c][a] = x
    for a, r in enumerate(Srows):
        for c, x in r.items():
            Scols[c][a] = x

    def bracket_row(Xrows, Xcols, a, b, extra=ZERO):
        # ([X, Λ] + extra Λ)[a, b] = sum_c X[a,c] Λ[c,b] - Λ[a,c] X[c,b] + extra Λ[a,b]
        eq: Dict[int, Scalar] = {}
        for c, x in Xrows[a].items():
            k = c * n + b
            eq[k] = eq.get(k, ZERO) + x
        for c, x in Xcols[b].items():
            k = a * n + c
            eq[k] = eq.get(k, ZERO) - x
        if extra:
            k = a * n + b
            eq[k] = eq.get(k, ZERO) + extra
        return {k: v for k, v in eq.items() if v}

    eqs, rhs = [], []
    for a in range(n):
        for b in range(n):
            eqs.append(bracket_row(Srows, Scols, a, b, extra=2))
            rhs.append(ZERO)
    for a in range(n):
        for b in range(n):
            eqs.append(bracket_row(Lrows, Lcols, a, b))
            rhs.append(S[a, b])
    return eqs, rhs


def solve_sl2(L: Matrix, S: Matrix) -> Tuple[Matrix, int]:
    """Return (Λ, dimension of the solution kernel) for the combined system."""
    n = L.rows
    eqs, rhs = sl2_system(L, S)
    try:
        sol, ker = solve_sparse(eqs, rhs, n * n)
    except InconsistentSystemError:
        raise Sl2CompletionError("no sl2 completion") from None
    Lam = Matrix.unflatten([sol.get(k, ZERO) for k in range(n * n)], n, n)
    return Lam, len(ker)


def complete_sl2(L: Matrix, S: Matrix) -> Matrix:
    """The unique Λ with [L, Λ] = S and [S, Λ] = -2Λ."""
    if not (L.is_square() and S.shape == L.shape):
        raise ValueError("L and S must be square of equal size")
    if commutator(S, L) != L.scale(2):
        raise ValueError("precondition [S, L] = 2L fails")
    Lam, kdim = solve_sl2(L, S)
    if kdim:
        raise Sl2CompletionError(f"non-unique completion (kernel dimension {kdim})")
    return Lam


# ---------------------------------------------------------------------------
# Lie closure


class LieSubalgebra:
    """Span of endomorphisms of F^n closed under the commutator.

    ``basis`` is the canonical Subspace of the flattened endomorphism space.
    """

    def __init__(self, n: int, echelon: Echelon, elements: Sequence[Matrix]):
        self.n = n
        self._ech = echelon
        self.elements = list(elements)
        self._basis: Optional[Subspace] = None

    @property
    def dim(self) -> int:
        return len(self._ech)

    @property
    def basis(self) -> Subspace:
        if self._basis is None:
            self._basis = Subspace(self.n * self.n, self._ech.sorted_rows())
        return self._basis

    def canonical_elements(self) -> List[Matrix]:
        n = self.n
        return [Matrix.unflatten(Matrix.from_sparse_rows([r], n * n).row(0), n, n)
                for r in self._ech.sorted_rows()]

    def contains(self, X: Matrix) -> bool:
        return self._ech.contains(X.sparse_flat())

    def coordinates(self, X: Matrix) -> Optional[Dict[int, Scalar]]:
        return self._ech.coordinates(X.sparse_flat())

    def is_closed(self) -> bool:
        """Check [x, y] ∈ span for every pair of canonical basis elements."""
        els = self.canonical_elements()
        for i in range(len(els)):
            for j in range(i + 1, len(els)):
                if not self.contains(commutator(els[i], els[j])):
                    return False
        return True


def lie_closure(generators: Sequence[Matrix]) -> LieSubalgebra:
    """Smallest bracket-closed span containing the generators.

    Every newly independent element is bracketed with each generator; the
    resulting span is stable under ad of the generators and hence is the Lie
    algebra they generate.
    """
    if not generators:
        raise ValueError("at least one generator is required")
    n = generators[0].rows
    ech = Echelon(n * n)
    elements: List[Matrix] = []
    for X in generators:
        if ech.add(X.sparse_flat()) is not None:
            elements.append(X)
    queue = list(elements)
    pos = 0
    while pos < len(queue):
        x = queue[pos]
        pos += 1
        for y in generators:
            z = commutator(y, x)
            if z.is_zero():
                continue
            if ech.add(z.sparse_flat()) is not None:
                elements.append(z)
                queue.append(z)
    return LieSubalgebra(n, ech, elements)


def ad_grading(g: LieSubalgebra, H: Matrix, weights=(-2, 0, 2)) -> Tuple[int, ...]:
    """Dimensions of the ad(H)-eigenspaces of g at the given weights."""
    if not g.contains(H):
        raise ValueError("H must lie in g")
    pivots = g._ech.pivots()
    index = {p: k for k, p in enumerate(pivots)}
    m = len(pivots)
    rows: List[Dict[int, Scalar]] = [dict() for _ in range(m)]
    for k, X in enumerate(g.canonical_elements()):
        coords = g.coordinates(commutator(H, X))
        if coords is None:
            raise ValueError("g is not stable under ad(H)")
        for p, c in coords.items():
            rows[index[p]][k] = c
    adH = Matrix.from_sparse_rows(rows, m)
    try:
        blocks = simultaneous_eigenspaces([adH], [list(weights)])
    except UnexpectedEigenvalueError:
        raise UnexpectedEigenvalueError("unexpected ad-eigenvalue") from None
    except NonSemisimpleError:
        raise NonSemisimpleError("ad(H) is not semisimple on g") from None
    return tuple(blocks[(w,)].dim if (w,) in blocks else 0 for w in weights)


def hard_lefschetz_family(A: GradedAlgebra) -> List[CohomologyClass]:
    """Spanning family of hard Lefschetz classes in H^2.

    Each basis vector e_i is kept if it satisfies hard Lefschetz; otherwise it
    is replaced by the first e_i + e_j or e_i - e_j (j ascending) that does and
    keeps the family linearly independent.
    """
    b = A.betti[2]
    ech = Echelon(b)
    family = []

    def basis(i):
        return tuple(1 if k == i else 0 for k in range(b))

    for i in range(b):
        e = basis(i)
        candidates = [e]
        for j in range(b):
            if j != i:
                f = basis(j)
                candidates.append(tuple(x + y for x, y in zip(e, f)))
                candidates.append(tuple(x - y for x, y in zip(e, f)))
        for c in candidates:
            vec = {k: x for k, x in enumerate(c) if x}
            if not ech.reduce(vec):
                continue
            omega = CohomologyClass.of(2, c)
            if hard_lefschetz_test(A, omega):
                ech.add(vec)
                family.append(omega)
                break
        else:
            raise ValueError(f"no hard Lefschetz replacement found for basis vector {i}")
    return family


def llv_algebra(A: GradedAlgebra) -> Tuple[LieSubalgebra, List[Tuple[str, int, bool]]]:
    """Lie algebra generated by the sl2-triples of a hard Lefschetz family.

    Returns the closure together with one certificate (label, completion
    kernel dimension, triple valid) per class of the family.
    """
    H = grading_operator(A)
    generators = [H]
    certificates = []
    for k, omega in enumerate(hard_lefschetz_family(A)):
        L = A.cup_operator(omega)
        Lam, kdim = solve_sl2(L, H)
        certificates.append((f"omega_{k}", kdim, Sl2Triple(L, H, Lam).is_valid()))
        generators += [L, Lam]
    return lie_closure(generators), certificates
