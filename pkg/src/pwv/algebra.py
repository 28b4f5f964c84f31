"""Graded-commutative cohomology rings given by structure constants.

Basis vectors are addressed either locally, as ``(degree, index)``, or by a
global index into the total cohomology ``H^0 + H^1 + ... + H^{4n}`` ordered by
degree.  Global index 0 is the unit; the last global index is the point class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .linalg import ONE, ZERO, Matrix, Scalar, format_scalar, rank, scalar


class ValidationError(ValueError):
    """Raised with the full list of violated invariants."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid document")


@dataclass(frozen=True)
class CohomologyClass:
    degree: int
    coords: Tuple[Scalar, ...]

    @classmethod
    def of(cls, degree: int, coords: Iterable) -> "CohomologyClass":
        return cls(degree, tuple(scalar(x) for x in coords))

    def scale(self, c) -> "CohomologyClass":
        c = scalar(c)
        return CohomologyClass(self.degree, tuple(c * x for x in self.coords))

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        if other.degree != self.degree:
            raise ValueError("cannot add classes of different degrees")
        return CohomologyClass(self.degree, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        return self + other.scale(-1)

    def is_zero(self) -> bool:
        return not any(self.coords)


class GradedAlgebra:
    """Finite-dimensional graded algebra H^0..H^{4n} with one-dimensional ends.

    ``table[(d, e)]`` is a list, indexed by the basis vector ``i`` of H^d, of
    matrices ``M_i`` of shape ``betti[d+e] x betti[e]`` with
    ``M_i[k, j]`` = coefficient of ``e_k`` in ``e_i ∪ e_j``.
    Products with the unit are built in.
    """

    def __init__(self, n: int, betti: Sequence[int], products: Iterable = (), name: str = ""):
        self.n = n
        self.betti = tuple(int(b) for b in betti)
        self.name = name
        if n < 1 or len(self.betti) != 4 * n + 1:
            raise ValidationError([f"betti must list dims of H^0..H^{4 * n} ({4 * n + 1} entries)"])
        self.top = 4 * n
        self.offsets = [sum(self.betti[:d]) for d in range(self.top + 2)]
        self.total_dim = self.offsets[-1]
        self._degree_of = [d for d in range(self.top + 1) for _ in range(self.betti[d])]

        dense: Dict[Tuple[int, int], List[List[List[Scalar]]]] = {}
        for (d, i), (e, j), k, c in products:
            if d + e > self.top:
                raise ValidationError([f"product of degrees {d} and {e} exceeds top degree"])
            block = dense.get((d, e))
            if block is None:
                block = [[[ZERO] * self.betti[e] for _ in range(self.betti[d + e])]
                         for _ in range(self.betti[d])]
                dense[(d, e)] = block
            block[i][k][j] = block[i][k][j] + scalar(c)
        if self.betti[0] == 1:
            for e in range(self.top + 1):
                dense[(0, e)] = [[[ONE if k == j else ZERO for j in range(self.betti[e])]
                                  for k in range(self.betti[e])]]
                if self.betti[e]:
                    dense.setdefault((e, 0), [
                        [[ONE if k == i else ZERO] for k in range(self.betti[e])]
                        for i in range(self.betti[e])])
        self.table: Dict[Tuple[int, int], List[Matrix]] = {
            key: [Matrix(m, cols=self.betti[key[1]]) for m in block] for key, block in dense.items()
        }
        self._cup_cache: Dict[int, Matrix] = {}

    # -- indexing --------------------------------------------------------------

    def degree_of(self, g: int) -> int:
        return self._degree_of[g]

    def to_local(self, g: int) -> Tuple[int, int]:
        d = self._degree_of[g]
        return d, g - self.offsets[d]

    def to_global(self, d: int, i: int) -> int:
        return self.offsets[d] + i

    def degree_range(self, d: int) -> range:
        return range(self.offsets[d], self.offsets[d + 1])

    def label(self, g: int) -> str:
        d, i = self.to_local(g)
        return f"e{i}^({d})"

    @property
    def unit(self) -> CohomologyClass:
        return CohomologyClass.of(0, [1])

    @property
    def point_class(self) -> CohomologyClass:
        return CohomologyClass.of(self.top, [1])

    def total_vector(self, a: CohomologyClass) -> tuple:
        if len(a.coords) != self.betti[a.degree]:
            raise ValueError(f"class of degree {a.degree} needs {self.betti[a.degree]} coordinates")
        v = [ZERO] * self.total_dim
        v[self.offsets[a.degree]:self.offsets[a.degree + 1]] = a.coords
        return tuple(v)

    def basis_class(self, d: int, i: int) -> CohomologyClass:
        return CohomologyClass.of(d, [1 if j == i else 0 for j in range(self.betti[d])])

    # -- products ----------------------------------------------------------------

    def basis_product(self, d: int, i: int, e: int, j: int) -> tuple:
        """Coordinates of e_i^(d) ∪ e_j^(e) in H^{d+e}."""
        if d + e > self.top:
            return ()
        block = self.table.get((d, e))
        if block is None:
            return (ZERO,) * self.betti[d + e]
        return block[i].column(j)

    def product(self, a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
        d, e = a.degree, b.degree
        if d + e > self.top:
            return CohomologyClass(d + e, ())
        out = [ZERO] * self.betti[d + e]
        block = self.table.get((d, e))
        if block is not None:
            for i, x in enumerate(a.coords):
                if not x:
                    continue
                for k, row in enumerate(block[i].sparse_rows()):
                    for j, c in row.items():
                        y = b.coords[j]
                        if y:
                            out[k] = out[k] + x * c * y
        return CohomologyClass(d + e, tuple(out))

    def cup_operator(self, a: CohomologyClass) -> Matrix:
        """Matrix of v ↦ a ∪ v on the total cohomology."""
        N = self.total_dim
        rows = [dict() for _ in range(N)]
        d = a.degree
        for e in range(self.top - d + 1):
            block = self.table.get((d, e))
            if block is None:
                continue
            for i, x in enumerate(a.coords):
                if not x:
                    continue
                for k, row in enumerate(block[i].sparse_rows()):
                    gk = self.offsets[d + e] + k
                    r = rows[gk]
                    for j, c in row.items():
                        gj = self.offsets[e] + j
                        val = r.get(gj, ZERO) + x * c
                        if val:
                            r[gj] = val
                        else:
                            r.pop(gj, None)
        return Matrix.from_sparse_rows(rows, N)

    def basis_cup_operator(self, g: int) -> Matrix:
        if g not in self._cup_cache:
            d, i = self.to_local(g)
            self._cup_cache[g] = self.cup_operator(self.basis_class(d, i))
        return self._cup_cache[g]

    def pairing_matrix(self, d: int) -> Matrix:
        """Poincaré pairing H^d x H^{4n-d} -> coefficient of the point class."""
        e = self.top - d
        block = self.table.get((d, e))
        if block is None:
            return Matrix.zeros(self.betti[d], self.betti[e])
        return Matrix([[block[i][0, j] for j in range(self.betti[e])] for i in range(self.betti[d])],
                      cols=self.betti[e])

    # -- validation ------------------------------------------------------------

    def validate(self) -> List[str]:
        problems: List[str] = []
        if self.betti[0] != 1:
            problems.append(f"unit dimension: dim H^0 = {self.betti[0]}, expected 1")
        if self.betti[self.top] != 1:
            problems.append(f"point class dimension: dim H^{self.top} = {self.betti[self.top]}, expected 1")
        if problems:
            return problems
        problems.extend(self._commutativity_violations())
        if not problems:
            problems.extend(self._associativity_violations())
        for d in range(self.top + 1):
            P = self.pairing_matrix(d)
            if not P.is_square() or rank(P) != P.rows:
                problems.append(f"Poincaré pairing H^{d} x H^{self.top - d} is degenerate")
        return problems

    def _commutativity_violations(self) -> List[str]:
        out = []
        for d in range(self.top + 1):
            for e in range(d, self.top - d + 1):
                sign = -1 if (d * e) % 2 else 1
                for i in range(self.betti[d]):
                    for j in range(self.betti[e]):
                        if d == e and j < i:
                            continue
                        ab = self.basis_product(d, i, e, j)
                        ba = self.basis_product(e, j, d, i)
                        if any(x != sign * y for x, y in zip(ab, ba)):
                            out.append(f"graded commutativity fails for pair "
                                       f"e{i}^({d}) and e{j}^({e})")
        return out

    def _associativity_violations(self) -> List[str]:
        out = []
        Ls = [self.basis_cup_operator(g) for g in range(self.total_dim)]
        for ga in range(1, self.total_dim):
            for gb in range(1, self.total_dim):
                da, ia = self.to_local(ga)
                db, ib = self.to_local(gb)
                if da + db > self.top:
                    continue
                ab = CohomologyClass(da + db, self.basis_product(da, ia, db, ib))
                lhs = self.cup_operator(ab)
                rhs = Ls[ga] @ Ls[gb]
                if lhs != rhs:
                    bad = next(c for c in range(self.total_dim) if lhs.column(c) != rhs.column(c))
                    out.append(f"associativity fails for triple {self.label(ga)}, "
                               f"{self.label(gb)}, {self.label(bad)}")
                    if len(out) >= 10:
                        return out
        return out

    def sparse_products(self) -> List[list]:
        """Nonzero structure constants as [d, i, j, k, coeff] with global indices.

        Products with the unit are omitted, since they are implied.
        """
        out = []
        for (d, e), block in sorted(self.table.items()):
            if d == 0 or e == 0:
                continue
            for i, M in enumerate(block):
                for k, row in enumerate(M.sparse_rows()):
                    for j, c in sorted(row.items()):
                        out.append([d + e, self.to_global(d, i), self.to_global(e, j),
                                    self.to_global(d + e, k), format_scalar(c)])
        out.sort(key=lambda t: (t[1], t[2], t[3]))
        return out


def cup_operator(A: GradedAlgebra, a: CohomologyClass) -> Matrix:
    return A.cup_operator(a)


def poincare_check(A: GradedAlgebra) -> bool:
    for d in range(A.top + 1):
        P = A.pairing_matrix(d)
        if not P.is_square() or rank(P) != P.rows:
            return False
    return True


def _as_int(x, what: str, problems: List[str]) -> Optional[int]:
    if isinstance(x, bool) or not isinstance(x, int):
        problems.append(f"{what} must be an integer, got {x!r}")
        return None
    return x


def parse_and_validate(document: dict) -> GradedAlgebra:
    """Build the ring described by ``document`` and check every ring invariant.

    Reads ``n``, ``betti`` and ``cup`` (entries ``[d, i, j, k, coeff]`` with
    global basis indices; ``d`` is the product degree, checked against the
    degree table implied by ``betti``).  Raises ValidationError listing all
    violations found.
    """
    problems: List[str] = []
    if not isinstance(document, dict):
        raise ValidationError(["document must be a JSON object"])
    if document.get("schema_version") != 1:
        problems.append("schema_version must be 1")
    n = _as_int(document.get("n"), "n", problems)
    betti = document.get("betti")
    if n is not None and n < 1:
        problems.append("n must be positive")
        n = None
    if not isinstance(betti, list) or not all(isinstance(b, int) and not isinstance(b, bool)
                                              and b >= 0 for b in betti):
        problems.append("betti must be a list of nonnegative integers")
        betti = None
    elif n is not None and len(betti) != 4 * n + 1:
        problems.append(f"betti must have {4 * n + 1} entries for n = {n}")
        betti = None
    if problems:
        raise ValidationError(problems)

    degree_of = [d for d, b in enumerate(betti) for _ in range(b)]
    offsets = [sum(betti[:d]) for d in range(len(betti))]
    total = len(degree_of)
    products = []
    seen = set()
    cup = document.get("cup", [])
    if not isinstance(cup, list):
        raise ValidationError(["cup must be a list of [d, i, j, k, coeff] entries"])
    for pos, entry in enumerate(cup):
        if not (isinstance(entry, list) and len(entry) == 5):
            problems.append(f"cup entry {pos} must be [d, i, j, k, coeff]")
            continue
        d, i, j, k, c = entry
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (d, i, j, k)):
            problems.append(f"cup entry {pos}: indices must be integers")
            continue
        if not all(0 <= x < total for x in (i, j, k)):
            problems.append(f"cup entry {pos}: basis index out of range 0..{total - 1}")
            continue
        if i == 0 or j == 0:
            problems.append(f"cup entry {pos}: products with the unit are implied and must not be listed")
            continue
        di, dj, dk = degree_of[i], degree_of[j], degree_of[k]
        if di + dj != dk or d != dk:
            problems.append(f"cup entry {pos}: degrees {di} + {dj} do not match product degree "
                            f"{d} / target degree {dk}")
            continue
        if (i, j, k) in seen:
            problems.append(f"cup entry {pos}: duplicate entry for ({i}, {j}, {k})")
            continue
        seen.add((i, j, k))
        try:
            coeff = scalar(c)
        except (TypeError, ValueError) as exc:
            problems.append(f"cup entry {pos}: bad coefficient ({exc})")
            continue
        products.append(((di, i - offsets[di]), (dj, j - offsets[dj]), k - offsets[dk], coeff))
    if problems:
        raise ValidationError(problems)
    A = GradedAlgebra(n, betti, products, name=str(document.get("name", "")))
    problems = A.validate()
    if problems:
        raise ValidationError(problems)
    return A


def build_k3(gram: Matrix) -> GradedAlgebra:
    """H^* = Q + H^2 + Q with α ∪ α' = (αᵀ gram α') · point."""
    if gram.shape != (22, 22):
        raise ValueError("a K3 Gram matrix is 22 x 22")
    if not gram.is_rational() or not gram.is_symmetric():
        raise ValueError("K3 Gram matrix must be rational and symmetric")
    if rank(gram) != 22:
        raise ValueError("K3 Gram matrix is singular")
    products = []
    for i, row in enumerate(gram.sparse_rows()):
        for j, c in row.items():
            products.append(((2, i), (2, j), 0, c))
    return GradedAlgebra(1, [1, 0, 22, 0, 1], products, name="K3")
