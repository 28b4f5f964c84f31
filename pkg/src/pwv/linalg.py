"""Exact dense linear algebra over the Gaussian rationals Q(i).

Entries are gmpy2 ``mpq`` values when real and :class:`GaussianRational`
otherwise.  Every arithmetic result collapses back to ``mpq`` as soon as its
imaginary part vanishes, so rational data never takes the complex code path
and "is rational" is a type test.

Row reduction runs on sparse dict rows internally; the public surface
(:class:`Matrix`, :class:`Subspace`) is dense and immutable.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from gmpy2 import mpq, mpz

ZERO = mpq(0)
ONE = mpq(1)


class LinalgError(ValueError):
    pass


class DimensionMismatchError(LinalgError):
    pass


class InconsistentSystemError(LinalgError):
    pass


class NotCommutingError(LinalgError):
    pass


class NonSemisimpleError(LinalgError):
    pass


class UnexpectedEigenvalueError(LinalgError):
    pass


# ---------------------------------------------------------------------------
# scalars


class GaussianRational:
    """a + b*i with a, b rational.  Use :func:`scalar` to build normalized values."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = mpq(re)
        self.im = mpq(im)

    def _parts(self):
        return self.re, self.im

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return _make(self.re + other.re, self.im + other.im)
        return _make(self.re + other, self.im)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return _make(self.re - other.re, self.im - other.im)
        return _make(self.re - other, self.im)

    def __rsub__(self, other):
        return _make(other - self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return _make(a * c - b * d, a * d + b * c)
        return _make(self.re * other, self.im * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            c, d = other.re, other.im
            den = c * c + d * d
            a, b = self.re, self.im
            return _make((a * c + b * d) / den, (b * c - a * d) / den)
        return _make(self.re / other, self.im / other)

    def __rtruediv__(self, other):
        c, d = self.re, self.im
        den = c * c + d * d
        return _make(other * c / den, -other * d / den)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        try:
            return self.im == 0 and self.re == other
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[mpq, GaussianRational]

I = GaussianRational(0, 1)


def _make(re, im):
    if im == 0:
        return re
    g = GaussianRational.__new__(GaussianRational)
    g.re = re
    g.im = im
    return g


_SPLIT = re.compile(r"(?<=[0-9/])(?=[+-])")


def _parse_rational(s: str) -> mpq:
    s = s.strip()
    if s in ("", "+"):
        return ONE
    if s == "-":
        return -ONE
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
        raise ValueError(f"not an exact rational: {s!r}")
    return mpq(s.lstrip("+"))


def scalar(x) -> Scalar:
    """Coerce ``x`` to an exact field element.

    Accepts ints, Fractions, mpq, GaussianRational and strings of the form
    ``"p/q"``, ``"p/q+r/s*i"``, ``"i"``, ``"-3*i"``.  Floats are refused.
    """
    if isinstance(x, GaussianRational):
        return _make(x.re, x.im)
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)) or type(x) in (type(ZERO), type(mpz(0))):
        return mpq(x)
    if isinstance(x, str):
        s = x.replace(" ", "")
        if not s:
            raise ValueError("empty scalar string")
        if s.endswith("i"):
            body = s[:-1]
            if body.endswith("*"):
                body = body[:-1]
            parts = _SPLIT.split(body)
            if len(parts) == 1:
                return _make(ZERO, _parse_rational(parts[0]))
            if len(parts) == 2:
                return _make(_parse_rational(parts[0]), _parse_rational(parts[1]))
            raise ValueError(f"cannot parse scalar {x!r}")
        return _parse_rational(s)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


def format_scalar(x) -> str:
    """Canonical text: ``"1/2"``, ``"-3"``, ``"1/2-3/4*i"``."""
    if isinstance(x, GaussianRational) and x.im != 0:
        sign = "-" if x.im < 0 else "+"
        return f"{x.re}{sign}{abs(x.im)}*i"
    if isinstance(x, GaussianRational):
        x = x.re
    return str(mpq(x))


def is_rational(x) -> bool:
    return not isinstance(x, GaussianRational) or x.im == 0


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Immutable dense matrix with exact entries."""

    __slots__ = ("rows", "cols", "_data", "_sparse", "_hash")

    def __init__(self, data: Iterable[Iterable], cols: Optional[int] = None):
        rows = tuple(tuple(scalar(x) for x in r) for r in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatchError("ragged matrix rows")
        self._init(rows, len(rows), cols)

    def _init(self, data, nrows, ncols):
        self._data = data
        self.rows = nrows
        self.cols = ncols
        self._sparse = None
        self._hash = None

    @classmethod
    def _trusted(cls, data, nrows, ncols) -> "Matrix":
        m = cls.__new__(cls)
        m._init(data, nrows, ncols)
        return m

    @classmethod
    def from_sparse_rows(cls, rows: Sequence[Dict[int, Scalar]], ncols: int) -> "Matrix":
        data = tuple(tuple(r.get(j, ZERO) for j in range(ncols)) for r in rows)
        return cls._trusted(data, len(rows), ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        row = (ZERO,) * ncols
        return cls._trusted((row,) * nrows, nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.diagonal([ONE] * n)

    @classmethod
    def diagonal(cls, values: Sequence) -> "Matrix":
        vals = [scalar(v) for v in values]
        n = len(vals)
        data = tuple(tuple(vals[i] if i == j else ZERO for j in range(n)) for i in range(n))
        return cls._trusted(data, n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: Optional[int] = None) -> "Matrix":
        if not columns:
            return cls.zeros(nrows or 0, 0)
        return cls(columns).T

    @classmethod
    def block_diagonal(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [[ZERO] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b._data):
                out[r0 + i][c0:c0 + b.cols] = row
            r0 += b.rows
            c0 += b.cols
        return cls._trusted(tuple(map(tuple, out)), n, m)

    @classmethod
    def unflatten(cls, vec: Sequence, nrows: int, ncols: int) -> "Matrix":
        vec = tuple(vec)
        data = tuple(vec[i * ncols:(i + 1) * ncols] for i in range(nrows))
        return cls._trusted(data, nrows, ncols)

    # -- access ------------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> List[list]:
        return [list(r) for r in self._data]

    def flatten(self) -> tuple:
        return tuple(x for r in self._data for x in r)

    def sparse_rows(self) -> List[Dict[int, Scalar]]:
        if self._sparse is None:
            self._sparse = [{j: x for j, x in enumerate(r) if x} for r in self._data]
        return self._sparse

    def sparse_flat(self) -> Dict[int, Scalar]:
        c = self.cols
        return {i * c + j: x for i, r in enumerate(self.sparse_rows()) for j, x in r.items()}

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        data = tuple(tuple(self._data[i][j] for j in cols) for i in rows)
        return Matrix._trusted(data, len(rows), len(cols))

    @property
    def T(self) -> "Matrix":
        if not self.rows:
            return Matrix.zeros(self.cols, 0)
        return Matrix._trusted(tuple(zip(*self._data)), self.cols, self.rows)

    # -- predicates ----------------------------------------------------------

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self.sparse_rows())

    def is_rational(self) -> bool:
        return all(is_rational(x) for r in self.sparse_rows() for x in r.values())

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    # -- arithmetic ----------------------------------------------------------

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionMismatchError(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        data = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data))
        return Matrix._trusted(data, self.rows, self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        data = tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data))
        return Matrix._trusted(data, self.rows, self.cols)

    def __neg__(self) -> "Matrix":
        data = tuple(tuple(-a for a in r) for r in self._data)
        return Matrix._trusted(data, self.rows, self.cols)

    def scale(self, c) -> "Matrix":
        c = scalar(c)
        data = tuple(tuple(c * a for a in r) for r in self._data)
        return Matrix._trusted(data, self.rows, self.cols)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        B = other.sparse_rows()
        n = other.cols
        out = []
        for r in self.sparse_rows():
            acc: Dict[int, Scalar] = {}
            for k, a in r.items():
                for j, b in B[k].items():
                    acc[j] = acc.get(j, ZERO) + a * b
            out.append(tuple(acc.get(j, ZERO) for j in range(n)))
        return Matrix._trusted(tuple(out), self.rows, n)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square() or k < 0:
            raise LinalgError("power needs a square matrix and k >= 0")
        result = Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def apply(self, v: Sequence) -> tuple:
        v = [scalar(x) for x in v]
        if len(v) != self.cols:
            raise DimensionMismatchError("vector length does not match")
        out = []
        for r in self.sparse_rows():
            acc = ZERO
            for j, a in r.items():
                acc = acc + a * v[j]
            out.append(acc)
        return tuple(out)

    def conjugate(self) -> "Matrix":
        data = tuple(tuple(x.conjugate() if isinstance(x, GaussianRational) else x for x in r)
                     for r in self._data)
        return Matrix._trusted(data, self.rows, self.cols)

    def rank(self) -> int:
        return rank(self)

    def __repr__(self):
        body = "; ".join(" ".join(format_scalar(x) for x in r) for r in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


def commutator(A: Matrix, B: Matrix) -> Matrix:
    return A @ B - B @ A


def hstack(blocks: Sequence[Matrix]) -> Matrix:
    nrows = blocks[0].rows
    data = tuple(tuple(x for b in blocks for x in b.row(i)) for i in range(nrows))
    return Matrix._trusted(data, nrows, sum(b.cols for b in blocks))


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    ncols = blocks[0].cols
    for b in blocks:
        if b.cols != ncols:
            raise DimensionMismatchError("vstack column mismatch")
    data = tuple(r for b in blocks for r in b._data)
    return Matrix._trusted(data, len(data), ncols)


# ---------------------------------------------------------------------------
# sparse echelon engine


class Echelon:
    """Incrementally maintained reduced row-echelon basis of sparse vectors.

    Rows are kept fully reduced (every pivot column is zero in all other rows)
    with pivots normalized to 1, so reducing a vector only touches the pivots
    in its own support.
    """

    __slots__ = ("ncols", "rows")

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: Dict[int, Dict[int, Scalar]] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Dict[int, Scalar]) -> Dict[int, Scalar]:
        v = dict(vec)
        rows = self.rows
        for p in [c for c in v if c in rows]:
            c = v[p]
            for col, x in rows[p].items():
                val = v.get(col, ZERO) - c * x
                if val:
                    v[col] = val
                else:
                    v.pop(col, None)
        return v

    def add(self, vec: Dict[int, Scalar]) -> Optional[Dict[int, Scalar]]:
        """Insert ``vec``; return its normalized remainder, or None if dependent."""
        r = self.reduce(vec)
        if not r:
            return None
        p = min(r)
        inv = ONE / r[p]
        r = {c: x * inv for c, x in r.items()}
        r[p] = ONE
        for row in self.rows.values():
            c = row.get(p)
            if c:
                for col, x in r.items():
                    val = row.get(col, ZERO) - c * x
                    if val:
                        row[col] = val
                    else:
                        row.pop(col, None)
        self.rows[p] = r
        return r

    def contains(self, vec: Dict[int, Scalar]) -> bool:
        return not self.reduce(vec)

    def coordinates(self, vec: Dict[int, Scalar]) -> Optional[Dict[int, Scalar]]:
        """Coefficients of ``vec`` on the rows (keyed by pivot), or None if outside."""
        if self.reduce(vec):
            return None
        return {p: vec[p] for p in vec if p in self.rows}

    def pivots(self) -> List[int]:
        return sorted(self.rows)

    def sorted_rows(self) -> List[Dict[int, Scalar]]:
        return [self.rows[p] for p in sorted(self.rows)]

    def kernel_vectors(self) -> List[Dict[int, Scalar]]:
        pivots = self.rows
        out = []
        for f in range(self.ncols):
            if f in pivots:
                continue
            v = {f: ONE}
            for p, row in pivots.items():
                x = row.get(f)
                if x:
                    v[p] = -x
            out.append(v)
        return out


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """Subspace of F^n stored by its reduced row-echelon basis."""

    __slots__ = ("ambient_dim", "basis", "_rows")

    def __init__(self, ambient_dim: int, rref_rows: Sequence[Dict[int, Scalar]]):
        self.ambient_dim = ambient_dim
        self._rows = [dict(r) for r in rref_rows]
        self.basis = Matrix.from_sparse_rows(self._rows, ambient_dim)

    @classmethod
    def span(cls, vectors: Iterable, ambient_dim: int) -> "Subspace":
        ech = Echelon(ambient_dim)
        for v in vectors:
            if isinstance(v, dict):
                ech.add(v)
            else:
                v = tuple(v)
                if len(v) != ambient_dim:
                    raise DimensionMismatchError("vector outside the ambient space")
                ech.add({j: scalar(x) for j, x in enumerate(v) if x})
        return cls._from_echelon(ech)

    @classmethod
    def _from_echelon(cls, ech: Echelon) -> "Subspace":
        return cls(ech.ncols, ech.sorted_rows())

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, [])

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, [{j: ONE} for j in range(n)])

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        return cls(n, [{j: ONE} for j in sorted(set(indices))])

    @property
    def dim(self) -> int:
        return len(self._rows)

    def vectors(self) -> List[tuple]:
        return [self.basis.row(i) for i in range(self.dim)]

    def sparse_vectors(self) -> List[Dict[int, Scalar]]:
        return [dict(r) for r in self._rows]

    def _echelon(self) -> Echelon:
        ech = Echelon(self.ambient_dim)
        for r in self._rows:
            ech.rows[min(r)] = dict(r)
        return ech

    def contains_vector(self, v) -> bool:
        if not isinstance(v, dict):
            v = {j: scalar(x) for j, x in enumerate(v) if x}
        return self._echelon().contains(v)

    def is_rational(self) -> bool:
        return self.basis.is_rational()

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _check_ambient(U: Subspace, V: Subspace):
    if U.ambient_dim != V.ambient_dim:
        raise DimensionMismatchError(f"ambient dimensions {U.ambient_dim} and {V.ambient_dim}")


def _echelon_of_rows(A: Matrix) -> Echelon:
    ech = Echelon(A.cols)
    for r in A.sparse_rows():
        ech.add(r)
    return ech


def rank(A: Matrix) -> int:
    return len(_echelon_of_rows(A))


def kernel(A: Matrix) -> Subspace:
    """Right kernel {v : A v = 0}."""
    return Subspace.span(_echelon_of_rows(A).kernel_vectors(), A.cols)


def image(A: Matrix) -> Subspace:
    """Column span of A."""
    return Subspace._from_echelon(_echelon_of_rows(A.T)) if A.cols else Subspace.zero(A.rows)


def image_of(A: Matrix, U: Subspace) -> Subspace:
    """A(U) for a subspace U of the source of A."""
    if A.cols != U.ambient_dim:
        raise DimensionMismatchError("matrix source does not match subspace ambient")
    return Subspace.span([A.apply(v) for v in U.vectors()], A.rows)


def solve_sparse(equations: Sequence[Dict[int, Scalar]], rhs: Sequence[Scalar], ncols: int):
    """Solve a sparse system; return (solution dict, kernel basis dicts).

    Free variables are set to zero.  Raises InconsistentSystemError.
    """
    ech = Echelon(ncols + 1)
    for eq, b in zip(equations, rhs):
        v = dict(eq)
        if b:
            v[ncols] = b
        ech.add(v)
    if ncols in ech.rows:
        raise InconsistentSystemError("inconsistent linear system")
    solution = {p: row[ncols] for p, row in ech.rows.items() if ncols in row}
    for row in ech.rows.values():
        row.pop(ncols, None)
    ech.ncols = ncols
    return solution, ech.kernel_vectors()


def solve_linear(A: Matrix, b: Matrix) -> Tuple[Matrix, Subspace]:
    """Solve A x = b for a single right-hand column b.

    Returns (x as a column Matrix, kernel of A).  The particular solution has
    every free variable equal to zero.
    """
    if b.rows != A.rows or b.cols != 1:
        raise DimensionMismatchError("right-hand side must be a column with A.rows entries")
    sol, ker = solve_sparse(A.sparse_rows(), b.column(0), A.cols)
    x = Matrix._trusted(tuple((sol.get(j, ZERO),) for j in range(A.cols)), A.cols, 1)
    return x, Subspace.span(ker, A.cols)


def inverse(A: Matrix) -> Matrix:
    if not A.is_square():
        raise LinalgError("inverse of a non-square matrix")
    n = A.rows
    ech = Echelon(2 * n)
    for i, r in enumerate(A.sparse_rows()):
        v = dict(r)
        v[n + i] = ONE
        ech.add(v)
    if ech.pivots()[:n] != list(range(n)):
        raise LinalgError("matrix is singular")
    data = tuple(tuple(ech.rows[i].get(n + j, ZERO) for j in range(n)) for i in range(n))
    return Matrix._trusted(data, n, n)


def subspace_sum(U: Subspace, V: Subspace) -> Subspace:
    _check_ambient(U, V)
    return Subspace.span(U.sparse_vectors() + V.sparse_vectors(), U.ambient_dim)


def subspace_intersect(U: Subspace, V: Subspace) -> Subspace:
    """U ∩ V from the kernel of the stacked system [U^T | -V^T]."""
    _check_ambient(U, V)
    if U.dim == 0 or V.dim == 0:
        return Subspace.zero(U.ambient_dim)
    n = U.ambient_dim
    du = U.dim
    # variables: coefficients x on U's rows then y on V's rows; equations per coordinate
    eqs: List[Dict[int, Scalar]] = [dict() for _ in range(n)]
    for k, r in enumerate(U._rows):
        for j, x in r.items():
            eqs[j][k] = x
    for k, r in enumerate(V._rows):
        for j, x in r.items():
            eqs[j][du + k] = -x
    _, ker = solve_sparse(eqs, [ZERO] * n, du + V.dim)
    out = []
    for kv in ker:
        acc: Dict[int, Scalar] = {}
        for k, c in kv.items():
            if k >= du:
                continue
            for j, x in U._rows[k].items():
                val = acc.get(j, ZERO) + c * x
                if val:
                    acc[j] = val
                else:
                    acc.pop(j, None)
        out.append(acc)
    return Subspace.span(out, n)


def subspace_contains(U: Subspace, V: Subspace) -> bool:
    """True iff V ⊆ U."""
    _check_ambient(U, V)
    ech = U._echelon()
    return all(ech.contains(r) for r in V._rows)


def subspace_equal(U: Subspace, V: Subspace) -> bool:
    _check_ambient(U, V)
    return U == V


def direct_sum(spaces: Sequence[Subspace], ambient_dim: int) -> Subspace:
    """Sum of subspaces, checked to be direct."""
    vecs: List[Dict[int, Scalar]] = []
    for S in spaces:
        if S.ambient_dim != ambient_dim:
            raise DimensionMismatchError("ambient mismatch in direct sum")
        vecs.extend(S.sparse_vectors())
    total = Subspace.span(vecs, ambient_dim)
    if total.dim != len(vecs):
        raise LinalgError("sum is not direct")
    return total


# ---------------------------------------------------------------------------
# eigenspaces


def eigenspace(A: Matrix, value) -> Subspace:
    return kernel(A - Matrix.identity(A.rows).scale(value))


def simultaneous_eigenspaces(ops: Sequence[Matrix],
                             expected_spectra: Sequence[Sequence[int]]) -> Dict[tuple, Subspace]:
    """Joint eigenspace decomposition of commuting semisimple operators.

    ``expected_spectra[t]`` lists the admissible eigenvalues of ``ops[t]``.
    Returns the nonzero joint eigenspaces keyed by eigenvalue tuple.
    """
    if len(ops) != len(expected_spectra):
        raise LinalgError("one spectrum hint per operator is required")
    if not ops:
        raise LinalgError("no operators given")
    n = ops[0].rows
    for A in ops:
        if A.shape != (n, n):
            raise DimensionMismatchError("operators must be square of equal size")
    for s in range(len(ops)):
        for t in range(s + 1, len(ops)):
            if not commutator(ops[s], ops[t]).is_zero():
                raise NotCommutingError(f"operators {s} and {t} do not commute")

    per_op: List[Dict[int, Subspace]] = []
    for t, (A, spectrum) in enumerate(zip(ops, expected_spectra)):
        spaces = {}
        for lam in sorted(set(spectrum)):
            E = eigenspace(A, lam)
            if E.dim:
                spaces[lam] = E
        total = sum(E.dim for E in spaces.values())
        if total != n:
            generalized = sum(kernel((A - Matrix.identity(n).scale(lam)) ** n).dim
                              for lam in sorted(set(spectrum)))
            if generalized != n:
                raise UnexpectedEigenvalueError(
                    f"operator {t} has eigenvalues outside {sorted(set(spectrum))}")
            raise NonSemisimpleError(f"operator {t} is not semisimple")
        per_op.append(spaces)

    blocks: Dict[tuple, Subspace] = {(): Subspace.full(n)}
    for spaces in per_op:
        refined = {}
        for key, B in blocks.items():
            for lam, E in spaces.items():
                C = subspace_intersect(B, E)
                if C.dim:
                    refined[key + (lam,)] = C
        blocks = refined
    if sum(B.dim for B in blocks.values()) != n:
        raise NonSemisimpleError("joint eigenspaces do not fill the space")
    return dict(sorted(blocks.items()))


# ---------------------------------------------------------------------------
# symmetric forms


def congruence_diagonalize(G: Matrix):
    """Return (D, P, (p, m, z)) with P^T G P = D diagonal over Q.

    Symmetric Gaussian elimination; a zero pivot is repaired by a swap with a
    later nonzero diagonal entry, or else by adding a column that pairs with it.
    """
    if not G.is_square():
        raise LinalgError("Gram matrix must be square")
    if not G.is_rational():
        raise LinalgError("Gram matrix must have rational entries")
    if not G.is_symmetric():
        raise LinalgError("Gram matrix must be symmetric")
    n = G.rows
    M = [list(r) for r in G.tolist()]
    P = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]

    def col_op(dst, src, c):
        # column and row operation: e_dst += c e_src
        for r in range(n):
            P[r][dst] += c * P[r][src]
        for r in range(n):
            M[r][dst] += c * M[r][src]
        for r in range(n):
            M[dst][r] += c * M[src][r]

    def swap(a, b):
        for r in range(n):
            P[r][a], P[r][b] = P[r][b], P[r][a]
        M[a], M[b] = M[b], M[a]
        for r in range(n):
            M[r][a], M[r][b] = M[r][b], M[r][a]

    for k in range(n):
        if M[k][k] == 0:
            j = next((j for j in range(k + 1, n) if M[j][j] != 0), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if M[k][j] != 0), None)
                if j is None:
                    continue
                col_op(k, j, ONE)
        d = M[k][k]
        for i in range(k + 1, n):
            if M[i][k] != 0:
                col_op(i, k, -M[i][k] / d)

    D = Matrix._trusted(tuple(tuple(M[i][j] if i == j else ZERO for j in range(n))
                              for i in range(n)), n, n)
    Pm = Matrix._trusted(tuple(map(tuple, P)), n, n)
    if Pm.T @ G @ Pm != D:
        raise LinalgError("internal error: congruence diagonalization failed")
    diag = [M[i][i] for i in range(n)]
    sig = (sum(1 for x in diag if x > 0), sum(1 for x in diag if x < 0),
           sum(1 for x in diag if x == 0))
    return D, Pm, sig
