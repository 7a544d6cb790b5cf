"""Exact rational matrices, determinants, Pfaffians and minors.

Every scalar is a :class:`fractions.Fraction`.  Matrices are immutable
row-major tuples; index subsets are sorted tuples of 1-based indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, Sequence

Scalar = Fraction


class DimensionError(ValueError):
    """Raised when matrix shapes or index sets do not fit together."""


class ResourceLimitError(RuntimeError):
    """Raised when an exhaustive routine is asked to exceed its size cap."""


@dataclass
class OpCounter:
    """Tally of field operations; divisions are counted as multiplications."""

    multiplications: int = 0
    additions: int = 0

    def mul(self, k: int = 1) -> None:
        self.multiplications += k

    def add(self, k: int = 1) -> None:
        self.additions += k

    @property
    def total(self) -> int:
        return self.multiplications + self.additions


def to_scalar(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


def format_scalar(value: Fraction) -> str:
    value = to_scalar(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Matrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: Sequence[Sequence], cols: int | None = None):
        data = tuple(tuple(to_scalar(v) for v in row) for row in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        for row in data:
            if len(row) != cols:
                raise DimensionError("ragged matrix rows")
        self.rows = len(data)
        self.cols = cols
        self._data = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_flat(cls, rows: int, cols: int, entries: Sequence) -> "Matrix":
        if len(entries) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(entries)}")
        return cls([entries[r * cols:(r + 1) * cols] for r in range(rows)], cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def flat(self) -> list[Fraction]:
        return [v for r in self._data for v in r]

    def transpose(self) -> "Matrix":
        return Matrix([[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)], self.rows)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], self.cols)

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self._data], self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = to_scalar(c)
        return Matrix([[c * a for a in r] for r in self._data], self.cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return matmul(self, other)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        """Submatrix on 0-based row and column positions."""
        return Matrix([[self._data[i][j] for j in cols] for i in rows], len(cols))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.shape, self._data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_scalar(v) for v in r) for r in self._data)
        return f"Matrix({self.rows}x{self.cols}: {body})"


def matmul(a: Matrix, b: Matrix, counter: OpCounter | None = None) -> Matrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    out = []
    for i in range(a.rows):
        ai = a.row(i)
        out.append([sum((ai[k] * b[k, j] for k in range(a.cols)), Fraction(0)) for j in range(b.cols)])
    if counter is not None and a.cols:
        counter.mul(a.rows * b.cols * a.cols)
        counter.add(a.rows * b.cols * (a.cols - 1))
    return Matrix(out, b.cols)


class SkewMatrix(Matrix):
    """Skew-symmetric matrix: z[i, j] == -z[j, i] and zero diagonal."""

    __slots__ = ()

    def __init__(self, rows: Sequence[Sequence]):
        super().__init__(rows)
        if not self.is_square():
            raise DimensionError("skew matrix must be square")
        for i in range(self.rows):
            if self[i, i] != 0:
                raise ValueError(f"nonzero diagonal entry at {i + 1}")
            for j in range(i + 1, self.rows):
                if self[i, j] != -self[j, i]:
                    raise ValueError(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not opposite")

    @classmethod
    def from_upper(cls, n: int, upper) -> "SkewMatrix":
        """Build from a mapping {(i, j): value} with 1 <= i < j <= n, or a
        flat sequence of the strict upper triangle in row-major order."""
        full = [[Fraction(0)] * n for _ in range(n)]
        if hasattr(upper, "items"):
            items = upper.items()
        else:
            pairs = list(combinations(range(1, n + 1), 2))
            upper = list(upper)
            if len(upper) != len(pairs):
                raise DimensionError(f"expected {len(pairs)} upper entries, got {len(upper)}")
            items = zip(pairs, upper)
        for (i, j), v in items:
            if not 1 <= i < j <= n:
                raise DimensionError(f"bad upper-triangle position ({i},{j})")
            v = to_scalar(v)
            full[i - 1][j - 1] = v
            full[j - 1][i - 1] = -v
        return cls(full)

    @classmethod
    def zeros(cls, n: int) -> "SkewMatrix":
        return cls([[0] * n for _ in range(n)])

    def upper(self) -> list[Fraction]:
        return [self[i, j] for i in range(self.rows) for j in range(i + 1, self.rows)]


class SymMatrix(Matrix):
    """Symmetric square matrix."""

    __slots__ = ()

    def __init__(self, rows: Sequence[Sequence]):
        super().__init__(rows)
        if not self.is_square():
            raise DimensionError("symmetric matrix must be square")
        for i in range(self.rows):
            for j in range(i + 1, self.rows):
                if self[i, j] != self[j, i]:
                    raise ValueError(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) differ")

    @classmethod
    def from_upper(cls, n: int, upper: Sequence) -> "SymMatrix":
        """Build from the upper triangle including the diagonal, row-major."""
        pairs = [(i, j) for i in range(n) for j in range(i, n)]
        if len(upper) != len(pairs):
            raise DimensionError(f"expected {len(pairs)} entries, got {len(upper)}")
        full = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), v in zip(pairs, upper):
            full[i][j] = full[j][i] = to_scalar(v)
        return cls(full)


def index_subset(indices: Iterable[int], n: int | None = None) -> tuple[int, ...]:
    """Validate a strictly increasing tuple of 1-based indices."""
    out = tuple(indices)
    for a, b in zip(out, out[1:]):
        if a >= b:
            raise ValueError(f"index subset {out} is not strictly increasing")
    if out and out[0] < 1:
        raise ValueError(f"index subset {out} has an index below 1")
    if n is not None and out and out[-1] > n:
        raise ValueError(f"index subset {out} exceeds dimension {n}")
    return out


def even_subsets(n: int):
    """All even-size subsets of [n], ordered by size then lexicographically."""
    for size in range(0, n + 1, 2):
        yield from combinations(range(1, n + 1), size)


def _as_matrix(m) -> Matrix:
    return m if isinstance(m, Matrix) else Matrix(m)


def det_exact(m, counter: OpCounter | None = None) -> Fraction:
    """Exact determinant.

    Denominators are cleared row by row, the integer matrix is reduced by
    Bareiss fraction-free elimination, and the row scales are divided back
    out at the end.
    """
    m = _as_matrix(m)
    if not m.is_square():
        raise DimensionError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)

    scale = 1
    a = []
    for i in range(n):
        row = m.row(i)
        d = lcm(*(v.denominator for v in row))
        scale *= d
        a.append([v.numerator * (d // v.denominator) for v in row])
        if counter is not None and d != 1:
            counter.mul(n)

    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            rowi, rowk = a[i], a[k]
            for j in range(k + 1, n):
                rowi[j] = (pivot * rowi[j] - aik * rowk[j]) // prev
            rowi[k] = 0
        if counter is not None:
            cells = (n - k - 1) ** 2
            counter.mul(3 * cells)
            counter.add(cells)
        prev = pivot
    return Fraction(sign * a[n - 1][n - 1], scale)


def cofactor_det(m) -> Fraction:
    """Laplace expansion along the first row; test oracle only."""
    m = _as_matrix(m)
    if not m.is_square():
        raise DimensionError("determinant of non-square matrix")
    rows = m.tolist()

    def rec(mat):
        k = len(mat)
        if k == 0:
            return Fraction(1)
        total = Fraction(0)
        for j in range(k):
            if mat[0][j] == 0:
                continue
            sub = [r[:j] + r[j + 1:] for r in mat[1:]]
            term = mat[0][j] * rec(sub)
            total += term if j % 2 == 0 else -term
        return total

    return rec(rows)


def rank_exact(rows: Sequence[Sequence]) -> int:
    """Rank of a rational matrix given as a list of rows."""
    a = []
    for row in rows:
        row = [to_scalar(v) for v in row]
        d = lcm(*(v.denominator for v in row)) if row else 1
        a.append([v.numerator * (d // v.denominator) for v in row])
    if not a:
        return 0
    ncols = len(a[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, len(a)):
            arc = a[r][c]
            rowr, rowp = a[r], a[rank]
            for j in range(c + 1, ncols):
                rowr[j] = (p * rowr[j] - arc * rowp[j]) // prev
            rowr[c] = 0
        prev = p
        rank += 1
        if rank == len(a):
            break
    return rank


def _pfaffian_small(z: Matrix) -> Fraction:
    n = z.rows
    if n == 0:
        return Fraction(1)
    if n == 2:
        return z[0, 1]
    return z[0, 1] * z[2, 3] - z[0, 2] * z[1, 3] + z[0, 3] * z[1, 2]


def pfaffian(z, counter: OpCounter | None = None) -> Fraction:
    """Pfaffian of a skew-symmetric matrix; zero for odd dimension.

    Sizes up to 4 use the closed forms.  Larger matrices are reduced two
    rows at a time: with pivot a = z[0, 1],

        Pf(z) = a * Pf(z'),  z'_ij = z_ij + (z_i0 z_1j - z_i1 z_0j) / a,

    after moving the first nonzero entry of row 0 into column 1.
    """
    z = _as_matrix(z)
    if not z.is_square():
        raise DimensionError("Pfaffian of non-square matrix")
    n = z.rows
    if n % 2:
        return Fraction(0)
    if n <= 4 and counter is None:
        return _pfaffian_small(z)

    a = z.tolist()
    result = Fraction(1)
    size = n
    while size > 0:
        row0 = a[0]
        col = next((j for j in range(1, size) if row0[j] != 0), None)
        if col is None:
            return Fraction(0)
        if col != 1:
            # swap indices 1 and col; this negates the Pfaffian
            for r in a:
                r[1], r[col] = r[col], r[1]
            a[1], a[col] = a[col], a[1]
            result = -result
        piv = a[0][1]
        result *= piv
        if counter is not None:
            counter.mul()
        if size == 2:
            break
        inv = 1 / piv
        rest = range(2, size)
        new = [[Fraction(0)] * (size - 2) for _ in rest]
        for ii, i in enumerate(rest):
            zi0, zi1 = a[i][0], a[i][1]
            for jj in range(ii + 1, size - 2):
                j = jj + 2
                v = a[i][j] + (zi0 * a[1][j] - zi1 * a[0][j]) * inv
                new[ii][jj] = v
                new[jj][ii] = -v
        if counter is not None:
            cells = (size - 2) * (size - 3) // 2
            counter.mul(3 * cells + 1)
            counter.add(2 * cells)
        a = new
        size -= 2
    return result


def pfaffian_matching_sum(z) -> Fraction:
    """Pfaffian as the signed sum over perfect matchings; test oracle only."""
    z = _as_matrix(z)
    n = z.rows
    if n % 2:
        return Fraction(0)

    def rec(idx):
        if not idx:
            return Fraction(1)
        i = idx[0]
        total = Fraction(0)
        for k, j in enumerate(idx[1:]):
            if z[i, j] == 0:
                continue
            rest = idx[1:k + 1] + idx[k + 2:]
            term = z[i, j] * rec(rest)
            total += term if k % 2 == 0 else -term
        return total

    return rec(tuple(range(n)))


def minor(m, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    """Minor on 1-based row set ``rows`` and column set ``cols``."""
    m = _as_matrix(m)
    rows = index_subset(rows, m.rows)
    cols = index_subset(cols, m.cols)
    if len(rows) != len(cols):
        raise DimensionError(f"row set {rows} and column set {cols} differ in size")
    if not rows:
        return Fraction(1)
    return det_exact(m.submatrix([i - 1 for i in rows], [j - 1 for j in cols]))


def sub_pfaffian(z, indices: Sequence[int]) -> Fraction:
    """Pfaffian of the principal submatrix on the 1-based index set."""
    z = _as_matrix(z)
    idx = index_subset(indices, z.rows)
    if len(idx) % 2:
        raise ValueError(f"sub-Pfaffian needs an even index set, got {idx}")
    if not idx:
        return Fraction(1)
    pos = [i - 1 for i in idx]
    return pfaffian(z.submatrix(pos, pos))


def sgn_index(indices: Sequence[int]) -> int:
    """(-1) ** (sum(I) + |I| / 2) for an even index set I."""
    idx = index_subset(indices)
    if len(idx) % 2:
        raise ValueError(f"sign needs an even index set, got {idx}")
    return -1 if (sum(idx) + len(idx) // 2) % 2 else 1


def tilde(z) -> SkewMatrix:
    """Entrywise twist z~[i, j] = (-1) ** (i + j + 1) * z[i, j] (1-based)."""
    z = _as_matrix(z)
    n = z.rows
    # 0-based i + j has the same parity as 1-based i + j
    return SkewMatrix([[z[i, j] if (i + j) % 2 else -z[i, j] for j in range(n)] for i in range(n)])


def parse_matrix(text: str) -> Matrix:
    """Parse the text format: a "rows cols" header, then row-major entries."""
    tokens = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        for col, tok in enumerate(line.split(), 1):
            tokens.append((tok, lineno, col))
    if len(tokens) < 2:
        raise ValueError("line 1: missing 'rows cols' header")
    try:
        rows, cols = int(tokens[0][0]), int(tokens[1][0])
    except ValueError:
        raise ValueError(f"line {tokens[0][1]}: header must be two integers") from None
    if rows < 0 or cols < 0:
        raise ValueError(f"line {tokens[0][1]}: negative dimension")
    body = tokens[2:]
    if len(body) != rows * cols:
        where = body[-1][1] if body else tokens[1][1]
        raise ValueError(f"line {where}: expected {rows * cols} entries, found {len(body)}")
    entries = []
    for tok, lineno, col in body:
        try:
            entries.append(Fraction(tok))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"line {lineno}, token {col}: bad rational {tok!r}") from None
    return Matrix.from_flat(rows, cols, entries)


def format_matrix(m: Matrix) -> str:
    lines = [f"{m.rows} {m.cols}"]
    lines += [" ".join(format_scalar(v) for v in m.row(i)) for i in range(m.rows)]
    return "\n".join(lines) + "\n"
