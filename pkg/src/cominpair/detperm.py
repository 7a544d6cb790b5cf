"""Permanents, the 5x5 determinantal projection example, and Taylor data of det at a smooth point."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import lcm, prod

from .exact import DimensionError, Matrix, ResourceLimitError, det_exact, to_scalar
from .poly import MultiPoly, poly_det

NAIVE_PERMANENT_CAP = 10
RYSER_PERMANENT_CAP = 20


def _square(m) -> Matrix:
    m = m if isinstance(m, Matrix) else Matrix(m)
    if not m.is_square():
        raise DimensionError(f"permanent needs a square matrix, got {m.rows}x{m.cols}")
    return m


def permanent_naive(m) -> Fraction:
    """Sum over all permutations; the oracle for permanent_ryser."""
    m = _square(m)
    n = m.rows
    if n > NAIVE_PERMANENT_CAP:
        raise ResourceLimitError(f"naive permanent capped at n={NAIVE_PERMANENT_CAP}, got n={n}")
    rows = m.tolist()
    return sum((prod(rows[i][s[i]] for i in range(n)) for s in permutations(range(n))), Fraction(0))


def permanent_ryser(m) -> Fraction:
    """Ryser's inclusion-exclusion formula, visiting column subsets in Gray-code order."""
    m = _square(m)
    n = m.rows
    if n > RYSER_PERMANENT_CAP:
        raise ResourceLimitError(f"Ryser permanent capped at n={RYSER_PERMANENT_CAP}, got n={n}")
    if n == 0:
        return Fraction(1)
    # scale each row to integers so the 2^n loop runs on ints
    scales = [lcm(*(m[i, j].denominator for j in range(n))) for i in range(n)]
    cols = [[int(m[i, j] * scales[i]) for i in range(n)] for j in range(n)]
    row_sums = [0] * n
    total = 0
    size = 0
    gray = 0
    for k in range(1, 2 ** n):
        j = (k & -k).bit_length() - 1
        gray ^= 1 << j
        if gray >> j & 1:
            size += 1
            row_sums = [s + c for s, c in zip(row_sums, cols[j])]
        else:
            size -= 1
            row_sums = [s - c for s, c in zip(row_sums, cols[j])]
        term = prod(row_sums)
        total += term if size % 2 == 0 else -term
    value = Fraction(total if n % 2 == 0 else -total, prod(scales))
    return value


def valiant_matrix() -> list[list[MultiPoly]]:
    """5x5 matrix of affine forms whose determinant is x1*x2*x3 + x4*x5*x6."""
    x = [None] + [MultiPoly.variable(6, i) for i in range(1, 7)]
    zero = MultiPoly(6)
    one = MultiPoly.constant(6, 1)
    return [
        [zero, x[1], zero, x[4], zero],
        [zero, one, x[2], zero, zero],
        [x[3], zero, one, zero, zero],
        [zero, zero, zero, one, x[5]],
        [x[6], zero, zero, zero, one],
    ]


def valiant_target() -> MultiPoly:
    x = [None] + [MultiPoly.variable(6, i) for i in range(1, 7)]
    return x[1] * x[2] * x[3] + x[4] * x[5] * x[6]


def valiant_example_verify() -> bool:
    """Expand the 5x5 determinant fully and compare with the target polynomial."""
    return (poly_det(valiant_matrix()) - valiant_target()).is_zero()


def valiant_evaluate(point) -> Fraction:
    """Numeric determinant of the 5x5 matrix at a point of Q^6."""
    point = [to_scalar(v) for v in point]
    rows = [[entry(point) for entry in row] for row in valiant_matrix()]
    return det_exact(Matrix(rows))


@dataclass(frozen=True)
class TangentTriple:
    """(x, A, y) with x a 1 x m row, A an m x m matrix and y an m x 1 column."""

    x: Matrix
    A: Matrix
    y: Matrix

    def __post_init__(self):
        for name in ("x", "A", "y"):
            value = getattr(self, name)
            if not isinstance(value, Matrix):
                object.__setattr__(self, name, Matrix(value))
        m = self.A.rows
        if self.A.shape != (m, m):
            raise DimensionError(f"A must be square, got {self.A.rows}x{self.A.cols}")
        if self.x.shape != (1, m):
            raise DimensionError(f"x must be 1x{m}, got {self.x.rows}x{self.x.cols}")
        if self.y.shape != (m, 1):
            raise DimensionError(f"y must be {m}x1, got {self.y.rows}x{self.y.cols}")

    @property
    def size(self) -> int:
        return self.A.rows

    @classmethod
    def from_text(cls, text: str) -> "TangentTriple":
        """Three matrix blocks (x, A, y) in the plain matrix format, separated by blank lines."""
        from .exact import parse_matrix

        blocks, current, start = [], [], None
        for lineno, line in enumerate(text.splitlines(), 1):
            if line.split("#", 1)[0].strip():
                if not current:
                    start = lineno
                current.append(line)
            elif current:
                blocks.append((start, current))
                current = []
        if current:
            blocks.append((start, current))
        if len(blocks) != 3:
            raise ValueError(f"expected 3 matrix blocks (x, A, y), found {len(blocks)}")
        mats = []
        for start, lines in blocks:
            try:
                mats.append(parse_matrix("\n".join(lines)))
            except ValueError as exc:
                raise ValueError(f"in block starting at line {start}: {exc}") from None
        return cls(*mats)


@dataclass(frozen=True)
class TaylorCoefficients:
    """c_2..c_kmax from the implicit graph, the same from matrix powers, and whether they match."""

    implicit: tuple[Fraction, ...]
    powers: tuple[Fraction, ...]

    @property
    def agree(self) -> bool:
        return self.implicit == self.powers

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self.implicit

    def __len__(self) -> int:
        return len(self.implicit)


def _interpolate(values: list[Fraction]) -> list[Fraction]:
    """Coefficients of the polynomial taking values[i] at t = i (Newton form, expanded)."""
    n = len(values)
    diffs = list(values)
    newton = [diffs[0]]
    for level in range(1, n):
        diffs = [(diffs[i + 1] - diffs[i]) / level for i in range(len(diffs) - 1)]
        newton.append(diffs[0])
    coeffs = [Fraction(0)] * n
    basis = [Fraction(1)]  # prod_{i<k} (t - i)
    for k, a in enumerate(newton):
        for i, b in enumerate(basis):
            coeffs[i] += a * b
        nxt = [Fraction(0)] * (len(basis) + 1)
        for i, b in enumerate(basis):
            nxt[i + 1] += b
            nxt[i] -= k * b
        basis = nxt
    return coeffs


def _bordered(t: TangentTriple, s: Fraction) -> Matrix:
    m = t.size
    rows = []
    for i in range(m):
        row = [(1 if i == j else 0) + s * t.A[i, j] for j in range(m)]
        rows.append(row + [s * t.y[i, 0]])
    rows.append([s * t.x[0, j] for j in range(m)] + [0])
    return Matrix(rows)


def _shifted(t: TangentTriple, s: Fraction) -> Matrix:
    m = t.size
    return Matrix([[(1 if i == j else 0) + s * t.A[i, j] for j in range(m)] for i in range(m)])


def implicit_graph_series(t: TangentTriple, k_max: int) -> list[Fraction]:
    """Coefficients w_0..w_kmax of the solution w(t) of det([[Id+tA, ty], [tx, w]]) = 0.

    The determinant is w*D(t) + N(t) with D(t) = det(Id+tA) and N(t) the value at w = 0,
    so w = -N/D.  Both are recovered as polynomials from exact evaluations.
    """
    m = t.size
    d_vals = [det_exact(_shifted(t, Fraction(s))) for s in range(m + 1)]
    n_vals = [det_exact(_bordered(t, Fraction(s))) for s in range(m + 2)]
    d = _interpolate(d_vals)
    n = _interpolate(n_vals)
    if d[0] != 1:
        raise ArithmeticError("det(Id + tA) should be 1 at t = 0")
    d += [Fraction(0)] * (k_max + 1)
    n += [Fraction(0)] * (k_max + 1)
    w = []
    for k in range(k_max + 1):
        w.append(-n[k] - sum(d[j] * w[k - j] for j in range(1, k + 1)))
    return w


def det_local_taylor(t: TangentTriple, k_max: int) -> TaylorCoefficients:
    """Taylor coefficients c_2..c_kmax of the determinant hypersurface graph along (x, A, y)."""
    if k_max < 2:
        raise ValueError(f"k_max must be at least 2, got {k_max}")
    if det_exact(_shifted(t, Fraction(1))) == 0:
        raise ZeroDivisionError("Id + A is singular, so the graph is not defined at t = 1")
    series = implicit_graph_series(t, k_max)
    implicit = tuple(series[2:])

    powers = []
    v = t.y
    for k in range(2, k_max + 1):
        value = (t.x @ v)[0, 0]
        powers.append(value if k % 2 == 0 else -value)
        v = t.A @ v
    return TaylorCoefficients(implicit, tuple(powers))


def random_triple(rng, m: int, bound: int = 5) -> TangentTriple:
    """Random rational triple with Id + A invertible; rng is a random.Random."""

    def rnd():
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))

    while True:
        a = Matrix([[rnd() for _ in range(m)] for _ in range(m)])
        if det_exact(Matrix.identity(m) + a) != 0:
            break
    x = Matrix([[rnd() for _ in range(m)]])
    y = Matrix([[rnd()] for _ in range(m)])
    return TangentTriple(x, a, y)
