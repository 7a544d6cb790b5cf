"""Big-cell expansions and their pairings for the five cominuscule families.

A point of the big cell is a small matrix of parameters.  ``expand`` lists
every minor (or sub-Pfaffian, or monomial) of it, which is exponentially
long; ``naive_pair`` takes the weighted dot product of two such vectors.
``fast_pair`` gets the same number from one determinant or Pfaffian of a
matrix whose size is polynomial in the parameters.

Index keys are ``(I, S)`` pairs of tuples for every family.  Spinor keys use
an empty ``S``; Veronese keys carry a weakly increasing ``I`` and empty ``S``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from math import comb, factorial, prod
from typing import Iterator, Union

from .exact import (
    DimensionError,
    Matrix,
    OpCounter,
    SkewMatrix,
    SymMatrix,
    det_exact,
    even_subsets,
    matmul,
    minor,
    pfaffian,
    sgn_index,
    sub_pfaffian,
    tilde,
)

Key = tuple[tuple[int, ...], tuple[int, ...]]


def _subsets(n: int, size: int):
    return combinations(range(1, n + 1), size)


@dataclass(frozen=True)
class Grassmannian:
    """G(k, n): primal chart x is k x (n-k), dual chart y is (n-k) x k."""

    k: int
    n: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n - 1:
            raise ValueError(f"Grassmannian needs 1 <= k <= n-1, got k={self.k}, n={self.n}")

    @property
    def name(self) -> str:
        return "grassmannian"

    @property
    def dim(self) -> int:
        return comb(self.n, self.k)

    def primal_shape(self):
        return (self.k, self.n - self.k)

    def dual_shape(self):
        return (self.n - self.k, self.k)

    def keys(self) -> Iterator[Key]:
        ell = self.n - self.k
        for size in range(min(self.k, ell) + 1):
            for I in _subsets(self.k, size):
                for S in _subsets(ell, size):
                    yield (I, S)

    def weight(self, key: Key) -> int:
        return 1


@dataclass(frozen=True)
class Lagrangian:
    """Lagrangian Grassmannian of n-planes in 2n-space; charts are symmetric n x n.

    Coordinates are all minors (I, S) with |I| = |S|, redundant ones
    included, so the stored vector has C(2n, n) slots.
    """

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Lagrangian needs n >= 1")

    @property
    def name(self) -> str:
        return "lagrangian"

    @property
    def dim(self) -> int:
        return comb(2 * self.n, self.n)

    def primal_shape(self):
        return (self.n, self.n)

    dual_shape = primal_shape

    def keys(self) -> Iterator[Key]:
        for size in range(self.n + 1):
            for I in _subsets(self.n, size):
                for S in _subsets(self.n, size):
                    yield (I, S)

    def weight(self, key: Key) -> int:
        return 1


@dataclass(frozen=True)
class Spinor:
    """Even half-spin representation of Spin(2n); charts are skew n x n."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("Spinor needs n >= 2")

    @property
    def name(self) -> str:
        return "spinor"

    @property
    def dim(self) -> int:
        return 2 ** (self.n - 1)

    def primal_shape(self):
        return (self.n, self.n)

    dual_shape = primal_shape

    def keys(self) -> Iterator[Key]:
        for I in even_subsets(self.n):
            yield (I, ())

    def weight(self, key: Key) -> int:
        return sgn_index(key[0])


@dataclass(frozen=True)
class Segre:
    """Product of n projective spaces of dimension p; chart x[j, s] is p x n.

    Key (I, S): S is a strictly increasing set of factors and I[m] in 1..p
    picks the coordinate used in factor S[m].
    """

    n: int
    p: int

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ValueError("Segre needs n >= 1 and p >= 1")

    @property
    def name(self) -> str:
        return "segre"

    @property
    def dim(self) -> int:
        return (self.p + 1) ** self.n

    def primal_shape(self):
        return (self.p, self.n)

    dual_shape = primal_shape

    def keys(self) -> Iterator[Key]:
        for size in range(self.n + 1):
            for I in product(range(1, self.p + 1), repeat=size):
                for S in _subsets(self.n, size):
                    yield (I, S)

    def weight(self, key: Key) -> int:
        return 1


@dataclass(frozen=True)
class Veronese:
    """Degree-n Veronese of a (p+1)-dimensional space; chart x is 1 x p.

    Key (I, ()): I weakly increasing in 1..p with |I| <= n, the monomial
    prod x[I].  Primal coordinates carry the multinomial coefficient of
    (1 + x.a)^n so that the dual side is plain monomials.
    """

    n: int
    p: int

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ValueError("Veronese needs n >= 1 and p >= 1")

    @property
    def name(self) -> str:
        return "veronese"

    @property
    def dim(self) -> int:
        return comb(self.n + self.p, self.n)

    def primal_shape(self):
        return (1, self.p)

    dual_shape = primal_shape

    def keys(self) -> Iterator[Key]:
        for size in range(self.n + 1):
            for I in combinations_with_replacement(range(1, self.p + 1), size):
                yield (I, ())

    def weight(self, key: Key) -> int:
        return 1

    def multinomial(self, I: tuple[int, ...]) -> int:
        counts: dict[int, int] = {}
        for i in I:
            counts[i] = counts.get(i, 0) + 1
        denom = factorial(self.n - len(I)) * prod(factorial(c) for c in counts.values())
        return factorial(self.n) // denom


PairingFamily = Union[Grassmannian, Lagrangian, Spinor, Segre, Veronese]

FAMILY_NAMES = ("grassmannian", "spinor", "lagrangian", "segre", "veronese")


def make_family(name: str, *sizes: int) -> PairingFamily:
    """Construct a family from its CLI name and integer sizes.

    grassmannian k n | spinor n | lagrangian n | segre n p | veronese n p
    """
    table = {
        "grassmannian": (Grassmannian, 2),
        "spinor": (Spinor, 1),
        "lagrangian": (Lagrangian, 1),
        "segre": (Segre, 2),
        "veronese": (Veronese, 2),
    }
    try:
        cls, arity = table[name.lower()]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; expected one of {', '.join(FAMILY_NAMES)}") from None
    if len(sizes) != arity:
        raise ValueError(f"family {name} takes {arity} size parameter(s), got {len(sizes)}")
    return cls(*sizes)


def _coerce(family: PairingFamily, params, dual: bool) -> Matrix:
    m = params if isinstance(params, Matrix) else Matrix(params)
    want = family.dual_shape() if dual else family.primal_shape()
    if m.shape != want:
        side = "dual" if dual else "primal"
        raise DimensionError(f"{family.name} {side} chart must be {want[0]}x{want[1]}, got {m.rows}x{m.cols}")
    if isinstance(family, Spinor) and not isinstance(m, SkewMatrix):
        m = SkewMatrix(m.tolist())
    if isinstance(family, Lagrangian) and not isinstance(m, SymMatrix):
        m = SymMatrix(m.tolist())
    return m


@dataclass(frozen=True)
class BigCellPoint:
    family: PairingFamily
    params: Matrix
    dual: bool = False

    def __post_init__(self):
        object.__setattr__(self, "params", _coerce(self.family, self.params, self.dual))


@dataclass
class SparseVector:
    """Coordinates of an expanded big-cell point; zeros are not stored."""

    family: PairingFamily
    coords: dict[Key, Fraction] = field(default_factory=dict)

    def __getitem__(self, key: Key) -> Fraction:
        return self.coords.get(key, Fraction(0))

    @property
    def leading(self) -> Fraction:
        return self[((), ())]

    def dense(self) -> list[Fraction]:
        return [self[key] for key in self.family.keys()]

    def __len__(self) -> int:
        return len(self.coords)


def _point(family_or_point, params, dual: bool) -> BigCellPoint:
    if isinstance(family_or_point, BigCellPoint):
        return family_or_point
    return BigCellPoint(family_or_point, params, dual)


def _coordinate(fam: PairingFamily, m: Matrix, key: Key, dual: bool) -> Fraction:
    I, S = key
    if isinstance(fam, (Grassmannian, Lagrangian)):
        return minor(m, S, I) if dual else minor(m, I, S)
    if isinstance(fam, Spinor):
        return sub_pfaffian(m, I)
    if isinstance(fam, Segre):
        return prod((m[j - 1, s - 1] for j, s in zip(I, S)), start=Fraction(1))
    value = prod((m[0, j - 1] for j in I), start=Fraction(1))
    return value if dual else value * fam.multinomial(I)


def _expand(point: BigCellPoint) -> SparseVector:
    fam, m = point.family, point.params
    coords = {}
    for key in fam.keys():
        v = _coordinate(fam, m, key, point.dual)
        if v:
            coords[key] = v
    return SparseVector(fam, coords)


def expand(point, params=None) -> SparseVector:
    """Every big-cell coordinate of a primal point; the empty key holds 1."""
    return _expand(_point(point, params, dual=False))


def expand_dual(point, params=None) -> SparseVector:
    """Dual-side coordinates, keyed so that ``naive_pair`` is a dot product.

    Minor families store Delta_{S,I}(y) under key (I, S).
    """
    return _expand(_point(point, params, dual=True))


def naive_pair(v: SparseVector, a: SparseVector) -> Fraction:
    """Weighted sum over shared keys; the ground truth for ``fast_pair``."""
    if v.family != a.family:
        raise ValueError(f"cannot pair {v.family} with {a.family}")
    fam = v.family
    small, big = (v, a) if len(v) <= len(a) else (a, v)
    total = Fraction(0)
    for key, value in small.coords.items():
        other = big.coords.get(key)
        if other:
            total += fam.weight(key) * value * other
    return total


def _identity_plus(m: Matrix, counter: OpCounter | None) -> Matrix:
    if counter is not None:
        counter.add(m.rows)
    return Matrix([[v + 1 if i == j else v for j, v in enumerate(m.row(i))] for i in range(m.rows)])


def spinor_matrix(z: Matrix, y: Matrix) -> SkewMatrix:
    """The 2n x 2n skew matrix [[tilde(z), Id], [-Id, -y]]."""
    n = z.rows
    zt = tilde(z)
    rows = []
    for i in range(n):
        rows.append(list(zt.row(i)) + [int(i == j) for j in range(n)])
    for i in range(n):
        rows.append([-int(i == j) for j in range(n)] + [-v for v in y.row(i)])
    return SkewMatrix(rows)


def block_matrix(fam: Segre | Veronese, x: Matrix, y: Matrix) -> Matrix:
    """The n(p+1) square block matrix

        [[Id, -X_1, ..., -X_p],
         [Y_1, Id,  0,  ...  ],
         ...
         [Y_p, 0, ...,   Id  ]]

    with X_j = diag(x[j, 1..n]); for the Veronese every diagonal entry of
    X_j is x[j].
    """
    n, p = fam.n, fam.p
    size = n * (p + 1)
    rows = [[Fraction(0)] * size for _ in range(size)]
    for r in range(size):
        rows[r][r] = Fraction(1)
    veronese = isinstance(fam, Veronese)
    for j in range(p):
        for s in range(n):
            xv = x[0, j] if veronese else x[j, s]
            yv = y[0, j] if veronese else y[j, s]
            rows[s][n * (j + 1) + s] = -xv
            rows[n * (j + 1) + s][s] = yv
    return Matrix(rows, size)


def fast_pair(family, x, y, counter: OpCounter | None = None) -> Fraction:
    """Evaluate the pairing with one determinant or Pfaffian.

    grassmannian, lagrangian: det(Id + x y)
    spinor:                   (-1)^(n(n-1)/2) Pf([[tilde(z), Id], [-Id, -y]])
    segre, veronese:          det of ``block_matrix``
    """
    if isinstance(x, BigCellPoint):
        family, x = x.family, x.params
    if isinstance(y, BigCellPoint):
        y = y.params
    x = _coerce(family, x, dual=False)
    y = _coerce(family, y, dual=True)
    if isinstance(family, (Grassmannian, Lagrangian)):
        return det_exact(_identity_plus(matmul(x, y, counter), counter), counter)
    if isinstance(family, Spinor):
        n = family.n
        value = pfaffian(spinor_matrix(x, y), counter)
        return -value if (n * (n - 1) // 2) % 2 else value
    return det_exact(block_matrix(family, x, y), counter)


def random_params(family: PairingFamily, rng: random.Random, dual: bool = False,
                  bound: int = 5, rational: bool = True) -> Matrix:
    """Random chart parameters; rationals have numerators and denominators up to ``bound``."""

    def draw():
        num = rng.randint(-bound, bound)
        return Fraction(num, rng.randint(1, bound)) if rational else Fraction(num)

    rows, cols = family.dual_shape() if dual else family.primal_shape()
    if isinstance(family, Spinor):
        return SkewMatrix.from_upper(rows, [draw() for _ in range(rows * (rows - 1) // 2)])
    if isinstance(family, Lagrangian):
        return SymMatrix.from_upper(rows, [draw() for _ in range(rows * (rows + 1) // 2)])
    return Matrix([[draw() for _ in range(cols)] for _ in range(rows)], cols)


def count_operations(family: PairingFamily, seed: int = 0) -> tuple[int, int]:
    """(multiplications, additions) performed by one ``fast_pair`` on random integer charts."""
    rng = random.Random(seed)
    x = random_params(family, rng, rational=False)
    y = random_params(family, rng, dual=True, rational=False)
    counter = OpCounter()
    fast_pair(family, x, y, counter)
    return counter.multiplications, counter.additions
