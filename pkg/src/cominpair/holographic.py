"""Counting #NAE-SAT solutions as a pairing of tensors.

Each variable/clause incidence is an edge carrying a copy of C^2.  Variables
contribute the "all equal" tensor, clauses the not-all-equal tensor, and
the full contraction over all edges counts satisfying assignments.  A
simultaneous change of basis on every edge leaves the count alone; the
Hadamard basis moves every local tensor into the sub-Pfaffian form that
``spinor_fit`` certifies.

Bit patterns index tensor coordinates with the first edge as the most
significant bit.
"""
from __future__ import annotations

import itertools
import os
import random
import string
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .cominuscule import Spinor, fast_pair
from .exact import Matrix, ResourceLimitError, SkewMatrix, sub_pfaffian, tilde

DEFAULT_MAX_EDGES = 24
HADAMARD = Matrix([[1, 1], [1, -1]])


def max_edges() -> int:
    raw = os.environ.get("COMINPAIR_MAX_EDGES")
    if raw is None:
        return DEFAULT_MAX_EDGES
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"COMINPAIR_MAX_EDGES must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class NAEFormula:
    num_variables: int
    clauses: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_variables < 0:
            raise ValueError("variable count must be nonnegative")
        for s, clause in enumerate(self.clauses, 1):
            if len(clause) < 2:
                raise ValueError(f"clause {s} has arity {len(clause)}; NAE clauses need at least 2 variables")
            for i in clause:
                if not 1 <= i <= self.num_variables:
                    raise ValueError(f"clause {s} mentions variable {i} outside 1..{self.num_variables}")

    @classmethod
    def from_json(cls, data: dict) -> "NAEFormula":
        try:
            n = data["variables"]
            clauses = data.get("clauses", [])
        except (KeyError, TypeError, AttributeError):
            raise ValueError('formula JSON needs {"variables": n, "clauses": [[...], ...]}') from None
        if not isinstance(n, int) or isinstance(n, bool):
            raise ValueError('"variables" must be an integer')
        for s, clause in enumerate(clauses, 1):
            if not isinstance(clause, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in clause):
                raise ValueError(f"clause {s} must be a list of integers")
        return cls(n, tuple(tuple(c) for c in clauses))

    def to_json(self) -> dict:
        return {"variables": self.num_variables, "clauses": [list(c) for c in self.clauses]}


class Edge(NamedTuple):
    variable: int
    clause: int
    slot: int  # position of the variable inside the clause, 0-based


@dataclass(frozen=True)
class IncidenceGraph:
    num_variables: int
    num_clauses: int
    edges: tuple[Edge, ...]

    def variable_edges(self, i: int) -> list[int]:
        return [k for k, e in enumerate(self.edges) if e.variable == i]

    def clause_edges(self, s: int) -> list[int]:
        return sorted((k for k, e in enumerate(self.edges) if e.clause == s), key=lambda k: self.edges[k].slot)

    def degree(self, i: int) -> int:
        return sum(1 for e in self.edges if e.variable == i)


def build_incidence_graph(f: NAEFormula) -> IncidenceGraph:
    """One edge per occurrence of a variable in a clause, sorted by (clause, variable, slot)."""
    edges = [Edge(i, s, slot) for s, clause in enumerate(f.clauses, 1) for slot, i in enumerate(clause)]
    edges.sort(key=lambda e: (e.clause, e.variable, e.slot))
    return IncidenceGraph(f.num_variables, len(f.clauses), tuple(edges))


@dataclass(frozen=True)
class LocalTensor:
    """Coordinates over {0,1}^d for an ordered list of d edges.

    ``scale`` records an overall factor already multiplied into the
    coordinates (the integral dual mode), so the tensor itself is
    coords / scale.
    """

    edges: tuple
    coords: tuple[Fraction, ...]
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))
        object.__setattr__(self, "edges", tuple(self.edges))
        if len(self.coords) != 2 ** len(self.edges):
            raise ValueError(f"{len(self.edges)} edges need {2 ** len(self.edges)} coordinates, got {len(self.coords)}")

    @property
    def arity(self) -> int:
        return len(self.edges)

    def pattern(self, index: int) -> tuple[int, ...]:
        d = self.arity
        return tuple((index >> (d - 1 - k)) & 1 for k in range(d))

    def value(self) -> tuple[Fraction, ...]:
        """Coordinates with the recorded scale divided out."""
        return tuple(c / self.scale for c in self.coords)

    def as_array(self) -> np.ndarray:
        arr = np.empty(len(self.coords), dtype=object)
        arr[:] = self.coords
        return arr.reshape((2,) * self.arity) if self.arity else arr.reshape(())


def _default_edges(d, edges):
    if edges is None:
        return tuple(range(1, d + 1))
    if len(edges) != d:
        raise ValueError(f"expected {d} edge labels, got {len(edges)}")
    return tuple(edges)


def variable_gadget(d: int, edges: Sequence | None = None) -> LocalTensor:
    """1 on the all-0 and all-1 patterns: every occurrence gets the same value."""
    if d < 1:
        raise ValueError("variable gadget needs degree >= 1")
    coords = [0] * (2 ** d)
    coords[0] = coords[-1] = 1
    return LocalTensor(_default_edges(d, edges), coords)


def nae_gadget(d: int, edges: Sequence | None = None) -> LocalTensor:
    """1 on every pattern except all-0 and all-1."""
    if d < 2:
        raise ValueError("NAE gadget needs arity >= 2")
    coords = [1] * (2 ** d)
    coords[0] = coords[-1] = 0
    return LocalTensor(_default_edges(d, edges), coords)


def apply_basis(t: LocalTensor, g: Matrix, scale=1) -> LocalTensor:
    """Apply the 2x2 matrix ``g`` on every edge factor.

    New coordinates are c'[delta] = sum_eps prod_k g[delta_k, eps_k] c[eps].
    """
    g00, g01, g10, g11 = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
    c = list(t.coords)
    d = t.arity
    for k in range(d):
        stride = 1 << (d - 1 - k)
        for base in range(len(c)):
            if base & stride:
                continue
            a, b = c[base], c[base | stride]
            c[base] = g00 * a + g01 * b
            c[base | stride] = g10 * a + g11 * b
    scale = Fraction(scale)
    if scale != 1:
        c = [v * scale for v in c]
    return LocalTensor(t.edges, c, t.scale * scale)


def inverse_transpose(g: Matrix) -> Matrix:
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    if det == 0:
        raise ValueError("basis change must be invertible")
    return Matrix([[g[1, 1] / det, -g[1, 0] / det], [-g[0, 1] / det, g[0, 0] / det]])


def hadamard_transform(t: LocalTensor, side: str = "primal", integral: bool = False) -> LocalTensor:
    """Change basis by T = [[1, 1], [1, -1]] on every edge.

    ``side="primal"`` applies T itself; ``side="dual"`` applies the
    inverse transpose T / 2.  With ``integral=True`` the dual result is
    multiplied by 2^d so its coordinates are integers, and ``scale``
    records the factor.
    """
    if side == "primal":
        return apply_basis(t, HADAMARD)
    if side != "dual":
        raise ValueError(f"side must be 'primal' or 'dual', got {side!r}")
    if integral:
        # (T/2)^{(x)d} scaled by 2^d is T^{(x)d}; only the recorded scale changes
        out = apply_basis(t, HADAMARD)
        return LocalTensor(out.edges, out.coords, t.scale * 2 ** t.arity)
    return apply_basis(t, HADAMARD.scale(Fraction(1, 2)))


@dataclass(frozen=True)
class SpinorFit:
    success: bool
    scale: Fraction = Fraction(0)
    z: SkewMatrix | None = None
    reason: str = ""
    violated: tuple[int, ...] | None = field(default=None)


def spinor_fit(t: LocalTensor) -> SpinorFit:
    """Decide whether coords = scale * (sub-Pfaffians of some skew z).

    The scale is the empty-pattern coordinate, z is read off the weight-2
    coordinates, and every other coordinate is then checked: odd weight
    must vanish, even weight must equal scale * Pf_I(z).
    """
    c = t.coords
    d = t.arity
    lam = c[0]
    if lam == 0:
        return SpinorFit(False, reason="not in big cell: empty-pattern coordinate is 0", violated=())

    def index_of(subset):
        return sum(1 << (d - k) for k in subset)

    upper = {}
    for i, j in itertools.combinations(range(1, d + 1), 2):
        upper[(i, j)] = c[index_of((i, j))] / lam
    z = SkewMatrix.from_upper(d, upper) if d else SkewMatrix([])

    for size in range(1, d + 1):
        for subset in itertools.combinations(range(1, d + 1), size):
            value = c[index_of(subset)]
            expected = lam * sub_pfaffian(z, subset) if size % 2 == 0 else 0
            if value != expected:
                return SpinorFit(False, lam, z, reason=f"coordinate {subset} is {value}, expected {expected}",
                                 violated=subset)
    return SpinorFit(True, lam, z)


def fit_with_random_basis(t: LocalTensor, rng: random.Random, trials: int = 20, bound: int = 3):
    """Try random invertible edge bases until ``spinor_fit`` succeeds.

    Returns ``(g, fit)`` for the first success or ``None``.  Never called
    implicitly by the counting pipeline.
    """
    for _ in range(trials):
        g = Matrix([[rng.randint(-bound, bound) for _ in range(2)] for _ in range(2)])
        if g[0, 0] * g[1, 1] == g[0, 1] * g[1, 0]:
            continue
        fit = spinor_fit(apply_basis(t, g))
        if fit.success:
            return g, fit
    return None


def _check_edges(graph: IncidenceGraph, cap: int | None) -> None:
    cap = max_edges() if cap is None else cap
    if len(graph.edges) > cap:
        raise ResourceLimitError(
            f"{len(graph.edges)} edges exceeds the contraction cap of {cap} (set COMINPAIR_MAX_EDGES to raise it)")
    if len(graph.edges) > len(string.ascii_letters):
        raise ResourceLimitError(f"contraction supports at most {len(string.ascii_letters)} edges")


def local_tensors(f: NAEFormula, graph: IncidenceGraph | None = None):
    """(variable tensors, clause tensors, number of isolated variables)."""
    graph = graph or build_incidence_graph(f)
    var_tensors, isolated = [], 0
    for i in range(1, f.num_variables + 1):
        edges = graph.variable_edges(i)
        if edges:
            var_tensors.append(variable_gadget(len(edges), edges))
        else:
            isolated += 1
    clause_tensors = [nae_gadget(len(edges), edges) for edges in
                      (graph.clause_edges(s) for s in range(1, graph.num_clauses + 1))]
    return var_tensors, clause_tensors, isolated


def contract(tensors: Sequence[LocalTensor]) -> Fraction:
    """Full contraction of tensors whose edge labels each appear in exactly two tensors."""
    if not tensors:
        return Fraction(1)
    labels = {}
    subscripts, operands = [], []
    for t in tensors:
        subscripts.append("".join(labels.setdefault(e, string.ascii_letters[len(labels)]) for e in t.edges))
        operands.append(t.as_array())
    result = np.einsum(",".join(subscripts) + "->", *operands, optimize="greedy")
    scale = Fraction(1)
    for t in tensors:
        scale *= t.scale
    return Fraction(result.item() if hasattr(result, "item") else result) / scale


def contract_naive(tensors: Sequence[LocalTensor]) -> Fraction:
    """Sum over every 0/1 assignment of the edges; test oracle for ``contract``."""
    edge_list = sorted({e for t in tensors for e in t.edges})
    pos = {e: k for k, e in enumerate(edge_list)}
    total = Fraction(0)
    for bits in itertools.product((0, 1), repeat=len(edge_list)):
        term = Fraction(1)
        for t in tensors:
            idx = 0
            for e in t.edges:
                idx = (idx << 1) | bits[pos[e]]
            term *= t.coords[idx]
            if not term:
                break
        total += term
    scale = Fraction(1)
    for t in tensors:
        scale *= t.scale
    return total / scale


def _as_count(value: Fraction) -> int:
    if value.denominator != 1 or value < 0:
        raise ArithmeticError(f"contraction produced {value}, not a nonnegative integer")
    return value.numerator


def pairing_count(f: NAEFormula, cap: int | None = None) -> int:
    """Number of NAE solutions as the contraction of the local tensors."""
    graph = build_incidence_graph(f)
    _check_edges(graph, cap)
    var_tensors, clause_tensors, isolated = local_tensors(f, graph)
    return _as_count(contract(var_tensors + clause_tensors)) * 2 ** isolated


def pairing_count_transformed(f: NAEFormula, cap: int | None = None) -> int:
    """Same contraction after the Hadamard basis change on every edge."""
    graph = build_incidence_graph(f)
    _check_edges(graph, cap)
    var_tensors, clause_tensors, isolated = local_tensors(f, graph)
    tensors = [hadamard_transform(t, "primal") for t in var_tensors]
    tensors += [hadamard_transform(t, "dual", integral=True) for t in clause_tensors]
    return _as_count(contract(tensors)) * 2 ** isolated


def pairing_count_in_basis(f: NAEFormula, g: Matrix, cap: int | None = None) -> Fraction:
    """Contraction after ``g`` on variable tensors and its inverse transpose on clause tensors."""
    graph = build_incidence_graph(f)
    _check_edges(graph, cap)
    var_tensors, clause_tensors, isolated = local_tensors(f, graph)
    dual = inverse_transpose(g)
    tensors = [apply_basis(t, g) for t in var_tensors] + [apply_basis(t, dual) for t in clause_tensors]
    return contract(tensors) * 2 ** isolated


BRUTE_FORCE_CAP = 30


def brute_force_count(f: NAEFormula) -> int:
    """Enumerate all 2^n assignments."""
    n = f.num_variables
    if n > BRUTE_FORCE_CAP:
        raise ResourceLimitError(f"brute force is capped at {BRUTE_FORCE_CAP} variables, formula has {n}")
    masks = []
    for clause in f.clauses:
        m = 0
        for i in clause:
            m |= 1 << (i - 1)
        masks.append(m)
    count = 0
    for a in range(2 ** n):
        for m in masks:
            hit = a & m
            if hit == 0 or hit == m:
                break
        else:
            count += 1
    return count


def random_formula(rng: random.Random, max_vars: int = 8, max_clauses: int = 6,
                   arities: Sequence[int] = (2, 3, 4)) -> NAEFormula:
    n = rng.randint(max(arities), max_vars)
    clauses = [tuple(rng.sample(range(1, n + 1), rng.choice(arities))) for _ in range(rng.randint(0, max_clauses))]
    return NAEFormula(n, tuple(clauses))


def _global_tensor(tensors: Sequence[LocalTensor], order: Sequence) -> LocalTensor:
    """Outer product of tensors on disjoint edges, reindexed to ``order``."""
    arr = np.ones((), dtype=object)
    edges: list = []
    scale = Fraction(1)
    for t in tensors:
        arr = np.multiply.outer(arr, t.as_array())
        edges += list(t.edges)
        scale *= t.scale
    arr = np.transpose(arr, [edges.index(e) for e in order]) if order else arr
    return LocalTensor(tuple(order), tuple(arr.reshape(-1).tolist()), scale)


def global_spinor_count(f: NAEFormula, max_edges: int = 10, max_orderings: int = 5000):
    """Experimental: look for one edge ordering in which both global tensors
    are sub-Pfaffian vectors, then count with a single Pfaffian.

    The local fits always exist; whether a common global ordering exists is
    exactly the sign problem, so this can fail.  Returns ``(count, ordering)``
    or ``None`` when no ordering among those tried works.
    """
    graph = build_incidence_graph(f)
    m = len(graph.edges)
    if m > max_edges:
        raise ResourceLimitError(f"ordering search is limited to {max_edges} edges, formula has {m}")
    var_tensors, clause_tensors, isolated = local_tensors(f, graph)
    primal = [hadamard_transform(t, "primal") for t in var_tensors]
    dual = [hadamard_transform(t, "dual", integral=True) for t in clause_tensors]

    by_clause = list(range(m))
    by_variable = sorted(range(m), key=lambda k: (graph.edges[k].variable, graph.edges[k].clause))
    candidates = itertools.chain([by_clause, by_variable], itertools.permutations(range(m)))
    for tried, order in enumerate(candidates):
        if tried >= max_orderings:
            break
        g_fit = spinor_fit(_global_tensor(primal, order))
        if not g_fit.success:
            continue
        r_tensor = _global_tensor(dual, order)
        r_fit = spinor_fit(r_tensor)
        if not r_fit.success:
            continue
        if m >= 2:
            inner = fast_pair(Spinor(m), tilde(g_fit.z), r_fit.z)
        else:
            inner = Fraction(1)
        value = g_fit.scale * r_fit.scale * inner / r_tensor.scale
        return _as_count(value) * 2 ** isolated, tuple(order)
    return None
