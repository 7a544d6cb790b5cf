"""Joins, multiplicative joins and the variety attached to a tree circuit.

Dimensions are affine-cone dimensions throughout: a projective variety of
dimension k is reported as k + 1.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Union

from .exact import format_scalar, rank_exact, to_scalar
from .poly import MultiPoly

COEFF_BOUND = 9


# circuits ---------------------------------------------------------------

@dataclass(frozen=True)
class Input:
    """Circuit leaf: a variable x_var (1-based) or a rational constant."""

    var: int | None = None
    const: Fraction | None = None

    def __post_init__(self):
        if (self.var is None) == (self.const is None):
            raise ValueError("an input is either a variable or a constant")

    def __str__(self) -> str:
        return f"x{self.var}" if self.var is not None else format_scalar(self.const)


@dataclass(frozen=True)
class Gate:
    op: str
    left: "Node"
    right: "Node"

    def __post_init__(self):
        if self.op not in ("+", "*"):
            raise ValueError(f"gate label must be '+' or '*', got {self.op!r}")

    def __str__(self) -> str:
        return f"({self.left} {self.op} {self.right})"


Node = Union[Input, Gate]


def _parse_node(obj, path: str) -> Node:
    if isinstance(obj, list):
        if len(obj) != 3 or obj[0] not in ("+", "*"):
            raise ValueError(f"at {path}: gate must be [\"+\"|\"*\", left, right]")
        return Gate(obj[0], _parse_node(obj[1], path + "[1]"), _parse_node(obj[2], path + "[2]"))
    if isinstance(obj, str) and obj[:1] == "x":
        try:
            var = int(obj[1:])
        except ValueError:
            raise ValueError(f"at {path}: bad variable name {obj!r}") from None
        if var < 1:
            raise ValueError(f"at {path}: variables are numbered from x1, got {obj!r}")
        return Input(var=var)
    if isinstance(obj, bool) or isinstance(obj, float):
        raise ValueError(f"at {path}: constants must be integers or 'p/q' strings, got {obj!r}")
    try:
        return Input(const=to_scalar(obj))
    except (TypeError, ValueError, ZeroDivisionError):
        raise ValueError(f"at {path}: cannot read leaf {obj!r}") from None


class TreeCircuit:
    """Binary tree circuit over variables x1..x_v with + and * gates."""

    def __init__(self, root: Node, num_variables: int | None = None):
        self.root = root
        used = max((leaf.var for leaf in self.inputs() if leaf.var is not None), default=0)
        if num_variables is None:
            num_variables = max(used, 1)
        if used > num_variables:
            raise ValueError(f"circuit uses x{used} but declares only {num_variables} variables")
        self.num_variables = num_variables

    @classmethod
    def from_json(cls, obj) -> "TreeCircuit":
        """Accepts a bare nested array or {"variables": v, "circuit": [...]}."""
        if isinstance(obj, dict):
            if "circuit" not in obj:
                raise ValueError("circuit object needs a 'circuit' field")
            v = obj.get("variables")
            if v is not None and (not isinstance(v, int) or v < 1):
                raise ValueError(f"'variables' must be a positive integer, got {v!r}")
            return cls(_parse_node(obj["circuit"], "$.circuit"), v)
        return cls(_parse_node(obj, "$"))

    @classmethod
    def loads(cls, text: str) -> "TreeCircuit":
        return cls.from_json(json.loads(text))

    def to_json(self):
        def enc(node):
            if isinstance(node, Gate):
                return [node.op, enc(node.left), enc(node.right)]
            if node.var is not None:
                return f"x{node.var}"
            return format_scalar(node.const)

        return {"variables": self.num_variables, "circuit": enc(self.root)}

    def inputs(self) -> list[Input]:
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Gate):
                stack.extend((node.right, node.left))
            else:
                out.append(node)
        return out

    @property
    def internal_count(self) -> int:
        return len(self.inputs()) - 1

    @property
    def has_constants(self) -> bool:
        return any(leaf.const is not None for leaf in self.inputs())

    def input_form(self, leaf: Input) -> MultiPoly:
        v = self.num_variables
        if leaf.var is not None:
            return MultiPoly.variable(v, leaf.var)
        return MultiPoly.constant(v, leaf.const)

    def polynomial(self) -> MultiPoly:
        def ev(node):
            if isinstance(node, Input):
                return self.input_form(node)
            a, b = ev(node.left), ev(node.right)
            return a + b if node.op == "+" else a * b

        return ev(self.root)

    def __str__(self) -> str:
        return str(self.root)


def random_circuit(rng: random.Random, internal: int, v: int, const_prob: float = 0.15) -> TreeCircuit:
    """Uniformly shaped random binary tree with the given number of gates."""

    def build(k: int) -> Node:
        if k == 0:
            if rng.random() < const_prob:
                return Input(const=Fraction(rng.choice([-3, -2, -1, 1, 2, 3])))
            return Input(var=rng.randint(1, v))
        left = rng.randint(0, k - 1)
        return Gate(rng.choice("+*"), build(left), build(k - 1 - left))

    return TreeCircuit(build(internal), v)


# varieties --------------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    """Copy of P V, V the linear forms in v variables (plus constants when affine).

    ``form`` records the linear form of the circuit inputs that collapsed into this leaf.
    """

    v: int
    affine: bool = False
    form: MultiPoly | None = None

    @property
    def space_dim(self) -> int:
        return self.v + 1 if self.affine else self.v

    def basis(self) -> list[MultiPoly]:
        out = [MultiPoly.variable(self.v, i) for i in range(1, self.v + 1)]
        if self.affine:
            out.append(MultiPoly.constant(self.v, 1))
        return out

    def __str__(self) -> str:
        return "PV"


@dataclass(frozen=True)
class MultJoin:
    children: tuple

    def __str__(self) -> str:
        return "MultJoin(" + ", ".join(map(str, self.children)) + ")"


@dataclass(frozen=True)
class Join:
    children: tuple

    def __str__(self) -> str:
        return "Join(" + ", ".join(map(str, self.children)) + ")"


VarietyExpr = Union[Leaf, MultJoin, Join]


def leaves(e: VarietyExpr) -> list[Leaf]:
    if isinstance(e, Leaf):
        return [e]
    return [leaf for c in e.children for leaf in leaves(c)]


def num_variables(e: VarietyExpr) -> int:
    return leaves(e)[0].v


def degree_set(e: VarietyExpr) -> frozenset[int]:
    """Degrees of the monomials that can occur in points of e."""
    if isinstance(e, Leaf):
        return frozenset({0, 1}) if e.affine else frozenset({1})
    sets = [degree_set(c) for c in e.children]
    if isinstance(e, Join):
        return frozenset().union(*sets)
    out = frozenset({0})
    for s in sets:
        out = frozenset(a + b for a in out for b in s)
    return out


def ambient_dimension(e: VarietyExpr) -> int:
    v = num_variables(e)
    return sum(comb(d + v - 1, v - 1) for d in degree_set(e))


def expected_dimension(e: VarietyExpr) -> int:
    """Affine version of the recursive min formulas for joins and multiplicative joins."""
    if isinstance(e, Leaf):
        return e.space_dim
    dims = [expected_dimension(c) for c in e.children]
    if isinstance(e, Join):
        return min(sum(dims), ambient_dimension(e))
    # the r rescalings l_j -> t_j l_j with prod t_j = 1 fix the product
    return min(sum(dims) - len(dims) + 1, ambient_dimension(e))


# normalization ----------------------------------------------------------

@dataclass(frozen=True)
class _Done:
    expr: VarietyExpr


@dataclass(frozen=True)
class _Open:
    op: str
    left: object
    right: object


def _collapse_sums(node: Node, c: TreeCircuit, affine: bool):
    if isinstance(node, Input):
        return _Done(Leaf(c.num_variables, affine, c.input_form(node)))
    left = _collapse_sums(node.left, c, affine)
    right = _collapse_sums(node.right, c, affine)
    if node.op == "+" and isinstance(left, _Done) and isinstance(right, _Done):
        return _Done(Leaf(c.num_variables, affine, left.expr.form + right.expr.form))
    return _Open(node.op, left, right)


def _region_children(node, op: str):
    """External children of the maximal op-region rooted at node, or None if one is still open."""
    if isinstance(node, _Done):
        return [node.expr]
    if node.op != op:
        return None
    left = _region_children(node.left, op)
    right = _region_children(node.right, op)
    if left is None or right is None:
        return None
    return left + right


def _collapse_phase(node, op: str, top: bool = True):
    """Replace every maximal op-region whose external children are all done."""
    if isinstance(node, _Done):
        return node, False
    if node.op == op and top:
        kids = _region_children(node, op)
        if kids is not None:
            ctor = MultJoin if op == "*" else Join
            return _Done(ctor(tuple(kids))), True
    # only a region root may start a collapse; inner nodes of the same op belong to it
    left, lchanged = _collapse_phase(node.left, op, node.op != op)
    right, rchanged = _collapse_phase(node.right, op, node.op != op)
    return _Open(node.op, left, right), lchanged or rchanged


def normalize_circuit(c: TreeCircuit) -> VarietyExpr:
    """Collapse + pairs of inputs, then alternately collect *-regions and +-regions."""
    affine = c.has_constants
    node = _collapse_sums(c.root, c, affine)
    op = "*"
    while isinstance(node, _Open):
        node, _ = _collapse_phase(node, op)
        op = "+" if op == "*" else "*"
    return node.expr


# points and tangent spaces ----------------------------------------------

@dataclass(frozen=True)
class PointDecomposition:
    """A VarietyExpr together with a linear form at each leaf (in leaf order)."""

    expr: VarietyExpr
    leaf_values: tuple

    def __post_init__(self):
        n = len(leaves(self.expr))
        if len(self.leaf_values) != n:
            raise ValueError(f"expression has {n} leaves, got {len(self.leaf_values)} values")
        for leaf, value in zip(leaves(self.expr), self.leaf_values):
            if value.degree > 1 or (not leaf.affine and value.coefficient((0,) * leaf.v)):
                raise ValueError(f"leaf value {value} is not in the leaf's space of linear forms")

    def _walk(self, e, it, visit):
        if isinstance(e, Leaf):
            out = next(it)
        else:
            vals = [self._walk(ch, it, visit) for ch in e.children]
            out = vals[0]
            for val in vals[1:]:
                out = out * val if isinstance(e, MultJoin) else out + val
        visit(e, out)
        return out

    def value(self) -> MultiPoly:
        return self._walk(self.expr, iter(self.leaf_values), lambda e, val: None)

    def node_values(self) -> list[tuple[VarietyExpr, MultiPoly]]:
        """(node, value) in post-order."""
        out = []
        self._walk(self.expr, iter(self.leaf_values), lambda e, val: out.append((e, val)))
        return out


def mirror_decomposition(e: VarietyExpr) -> PointDecomposition:
    """Assign each leaf the linear form of the circuit inputs it came from."""
    forms = []
    for leaf in leaves(e):
        if leaf.form is None:
            raise ValueError("leaf has no recorded form; build the expression with normalize_circuit")
        forms.append(leaf.form)
    return PointDecomposition(e, tuple(forms))


def sample_point(e: VarietyExpr, seed) -> PointDecomposition:
    """Random integer linear forms with coefficients in [-9, 9], zero forms rejected."""
    rng = random.Random(seed)
    values = []
    for leaf in leaves(e):
        while True:
            coeffs = [rng.randint(-COEFF_BOUND, COEFF_BOUND) for _ in range(leaf.v)]
            const = rng.randint(-COEFF_BOUND, COEFF_BOUND) if leaf.affine else 0
            if any(coeffs) or const:
                break
        values.append(MultiPoly.linear(coeffs, const))
    return PointDecomposition(e, tuple(values))


def _tangent(e, it):
    if isinstance(e, Leaf):
        return next(it), e.basis()
    parts = [_tangent(ch, it) for ch in e.children]
    if isinstance(e, Join):
        value = parts[0][0]
        for val, _ in parts[1:]:
            value = value + val
        return value, [vec for _, span in parts for vec in span]
    value = parts[0][0]
    for val, _ in parts[1:]:
        value = value * val
    span = []
    for j, (_, child_span) in enumerate(parts):
        others = MultiPoly.constant(value.nvars, 1)
        for i, (val, _) in enumerate(parts):
            if i != j:
                others = others * val
        span.extend(vec * others for vec in child_span)
    return value, span


def tangent_spanning_set(p: PointDecomposition) -> list[MultiPoly]:
    """Spanning set of the affine tangent space: Terracini for joins, Leibniz for products."""
    return _tangent(p.expr, iter(p.leaf_values))[1]


def span_rank(polys: list[MultiPoly]) -> int:
    monos = sorted({m for p in polys for m in p.terms})
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for p in polys:
        row = [0] * len(monos)
        for m, c in p.terms.items():
            row[index[m]] = c
        rows.append(row)
    return rank_exact(rows)


def terracini_rank(e: VarietyExpr, trials: int = 1, seed=0) -> int:
    """Max over sampled points of the tangent-space rank; a lower bound for the generic dimension."""
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    return max(span_rank(tangent_spanning_set(sample_point(e, f"{seed}:{t}"))) for t in range(trials))


def vpe_bound_check(e: VarietyExpr, R: int, v: int, trials: int = 1, seed=0) -> bool:
    """Does the sampled dimension respect (v+1)(R+1) for a circuit with R gates?"""
    return terracini_rank(e, trials, seed) <= (v + 1) * (R + 1)


@dataclass(frozen=True)
class JoinReport:
    rank: int
    expected: int
    bound_ok: bool

    @property
    def degenerate(self) -> bool:
        return self.rank < self.expected


def analyze_circuit(c: TreeCircuit, trials: int = 1, seed=0) -> JoinReport:
    e = normalize_circuit(c)
    rank = terracini_rank(e, trials, seed)
    bound = (c.num_variables + 1) * (c.internal_count + 1)
    return JoinReport(rank, expected_dimension(e), rank <= bound)
