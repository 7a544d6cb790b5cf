"""Perfect matchings of planar graphs via Kasteleyn orientations (FKT).

Graphs are given as rotation systems: for each vertex, its neighbours in
counterclockwise order.  Vertices are 0-based.
"""
from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import ResourceLimitError, SkewMatrix, pfaffian, to_scalar


class NotPlanarError(ValueError):
    """The rotation system does not describe a planar embedding."""


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class EmbeddedGraph:
    num_vertices: int
    rotation: tuple[tuple[int, ...], ...]
    weights: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        rot = tuple(tuple(r) for r in self.rotation)
        object.__setattr__(self, "rotation", rot)
        if len(rot) != self.num_vertices:
            raise ValueError(f"rotation has {len(rot)} lists for {self.num_vertices} vertices")
        for u, nbrs in enumerate(rot):
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"vertex {u} lists a neighbour twice (graph must be simple)")
            for v in nbrs:
                if not 0 <= v < self.num_vertices:
                    raise ValueError(f"vertex {u} has out-of-range neighbour {v}")
                if v == u:
                    raise ValueError(f"self loop at vertex {u}")
                if u not in rot[v]:
                    raise ValueError(f"edge {u}-{v} is missing from the rotation of {v}")
        weights = {}
        for key, w in dict(self.weights).items():
            u, v = key
            e = _edge(u, v)
            if v not in rot[u]:
                raise ValueError(f"weight given for non-edge {u}-{v}")
            weights[e] = to_scalar(w)
        object.__setattr__(self, "weights", weights)
        if not self._connected():
            raise ValueError("graph must be connected")

    def _connected(self) -> bool:
        if self.num_vertices == 0:
            return True
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for v in self.rotation[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == self.num_vertices

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted({_edge(u, v) for u, nbrs in enumerate(self.rotation) for v in nbrs})

    def weight(self, u: int, v: int) -> Fraction:
        return self.weights.get(_edge(u, v), Fraction(1))

    def with_weights(self, weights: dict) -> "EmbeddedGraph":
        return EmbeddedGraph(self.num_vertices, self.rotation, weights)

    @classmethod
    def from_json(cls, data: dict) -> "EmbeddedGraph":
        try:
            n = data["vertices"]
            rotation = data["rotation"]
        except (KeyError, TypeError):
            raise ValueError('graph JSON needs "vertices" and "rotation"') from None
        weights = {}
        for key, w in (data.get("weights") or {}).items():
            try:
                u, v = (int(t) for t in key.split("-"))
            except ValueError:
                raise ValueError(f"bad weight key {key!r}; expected 'u-v'") from None
            try:
                weights[(u, v)] = Fraction(str(w))
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"bad weight {w!r} for edge {key}") from None
        return cls(n, rotation, weights)

    def to_json(self) -> dict:
        out = {"vertices": self.num_vertices, "rotation": [list(r) for r in self.rotation]}
        if self.weights:
            out["weights"] = {f"{u}-{v}": str(w) for (u, v), w in sorted(self.weights.items())}
        return out


Face = tuple[tuple[int, int], ...]


def trace_faces(g: EmbeddedGraph) -> list[Face]:
    """Boundary walks of all faces as lists of darts (u, v).

    After arriving at v from u the walk leaves along the neighbour just
    before u in v's counterclockwise order, which keeps the face on the
    left; bounded faces come out counterclockwise.
    """
    pos = [{v: k for k, v in enumerate(nbrs)} for nbrs in g.rotation]
    seen = set()
    faces = []
    for u, nbrs in enumerate(g.rotation):
        for v in nbrs:
            if (u, v) in seen:
                continue
            face = []
            dart = (u, v)
            while dart not in seen:
                seen.add(dart)
                face.append(dart)
                a, b = dart
                rot = g.rotation[b]
                dart = (b, rot[(pos[b][a] - 1) % len(rot)])
            faces.append(tuple(face))
    n_edges = len(g.edges)
    n_faces = len(faces) if n_edges else 1
    if g.num_vertices and g.num_vertices - n_edges + n_faces != 2:
        raise NotPlanarError(
            f"Euler check failed: V - E + F = {g.num_vertices} - {n_edges} + {n_faces} != 2")
    return faces


def default_outer_face(g: EmbeddedGraph, faces: Sequence[Face]) -> int:
    """Longer of the two faces on the edge (min vertex, its min neighbour)."""
    u = min(v for v in range(g.num_vertices) if g.rotation[v])
    v = min(g.rotation[u])
    idx = [k for k, f in enumerate(faces) if (u, v) in f or (v, u) in f]
    return max(idx, key=lambda k: (len(faces[k]), (u, v) in faces[k]))


@dataclass(frozen=True)
class Orientation:
    """heads[(u, v)] for u < v is the vertex the edge points to."""

    heads: dict

    def points(self, u: int, v: int) -> bool:
        """True when the edge u-v is oriented u -> v."""
        return self.heads[_edge(u, v)] == v


def clockwise_count(face: Face, orient: Orientation) -> int:
    """Edges of a counterclockwise boundary walk oriented against the walk."""
    return sum(1 for u, v in face if not orient.points(u, v))


def is_kasteleyn(g: EmbeddedGraph, orient: Orientation, outer: int | None = None) -> bool:
    faces = trace_faces(g)
    if outer is None:
        outer = default_outer_face(g, faces) if faces else -1
    return all(clockwise_count(f, orient) % 2 == 1 for k, f in enumerate(faces) if k != outer)


def kasteleyn_orient(g: EmbeddedGraph, outer: int | None = None, root: int = 0) -> Orientation:
    """Orientation with an odd number of clockwise edges on every bounded face.

    A BFS spanning tree from ``root`` is oriented arbitrarily.  The
    remaining edges form a spanning tree of the dual graph; faces are
    settled from the leaves of that tree toward the outer face, each one
    fixing the single still-free edge it shares with its parent.
    """
    faces = trace_faces(g)
    heads: dict = {}
    if not g.edges:
        return Orientation(heads)
    if outer is None:
        outer = default_outer_face(g, faces)

    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in sorted(g.rotation[u]):
            if v not in seen:
                seen.add(v)
                heads[_edge(u, v)] = max(u, v)
                queue.append(v)

    face_of = {}
    for k, f in enumerate(faces):
        for dart in f:
            face_of[dart] = k
    dual: dict[int, list[tuple[int, tuple[int, int]]]] = {k: [] for k in range(len(faces))}
    for e in g.edges:
        if e in heads:
            continue
        a, b = face_of[e], face_of[(e[1], e[0])]
        dual[a].append((b, e))
        dual[b].append((a, e))

    parent: dict[int, tuple[int, tuple[int, int]] | None] = {outer: None}
    order = [outer]
    queue = deque([outer])
    while queue:
        f = queue.popleft()
        for h, e in dual[f]:
            if h not in parent:
                parent[h] = (f, e)
                order.append(h)
                queue.append(h)
    if len(order) != len(faces):
        raise NotPlanarError("dual of the cotree is disconnected; rotation is not a planar embedding")

    for f in reversed(order[1:]):
        _, e = parent[f]
        u, v = e
        heads[e] = v
        if clockwise_count(faces[f], Orientation(heads)) % 2 == 0:
            # the free edge sits once on this face, so reversing it fixes parity
            heads[e] = u
    return Orientation(heads)


def kasteleyn_matrix(g: EmbeddedGraph, orient: Orientation, unit: bool = False) -> SkewMatrix:
    n = g.num_vertices
    rows = [[Fraction(0)] * n for _ in range(n)]
    for u, v in g.edges:
        w = Fraction(1) if unit else g.weight(u, v)
        if orient.points(u, v):
            rows[u][v], rows[v][u] = w, -w
        else:
            rows[u][v], rows[v][u] = -w, w
    return SkewMatrix(rows)


def fkt_count(g: EmbeddedGraph, outer: int | None = None, root: int = 0) -> Fraction:
    """Weighted perfect-matching sum as a Pfaffian.

    Under a Kasteleyn orientation every matching enters the Pfaffian with
    the same sign; that sign is read off the unit-weight Pfaffian, which
    is +-(number of matchings).
    """
    if g.num_vertices % 2:
        trace_faces(g)
        return Fraction(0)
    if g.num_vertices == 0:
        return Fraction(1)
    orient = kasteleyn_orient(g, outer, root)
    unit = pfaffian(kasteleyn_matrix(g, orient, unit=True))
    if unit == 0:
        return Fraction(0)
    value = pfaffian(kasteleyn_matrix(g, orient))
    return value if unit > 0 else -value


BRUTE_FORCE_CAP = 20


def brute_force_matchings(g: EmbeddedGraph) -> Fraction:
    """Sum over all perfect matchings of the product of edge weights."""
    n = g.num_vertices
    if n > BRUTE_FORCE_CAP:
        raise ResourceLimitError(f"brute-force matching is capped at {BRUTE_FORCE_CAP} vertices, graph has {n}")
    if n % 2:
        return Fraction(0)
    adj = [sorted(nbrs) for nbrs in g.rotation]

    def rec(free: frozenset) -> Fraction:
        if not free:
            return Fraction(1)
        u = min(free)
        rest = free - {u}
        total = Fraction(0)
        for v in adj[u]:
            if v in rest:
                total += g.weight(u, v) * rec(rest - {v})
        return total

    return rec(frozenset(range(n)))


# Builders for test graphs --------------------------------------------------

def from_coordinates(points: Sequence[tuple[float, float]], edges, weights=None) -> EmbeddedGraph:
    """Rotation system of a straight-line drawing: neighbours sorted by angle."""
    nbrs: list[list[int]] = [[] for _ in points]
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    rotation = []
    for u, ns in enumerate(nbrs):
        ux, uy = points[u]
        rotation.append(sorted(ns, key=lambda v: math.atan2(points[v][1] - uy, points[v][0] - ux)))
    return EmbeddedGraph(len(points), rotation, weights or {})


def grid_graph(rows: int, cols: int) -> EmbeddedGraph:
    pts = [(c, r) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            u = r * cols + c
            if c + 1 < cols:
                edges.append((u, u + 1))
            if r + 1 < rows:
                edges.append((u, u + cols))
    return from_coordinates(pts, edges)


def cycle_graph(n: int) -> EmbeddedGraph:
    pts = [(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)) for k in range(n)]
    return from_coordinates(pts, [(k, (k + 1) % n) for k in range(n)])


def ladder_graph(n: int) -> EmbeddedGraph:
    """Two paths of length n joined by rungs."""
    return grid_graph(2, n)


def random_triangulation(n: int, rng: random.Random) -> EmbeddedGraph:
    """Delaunay triangulation of n random points in general position."""
    from scipy.spatial import Delaunay

    while True:
        pts = [(rng.random(), rng.random()) for _ in range(n)]
        try:
            tri = Delaunay(pts)
        except Exception:  # degenerate point set, draw again
            continue
        if len(tri.coplanar):
            continue
        edges = set()
        for a, b, c in tri.simplices:
            for u, v in ((a, b), (b, c), (a, c)):
                edges.add(_edge(int(u), int(v)))
        return from_coordinates(pts, sorted(edges))


def random_weights(g: EmbeddedGraph, rng: random.Random, bound: int = 5) -> EmbeddedGraph:
    return g.with_weights({e: Fraction(rng.randint(1, bound), rng.randint(1, bound)) for e in g.edges})
