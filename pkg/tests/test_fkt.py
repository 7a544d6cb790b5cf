import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cominpair import fkt
from cominpair.exact import ResourceLimitError


def triangle():
    return fkt.from_coordinates([(0, 0), (1, 0), (0, 1)], [(0, 1), (1, 2), (0, 2)])


def k4():
    # one vertex in the middle of a triangle
    pts = [(0, 0), (4, 0), (0, 4), (1, 1)]
    return fkt.from_coordinates(pts, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)])


def test_face_counts():
    assert len(fkt.trace_faces(triangle())) == 2
    assert len(fkt.trace_faces(fkt.cycle_graph(4))) == 2
    assert len(fkt.trace_faces(k4())) == 4


def test_every_dart_on_exactly_one_face():
    g = fkt.grid_graph(3, 4)
    darts = [d for face in fkt.trace_faces(g) for d in face]
    assert len(darts) == len(set(darts)) == 2 * len(g.edges)


def test_nonplanar_rotation_rejected():
    # K4 with the rotation at one vertex swapped has genus one
    g = k4()
    rot = [list(r) for r in g.rotation]
    rot[3] = [rot[3][1], rot[3][0], rot[3][2]]
    bad = fkt.EmbeddedGraph(4, rot)
    with pytest.raises(fkt.NotPlanarError):
        fkt.trace_faces(bad)
    with pytest.raises(fkt.NotPlanarError):
        fkt.fkt_count(bad)


def test_single_edge_orientation_and_count():
    g = fkt.EmbeddedGraph(2, [[1], [0]], {(0, 1): Fraction(5, 3)})
    orient = fkt.kasteleyn_orient(g)
    assert orient.points(0, 1) != orient.points(1, 0)
    assert fkt.fkt_count(g) == Fraction(5, 3)


def test_four_cycle_orientation_has_odd_clockwise_count():
    g = fkt.cycle_graph(4)
    faces = fkt.trace_faces(g)
    outer = fkt.default_outer_face(g, faces)
    orient = fkt.kasteleyn_orient(g)
    inner = [f for k, f in enumerate(faces) if k != outer]
    assert [fkt.clockwise_count(f, orient) % 2 for f in inner] == [1]
    assert fkt.is_kasteleyn(g, orient)


def test_k4_orientation_passes_validator():
    g = k4()
    assert fkt.is_kasteleyn(g, fkt.kasteleyn_orient(g))
    assert fkt.fkt_count(g) == 3


@pytest.mark.parametrize("g, count", [(fkt.cycle_graph(4), 2), (fkt.grid_graph(2, 3), 3),
                                      (fkt.grid_graph(4, 4), 36), (fkt.cycle_graph(5), 0),
                                      (fkt.ladder_graph(5), 8)])
def test_count_examples(g, count):
    assert fkt.fkt_count(g) == count
    assert fkt.brute_force_matchings(g) == count


def test_brute_force_examples():
    assert fkt.brute_force_matchings(triangle()) == 0
    # K_{3,3} is not planar, but the oracle does not need an embedding
    k33 = fkt.EmbeddedGraph(6, [[3, 4, 5]] * 3 + [[0, 1, 2]] * 3)
    assert fkt.brute_force_matchings(k33) == 6


def test_brute_force_cap():
    with pytest.raises(ResourceLimitError):
        fkt.brute_force_matchings(fkt.cycle_graph(22))


@pytest.mark.parametrize("g", [fkt.grid_graph(3, 4), k4(), fkt.ladder_graph(4)])
def test_every_outer_face_choice_works(g):
    expected = fkt.brute_force_matchings(g)
    for outer in range(len(fkt.trace_faces(g))):
        orient = fkt.kasteleyn_orient(g, outer=outer)
        assert fkt.is_kasteleyn(g, orient, outer=outer)
        assert fkt.fkt_count(g, outer=outer) == expected


def test_trees_and_bridges():
    path = fkt.EmbeddedGraph(4, [[1], [0, 2], [1, 3], [2]])
    assert fkt.fkt_count(path) == 1
    star = fkt.EmbeddedGraph(4, [[1, 2, 3], [0], [0], [0]])
    assert fkt.fkt_count(star) == 0


def test_signed_weights_keep_sign():
    g = fkt.cycle_graph(4)
    w = {e: Fraction(1) for e in g.edges}
    w[g.edges[0]] = Fraction(-2)
    g = g.with_weights(w)
    assert fkt.fkt_count(g) == fkt.brute_force_matchings(g)


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 14), st.integers(0, 10 ** 6), st.booleans())
def test_triangulations_match_brute_force(n, seed, weighted):
    rng = random.Random(seed)
    g = fkt.random_triangulation(n, rng)
    if weighted:
        g = fkt.random_weights(g, rng)
    assert fkt.is_kasteleyn(g, fkt.kasteleyn_orient(g))
    assert fkt.fkt_count(g) == fkt.brute_force_matchings(g)


@pytest.mark.parametrize("data", [{"rotation": []}, {"vertices": 2, "rotation": [[1], []]},
                                  {"vertices": 2, "rotation": [[1], [0]], "weights": {"0-2": "1"}},
                                  {"vertices": 3, "rotation": [[1], [0], []]}])
def test_graph_validation(data):
    with pytest.raises(ValueError):
        fkt.EmbeddedGraph.from_json(data)


def test_graph_json_round_trip():
    g = fkt.random_weights(fkt.grid_graph(2, 3), random.Random(1))
    h = fkt.EmbeddedGraph.from_json(g.to_json())
    assert h.rotation == g.rotation and h.weights == g.weights
