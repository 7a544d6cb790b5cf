import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from cominpair import cominuscule as cm
from cominpair.exact import Matrix, SkewMatrix, SymMatrix


def pair_both(fam, x, y):
    return cm.fast_pair(fam, x, y), cm.naive_pair(cm.expand(fam, x), cm.expand_dual(fam, y))


def test_grassmannian_expand_examples():
    fam = cm.Grassmannian(1, 3)
    assert cm.expand(fam, [[3, 5]]).dense() == [1, 3, 5]
    assert cm.expand_dual(fam, [[7], [11]]).dense() == [1, 7, 11]
    assert cm.expand(cm.Grassmannian(2, 4), Matrix.identity(2)).dense() == [1, 1, 0, 0, 1, 1]


def test_spinor_expand_zero():
    v = cm.expand(cm.Spinor(4), SkewMatrix.zeros(4))
    assert v.dense() == [1, 0, 0, 0, 0, 0, 0, 0]
    assert cm.expand_dual(cm.Spinor(4), SkewMatrix.zeros(4)).leading == 1


def test_pairing_examples():
    # x = (1, 2), y = (3, 4) on the affine chart of P^2
    assert pair_both(cm.Grassmannian(1, 3), [[1, 2]], [[3], [4]]) == (12, 12)
    assert pair_both(cm.Grassmannian(2, 4), Matrix.identity(2), Matrix.identity(2)) == (4, 4)
    assert cm.fast_pair(cm.Grassmannian(2, 5), Matrix.zeros(2, 3), Matrix([[1, 2], [3, 4], [5, 6]])) == 1


@pytest.mark.parametrize("name, sizes", [("grassmannian", (2, 5)), ("spinor", (5,)), ("lagrangian", (3,)),
                                         ("segre", (3, 2)), ("veronese", (3, 2))])
def test_pairing_with_zero_dual_is_one(name, sizes):
    fam = cm.make_family(name, *sizes)
    x = cm.random_params(fam, random.Random(0))
    zero = Matrix.zeros(*fam.dual_shape())
    if name == "spinor":
        zero = SkewMatrix.zeros(fam.n)
    elif name == "lagrangian":
        zero = SymMatrix(zero.tolist())
    assert pair_both(fam, x, zero) == (1, 1)


def test_spinor6_against_all_even_subsets():
    rng = random.Random(6)
    fam = cm.Spinor(6)
    z, y = cm.random_params(fam, rng), cm.random_params(fam, rng, dual=True)
    assert len(cm.expand(fam, z).dense()) == 32
    fast, naive = pair_both(fam, z, y)
    assert fast == naive


@pytest.mark.parametrize("fam, dim", [(cm.Grassmannian(3, 7), comb(7, 3)), (cm.Spinor(7), 2 ** 6),
                                      (cm.Lagrangian(3), comb(6, 3)), (cm.Segre(3, 2), 3 ** 3),
                                      (cm.Veronese(3, 2), comb(5, 3))])
def test_ambient_dimensions(fam, dim):
    assert fam.dim == dim
    assert len(list(fam.keys())) == dim


family_draw = st.sampled_from([
    lambda r: cm.Grassmannian(r.randint(1, 4), r.randint(5, 9)),
    lambda r: cm.Spinor(r.randint(2, 8)),
    lambda r: cm.Lagrangian(r.randint(1, 5)),
    lambda r: cm.Segre(r.randint(1, 4), r.randint(1, 3)),
    lambda r: cm.Veronese(r.randint(1, 5), r.randint(1, 4)),
])


@settings(max_examples=80, deadline=None)
@given(family_draw, st.integers(0, 10 ** 6))
def test_fast_equals_naive(draw, seed):
    rng = random.Random(seed)
    fam = draw(rng)
    x, y = cm.random_params(fam, rng), cm.random_params(fam, rng, dual=True)
    fast, naive = pair_both(fam, x, y)
    assert fast == naive
    assert cm.expand(fam, x).leading == 1
    assert cm.expand_dual(fam, y).leading == 1


def test_grassmannian_char_poly_identity():
    # det(Id + t xy) = sum_j t^j e_j(xy): at t = 1 the pairing is the sum of the
    # principal-minor sums of xy, grouped by size
    rng = random.Random(11)
    fam = cm.Grassmannian(3, 7)
    x, y = cm.random_params(fam, rng), cm.random_params(fam, rng, dual=True)
    xy = x @ y
    from itertools import combinations
    from cominpair.exact import minor
    total = sum(minor(xy, s, s) for j in range(4) for s in combinations(range(1, 4), j))
    assert cm.fast_pair(fam, x, y) == total


def test_no_zero_coordinates_stored():
    fam = cm.Grassmannian(2, 4)
    v = cm.expand(fam, Matrix.identity(2))
    assert all(c != 0 for c in v.coords.values())
    assert len(v) == 4


def test_shape_mismatch_raises():
    with pytest.raises(ValueError):
        cm.expand(cm.Grassmannian(2, 5), Matrix.zeros(3, 2))
    with pytest.raises(ValueError):
        cm.fast_pair(cm.Spinor(4), SkewMatrix.zeros(3), SkewMatrix.zeros(4))


def test_family_mismatch_raises():
    a = cm.expand(cm.Spinor(4), SkewMatrix.zeros(4))
    b = cm.expand_dual(cm.Spinor(5), SkewMatrix.zeros(5))
    with pytest.raises(ValueError):
        cm.naive_pair(a, b)


@pytest.mark.parametrize("name, sizes", [("grassmannian", (0, 3)), ("grassmannian", (3, 3)),
                                         ("spinor", (1,)), ("segre", (0, 2)), ("veronese", (2, 0))])
def test_invalid_family_sizes(name, sizes):
    with pytest.raises(ValueError):
        cm.make_family(name, *sizes)


def test_spinor_operation_counts_are_frozen():
    # instrumented totals of one fast_pair, recorded from the current elimination
    counts = {n: sum(cm.count_operations(cm.Spinor(n))) for n in (4, 8, 16)}
    assert counts == {4: 117, 8: 1275, 16: 11831}


def test_spinor_cost_is_quartic_not_exponential():
    ratios = [sum(cm.count_operations(cm.Spinor(n))) / n ** 4 for n in range(4, 17)]
    assert max(ratios) < 0.5
    assert ratios[-1] < ratios[4]


def test_grassmannian_count_beats_dimension_at_large_n():
    mults, adds = cm.count_operations(cm.Grassmannian(8, 16))
    assert mults + adds < comb(16, 8)
