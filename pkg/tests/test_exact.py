import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cominpair.exact import (DimensionError, Matrix, SkewMatrix, cofactor_det, det_exact, even_subsets,
                             format_scalar, minor, parse_matrix, pfaffian, pfaffian_matching_sum, rank_exact,
                             sgn_index, sub_pfaffian, tilde, to_scalar)

fractions = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 6))


def random_skew(rng, n):
    return SkewMatrix.from_upper(n, [Fraction(rng.randint(-6, 6), rng.randint(1, 4))
                                     for _ in range(n * (n - 1) // 2)])


def test_det_examples():
    assert det_exact(Matrix.identity(5)) == 1
    assert det_exact(Matrix([[1, 2], [3, 4]])) == -2
    assert det_exact(Matrix([])) == 1


def test_det_rejects_non_square():
    with pytest.raises(DimensionError):
        det_exact(Matrix([[1, 2, 3], [4, 5, 6]]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7).flatmap(lambda n: st.lists(st.lists(fractions, min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_det_matches_cofactor_expansion(rows):
    assert det_exact(Matrix(rows)) == cofactor_det(Matrix(rows))


def test_det_with_zero_leading_pivot():
    assert det_exact(Matrix([[0, 1, 2], [1, 0, 3], [4, -3, 8]])) == -2


def test_pfaffian_examples():
    assert pfaffian(SkewMatrix([[0, 7], [-7, 0]])) == 7
    z = SkewMatrix.from_upper(4, [2, 3, 5, 7, 11, 13])  # z12 z13 z14 z23 z24 z34
    assert pfaffian(z) == 2 * 13 - 3 * 11 + 5 * 7
    assert pfaffian(random_skew(random.Random(0), 5)) == 0
    assert pfaffian(SkewMatrix([])) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10), st.integers(0, 10 ** 6))
def test_pfaffian_squared_is_det(n, seed):
    z = random_skew(random.Random(seed), n)
    assert pfaffian(z) ** 2 == det_exact(z)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_pfaffian_matches_matching_sum(n):
    z = random_skew(random.Random(n), n)
    assert pfaffian(z) == pfaffian_matching_sum(z)


def test_skew_matrix_validates():
    with pytest.raises(ValueError):
        SkewMatrix([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        SkewMatrix([[1, 0], [0, 0]])


def test_minor_examples():
    m = Matrix([[1, 2], [3, 4]])
    assert minor(m, (), ()) == 1
    assert minor(m, (1,), (2,)) == 2
    assert minor(m, (1, 2), (1, 2)) == -2
    with pytest.raises(ValueError):
        minor(m, (1,), (1, 2))


def test_sub_pfaffian_examples():
    z = random_skew(random.Random(3), 6)
    assert sub_pfaffian(z, ()) == 1
    assert sub_pfaffian(z, (1, 2)) == z[0, 1]
    principal = SkewMatrix([[z[i, j] for j in range(4)] for i in range(4)])
    assert sub_pfaffian(z, (1, 2, 3, 4)) == pfaffian_matching_sum(principal)
    with pytest.raises(ValueError):
        sub_pfaffian(z, (1, 2, 3))


def test_sgn_index_examples():
    assert sgn_index(()) == 1
    assert sgn_index((1, 2)) == 1
    assert sgn_index((1, 3)) == -1
    with pytest.raises(ValueError):
        sgn_index((1,))


def test_tilde_examples():
    assert tilde(SkewMatrix.zeros(4)) == SkewMatrix.zeros(4)
    z = SkewMatrix([[0, 5], [-5, 0]])
    assert tilde(z) == z


@pytest.mark.parametrize("n", range(0, 9))
def test_tilde_twists_sub_pfaffians_by_sgn(n):
    z = random_skew(random.Random(100 + n), n)
    zt = tilde(z)
    assert isinstance(zt, SkewMatrix)
    for subset in even_subsets(n):
        assert sub_pfaffian(zt, subset) == sgn_index(subset) * sub_pfaffian(z, subset)


def test_even_subsets_count():
    assert len(list(even_subsets(6))) == 32
    assert next(iter(even_subsets(3))) == ()


def test_rank_exact():
    assert rank_exact([[1, 2], [2, 4]]) == 1
    assert rank_exact([[1, 0, 0], [0, 0, 1], [1, 0, 1]]) == 2
    assert rank_exact([[Fraction(1, 2), 1], [1, 3]]) == 2
    assert rank_exact([]) == 0


def test_scalar_conversion():
    assert to_scalar("3/4") == Fraction(3, 4)
    assert to_scalar(5) == 5
    with pytest.raises(TypeError):
        to_scalar(0.5)
    assert format_scalar(Fraction(6, 3)) == "2"
    assert format_scalar(Fraction(-1, 3)) == "-1/3"


def test_parse_matrix_round_trip():
    m = parse_matrix("# comment\n2 3\n1 2/3 0\n-1 4 5\n")
    assert m.shape == (2, 3)
    assert m[0, 1] == Fraction(2, 3)


@pytest.mark.parametrize("text, where", [
    ("", "header"),
    ("2 2\n1 2\n3", "line 3"),
    ("2 2\n1 x\n3 4", "token 2"),
    ("1 1\n1\n2", "line 3"),
])
def test_parse_matrix_errors_carry_position(text, where):
    with pytest.raises(ValueError, match=where):
        parse_matrix(text)
