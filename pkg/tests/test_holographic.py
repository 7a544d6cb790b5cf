import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cominpair import holographic as hg
from cominpair.exact import Matrix, ResourceLimitError


def F(n, *clauses):
    return hg.NAEFormula(n, clauses)


def test_incidence_graph_examples():
    g = hg.build_incidence_graph(F(3, (1, 2, 3)))
    assert len(g.edges) == 3
    assert [g.degree(i) for i in (1, 2, 3)] == [1, 1, 1]
    g = hg.build_incidence_graph(F(4, (1, 2, 3), (1, 2, 4)))
    assert len(g.edges) == 6
    assert g.degree(1) == g.degree(2) == 2
    g = hg.build_incidence_graph(F(5))
    assert g.edges == () and g.num_variables == 5


def test_incidence_edges_sorted_by_clause_then_variable():
    g = hg.build_incidence_graph(F(3, (3, 1), (2, 1)))
    assert [(e.clause, e.variable) for e in g.edges] == [(1, 1), (1, 3), (2, 1), (2, 2)]


def test_repeated_variable_in_clause_gets_two_edges():
    f = F(2, (1, 1, 2))
    assert len(hg.build_incidence_graph(f).edges) == 3
    assert hg.pairing_count(f) == hg.brute_force_count(f) == 2


def test_gadget_examples():
    assert hg.variable_gadget(1).coords == (1, 1)
    assert hg.variable_gadget(2).coords == (1, 0, 0, 1)
    g3 = hg.variable_gadget(3).coords
    assert [k for k, c in enumerate(g3) if c] == [0b000, 0b111]
    assert hg.nae_gadget(2).coords == (0, 1, 1, 0)
    r3 = hg.nae_gadget(3).coords
    assert sum(r3) == 6 and r3[0] == r3[7] == 0
    assert sum(hg.nae_gadget(4).coords) == 14
    with pytest.raises(ValueError):
        hg.variable_gadget(0)
    with pytest.raises(ValueError):
        hg.nae_gadget(1)


def test_hadamard_displays():
    primal = hg.hadamard_transform(hg.variable_gadget(3), "primal")
    assert primal.coords == (2, 0, 0, 2, 0, 2, 2, 0)
    dual = hg.hadamard_transform(hg.nae_gadget(3), "dual", integral=True)
    assert dual.coords == (6, 0, 0, -2, 0, -2, -2, 0)
    assert dual.scale == 8
    exact_dual = hg.hadamard_transform(hg.nae_gadget(3), "dual")
    assert exact_dual.coords == tuple(Fraction(c, 8) for c in dual.coords)


@pytest.mark.parametrize("d", range(1, 6))
def test_hadamard_twice_scales_by_two_to_the_arity(d):
    t = hg.nae_gadget(d) if d > 1 else hg.variable_gadget(1)
    twice = hg.hadamard_transform(hg.hadamard_transform(t, "primal"), "primal")
    assert twice.coords == tuple(2 ** d * c for c in t.coords)


def test_spinor_fit_examples():
    fit = hg.spinor_fit(hg.hadamard_transform(hg.variable_gadget(3), "primal"))
    assert fit.success and fit.scale == 2
    assert fit.z.upper() == [1, 1, 1]
    fit = hg.spinor_fit(hg.hadamard_transform(hg.nae_gadget(3), "dual", integral=True))
    assert fit.success and fit.scale == 6
    assert fit.z.upper() == [Fraction(-1, 3)] * 3
    raw = hg.spinor_fit(hg.nae_gadget(3))
    assert not raw.success and "big cell" in raw.reason


@pytest.mark.parametrize("d", range(1, 7))
def test_transformed_variable_gadgets_fit(d):
    assert hg.spinor_fit(hg.hadamard_transform(hg.variable_gadget(d), "primal")).success


@pytest.mark.parametrize("d", [2, 3])
def test_transformed_nae_gadgets_fit_low_arity(d):
    assert hg.spinor_fit(hg.hadamard_transform(hg.nae_gadget(d), "dual", integral=True)).success


@pytest.mark.parametrize("d", [4, 5, 6])
def test_transformed_nae_gadgets_do_not_fit_from_arity_four(d):
    # the weight-4 coordinate disagrees with the Pfaffian forced by the weight-2 ones
    fit = hg.spinor_fit(hg.hadamard_transform(hg.nae_gadget(d), "dual", integral=True))
    assert not fit.success
    assert fit.violated == (1, 2, 3, 4)


@pytest.mark.parametrize("formula, count", [
    (F(3, (1, 2, 3)), 6),
    (F(3, (1, 2, 3), (1, 2, 3)), 6),
    (F(2, (1, 2), (1, 2), (1, 2)), 2),
    (F(2, (1, 2)), 2),
    (F(6, (1, 2, 3), (4, 5, 6)), 36),
    (F(4), 16),
])
def test_count_examples(formula, count):
    assert hg.pairing_count(formula) == count
    assert hg.pairing_count_transformed(formula) == count
    assert hg.brute_force_count(formula) == count


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_three_counts_agree(seed):
    f = hg.random_formula(random.Random(seed), max_vars=8, max_clauses=6)
    assert hg.pairing_count(f) == hg.pairing_count_transformed(f) == hg.brute_force_count(f)


def test_basis_change_invariance():
    rng = random.Random(20)
    f = F(4, (1, 2, 3), (2, 3, 4), (1, 4))
    expected = hg.brute_force_count(f)
    done = 0
    while done < 20:
        g = Matrix([[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(2)] for _ in range(2)])
        if g[0, 0] * g[1, 1] == g[0, 1] * g[1, 0]:
            continue
        assert hg.pairing_count_in_basis(f, g) == expected
        done += 1


def test_einsum_contraction_matches_plain_loop():
    f = F(4, (1, 2, 3), (2, 4), (1, 3, 4))
    var_t, clause_t, _ = hg.local_tensors(f)
    assert hg.contract(var_t + clause_t) == hg.contract_naive(var_t + clause_t)


def test_edge_cap(monkeypatch):
    f = F(3, (1, 2, 3), (1, 2, 3))
    with pytest.raises(ResourceLimitError, match="5"):
        hg.pairing_count(f, cap=5)
    monkeypatch.setenv("COMINPAIR_MAX_EDGES", "4")
    with pytest.raises(ResourceLimitError):
        hg.pairing_count(f)


def test_brute_force_cap():
    with pytest.raises(ResourceLimitError):
        hg.brute_force_count(F(31))


@pytest.mark.parametrize("data", [{"clauses": []}, {"variables": 2, "clauses": [[1, 3]]},
                                  {"variables": 2, "clauses": [[1]]}, {"variables": "2"}])
def test_formula_validation(data):
    with pytest.raises(ValueError):
        hg.NAEFormula.from_json(data)


def test_formula_json_round_trip():
    f = F(4, (1, 2, 3), (2, 4))
    assert hg.NAEFormula.from_json(f.to_json()) == f


def test_global_spinor_count_small_cases():
    assert hg.global_spinor_count(F(3, (1, 2, 3)))[0] == 6
    assert hg.global_spinor_count(F(4, (1, 2, 3), (1, 2, 4)))[0] == 10
