"""Acceptance suites 1-9, runnable from the CLI (`cominpair selftest`) and from pytest."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import cominuscule as cm
from . import detperm, fkt, holographic as hg, joins
from .exact import (Matrix, SkewMatrix, det_exact, even_subsets, pfaffian, sgn_index,
                    sub_pfaffian, tilde)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    @property
    def ok(self) -> bool:
        return self.passed and self.seconds < self.budget

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        timing = f"{self.seconds:.1f}s/{self.budget:g}s"
        return f"[{status}] criterion {self.number}: {self.title} ({timing}) {self.detail}"


def _timed(number: int, title: str, budget: float):
    def wrap(fn):
        def run() -> CriterionResult:
            start = time.perf_counter()
            passed, detail = fn()
            return CriterionResult(number, title, passed, detail, time.perf_counter() - start, budget)

        run.number = number
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


def _rand_fraction(rng: random.Random, bound: int = 5) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


PAIRING_SIZES = {
    "grassmannian": lambda rng: cm.Grassmannian(*sorted(_gr_size(rng))),
    "spinor": lambda rng: cm.Spinor(rng.randint(2, 8)),
    "lagrangian": lambda rng: cm.Lagrangian(rng.randint(1, 6)),
    "segre": lambda rng: cm.Segre(rng.randint(1, 4), rng.randint(1, 3)),
    "veronese": lambda rng: cm.Veronese(rng.randint(1, 5), rng.randint(1, 4)),
}


def _gr_size(rng: random.Random):
    n = rng.randint(2, 9)
    k = rng.randint(1, min(4, n - 1))
    return k, n


@_timed(1, "fast_pair = naive_pair on 50 random instances per family", 60)
def criterion_1(trials: int = 50, seed: int = 1):
    rng = random.Random(seed)
    failures = []
    for name, draw in PAIRING_SIZES.items():
        for _ in range(trials):
            fam = draw(rng)
            x = cm.random_params(fam, rng)
            y = cm.random_params(fam, rng, dual=True)
            fast = cm.fast_pair(fam, x, y)
            naive = cm.naive_pair(cm.expand(fam, x), cm.expand_dual(fam, y))
            if fast != naive:
                failures.append(f"{fam.name}: fast {fast} != naive {naive}")
    total = trials * len(PAIRING_SIZES)
    return not failures, f"{total - len(failures)}/{total} equal" + (f"; first: {failures[0]}" if failures else "")


def _random_skew(rng: random.Random, n: int) -> SkewMatrix:
    return SkewMatrix.from_upper(n, [_rand_fraction(rng) for _ in range(n * (n - 1) // 2)])


@_timed(2, "Pf^2 = det on 200 skew matrices, tilde/sgn identity for n <= 8", 30)
def criterion_2(count: int = 200, seed: int = 2):
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        z = _random_skew(rng, rng.randint(1, 12))
        if pfaffian(z) ** 2 != det_exact(z):
            bad += 1
    checked = 0
    for n in range(0, 9):
        z = _random_skew(rng, n)
        zt = tilde(z)
        for subset in even_subsets(n):
            checked += 1
            if sub_pfaffian(zt, subset) != sgn_index(subset) * sub_pfaffian(z, subset):
                bad += 1
    return bad == 0, f"{count} Pfaffian squares and {checked} index sets, {bad} mismatches"


SPINOR_RANGE = range(4, 17)
MIN_DIMENSION_FACTOR = 100


def spinor_operation_counts() -> dict[int, int]:
    return {n: sum(cm.count_operations(cm.Spinor(n))) for n in SPINOR_RANGE}


@_timed(3, "Spinor(n) fast_pair cost is O(n^4) and 100x below 2^(n-1) at n=16", 30)
def criterion_3():
    counts = spinor_operation_counts()
    ratios = {n: ops / n ** 4 for n, ops in counts.items()}
    c = max(ratios.values())
    # one constant covers the range, and the normalized cost is not growing at the top end
    quartic = all(ops <= c * n ** 4 for n, ops in counts.items()) and ratios[16] <= ratios[8]
    top = max(SPINOR_RANGE)
    factor = 2 ** (top - 1) / counts[top]
    passed = quartic and factor >= MIN_DIMENSION_FACTOR
    return passed, (f"c = {c:.3f}, ops(16) = {counts[top]}, 2^15/ops = {factor:.2f} "
                    f"(need >= {MIN_DIMENSION_FACTOR}), quartic fit {'holds' if quartic else 'fails'}")


def gadget_fits(arities=range(2, 7)) -> dict[str, list[int]]:
    """Arities at which each transformed gadget fails spinor_fit."""
    failed = {"variable": [], "nae": []}
    for d in arities:
        if not hg.spinor_fit(hg.hadamard_transform(hg.variable_gadget(d), "primal")).success:
            failed["variable"].append(d)
        if not hg.spinor_fit(hg.hadamard_transform(hg.nae_gadget(d), "dual", integral=True)).success:
            failed["nae"].append(d)
    return failed


@_timed(4, "NAE counts agree on 100 formulas; transformed gadgets fit for arities 2..6", 120)
def criterion_4(count: int = 100, seed: int = 4):
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        f = hg.random_formula(rng, max_vars=8, max_clauses=6)
        a, b, c = hg.pairing_count(f), hg.pairing_count_transformed(f), hg.brute_force_count(f)
        if not a == b == c:
            bad += 1
    failed = gadget_fits()
    fits_ok = not failed["variable"] and not failed["nae"]
    detail = (f"{count - bad}/{count} formulas agree; spinor_fit failures: "
              f"variable {failed['variable'] or 'none'}, NAE {failed['nae'] or 'none'}")
    return bad == 0 and fits_ok, detail


VARIABLE_DISPLAY = "2 0 0 2 0 2 2 0"
NAE_DISPLAY = "6 0 0 -2 0 -2 -2 0"


@_timed(5, "Hadamard-transformed arity-3 gadgets match the reference vectors", 1)
def criterion_5():
    from .exact import format_scalar

    def show(t):
        return " ".join(format_scalar(v) for v in t.coords)

    var = show(hg.hadamard_transform(hg.variable_gadget(3), "primal"))
    nae = show(hg.hadamard_transform(hg.nae_gadget(3), "dual", integral=True))
    return var == VARIABLE_DISPLAY and nae == NAE_DISPLAY, f"variable [{var}], NAE [{nae}]"


def fkt_test_graphs(seed: int = 6):
    rng = random.Random(seed)
    graphs = [(f"grid {r}x{c}", fkt.grid_graph(r, c)) for r in range(2, 5) for c in range(2, 5)]
    graphs += [(f"cycle {n}", fkt.cycle_graph(n)) for n in range(4, 13)]
    graphs += [(f"ladder {n}", fkt.ladder_graph(n)) for n in range(1, 8)]
    graphs += [(f"triangulation {i}", fkt.random_triangulation(rng.randint(4, 14), rng)) for i in range(20)]
    out = []
    for name, g in graphs:
        out.append((name, g))
        out.append((name + " weighted", fkt.random_weights(g, rng)))
    return out


@_timed(6, "FKT matches brute force on grids, cycles, ladders and triangulations", 60)
def criterion_6():
    graphs = fkt_test_graphs()
    bad = [name for name, g in graphs if fkt.fkt_count(g) != fkt.brute_force_matchings(g)]
    return not bad, f"{len(graphs) - len(bad)}/{len(graphs)} graphs agree" + (f"; first: {bad[0]}" if bad else "")


@_timed(7, "5x5 determinant expands to x1x2x3 + x4x5x6", 1)
def criterion_7():
    ok = detperm.valiant_example_verify()
    return ok, "symbolic expansion " + ("matches" if ok else "differs")


@_timed(8, "implicit-graph Taylor coefficients equal (-1)^k x A^(k-2) y", 30)
def criterion_8(count: int = 50, seed: int = 8):
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        t = detperm.random_triple(rng, rng.randint(1, 5))
        k_max = 6
        result = detperm.det_local_taylor(t, k_max)
        expected = []
        power = Matrix.identity(t.size)
        for k in range(2, k_max + 1):
            expected.append((-1) ** k * (t.x @ power @ t.y)[0, 0])
            power = power @ t.A
        if not result.agree or list(result.implicit) != expected:
            bad += 1
    return bad == 0, f"{count - bad}/{count} triples agree"


@_timed(9, "circuit sweep: membership, rank <= expected, (v+1)(R+1) bound", 120)
def criterion_9(count: int = 200, seed: int = 9):
    rng = random.Random(seed)
    bad_member = bad_rank = bad_bound = degenerate = 0
    for i in range(count):
        c = joins.random_circuit(rng, rng.randint(0, 8), rng.randint(1, 4))
        e = joins.normalize_circuit(c)
        if joins.mirror_decomposition(e).value() != c.polynomial():
            bad_member += 1
        rank = joins.terracini_rank(e, 1, i)
        expected = joins.expected_dimension(e)
        bad_rank += rank > expected
        degenerate += rank < expected
        bad_bound += not joins.vpe_bound_check(e, c.internal_count, c.num_variables, 1, i)
    passed = not (bad_member or bad_rank or bad_bound)
    return passed, (f"{count} circuits: membership failures {bad_member}, rank > expected {bad_rank}, "
                    f"bound failures {bad_bound}, degenerate {degenerate}")


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9)


def run_all(stream=None) -> list[CriterionResult]:
    results = []
    for crit in CRITERIA:
        res = crit()
        if stream is not None:
            print(res.line(), file=stream, flush=True)
        results.append(res)
    return results
