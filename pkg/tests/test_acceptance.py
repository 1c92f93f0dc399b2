"""The nine acceptance criteria, one test each.

Every test prints ``PASS criterion N: ...`` or ``FAIL criterion N: ...`` and
the lines are repeated in the terminal summary.  Run alone with
``pytest tests/test_acceptance.py -v``.
"""

import random
import time

import pytest

from tptlcheck import docm
from tptlcheck import formula as fm
from tptlcheck import generators as gen
from tptlcheck.checker import (
    check, check_finite, check_naive, check_periodic, check_quasi_monotonic_fast, check_slp,
    check_tptl1, holds_at, holds_relative, unroll_horizon,
)
from tptlcheck.dataword import DataPoint, DataWord, PeriodicWord, at, concat, is_quasi_monotonic, shrink
from tptlcheck.slp import Concat, Leaf, Shift, Slp, slp_at, slp_expand, slp_from_word, slp_iterate, slp_max, slp_min
from corpus import (
    all_pqss, all_qbfs, rand_formula, rand_machine, rand_periodic, rand_word, random_slp, simulate,
)


@pytest.fixture
def report(record_property):
    def emit(n, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        print(line)
        record_property("acceptance", line)
        return ok

    return emit


def window_min_diff(w):
    vals = w.expand(len(w.prefix) + 2 * len(w.period)).values
    return min([0] + [vals[j] - vals[i] for i in range(len(vals)) for j in range(i + 1, len(vals))])


def relative_horizon(w, phi, delta):
    return unroll_horizon(w, phi, min(0, *delta.values()) + window_min_diff(w))


def test_criterion_1_differential_engines(report):
    rng = random.Random(1)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(1000):
        w = rand_periodic(rng, max_prefix=3, max_period=4, max_value=8, max_offset=3)
        phi = rand_formula(rng, depth=5, registers=("x", "y"), max_const=6)
        # Every Until scans at most ``horizon`` positions of the infinite word.
        horizon = unroll_horizon(w, fm.desugar(phi))
        naive = check_naive(w, phi, horizon).satisfied
        mismatches += check_periodic(w, phi, witness=False).satisfied != naive
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 60
    assert report(1, ok, f"1000 instances, {mismatches} mismatches, {elapsed:.1f}s")


def test_criterion_2_semantic_invariants(report):
    rng = random.Random(2)
    bad = [0, 0, 0]
    for _ in range(500):
        w = rand_word(rng, 1, 7)
        phi = rand_formula(rng, depth=4)
        i = rng.randrange(len(w))
        nu = {"x": rng.randint(-3, 10), "y": rng.randint(-3, 10)}
        delta = {r: w.points[i].value - v for r, v in nu.items()}
        bad[0] += holds_at(w, phi, i, nu) != holds_relative(w, phi, i, delta)
    for _ in range(500):
        w = rand_periodic(rng)
        phi = rand_formula(rng, depth=4)
        delta = {"x": rng.randint(-4, 12), "y": rng.randint(-4, 12)}
        h = relative_horizon(w, phi, delta)
        i = len(w.prefix) + rng.randrange(2 * len(w.period))
        bad[1] += holds_relative(w, phi, i, delta, h) != holds_relative(w, phi, i + len(w.period), delta, h)
    for _ in range(500):
        w = rand_periodic(rng)
        phi = rand_formula(rng, depth=4)
        cap = fm.c_phi(phi) + max(w.period.values) - min(w.period.values) + 1
        delta = {"x": rng.randint(-4, cap + 10), "y": rng.randint(-4, cap + 10)}
        clamped = {r: min(v, cap) for r, v in delta.items()}
        h = relative_horizon(w, phi, delta)
        i = len(w.prefix) + rng.randrange(len(w.period))
        bad[2] += holds_relative(w, phi, i, delta, h) != holds_relative(w, phi, i, clamped, h)
    detail = f"semantics {500 - bad[0]}/500, period shift {500 - bad[1]}/500, clamping {500 - bad[2]}/500"
    assert report(2, bad == [0, 0, 0], detail)


def test_criterion_3_slp(report):
    rng = random.Random(3)
    iterate_cases = iterate_bad = 0
    for n in range(1, 5):
        for m in range(1, 21):
            for k in range(-5, 6):
                u = [rng.randint(0, 30) for _ in range(n)]
                if min(u) + min(k, m * k) < 0:
                    continue
                expected = [v + i * k for i in range(1, m + 1) for v in u]
                iterate_cases += 1
                iterate_bad += slp_expand(slp_iterate(DataWord.from_values(u), m, k)).values != expected
    query_bad = 0
    for _ in range(200):
        g = random_slp(rng, rng.randint(1, 12))
        w = slp_expand(g, budget=1 << 16)
        good = slp_min(g) == min(w.values) and slp_max(g) == max(w.values)
        good = good and all(slp_at(g, i) == w[i] for i in range(len(w)))
        query_bad += not good
    check_bad = 0
    for _ in range(200):
        w = rand_periodic(rng)
        phi = rand_formula(rng)
        pre = slp_from_word(w.prefix) if len(w.prefix) else None
        got = check_slp(pre, slp_from_word(w.period), w.offset, phi, witness=False).satisfied
        check_bad += got != check_periodic(w, phi, witness=False).satisfied
    ok = iterate_bad == query_bad == check_bad == 0
    detail = (f"iterate {iterate_cases - iterate_bad}/{iterate_cases}, queries {200 - query_bad}/200, "
              f"check_slp {200 - check_bad}/200")
    assert report(3, ok, detail)


def test_criterion_4_quasi_monotonic(report):
    rng = random.Random(4)
    done = mismatches = bound_violations = 0
    while done < 200:
        w = rand_periodic(rng, max_value=60, max_offset=80)
        if not is_quasi_monotonic(w):
            continue
        phi = rand_formula(rng, depth=4, max_const=6)
        c = fm.c_phi(fm.desugar(phi))
        small = shrink(w, c)
        values = small.prefix.values + small.period.values
        bound_violations += max(values) - min(values) > (c + 1) * (len(values) - 1)
        mismatches += check_quasi_monotonic_fast(w, phi).satisfied != check_periodic(w, phi).satisfied
        done += 1
    ok = mismatches == bound_violations == 0
    assert report(4, ok, f"200 instances, {mismatches} mismatches, {bound_violations} bound violations")


def _small_ltl():
    atoms = [fm.TRUE, fm.Prop("p"), fm.Prop("q")]
    out = list(atoms) + [fm.Not(a) for a in atoms] + [fm.Not(fm.Not(a)) for a in atoms]
    for a in atoms:
        for b in atoms:
            out += [fm.And(a, b), fm.Or(a, b), fm.Until(a, b), fm.Release(a, b)]
    return out


def test_criterion_5_one_register(report):
    rng = random.Random(5)
    mismatches = 0
    for _ in range(300):
        w = rand_periodic(rng)
        phi = rand_formula(rng, registers=("x",))
        mismatches += check_tptl1(w, phi).satisfied != check_periodic(w, phi, witness=False).satisfied
    formulas = _small_ltl()
    assert all(fm.size(f) <= 3 for f in formulas)
    truncation_bad = cases = 0
    for psi in formulas:
        size = fm.size(psi)
        for _ in range(20):
            u, v = rand_word(rng, 0, 3), rand_word(rng, 1, 3)
            tail = rand_periodic(rng, max_offset=2)

            def verdict(n):
                head = u
                for _ in range(n):
                    head = concat(head, v)
                return check_naive(PeriodicWord(concat(head, tail.prefix), tail.period, tail.offset), psi).satisfied

            base = verdict(size)
            for n in range(size, size + 5):
                cases += 1
                truncation_bad += verdict(n) != base
    ok = mismatches == truncation_bad == 0
    detail = (f"tptl1 vs periodic {300 - mismatches}/300, truncation {cases - truncation_bad}/{cases} "
              f"over {len(formulas)} formulas")
    assert report(5, ok, detail)


def test_criterion_6_golden_circuit(report):
    c = gen.example_circuit()
    w, phi = gen.gen_circuit_mtl(c)
    golden = [0, 1, 3, 4, 5, 7, 8, 9, 10, 11, 12, 13, 14, 18, 14, 16, 19, 15, 16, 21, 22, 23, 24, 25, 26, 27]
    text = "X^2 G[7,8] X^7 F[7,8] (X^5 !X true | X^2 !X true | !X true)"
    verdict = check_finite(w, fm.desugar(phi)).satisfied
    ok = w.values == golden and fm.to_text(phi) == text and verdict is False and gen.eval_circuit(c) is False
    assert report(6, ok, f"word {'matches' if w.values == golden else 'differs'}, formula {fm.to_text(phi)}, "
                         f"verdict {verdict}")


def test_criterion_7_generator_oracles(report):
    qbf = qbf_bad = 0
    for q in all_qbfs(max_vars=2, depth=3):
        qbf += 1
        qbf_bad += check(*gen.gen_qbf(q), witness=False).satisfied != gen.eval_qbf(q)
    pqss = pqss_bad = 0
    for p in all_pqss(max_n=2, max_a=3, max_b=8):
        pqss += 1
        expected = gen.eval_pqss(p)
        pqss_bad += check(gen.pqss_word(), gen.gen_pqss_tptl2(p), witness=False).satisfied != expected
        pqss_bad += check(*gen.gen_pqss_freezeltl(p), witness=False).satisfied != expected
    rng = random.Random(7)
    circuit_bad = 0
    for _ in range(50):
        c = gen.random_circuit(rng, rng.randint(2, 4), rng.randint(2, 4), rng.choice(("and", "or")))
        expected = gen.eval_circuit(c)
        for make in (gen.gen_circuit_mtl, gen.gen_circuit_mtl_infinite, gen.gen_circuit_smtl):
            circuit_bad += check(*make(c), witness=False).satisfied != expected
    ok = qbf_bad == pqss_bad == circuit_bad == 0
    detail = (f"qbf {qbf - qbf_bad}/{qbf}, pqss {pqss} instances x2 generators with {pqss_bad} mismatches, "
              f"circuits 50 x3 variants with {circuit_bad} mismatches")
    assert report(7, ok, detail)


def _bound_violations(rng, amax, count):
    k_bad = len_bad = infinite = 0
    for _ in range(count):
        m = rand_machine(rng, amax=amax)
        w = docm.comp_unary(m)
        if isinstance(w, PeriodicWord):
            infinite += 1
            q = len(m.states)
            k_bad += w.offset > q
            len_bad += len(w.prefix) + len(w.period) > q ** 3
    return infinite, k_bad, len_bad


@pytest.mark.xfail(strict=True, reason="k <= |Q| assumes updates in {-1, 0, 1}; add(3) alone gives k = 3")
def test_criterion_8_docm_period_bounds(report):
    infinite, k_bad, len_bad = _bound_violations(random.Random(8), 3, 100)
    detail = (f"100 machines with |a| <= 3 ({infinite} infinite): k <= |Q| violated {k_bad} times, "
              f"|u1u2| <= |Q|^3 violated {len_bad} times")
    assert report(8, k_bad == len_bad == 0, detail)


def test_criterion_8_docm_extraction(record_property):
    rng = random.Random(80)
    infinite, k_bad, len_bad = _bound_violations(rng, 1, 100)
    scaled_bad = 0
    for _ in range(100):
        m = rand_machine(rng, amax=3)
        w = docm.comp_unary(m)
        amax = max([abs(e.op) for e in m.edges if e.op != docm.ZERO] + [1])
        if isinstance(w, PeriodicWord):
            scaled_bad += w.offset > amax * len(m.states)
    sim_bad = sims = 0
    for enc in ("unary", "binary"):
        for _ in range(100):
            m = rand_machine(rng, amax=20, encoding=enc)
            run = simulate(m, 10**4 + 1)
            if len(run) > 10**4:
                continue
            sims += 1
            g = docm.comp_binary(m)
            sim_bad += not isinstance(g, Slp) or list(slp_expand(g).points) != run
    mc_bad = 0
    formulas = [fm.parse(t) for t in ("x.F(q0 & x=2)", "G(q0 -> X !q0)", "x.G(x <= 3)", "q0 U (q1 & x >= 1)")]
    for _ in range(20):
        m = rand_machine(rng)
        w = docm.comp_unary(m)
        for phi in formulas:
            mc_bad += docm.model_check(m, phi).satisfied != check_naive(w, phi).satisfied
    ok = k_bad == len_bad == scaled_bad == sim_bad == mc_bad == 0
    line = (f"{'PASS' if ok else 'FAIL'} criterion 8 (remaining parts): bounds on 100 machines with |a| <= 1 "
            f"({infinite} infinite) violated {k_bad + len_bad} times, k <= max|a|*|Q| violated {scaled_bad} times, "
            f"{sims} finite runs match simulation with {sim_bad} mismatches, model_check on 20 machines "
            f"{mc_bad} mismatches")
    print(line)
    record_property("acceptance", line)
    assert ok


def test_criterion_9_compressed_scale(report):
    n = 20
    rules = {"A0": Leaf(frozenset(), 0)}
    for i in range(1, n + 1):
        rules[f"S{i}"] = Shift(f"A{i - 1}", 2 ** (i - 1))
        rules[f"A{i}"] = Concat(f"A{i - 1}", f"S{i}")
    g = Slp(rules, f"A{n}")
    assert len(g) == 2**n and slp_at(g, 2**n - 1).value == 2**n - 1
    start = time.perf_counter()
    absent = check_slp(g, None, 0, fm.parse(f"x.F(x = {2**n})")).satisfied
    present = check_slp(g, None, 0, fm.parse(f"x.F(x = {2**n - 1})")).satisfied
    elapsed = time.perf_counter() - start
    ok = absent is False and present is True and elapsed < 10
    detail = (f"values 0..2^20-1 over 2^20 positions: x.F(x = 2^20) -> {absent}, "
              f"x.F(x = 2^20-1) -> {present}, {elapsed:.3f}s")
    assert report(9, ok, detail)
