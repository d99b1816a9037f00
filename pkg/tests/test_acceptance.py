"""Exit criteria for the package, one test per criterion.

Every test prints a PASS/FAIL line (collected again in the terminal
summary). Tolerances and runtime limits are fixed here.
"""

import math
import time

import numpy as np
import pytest

from mmnoma import asymptotic as asy
from mmnoma.bench import SweepSpec, db_to_linear, run_sweep, time_methods
from mmnoma.channel import PowerSplit, SystemConfig, gram_spectrum, mc_strong_capacity, sample_channel
from mmnoma.optimizer import AllocationProblem, bisect_allocate, expected_iterations

pytestmark = pytest.mark.acceptance

SEED = 0
WEAK, STRONG = db_to_linear(5.0), db_to_linear(20.0)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_c1_mp_normalization(report):
    with Timer() as t:
        errors = {}
        for beta in (0.25, 0.5, 1.0, 2.0, 4.0):
            law = asy.mp_law(beta)
            mass = asy.mp_bin_probabilities([law.a, law.b], law)[0]
            errors[beta] = abs(mass + law.zero_mass - 1.0)
    worst = max(errors.values())
    ok = worst < 1e-9 and t.elapsed < 1.0
    report(1, "MP normalization", ok, f"max error {worst:.2e} < 1e-9, {t.elapsed:.3f}s < 1s")
    assert ok


def test_c2_closed_form_vs_quadrature(report):
    with Timer() as t:
        worst = 0.0
        for beta in (0.5, 1.0, 2.0):
            for c in (0.01, 0.1, 1.0, 10.0, 100.0):
                dev = abs(asy.closed_form_capacity(c, beta) - asy.asym_capacity_quadrature(c, beta, 1))
                worst = max(worst, dev)
    ok = worst < 1e-6 and t.elapsed < 5.0
    report(2, "closed form vs quadrature", ok, f"max per-antenna deviation {worst:.2e} < 1e-6, "
           f"{t.elapsed:.3f}s < 5s")
    assert ok


def test_c3_finite_n_convergence(report):
    with Timer() as t:
        rel = {}
        for n in (8, 16, 32, 64):
            cfg = SystemConfig(n, n, n, 1.0, 1.0)
            mc = mc_strong_capacity(cfg, 1.0, trials=200, seed=SEED)
            asym = asy.asym_strong_capacity(1.0, cfg)
            rel[n] = abs(mc.value - asym) / asym
    errs = list(rel.values())
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    ok = decreasing and rel[64] < 0.03 and t.elapsed < 120
    detail = ", ".join(f"N={n}: {e:.2e}" for n, e in rel.items())
    report(3, "finite-N convergence", ok, f"{detail}; decreasing={decreasing}, N=64 < 3%, {t.elapsed:.1f}s")
    assert ok


def test_c4_method_agreement(report):
    with Timer() as t:
        failures = []
        worst = 0.0
        for n in (16, 64):
            cfg = SystemConfig.square(n, WEAK, STRONG)
            for p_max in (1.0, 2.0, 4.0, 8.0):
                asym = bisect_allocate(AllocationProblem(cfg, p_max, 2.0))
                mc = bisect_allocate(AllocationProblem(cfg, p_max, 2.0, evaluator="mc", trials=200, seed=SEED))
                gap = abs(asym.sum - mc.sum)
                allowed = 3 * math.hypot(asym.std_error, mc.std_error) + 0.03 * asym.sum
                worst = max(worst, gap / allowed)
                if gap > allowed:
                    failures.append((n, p_max, gap, allowed))
    ok = not failures and t.elapsed < 300
    report(4, "method agreement", ok, f"worst gap/allowance {worst:.3f} <= 1 over 8 points, "
           f"{t.elapsed:.1f}s < 300s")
    assert ok, failures


def test_c5_spectrum_histogram(report):
    with Timer() as t:
        eigs = gram_spectrum(sample_channel(512, 512, 1.0, np.random.default_rng(SEED)))
        dist = asy.spectrum_l1_distance(eigs, asy.mp_law(1.0), bins=50)
    ok = dist < 0.05 and t.elapsed < 30
    report(5, "spectrum histogram", ok, f"L1 distance {dist:.4f} < 0.05, {t.elapsed:.2f}s < 30s")
    assert ok


def test_c6_bisection_correctness(report):
    with Timer() as t:
        cfg = SystemConfig.square(16, WEAK, STRONG)
        problem = AllocationProblem(cfg, 4.0, 2.0, epsilon=1e-3)
        res = bisect_allocate(problem)
        budget = problem.budget
        p2 = np.linspace(0.0, budget, 10_000)
        c1 = np.array([asy.asym_weak_capacity(PowerSplit(budget - x, x), cfg) for x in p2])
        total = c1 + np.array([asy.asym_strong_capacity(x, cfg) for x in p2])
        total[c1 < problem.r_0] = -np.inf
        best = int(np.argmax(total))
        dp2 = abs(res.p_2 - p2[best])
        dsum = abs(res.sum - total[best])
        m_ok = res.iterations == expected_iterations(budget, problem.epsilon)
        # the M = 13 setting: per-antenna budget in (4.096, 8.192] with epsilon = 1e-3
        m13 = bisect_allocate(AllocationProblem(cfg, 16 * 8.0, 2.0, epsilon=1e-3)).iterations
    checks = {
        "p2 within eps": dp2 <= problem.epsilon,
        "sum within 1e-3": dsum <= 1e-3,
        "C1 >= R0": res.c_1 >= problem.r_0,
        "M = ceil(log2(budget/eps))": m_ok,
        "M = 13": m13 == 13,
        "runtime < 10s": t.elapsed < 10,
    }
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    report(6, "bisection correctness", ok, f"|dp2|={dp2:.2e}, |dsum|={dsum:.2e}, C1={res.c_1:.4f}, "
           f"M={res.iterations}, M13={m13}, {t.elapsed:.2f}s" + (f"; failed: {failed}" if failed else ""))
    assert ok, failed


def test_c7_monotonicity(report):
    with Timer() as t:
        problems = []
        for n in (4, 16, 64):
            cfg = SystemConfig.square(n, WEAK, STRONG)
            base = AllocationProblem(cfg, 4.0, 2.0)
            # infeasible points carry no sum capacity
            by_power = [r.sum for r in run_sweep(SweepSpec(base, "p_max", [0.5, 1, 2, 4, 8, 16]))
                        if r.feasible]
            if not all(b >= a for a, b in zip(by_power, by_power[1:])):
                problems.append(f"N={n} p_max")
            rows = run_sweep(SweepSpec(base, "r_0", [0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4]))
            by_rate = [r.sum for r in rows if r.feasible]
            if not all(b <= a for a, b in zip(by_rate, by_rate[1:])):
                problems.append(f"N={n} r_0")
            budget = base.budget
            p2 = np.linspace(0, budget, 100)[:-1]
            c1 = [asy.asym_weak_capacity(PowerSplit(budget - x, x), cfg) for x in p2]
            if not all(b < a for a, b in zip(c1, c1[1:])):
                problems.append(f"N={n} C1 boundary")
    ok = not problems and t.elapsed < 30
    report(7, "monotonicity", ok, f"violations {problems or 'none'}, {t.elapsed:.2f}s < 30s")
    assert ok, problems


def test_c8_timing(report):
    sizes = [8, 16, 32, 64, 128, 256, 512]
    with Timer() as t:
        rows = time_methods(sizes, repetitions=3)
    asym = [r.wall_time for r in rows if r.method == "asymptotic-bisection"]
    mc = {int(r.axis_value): r.wall_time for r in rows if r.method == "monte-carlo-bisection"}
    spread = max(asym) / min(asym)
    big = [mc[n] for n in sizes if n >= 32]
    increasing = all(b > a for a, b in zip(big, big[1:]))
    iterations = {r.iterations for r in rows}
    ok = spread < 3 and increasing and iterations == {13} and t.elapsed < 300
    report(8, "timing", ok, f"asymptotic spread {spread:.2f}x < 3x, MC N>=32 increasing={increasing} "
           f"({', '.join(f'{m:.3g}s' for m in big)}), M={sorted(iterations)}, {t.elapsed:.1f}s < 300s")
    assert ok
