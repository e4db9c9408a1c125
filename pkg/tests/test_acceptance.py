"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run through pytest (lines are repeated in the terminal summary) or directly
with ``python3 tests/test_acceptance.py``.
"""

import functools
import statistics
import sys
import time

import numpy as np

from msc import InstanceMatrix, IntervalSystem, random_instance, solve_k5, sort_columns
from msc.easy import CanonicalProgram, solve_fast, solve_reference
from msc.five import all_systems, pad_to_five
from msc.ilp import build_ilp, merge_variables, negate_variable
from msc.kernel import kernelize
from msc.model import dist_to_collection, in_box
from msc.oracle import brute_force_easy, brute_force_hamming, brute_force_msc

THREE_ROWS = [[120, 0, 80], [20, 40, 130], [0, 100, 0]]
STATED_CONSENSUS = [30, 40, 60]
FIVE_ROWS = [
    [20, 18, 20, 10, 16, 8, 10],
    [11, 6, 7, 17, 14, 14, 17],
    [14, 12, 18, 13, 11, 6, 12],
    [19, 8, 16, 18, 12, 19, 19],
    [16, 15, 11, 15, 6, 17, 11],
]
FIVE_ROW_SYSTEM = ([1, 1, 1, 2, 2, 2, 2], [True, True, True, True, True, False, True])

SUITE_SIZE = 1000
RESULTS = {}


def record(number, name, ok, detail):
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    print(line)
    RESULTS[number] = line
    assert ok, line


def witness_ok(A, sol):
    return dist_to_collection(sol.x, A) == sol.opt and in_box(sol.x, sort_columns(A))


@functools.lru_cache(maxsize=None)
def oracle_suite():
    """Seeded instances with k in 1..5, ell in 1..6, entries in [-10, 10], and their oracle optima."""
    suite = []
    for seed in range(SUITE_SIZE):
        A = random_instance(1 + seed % 5, 1 + (seed // 5) % 6, 10, seed)
        suite.append((A, brute_force_msc(A).opt))
    return suite


def test_criterion_1_worked_example():
    A = InstanceMatrix(THREE_ROWS)
    sol = solve_k5(A)
    stated = dist_to_collection(STATED_CONSENSUS, A)
    for _ in range(20):
        solve_k5(A)
    times = []
    for _ in range(200):
        t0 = time.perf_counter()
        solve_k5(A)
        times.append(time.perf_counter() - t0)
    median_ms = statistics.median(times) * 1e3
    ok = sol.opt == 150 and witness_ok(A, sol) and stated == 150 and median_ms < 1.0
    record(1, "worked example", ok,
           f"opt={sol.opt} x={list(sol.x)} dist(stated x)={stated} median solve {median_ms:.3f} ms")


def test_criterion_2_negate_and_merge():
    A = InstanceMatrix(FIVE_ROWS)
    P = build_ilp(A, sort_columns(A), IntervalSystem(*FIVE_ROW_SYSTEM))
    P = negate_variable(P, 1)
    P = merge_variables(P, 3, 6)
    P = merge_variables(P, 3, 1)
    got = P.ranges()[P.position(3)]
    record(2, "negate and merge range", got == (15, 26), f"range of merged variable {got}")


def test_criterion_3_oracle_equivalence():
    t0 = time.perf_counter()
    suite = oracle_suite()
    bad = 0
    for A, opt in suite:
        sol = solve_k5(A)
        bad += sol.opt != opt or not witness_ok(A, sol)
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and len(suite) >= 1000 and elapsed < 60
    record(3, "oracle equivalence", ok, f"{len(suite)} instances, {bad} mismatches, {elapsed:.1f} s")


def test_criterion_4_solver_differential():
    rng = np.random.default_rng(2024)
    bad = worst = 0
    count = 1000
    for _ in range(count):
        n = int(rng.integers(1, 7))
        parity = int(rng.integers(0, 2))
        kp = 2 * int(rng.integers(-30, 31)) + parity
        ks = sorted((2 * rng.integers(-30, 31, size=n) + parity).tolist())
        ds = rng.integers(0, 21, size=n).tolist()
        c = CanonicalProgram(kp, ks, ds)
        trace = []
        fast = solve_fast(c, trace)[0]
        ref = solve_reference(c)[0]
        enum = brute_force_easy(c.to_pmilp())
        bad += not (fast == ref == enum) or len(trace) > 3 * n
        worst = max(worst, len(trace) / n)
    record(4, "easy solver differential", bad == 0,
           f"{count} programs, {bad} failures, max iterations/n = {worst:.2f}")


def test_criterion_5_kernel_bounds():
    general = max(kernelize(random_instance(5, 5000, 1000, seed))[0].ell for seed in range(20))
    rng = np.random.default_rng(5)
    binary = max(kernelize(InstanceMatrix(rng.integers(0, 2, size=(5, 1000))))[0].ell for _ in range(20))
    differ = sum(solve_k5(A, kernel=False).opt != opt for A, opt in oracle_suite())
    ok = general <= 120 and binary <= 32 and differ == 0
    record(5, "kernel bounds", ok,
           f"max kernel {general} (<=120), binary {binary} (<=32), on/off mismatches {differ}")


def test_criterion_6_hamming_special_case():
    rng = np.random.default_rng(6)
    t0 = time.perf_counter()
    bad, count = 0, 240
    for i in range(count):
        A = InstanceMatrix(rng.integers(0, 2, size=(5, 1 + i % 12)))
        bad += solve_k5(A).opt != brute_force_hamming(A)
    elapsed = time.perf_counter() - t0
    record(6, "binary Hamming case", bad == 0 and elapsed < 60,
           f"{count} instances, {bad} mismatches, {elapsed:.1f} s")


def best_time(A, runs=2):
    times = []
    for _ in range(runs):
        t0 = time.perf_counter()
        solve_k5(A)
        times.append(time.perf_counter() - t0)
    return min(times)


def test_criterion_7_scale():
    small = random_instance(5, 10**6, 10**6, 1)
    large = random_instance(5, 2 * 10**6, 10**6, 2)
    t1, t2 = best_time(small), best_time(large)
    ratio = t2 / t1
    record(7, "scale", t1 <= 10 and ratio <= 3,
           f"ell=1e6 {t1:.2f} s (<=10), ell=2e6 {t2:.2f} s, ratio {ratio:.2f} (<=3)")


def test_criterion_8_twenty_systems():
    bad = 0
    for A, opt in oracle_suite():
        full = pad_to_five(A)
        sc = sort_columns(full)
        best = min(brute_force_easy(build_ilp(full, sc, d.system)) for d in all_systems(sc))
        bad += best != opt
    record(8, "twenty-system coverage", bad == 0, f"{SUITE_SIZE} instances, {bad} mismatches")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
