"""Acceptance criteria, each run at its stated tolerance and time limit.

Every test prints one PASS/FAIL line (shown even without -s) before asserting.
"""

import math
import random
import time

import numpy as np
import pytest

from tabntt import nttb
from tabntt.bench import run_bench
from tabntt.bigmult import capacity_bits, multiply_many, tables_for_bits, to_digits
from tabntt.checks import channel_transform, run_suite
from tabntt.counts import OpCounts
from tabntt.ntt import ntt_forward, ntt_inverse, pointwise_multiply
from tabntt.numtheory import is_prime, linnik_holds
from tabntt.oracle import cyclic_convolution, naive_dft, schoolbook_multiply
from tabntt.planner import make_plan
from tabntt.tables import crt_combine, crt_decompose, leaf_dft_lookup, preprocess, tabular_mulmod

pytestmark = pytest.mark.slow

# targets 16 .. 2^16; each is realized as the smallest admissible length above it
SWEEP_TARGETS = [2**k for k in range(4, 17)]
MODES = ("direct", "lookup")


@pytest.fixture(scope="module")
def sweep():
    plans = {}
    for target in SWEEP_TARGETS:
        plan = make_plan(target)
        plans.setdefault(plan.length_n, plan)
    return plans


@pytest.fixture(scope="module")
def small_tables(sweep):
    return {n: preprocess(p) for n, p in sweep.items() if n <= 4096}


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail, elapsed, limit):
        in_time = limit is None or elapsed < limit
        verdict = "PASS" if ok and in_time else "FAIL"
        bound = f" (limit {limit:.0f} s)" if limit else ""
        with capsys.disabled():
            print(f"\n[{verdict}] criterion {number}: {detail}; {elapsed:.1f} s{bound}")
        return ok and in_time

    return emit


def test_criterion_1_dft_oracle(small_tables, report):
    start = time.perf_counter()
    bad = []
    for n, ts in small_tables.items():
        p = ts.plan
        x = np.random.default_rng(n).integers(0, p.field_prime_P, (50, n))
        expect = naive_dft(x, p.root_omega, p.field_prime_P)
        for mode in MODES:
            if not (ntt_forward(x, ts, mode) == expect).all():
                bad.append((n, mode))
    elapsed = time.perf_counter() - start
    detail = f"sizes {sorted(small_tables)}, 50 vectors x {len(MODES)} modes, mismatches {bad}"
    assert report(1, not bad, detail, elapsed, 60)


def test_criterion_2_roundtrip(small_tables, report):
    start = time.perf_counter()
    bad = []
    for n, ts in small_tables.items():
        x = np.random.default_rng(n + 1).integers(0, ts.plan.field_prime_P, (100, n))
        for mode in MODES:
            if not (ntt_inverse(ntt_forward(x, ts, mode), ts, mode) == x).all():
                bad.append((n, mode))
    elapsed = time.perf_counter() - start
    assert report(2, not bad, f"100 vectors per size and mode, mismatches {bad}", elapsed, 30)


def test_criterion_3_convolution(small_tables, report):
    start = time.perf_counter()
    bad = []
    for n, ts in small_tables.items():
        P = ts.plan.field_prime_P
        rng = np.random.default_rng(n + 2)
        a, b = rng.integers(0, P, (2, 25, n))
        for mode in MODES:
            X = ntt_forward(np.concatenate([a, b]), ts, mode)
            c = ntt_inverse(pointwise_multiply(X[:25], X[25:], ts.digits), ts, mode)
            if any(c[i].tolist() != cyclic_convolution(a[i], b[i], P) for i in range(25)):
                bad.append((n, mode))
    elapsed = time.perf_counter() - start
    assert report(3, not bad, f"25 pairs per size and mode, mismatches {bad}", elapsed, 60)


def _exhaustive_12_bit():
    """All a, b < 2^12 through a length-4 plan with 6-bit digits (two per operand)."""
    ts = preprocess(make_plan(4, digit_bits=6))
    b = capacity_bits(ts)
    n = ts.plan.length_n
    values = np.arange(1 << 12, dtype=np.int64)
    digits = np.stack([to_digits(int(v), b, n // 2) for v in values])
    F = ntt_forward(np.pad(digits, ((0, 0), (0, n - n // 2))), ts, "direct")
    weights = np.left_shift(np.int64(1), b * np.arange(n, dtype=np.int64))
    block = 256
    for lo in range(0, values.size, block):
        Fa = np.repeat(F[lo : lo + block], values.size, axis=0)
        Fb = np.tile(F, (block, 1))
        coeffs = ntt_inverse(pointwise_multiply(Fa, Fb, ts.digits), ts, "direct")
        got = (coeffs @ weights).reshape(block, values.size)
        if not (got == np.multiply.outer(values[lo : lo + block], values)).all():
            return False
    return True


def test_criterion_4_multiplication(report):
    start = time.perf_counter()
    ok = {"exhaustive<2^12": _exhaustive_12_bit()}
    rng = random.Random(4)
    for bits in (2**8, 2**10, 2**14, 2**17):
        a = [rng.getrandbits(bits) for _ in range(1000)]
        b = [rng.getrandbits(bits) for _ in range(1000)]
        got = multiply_many(a, b, tables_for_bits(bits))
        ok[f"2^{bits.bit_length() - 1}"] = all(g == schoolbook_multiply(x, y) for g, x, y in zip(got, a, b))
    elapsed = time.perf_counter() - start
    assert report(4, all(ok.values()), f"exact: {ok}", elapsed, 300)


def test_criterion_5_crt(sweep, report):
    start = time.perf_counter()
    results = []
    for n, plan in sweep.items():
        if plan.field_prime_P > 1 << 12:
            continue
        ts = preprocess(plan)
        lv = ts.leaves
        c = np.arange(plan.field_prime_P, dtype=np.int64)
        results.append(("roundtrip", n, bool((lv.combine_many(lv.decompose_many(c)) == c).all())))
        results.append(("scalar", n, all(crt_combine(crt_decompose(int(v), lv), lv) == v for v in c)))
        for s, W in lv.matrices.items():
            flat, offs = lv.dft[s]
            for j, q in enumerate(lv.leaf_primes):
                if q**s > 1 << 16:
                    continue
                idx = np.arange(q**s, dtype=np.int64)
                tuples = np.stack([(idx // q ** (s - 1 - i)) % q for i in range(s)], axis=1)
                rows = flat[offs[j] + idx[:, None] * s + np.arange(s)]
                results.append((f"dft s={s} q={q}", n, bool((rows == channel_transform(tuples, W, q)).all())))
        # the lookup function itself, over a sample of full residue tuples
        rng = np.random.default_rng(n)
        for s, W in lv.matrices.items():
            for _ in range(50):
                x = rng.integers(0, plan.field_prime_P, s).tolist()
                outs = leaf_dft_lookup([crt_decompose(v, lv) for v in x], lv)
                expect = [[sum(x[i] * int(W[i, k]) for i in range(s)) % q for k in range(s)] for q in lv.leaf_primes]
                got = [[o[j] for o in outs] for j in range(lv.Z)]
                results.append(("lookup", n, got == expect))
    elapsed = time.perf_counter() - start
    failed = [r for r in results if not r[2]]
    sizes = sorted({r[1] for r in results})
    assert report(5, results and not failed, f"{len(results)} checks over sizes {sizes}, failed {failed}", elapsed, 60)


def test_criterion_6_primes(sweep, report):
    start = time.perf_counter()
    rows = []
    for n, plan in sweep.items():
        P = plan.field_prime_P
        minimal = not any(is_prime(n * d + 1) for d in range(1, (P - 1) // n))
        rows.append((n, P, is_prime(P) and (P - 1) % n == 0 and minimal, linnik_holds(n, P)))
    elapsed = time.perf_counter() - start
    ok = all(r[2] for r in rows)
    linnik = all(r[3] for r in rows)
    detail = f"{len(rows)} sizes prime/congruent/minimal={ok}, P <= n^5 for all={linnik}; " + ", ".join(
        f"{n}:{P}" for n, P, _, _ in rows
    )
    assert report(6, ok and linnik, detail, elapsed, 10)


def test_criterion_7_constant_mulmod(report):
    start = time.perf_counter()
    t = tables_for_bits(2**17).digits
    rng = random.Random(7)
    seen = set()
    for _ in range(1000):
        c = OpCounts()
        tabular_mulmod(rng.randrange(t.P), rng.randrange(t.P), t, c)
        seen.add(tuple(c.as_dict().items()))
    elapsed = time.perf_counter() - start
    assert report(7, len(seen) == 1, f"P={t.P}, distinct counter tuples {sorted(seen)}", elapsed, None)


def test_criterion_8_cost_shape(report):
    start = time.perf_counter()
    recs = run_bench(SWEEP_TARGETS, MODES, verify=True)
    by = {(r.n, r.mode): r for r in recs}
    sizes = sorted({r.n for r in recs})
    direct_ratio = [by[n, "direct"].mulmod / (n * math.log2(n)) for n in sizes]
    spread = max(direct_ratio) / min(direct_ratio)
    rel = {n: by[n, "lookup"].total / by[n, "direct"].total for n in sizes}
    below = {n: rel[n] < 1 for n in sizes if n >= 256}
    tail = [rel[n] for n in sizes[-3:]]
    non_increasing = all(x >= y for x, y in zip(tail, tail[1:]))
    parts = {"spread<=4": spread <= 4, "lookup<direct (n>=256)": all(below.values()), "tail non-increasing": non_increasing}
    elapsed = time.perf_counter() - start
    detail = (
        f"{parts}; direct mulmod/(n log n) spread {spread:.2f}; lookup/direct totals "
        + ", ".join(f"{n}:{rel[n]:.3f}" for n in sizes)
    )
    assert report(8, all(parts.values()), detail, elapsed, 300)


def test_criterion_9_serialization(tmp_path, report):
    start = time.perf_counter()
    ok = []
    for target, m in ((16, None), (100, 3), (4096, None)):
        a = nttb.dumps(preprocess(make_plan(target, m=m)))
        b = nttb.dumps(preprocess(make_plan(target, m=m)))
        path = tmp_path / f"{target}.nttb"
        path.write_bytes(a)
        mem = preprocess(make_plan(target, m=m))
        disk = nttb.read(path)
        same = [(r.name, r.passed, r.total) for r in run_suite(mem, "full")] == [
            (r.name, r.passed, r.total) for r in run_suite(disk, "full")
        ]
        ok.append(a == b and same and all(r.ok for r in run_suite(disk, "full")))
    elapsed = time.perf_counter() - start
    assert report(9, all(ok), f"byte-identical and suite-identical for targets 16, 100 (m=3), 4096: {ok}", elapsed, 60)
