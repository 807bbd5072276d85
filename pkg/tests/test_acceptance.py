"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with pytest, or directly (`python tests/test_acceptance.py`) for the summary only.
Tolerances and runtime limits are the stated ones; nothing here is loosened.
"""
import bisect
import math
import random
import time
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

import numpy as np

from mallestat.arith import iroot
from mallestat.counting import (
    A_z_many, WeightedMultiset, log_spaced, loglog_fit, lower_bound_constant, product_count,
)
from mallestat.fields_q.corpus import Corpus
from mallestat.fields_q.cubic import cubic_histogram_boxed, enumerate_cubic, histogram
from mallestat.fields_q.cyclic import count_by_characters, count_by_formula, enumerate_cyclic
from mallestat.fields_q.pairs import M3q, count_pairs, disc_Y_violations, pair_corpus, sample_points
from mallestat.kp_shell import ShellConfig, uniformity_ratio
from mallestat.malle import (
    SigmaExponentTable, admissible, delta_constant, ind_product_formula, invariants_of,
    product_generators, product_invariants, verify_ind_inequalities,
)
from mallestat.nilpotent import cyclic, parse_group_spec, regular_rep
from mallestat.permgroup import Perm, symmetric_generators

RESULTS = {}


def report(k, title, ok, detail, elapsed=None, limit=None):
    if elapsed is not None and limit is not None and elapsed >= limit:
        ok = False
        detail += f"; runtime {elapsed:.1f}s exceeds {limit}s"
    elif elapsed is not None:
        detail += f"; {elapsed:.1f}s"
    line = f"{'PASS' if ok else 'FAIL'}  [{k:2d}] {title}: {detail}"
    RESULTS[k] = line
    print(line, flush=True)
    return ok


@lru_cache(maxsize=1)
def cubic_census():
    t = time.time()
    fields = enumerate_cubic(10 ** 6)
    return Corpus("cubic", 10 ** 6, fields), time.time() - t


# 1 -----------------------------------------------------------------------------

def _all_perms(n):
    return np.array(list(permutations(range(n))), dtype=np.int16)


def _cycle_counts(images):
    """Number of cycles of each row of a batch of permutations (pointer doubling)."""
    B, N = images.shape
    rows = np.arange(B)[:, None]
    least = np.broadcast_to(np.arange(N, dtype=np.int16), (B, N)).copy()
    jump = images.copy()
    step = 1
    while step < N:
        least = np.minimum(least, least[rows, jump])
        jump = jump[rows, jump]
        step *= 2
    return (least == np.arange(N)).sum(axis=1)


def test_01_index_formula_oracle():
    t = time.time()
    checked = mismatches = 0
    for n in range(1, 7):
        P = _all_perms(n)
        cts = [Perm(tuple(int(x) for x in p)).cycle_type() for p in P]
        for m in range(1, 7):
            T = _all_perms(m)
            ctt = [Perm(tuple(int(x) for x in q)).cycle_type() for q in T]
            # explicit embedding (i, j) -> (s(i), t(j)) flattened as i*m + j
            emb = (P[:, None, :, None].astype(np.int16) * m + T[None, :, None, :]).reshape(
                len(P) * len(T), n * m)
            explicit = n * m - _cycle_counts(emb).reshape(len(P), len(T))
            formula = np.array([[ind_product_formula(a, b) for b in ctt] for a in cts])
            mismatches += int((explicit != formula).sum())
            checked += explicit.size
    el = time.time() - t
    ok = report(1, "index formula vs explicit embedding", mismatches == 0,
                f"{checked} pairs (n,m <= 6), {mismatches} mismatches", el, 10)
    assert ok


# 2 -----------------------------------------------------------------------------

def test_02_index_inequality_sweep():
    t = time.time()
    parts = []
    bad = 0
    for n in (3, 4, 5):
        rep = verify_ind_inequalities(n, 10 ** 4)
        bad += len(rep.violations)
        parts.append(f"n={n}: {rep.orders_checked} orders/{rep.pairs_checked} checks")
    el = time.time() - t
    ok = report(2, "ind(sigma,g) inequalities f1-f5", bad == 0,
                f"{'; '.join(parts)}; {bad} violations", el, 60)
    assert ok


# 3 -----------------------------------------------------------------------------

def test_03_delta_below_minus_one():
    t = time.time()
    cases = [(3, "C3"), (4, "C5"), (4, "C7"), (5, "C7"), (5, "C11")]
    vals = []
    ok = True
    for n, spec in cases:
        res = delta_constant(n, parse_group_spec(spec), SigmaExponentTable(n))
        vals.append(f"n={n},{spec}: {res.delta}")
        ok &= res.delta < -1
    el = time.time() - t
    ok = report(3, "delta < -1", ok, ", ".join(vals), el, 1)
    assert ok


# 4 -----------------------------------------------------------------------------

def _builtin_groups(n):
    names = [f"C{k}" for k in range(2, 201)]
    names += ["C3xC3", "C3xC9", "C9xC9", "C3xC3xC3", "C5xC5", "C7xC7", "C11xC11", "C13xC13",
              "C3xC15", "C5xC35", "C7xC21"]
    return [s for s in names if admissible(n, parse_group_spec(s).order)]


def test_04_malle_invariants():
    t = time.time()
    bad = []
    for n in (3, 4, 5):
        inv = invariants_of(symmetric_generators(n))
        if (inv.a, inv.b_over_Q) != (1, 1):
            bad.append(f"S{n}")
    reg = regular_rep(cyclic(3))
    inv = invariants_of([reg[1]])
    if (inv.a, inv.b_over_Q) != (Fraction(1, 2), 1):
        bad.append("C3")
    checked = crossed = 0
    for n in (3, 4, 5):
        for spec in _builtin_groups(n):
            G = parse_group_spec(spec)
            inv = product_invariants(n, G)
            if n * G.order <= 45:
                # explicit closure in S_{n|G|} as an independent check
                ex = invariants_of(product_generators(n, G))
                crossed += 1
                if (ex.a, ex.b_over_Q) != (inv.a, inv.b_over_Q):
                    bad.append(f"S{n}x{spec} closure mismatch")
            checked += 1
            if (inv.a, inv.b_over_Q) != (Fraction(1, G.order), 1):
                bad.append(f"S{n}x{spec}")
    el = time.time() - t
    ok = report(4, "Malle invariants", not bad,
                f"S3,S4,S5,C3 + {checked} products S_n x G (|G| <= 200, {crossed} by closure); "
                f"mismatches: {bad or 'none'}", el)
    assert ok


# 5 -----------------------------------------------------------------------------

def test_05_cubic_census():
    corp, t_a = cubic_census()
    t = time.time()
    hist_b = cubic_histogram_boxed(10 ** 6)
    t_b = time.time() - t
    same = histogram(corp.records) == hist_b
    ds = sorted(k.abs_disc for k in corp.records if not k.is_cyclic)
    xs = sample_points(10 ** 4, 10 ** 6, 9)
    fit = loglog_fit([(x, bisect.bisect_right(ds, x)) for x in xs])
    slope_ok = abs(fit.slope - 1.0) <= 0.03
    ok = report(5, "cubic census", same and slope_ok,
                f"histograms {'identical' if same else 'DIFFER'} to 10^6 ({len(corp)} fields); "
                f"non-cyclic slope {fit.slope:.4f} over [1e4,1e6] (need 1.00 +- 0.03)",
                t_a + t_b, 120)
    assert ok


# 6 -----------------------------------------------------------------------------

def test_06_cyclic_census():
    t = time.time()
    agree = True
    sizes = []
    for ell in (3, 5, 7):
        a, b = count_by_formula(ell, 10 ** 4), count_by_characters(ell, 10 ** 4)
        agree &= a == b
        sizes.append(f"ell={ell}: {len(a)} conductors")
    discs = sorted(k.disc for k in enumerate_cyclic(3, 10 ** 8))
    xs = log_spaced(10 ** 4, 10 ** 8, 9)
    fit = loglog_fit([(x, bisect.bisect_right(discs, x)) for x in xs])
    slope_ok = abs(fit.slope - 0.5) <= 0.05
    el = time.time() - t
    ok = report(6, "cyclic census", agree and slope_ok,
                f"formula {'=' if agree else '!='} characters ({', '.join(sizes)}); "
                f"C3 slope {fit.slope:.4f} over [1e4,1e8]", el, 60)
    assert ok


# 7 -----------------------------------------------------------------------------

def test_07_pairs_slope():
    t = time.time()
    xs = sample_points(10 ** 10, 10 ** 13, 13)
    cubics = Corpus("cubic", 10 ** 6, cubic_census()[0].records)
    rows = count_pairs(3, xs, cubics)
    lo = loglog_fit([(r.X, r.lower_count) for r in rows])
    hi = loglog_fit([(r.X, r.upper_count) for r in rows])
    gaps = [r.gap for r in rows]
    ok_lo = abs(lo.slope - 1 / 3) <= 0.05
    ok_hi = abs(hi.slope - 1 / 3) <= 0.05
    el = time.time() - t
    ok = report(7, "S3 x C3 pair counts", ok_lo and ok_hi,
                f"lower slope {lo.slope:.4f}, upper slope {hi.slope:.4f} (need 1/3 +- 0.05); "
                f"counts at 1e13: {rows[-1].lower_count}/{rows[-1].upper_count}; "
                f"relative bracket gap {min(gaps):.3f}..{max(gaps):.3f}", el, 300)
    assert ok


# 8 -----------------------------------------------------------------------------

def test_08_m3q_uniformity():
    corp, _ = cubic_census()
    t = time.time()
    base = M3q(1, 10 ** 6, corp)
    ratios = {q: M3q(q, 10 ** 6, corp) * q * q / base for q in (7, 13, 31, 43, 7 * 13)}
    el = time.time() - t
    ok = max(ratios.values()) <= 10
    ok = report(8, "M3q(q) q^2 / M3q(1) bounded", ok,
                ", ".join(f"q={q}: {r:.3f}" for q, r in ratios.items()) + " (bound 10)", el, 60)
    assert ok


# 9 -----------------------------------------------------------------------------

def test_09_shell_uniformity():
    t = time.time()
    cfg = ShellConfig(cyclic(3), 10 ** 8)
    rows = uniformity_ratio(cfg, [7, 13, 31], [10 ** 6, 10 ** 7, 10 ** 8], epsilon=0.1)
    vals = [r.ratio for r in rows]
    spread = max(vals) / min(vals) if min(vals) > 0 else math.inf
    el = time.time() - t
    ok = report(9, "shell uniformity ratio", spread <= 10,
                f"ratios {min(vals):.4f}..{max(vals):.4f}, max/min {spread:.2f} (bound 10)", el, 120)
    assert ok


# 10 ----------------------------------------------------------------------------

def test_10_A_z_normalisation():
    t = time.time()
    xs = log_spaced(10 ** 4, 10 ** 8, 9)
    parts = []
    ok = True
    for z in (1, 2):
        vals = A_z_many(xs, 3, z)
        norm = [a / (x * math.log(x) ** (z / 2 - 1)) for x, a in zip(xs, vals)]
        fit = loglog_fit(list(zip(xs, norm)))
        ok &= abs(fit.slope) <= 0.05
        parts.append(f"z={z}: residual slope {fit.slope:+.4f}, level {norm[-1]:.4f}")
    el = time.time() - t
    ok = report(10, "A_z normalisation", ok, "; ".join(parts), el, 60)
    assert ok


# 11 ----------------------------------------------------------------------------

def _brute_product(v1, v2, a, b, X):
    total = 0
    for s2, k2 in v2:
        for s1, k1 in v1:
            if s1 ** a * s2 ** b <= X:
                total += k1 * k2
    return total


def _upper_suite(rng, trials=200):
    """F1 <= C1 X and F2 <= C2 X^alpha imply P/X^(1/a) <= C1 C2 beta/(beta - alpha), beta = b/a."""
    fails = 0
    for _ in range(trials):
        a, b = rng.randint(1, 3), rng.randint(1, 4)
        alpha = rng.choice([0.25, 0.5, 0.75])
        if b - a * alpha <= 0:
            continue
        N = rng.randint(50, 2000)
        S1 = WeightedMultiset.from_values(rng.sample(range(1, N + 1), rng.randint(1, N)))
        k = rng.randint(2, 4)
        S2 = WeightedMultiset.from_values(sorted({rng.randint(1, 40) ** k for _ in range(15)}))
        C1 = max(S1.F(v) / v for v in S1.values)
        C2 = max(S2.F(v) / v ** alpha for v in S2.values)
        beta = b / a
        bound = C1 * C2 * beta / (beta - alpha)
        for X in log_spaced(10, 10 ** 9, 12):
            if product_count(S1, S2, a, b, X) / X ** (1 / a) > bound * (1 + 1e-12):
                fails += 1
    return fails


def _lower_suite(rng, trials=60):
    """c1 X <= F1 and c2 X^alpha <= F2 imply P >= c X^(1/a) for X beyond a threshold."""
    fails = 0
    for _ in range(trials):
        a = rng.randint(1, 2)
        k = rng.randint(2, 4)
        alpha = 1 / k
        b = rng.randint(1, 3)
        if b - a * alpha <= 0:
            continue
        m1, m2 = rng.randint(1, 3), rng.randint(1, 3)
        top = 10 ** 6
        # all integers with multiplicity m1: F1(X) = m1 floor(X) >= (m1/2) X for X >= 1
        S1 = WeightedMultiset((v, m1) for v in range(1, iroot(top, a) + 2))
        # k-th powers with multiplicity m2: F2(X) = m2 floor(X^(1/k)) >= (m2/2) X^(1/k)
        S2 = WeightedMultiset((v ** k, m2) for v in range(1, 200))
        c = lower_bound_constant(m1 / 2, m2 / 2, a, b, alpha)
        for X in log_spaced(10 ** 3, top, 10):
            if product_count(S1, S2, a, b, X) < c * X ** (1 / a):
                fails += 1
    return fails


def test_11_counting_engine():
    t = time.time()
    rng = random.Random(20240611)
    mism = 0
    for _ in range(1000):
        a, b = rng.randint(1, 4), rng.randint(1, 4)
        v1 = sorted({rng.randint(1, 60): rng.randint(1, 3) for _ in range(rng.randint(1, 200))}.items())
        v2 = sorted({rng.randint(1, 60): rng.randint(1, 3) for _ in range(rng.randint(1, 200))}.items())
        X = rng.randint(1, 10 ** 6)
        got = product_count(WeightedMultiset(v1), WeightedMultiset(v2), a, b, X)
        mism += got != _brute_product(v1, v2, a, b, X)
    up = _upper_suite(rng)
    low = _lower_suite(rng)
    el = time.time() - t
    ok = report(11, "counting engine", mism == 0 and up == 0 and low == 0,
                f"product_count vs brute force: {mism}/1000 mismatches; "
                f"upper-bound suite {up} failures; lower-bound suite {low} failures", el, 30)
    assert ok


# 12 ----------------------------------------------------------------------------

def test_12_disc_Y_contract():
    t = time.time()
    cubics = Corpus("cubic", 10 ** 6, cubic_census()[0].records)
    pairs = pair_corpus(3, 10 ** 11, cubics)
    # Disc_Y only changes at shared primes, so checking 0, each shared prime and its
    # neighbours, and a huge Y covers every Y
    bad = disc_Y_violations(pairs, Ys_extra=(10.0 ** 9,))
    exact = sum(1 for r in pairs if r.exact)
    el = time.time() - t
    ok = report(12, "Disc_Y contract", not bad,
                f"{len(pairs)} pairs at X=1e11 ({exact} exact, {len(pairs) - exact} bracketed); "
                f"{len(bad)} violations" + (f": {bad[:3]}" if bad else ""), el)
    assert ok


if __name__ == "__main__":
    import sys
    fns = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for fn in fns:
        try:
            fn()
        except AssertionError:
            pass
    print()
    for k in sorted(RESULTS):
        print(RESULTS[k])
    sys.exit(0 if all(v.startswith("PASS") for v in RESULTS.values()) else 1)
