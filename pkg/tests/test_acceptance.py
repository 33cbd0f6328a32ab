"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line with its measurements and
runtime; run with ``pytest tests/test_acceptance.py -s`` to see them.
"""

import math
import time

import numpy as np

from orbit_kadec import atomic, bounds, frames, kadec_series, repspace
from orbit_kadec.verify import atomic_model, corollary_counterexamples, module_action_errors

PI = math.pi
TWO_PI = 2 * math.pi


def eps(x):
    return 1 - math.cos(x) + math.sin(x)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def report(n, ok, detail, elapsed, budget):
    ok = ok and elapsed <= budget
    status = "PASS" if ok else "FAIL"
    print(f"\n{status} criterion {n}: {detail} [{elapsed:.3f}s, budget {budget}s]")
    return ok


def test_criterion_01_classical_quarter():
    with Timer() as t:
        got = bounds.kadec_delta_max((1.0, 1.0), PI).delta
        also = bounds.kadec_delta_max((TWO_PI, TWO_PI), PI).delta
    err = max(abs(got - 0.25), abs(also - 0.25))
    assert report(1, err <= 1e-12, f"delta_max={got!r}, |err|={err:.1e}", t.elapsed, 1.0)


def test_criterion_02_perturbed_exponentials_in_window():
    e = eps(0.2 * PI)
    lo, hi = TWO_PI * (1 - e) ** 2 - 1e-8, TWO_PI * (1 + e) ** 2 + 1e-8
    base = frames.integer_samples(64)
    assert base.points[0] == -32 and base.points[-1] == 31
    with Timer() as t:
        rep = frames.perturbation_experiment(base, 0.2, trials=200, seed=0)
    inside = lo <= rep.min_eig and rep.max_eig <= hi
    detail = (f"eigenvalues in [{rep.min_eig:.5f}, {rep.max_eig:.5f}] "
              f"within [{lo:.5f}, {hi:.5f}] over {len(rep.rows)} trials, excursions={rep.excursions}")
    assert report(2, inside and rep.excursions == 0, detail, t.elapsed, 10.0)


def test_criterion_03_kadec_estimate():
    rng = np.random.default_rng(3)
    N, d = 64, 0.2
    violations, worst = 0, 0.0
    with Timer() as t:
        for _ in range(1000):
            offsets = d * rng.uniform(-1, 1, N)
            # pin one displacement at the budget so that delta_hat = 0.2 up to rounding
            offsets[rng.integers(N)] = d * rng.choice([-1.0, 1.0])
            s = frames.integer_samples(N).with_perturbation(offsets)
            c = rng.standard_normal(N) + 1j * rng.standard_normal(N)
            res = frames.kadec_U_check(s, c, TWO_PI)
            assert abs(s.delta_hat - d) <= 1e-13
            worst = max(worst, res.U / res.bound)
            violations += not res.holds
    detail = f"1000 trials, violations={violations}, max U/bound={worst:.4f}"
    assert report(3, violations == 0, detail, t.elapsed, 5.0)


def test_criterion_04_series_mass_identity():
    deltas = np.arange(1, 25) / 100
    worst = {}
    ok = True
    with Timer() as t:
        for M, cap in ((100_000, 1e-4), (1_000_000, 1e-5)):
            worst[M] = 0.0
            for d in deltas:
                c = kadec_series.make_coefficients(d)
                tr = c.truncation(M)
                mid = kadec_series.coefficient_mass(c, tr) + tr.tail_bound / 2
                dev = abs(mid - eps(PI * d))
                ok &= dev <= tr.tail_bound <= cap
                worst[M] = max(worst[M], tr.tail_bound)
    detail = f"24 deltas, max tail bound {worst[100_000]:.2e} (M=1e5), {worst[1_000_000]:.2e} (M=1e6)"
    assert report(4, ok, detail, t.elapsed, 5.0)


def test_criterion_05_isometry_deviation():
    bad = 0
    with Timer() as t:
        for gamma in (1.0, PI, 10.0):
            rep = repspace.uniform_rep(257, gamma, low=0.0, high=gamma)
            for s in np.linspace(0, PI / (2 * gamma), 50):
                new = bounds.isometry_deviation_bound(gamma, s)
                bad += repspace.operator_norm_deviation(rep, s) > new
                if s > 0:
                    bad += not new < bounds.baskakov_bound(gamma, s)
    assert report(5, bad == 0, f"3 gammas x 50 t, violations={bad}", t.elapsed, 1.0)


def test_criterion_06_calculus_equals_spectral_multiplier():
    rng = np.random.default_rng(6)
    worst = 0.0
    with Timer() as t:
        for _ in range(100):
            d = int(rng.integers(1, 40))
            g = rng.uniform(0.1, 10)
            rep = repspace.DiagonalRep(rng.uniform(-g, g, d), g)
            k = int(rng.integers(1, 16))
            h = repspace.AlmostPeriodicSymbol(rng.standard_normal(k) + 1j * rng.standard_normal(k),
                                              rng.uniform(-50, 50, k))
            x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            diff = np.linalg.norm(repspace.calculus_apply(rep, h, x) - repspace.spectral_multiply(rep, h, x))
            worst = max(worst, diff / (h.l1_norm * np.linalg.norm(x)))
    assert report(6, worst <= 1e-10, f"100 symbols, max scaled error {worst:.1e}", t.elapsed, 1.0)


def test_criterion_07_module_action():
    with Timer() as t:
        errs, bad = module_action_errors(np.random.default_rng(7))
    ok = errs[0] > errs[1] > errs[2] and errs[2] <= 1e-6 and bad == 0
    detail = "relative errors " + ", ".join(f"{e:.1e}" for e in errs) + f"; contraction violations={bad}"
    assert report(7, ok, detail, t.elapsed, 2.0)


def test_criterion_08_atomic_perturbation():
    rep, x, pts = atomic_model(8)
    with Timer() as t:
        dec2 = atomic.orbit_decomposition(rep, x, pts, p=2)
        dmax = bounds.atomic_delta_max(dec2.bounds.upper, atomic.synthesis_norm(dec2), rep.gamma).delta
        r2 = atomic.atomic_perturbation_check(dec2, 0.02, trials=500, seed=8)
        dec1 = atomic.orbit_decomposition(rep, x, pts, p=1)
        r1 = atomic.atomic_perturbation_check(dec1, 0.02, trials=500, seed=8)
    ok = (dec2.count == 16 and 0.02 < dmax
          and r2.hypothesis_violations == 0 and r2.dual_reconstruction_error <= 1e-9
          and r2.window_violations == 0
          and r2.predicted.lower <= r2.optimal_lower_min and r2.optimal_upper_max <= r2.predicted.upper
          and r1.hypothesis_violations == 0 and r1.worst_operator_deviation <= r1.mu)
    detail = (f"p=2: violations={r2.hypothesis_violations}, recon={r2.dual_reconstruction_error:.1e}, "
              f"optimal [{r2.optimal_lower_min:.4f}, {r2.optimal_upper_max:.4f}] in "
              f"[{r2.predicted.lower:.4f}, {r2.predicted.upper:.4f}]; "
              f"p=1: max column deviation {r1.worst_operator_deviation:.4f} <= mu={r1.mu:.4f}")
    assert report(8, ok, detail, t.elapsed, 5.0)


def test_criterion_09_separation_consistency():
    with Timer() as t:
        tested, failures = corollary_counterexamples(np.random.default_rng(9))
    detail = f"{tested} systems passed the Riesz check, counterexamples={failures}"
    assert report(9, tested > 0 and failures == 0, detail, t.elapsed, 1.0)


def test_criterion_10_cross_formula_identities():
    rng = np.random.default_rng(10)
    worst_ch = worst_forms = 0.0
    defect_bad = 0
    with Timer() as t:
        for _ in range(200):
            B = rng.uniform(0.5, 5)
            fb = bounds.FrameBounds(rng.uniform(0.05, 1) * B, B)
            T = rng.uniform(1, 4) / B
            g = rng.uniform(0.2, 10)
            d = rng.uniform(0, 0.999) * bounds.atomic_delta_max(B, T, g).delta
            lhs = bounds.perturbed_atomic_bounds(fb, T, g, d).astuple()
            rhs = bounds.christensen_heil_bounds(fb, T * bounds.deviation_factor(d * g)).astuple()
            worst_ch = max(worst_ch, *(abs(a - b) / b for a, b in zip(lhs, rhs)))
        for g in (0.3, 1.0, PI, 10.0):
            for s in np.linspace(0, PI / (2 * g), 1001):
                a = bounds.isometry_deviation_bound(g, s, form="sum")
                b = bounds.isometry_deviation_bound(g, s, form="product")
                worst_forms = max(worst_forms, abs(a - b))
        for ratio in np.linspace(0.01, 1.0, 100):
            dmax = bounds.kadec_delta_max((ratio, 1.0), PI).delta
            for frac in np.linspace(0, 1, 100, endpoint=False):
                defect_bad += not kadec_series.kadec_defect(frac * dmax, 1.0) < math.sqrt(ratio)
    ok = worst_ch <= 1e-14 and worst_forms <= 1e-12 and defect_bad == 0
    detail = (f"atomic vs composed rel err {worst_ch:.1e}, closed forms {worst_forms:.1e}, "
              f"defect grid violations={defect_bad}")
    assert report(10, ok, detail, t.elapsed, 1.0)
