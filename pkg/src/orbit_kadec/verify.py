"""Verification suites run by ``orbit-kadec verify``.

Every check is reported as a :class:`Check` whose ``value`` must not exceed
``limit``; counts of violations use ``limit = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import atomic, bounds, frames, kadec_series, repspace
from .bounds import FrameBounds


class Check(NamedTuple):
    suite: str
    name: str
    value: float
    limit: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.limit)

    @property
    def margin(self) -> float:
        return self.limit - self.value


@dataclass
class SuiteConfig:
    seed: int = 0
    M: int = kadec_series.DEFAULT_TERMS
    N: int = 64
    trials: int = 200
    d: int = 8
    delta: float = 0.2
    p: int | None = None


def eps(angle: float) -> float:
    return bounds.deviation_factor(angle)


def suite_bounds(cfg: SuiteConfig) -> list[Check]:
    out = []
    err = max(abs(bounds.kadec_delta_max((a, a), math.pi).delta - 0.25) for a in (0.5, 1.0, 2 * math.pi))
    out.append(Check("bounds", "kadec_quarter", err, 1e-12))

    worst = 0.0
    for A, B, T, g, dl in [(1.0, 2.0, 1.0, math.pi, 0.05), (0.3, 0.5, 4.0, 1.0, 0.01),
                           (1.0, 1.0, 1.0, 2.0, 0.2), (2.0, 7.0, 0.5, 3.0, 0.05)]:
        if dl >= bounds.atomic_delta_max(B, T, g).delta:
            continue
        lhs = bounds.perturbed_atomic_bounds((A, B), T, g, dl)
        rhs = bounds.christensen_heil_bounds((A, B), T * eps(dl * g))
        worst = max(worst, abs(lhs.lower - rhs.lower) / rhs.lower, abs(lhs.upper - rhs.upper) / rhs.upper)
    out.append(Check("bounds", "atomic_vs_christensen_heil", worst, 1e-14))

    worst = 0.0
    for g in (1.0, math.pi, 10.0):
        for t in np.linspace(0, math.pi / (2 * g), 1001):
            s = bounds.isometry_deviation_bound(g, t)
            p = bounds.isometry_deviation_bound(g, t, form="product")
            worst = max(worst, abs(s - p) / max(abs(s), 1e-300) if s else abs(p))
    out.append(Check("bounds", "deviation_closed_forms_agree", worst, 1e-12))

    bad = 0
    for r in np.linspace(0.01, 1.0, 100):
        dmax = bounds.kadec_delta_max((r, 1.0), math.pi).delta
        for dl in np.linspace(0, dmax, 100, endpoint=False):
            if not kadec_series.kadec_defect(dl, 1.0) < math.sqrt(r):
                bad += 1
    out.append(Check("bounds", "defect_below_sqrtA_grid", bad, 0))
    return out


def suite_kadec_series(cfg: SuiteConfig) -> list[Check]:
    out = []
    for dl in np.round(np.arange(1, 25) / 100, 2):
        c = kadec_series.make_coefficients(dl)
        tr = c.truncation(cfg.M)
        mass = kadec_series.coefficient_mass(c, tr)
        dev = abs(mass + tr.tail_bound / 2 - kadec_series.mass_closed_form(dl))
        out.append(Check("kadec-series", f"mass_identity[delta={dl:.2f}]", dev, tr.tail_bound,
                         f"M={cfg.M}"))
    rng = np.random.default_rng(cfg.seed)
    bad = 0
    M = min(cfg.M, 10_000)
    for _ in range(20):
        dl = rng.uniform(-0.24, 0.24)
        t = rng.uniform(-0.95, 0.95) * math.pi
        c = kadec_series.make_coefficients(dl)
        target = 1 - np.exp(1j * dl * t)
        errs = []
        for m in (M, 2 * M):
            tr = c.truncation(m)
            e = abs(kadec_series.evaluate_partial(c, t, tr) - target)
            errs.append(e)
            if e > tr.tail_bound + 1e-12:
                bad += 1
    out.append(Check("kadec-series", "pointwise_within_tail", bad, 0, f"M={M}"))
    return out


def suite_repspace(cfg: SuiteConfig) -> list[Check]:
    out = []
    bad = 0
    for g in (1.0, math.pi, 10.0):
        rep = repspace.uniform_rep(257, g, low=0.0, high=g)
        for t in np.linspace(0, math.pi / (2 * g), 51)[1:]:
            dev = repspace.operator_norm_deviation(rep, t)
            iso = bounds.isometry_deviation_bound(g, t)
            if dev > iso + 1e-12 or not iso < bounds.baskakov_bound(g, t):
                bad += 1
    out.append(Check("repspace", "deviation_bound_vs_model", bad, 0))

    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(1, 20))
        g = float(rng.uniform(0.5, 10))
        rep = repspace.DiagonalRep(rng.uniform(-g, g, d), g)
        k = int(rng.integers(1, 10))
        h = repspace.AlmostPeriodicSymbol(rng.standard_normal(k) + 1j * rng.standard_normal(k),
                                          rng.uniform(-20, 20, k))
        x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        diff = np.linalg.norm(repspace.calculus_apply(rep, h, x) - repspace.spectral_multiply(rep, h, x))
        worst = max(worst, diff / (h.l1_norm * np.linalg.norm(x)))
    out.append(Check("repspace", "calculus_matches_multiplier", worst, 1e-10))

    errs, contraction_bad = module_action_errors(rng)
    out.append(Check("repspace", "module_action_final_error", errs[-1], 1e-6))
    out.append(Check("repspace", "module_action_error_decreases",
                     float(not (errs[0] > errs[1] > errs[2])), 0))
    out.append(Check("repspace", "module_action_contraction", contraction_bad, 0))
    return out


def gaussian(sigma: float) -> tuple[Callable, Callable]:
    f = lambda t: np.exp(-0.5 * (t / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))
    fhat = lambda xi: np.exp(-0.5 * (sigma * xi) ** 2)
    return f, fhat


def module_action_errors(rng, sigma: float = 0.5, steps=(1.0, 0.5, 0.25)):
    """Relative errors of the quadrature module action for a Gaussian at three grid steps."""
    rep = repspace.uniform_rep(33, math.pi)
    x = rng.standard_normal(33) + 1j * rng.standard_normal(33)
    f, fhat = gaussian(sigma)
    exact = fhat(rep.spectrum_points) * x
    half = 12 * sigma
    errs = []
    for h in steps:
        n = int(round(2 * half / h)) + 1
        sf = repspace.SampledFunction.from_callable(f, -half, half, n)
        got = repspace.module_action(rep, sf, x)
        errs.append(float(np.linalg.norm(got - exact) / np.linalg.norm(exact)))
    bad = 0
    for _ in range(50):
        vals = np.abs(rng.standard_normal(64))
        sf = repspace.SampledFunction(vals, rng.uniform(-5, 5), rng.uniform(0.01, 0.5))
        y = rng.standard_normal(33) + 1j * rng.standard_normal(33)
        if np.linalg.norm(repspace.module_action(rep, sf, y)) > sf.l1_norm * np.linalg.norm(y) * (1 + 1e-12):
            bad += 1
    return errs, bad


def corollary_corpus(rng) -> list[tuple[str, np.ndarray, frames.GramMatrix, float]]:
    """Finite systems (label, points, Gram, gamma) used for the separation check."""
    corpus = []
    for n in (8, 16, 64):
        pts = frames.integer_samples(n).points
        corpus.append((f"integers[{n}]", pts, frames.exp_gram(pts), math.pi))
    for dl in (0.05, 0.1, 0.2, 0.24):
        pts = frames.integer_samples(32).points + rng.uniform(-dl, dl, 32)
        corpus.append((f"kadec[{dl}]", pts, frames.exp_gram(pts), math.pi))
    for k in range(6):
        pts = np.cumsum(rng.uniform(0.2 + 0.1 * k, 1.5, 24))
        corpus.append((f"random_gaps[{k}]", pts, frames.exp_gram(pts), math.pi))
    for kappa in (0.01, 0.05, 0.1, 0.3, 0.6):
        pts = np.array([0.0, kappa, 3.0, 4.5])
        corpus.append((f"close_pair[{kappa}]", pts, frames.exp_gram(pts), math.pi))
    for k in range(6):
        g = float(rng.uniform(0.5, 5))
        rep = repspace.DiagonalRep(rng.uniform(-g, g, 24), g)
        x = rng.standard_normal(24) + 1j * rng.standard_normal(24)
        pts = np.sort(rng.uniform(0, 20, 10))
        system = frames.OrbitSystem.model(rep, x, pts)
        corpus.append((f"model[{k}]", pts, frames.orbit_gram(system), g))
    return corpus


def corollary_counterexamples(rng) -> tuple[int, int]:
    """(systems that passed the Riesz check, separation failures among them)."""
    tested = failures = 0
    for _, pts, gram, g in corollary_corpus(rng):
        est = frames.frame_bounds_estimate(gram)
        if est.lower_hat <= 1e-9 * est.upper_hat:
            continue
        fb = FrameBounds(est.lower_hat, est.upper_hat)
        if frames.riesz_inequality_check(gram, fb, 50, 0, rtol=1e-9).violations:
            continue
        tested += 1
        if not bounds.separation_satisfied(frames.min_gap(pts), fb, g):
            failures += 1
    return tested, failures


def suite_frames(cfg: SuiteConfig) -> list[Check]:
    out = []
    base = frames.integer_samples(cfg.N)
    two_pi = 2 * math.pi
    report = frames.perturbation_experiment(base, cfg.delta, cfg.trials, cfg.seed)
    e = eps(math.pi * cfg.delta)
    lo, hi = two_pi * (1 - e) ** 2, two_pi * (1 + e) ** 2
    out.append(Check("frames", "window_lower", lo - report.min_eig, frames.EXCURSION_TOL,
                     f"window=[{lo:.6g},{hi:.6g}]"))
    out.append(Check("frames", "window_upper", report.max_eig - hi, frames.EXCURSION_TOL))
    out.append(Check("frames", "window_trial_excursions", report.excursions, 0))

    rng = np.random.default_rng(cfg.seed)
    bad = 0
    for _ in range(1000):
        offsets = rng.uniform(-cfg.delta, cfg.delta, cfg.N)
        c = rng.standard_normal(cfg.N) + 1j * rng.standard_normal(cfg.N)
        res = frames.kadec_U_check(base.with_perturbation(offsets), c, two_pi)
        if not res.holds:
            bad += 1
    out.append(Check("frames", "kadec_U_estimate", bad, 0, "1000 trials"))

    tested, failures = corollary_counterexamples(rng)
    out.append(Check("frames", "separation_consistency", failures, 0, f"{tested} systems"))
    return out


def atomic_model(d: int) -> tuple[repspace.DiagonalRep, np.ndarray, np.ndarray]:
    """Midpoint spectrum in [-pi, pi], flat generator, integer samples 0..2d-1."""
    lam = -math.pi + (2 * np.arange(d) + 1) * math.pi / d
    return repspace.DiagonalRep(lam, math.pi), np.ones(d, dtype=complex), np.arange(2 * d, dtype=float)


def suite_atomic(cfg: SuiteConfig) -> list[Check]:
    out = []
    rep, x, pts = atomic_model(cfg.d)
    for p in ((cfg.p,) if cfg.p else (2, 1)):
        dec = atomic.orbit_decomposition(rep, x, pts, p)
        out.append(Check("atomic", f"p{p}_B_times_norm_at_least_one",
                         1.0 - dec.bounds.upper * atomic.synthesis_norm(dec), 1e-12))
        rep_ = atomic.atomic_perturbation_check(dec, 0.02, 500, cfg.seed)
        out.append(Check("atomic", f"p{p}_hypothesis_violations", rep_.hypothesis_violations, 0))
        if p == 2:
            out.append(Check("atomic", "p2_dual_reconstruction", rep_.dual_reconstruction_error, 1e-9))
            out.append(Check("atomic", "p2_window_violations", rep_.window_violations, 0,
                             f"predicted=({rep_.predicted.lower:.6g},{rep_.predicted.upper:.6g})"))
        else:
            out.append(Check("atomic", "p1_column_deviation_over_mu",
                             rep_.worst_operator_deviation - rep_.mu, 1e-12))
    return out


SUITES: dict[str, Callable[[SuiteConfig], list[Check]]] = {
    "bounds": suite_bounds,
    "kadec-series": suite_kadec_series,
    "repspace": suite_repspace,
    "frames": suite_frames,
    "atomic": suite_atomic,
}


def run_suites(names, cfg: SuiteConfig) -> list[Check]:
    rows = []
    for name in names:
        rows.extend(SUITES[name](cfg))
    return rows
