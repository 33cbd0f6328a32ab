"""Sampled-orbit systems, their Gram matrices, and eigenvalue-based bound estimates.

Two kinds of system are supported:

* ``exponential``: ``e_mu(t) = exp(i mu t)`` on (-pi, pi) with exact inner
  products ``<e_a, e_b> = 2 sin(pi (a - b)) / (a - b)``;
* ``model``: the orbit ``T(gamma_n) x`` of a :class:`~orbit_kadec.repspace.DiagonalRep`.

For a finite section, ``c* G c = ||sum c_n phi_n||^2``, so the Riesz bounds
of the section are the extreme eigenvalues of G.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .bounds import (
    FrameBounds,
    SpectrumInterval,
    _bounds,
    _spec,
    deviation_factor,
    kadec_delta_max,
    perturbed_frame_bounds,
)
from .errors import DomainError
from .repspace import DiagonalRep

__all__ = [
    "SampleSet",
    "OrbitSystem",
    "GramMatrix",
    "FrameEstimate",
    "RieszReport",
    "KadecUResult",
    "TrialRow",
    "ExperimentReport",
    "integer_samples",
    "min_gap",
    "exp_kernel",
    "exp_gram",
    "exp_cross_gram",
    "orbit_gram",
    "synthesis_matrix",
    "frame_bounds_estimate",
    "frame_operator_bounds",
    "riesz_inequality_check",
    "kadec_U_check",
    "perturbation_experiment",
    "EXCURSION_TOL",
]

EQUAL_FREQ_TOL = 1e-12
EXCURSION_TOL = 1e-8
_HERMITIAN_TOL = 1e-12
_PSD_TOL = 1e-10


@dataclass(frozen=True)
class SampleSet:
    points: np.ndarray
    perturbed: Optional[np.ndarray] = None

    def __post_init__(self):
        p = np.array(self.points, dtype=float).ravel()
        if not np.all(np.isfinite(p)):
            raise ValueError("sample points must be finite")
        object.__setattr__(self, "points", p)
        if self.perturbed is not None:
            q = np.array(self.perturbed, dtype=float).ravel()
            if q.shape != p.shape:
                raise ValueError("perturbed points must match the base points in length")
            if not np.all(np.isfinite(q)):
                raise ValueError("perturbed points must be finite")
            object.__setattr__(self, "perturbed", q)

    def __len__(self):
        return self.points.size

    @property
    def delta_hat(self) -> float:
        if self.perturbed is None:
            return 0.0
        return float(np.max(np.abs(self.perturbed - self.points), initial=0.0))

    def with_perturbation(self, offsets) -> "SampleSet":
        off = np.asarray(offsets, dtype=float).ravel()
        if off.shape != self.points.shape:
            raise ValueError("one offset per sample point is required")
        return SampleSet(self.points, self.points + off)


def integer_samples(N: int) -> SampleSet:
    """The integers ``-N//2, ..., N - N//2 - 1``."""
    N = int(N)
    if N < 1:
        raise ValueError("N must be positive")
    return SampleSet(np.arange(-(N // 2), N - N // 2, dtype=float))


def min_gap(points) -> float:
    p = np.sort(np.asarray(points, dtype=float).ravel())
    if p.size < 2:
        return math.inf
    return float(np.min(np.diff(p)))


@dataclass(frozen=True)
class GramMatrix:
    """``entries[m, n] = <phi_n, phi_m>``."""

    entries: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.entries)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError(f"Gram matrix must be square, got shape {g.shape}")
        object.__setattr__(self, "entries", g)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def hermitian_defect(self) -> float:
        g = self.entries
        return float(np.max(np.abs(g - g.conj().T), initial=0.0))

    def quadratic_form(self, c) -> float:
        c = np.asarray(c)
        return float(np.real(np.vdot(c, self.entries @ c)))


@dataclass(frozen=True)
class OrbitSystem:
    kind: str
    frequencies: Optional[np.ndarray] = None
    rep: Optional[DiagonalRep] = None
    x: Optional[np.ndarray] = None
    samples: Optional[SampleSet] = None

    def __post_init__(self):
        if self.kind == "analytic-exponential":
            if self.frequencies is None:
                raise ValueError("exponential systems need frequencies")
            object.__setattr__(self, "frequencies",
                               np.array(self.frequencies, dtype=float).ravel())
        elif self.kind == "diagonal-model":
            if self.rep is None or self.x is None or self.samples is None:
                raise ValueError("model systems need rep, x and samples")
            x = np.array(self.x, dtype=complex).ravel()
            if x.size != self.rep.dimension:
                raise ValueError("generator dimension does not match the representation")
            object.__setattr__(self, "x", x)
        else:
            raise ValueError(f"unknown system kind {self.kind!r}")

    @classmethod
    def exponential(cls, mu) -> "OrbitSystem":
        return cls("analytic-exponential", frequencies=mu)

    @classmethod
    def model(cls, rep: DiagonalRep, x, samples) -> "OrbitSystem":
        if not isinstance(samples, SampleSet):
            samples = SampleSet(samples)
        return cls("diagonal-model", rep=rep, x=x, samples=samples)


@dataclass(frozen=True)
class FrameEstimate:
    lower_hat: float
    upper_hat: float
    method: str
    truncation: int


def exp_kernel(diff) -> np.ndarray:
    """``int_{-pi}^{pi} exp(i d t) dt = 2 sin(pi d)/d``, equal to ``2 pi`` at d = 0."""
    d = np.asarray(diff, dtype=float)
    close = np.abs(d) < EQUAL_FREQ_TOL
    safe = np.where(close, 1.0, d)
    return np.where(close, 2.0 * math.pi, 2.0 * np.sin(math.pi * safe) / safe)


def exp_cross_gram(mu_rows, mu_cols) -> np.ndarray:
    """``[m, n] -> <e_{mu_cols[n]}, e_{mu_rows[m]}>``."""
    r = np.asarray(mu_rows, dtype=float).ravel()
    c = np.asarray(mu_cols, dtype=float).ravel()
    return exp_kernel(c[None, :] - r[:, None])


def exp_gram(mu) -> GramMatrix:
    mu = np.asarray(mu, dtype=float).ravel()
    g = exp_cross_gram(mu, mu)
    # kernel is even, so enforce exact symmetry and the exact diagonal
    g = np.triu(g) + np.triu(g, 1).T
    np.fill_diagonal(g, 2.0 * math.pi)
    return GramMatrix(g)


def synthesis_matrix(system: OrbitSystem, perturbed: bool = False) -> np.ndarray:
    """d x N matrix whose columns are ``T(gamma_n) x``."""
    if system.kind != "diagonal-model":
        raise ValueError("synthesis matrices are only available for diagonal-model systems")
    pts = system.samples.perturbed if perturbed else system.samples.points
    if pts is None:
        raise ValueError("system has no perturbed points")
    lam = system.rep.spectrum_points
    return np.exp(1j * np.outer(lam, pts)) * system.x[:, None]


def orbit_gram(system: OrbitSystem) -> GramMatrix:
    if system.kind != "diagonal-model":
        raise ValueError("orbit_gram handles diagonal-model systems; use exp_gram for exponentials")
    phi = synthesis_matrix(system)
    g = phi.conj().T @ phi
    g = 0.5 * (g + g.conj().T)
    np.fill_diagonal(g, np.vdot(system.x, system.x).real)
    return GramMatrix(g)


def _extremes(mat: np.ndarray, what: str) -> tuple[float, float]:
    w = np.linalg.eigvalsh(mat)
    scale = max(1.0, float(np.max(np.abs(w), initial=0.0)))
    lo, hi = float(w[0]), float(w[-1])
    if lo < -_PSD_TOL * scale:
        raise ValueError(f"{what} is not positive semidefinite (smallest eigenvalue {lo})")
    return max(lo, 0.0), hi


def frame_bounds_estimate(gram) -> FrameEstimate:
    """Smallest and largest eigenvalue of a Hermitian PSD Gram matrix."""
    if not isinstance(gram, GramMatrix):
        gram = GramMatrix(np.asarray(gram))
    scale = max(1.0, float(np.max(np.abs(gram.entries), initial=0.0)))
    if gram.hermitian_defect() > _HERMITIAN_TOL * scale:
        raise ValueError(f"Gram matrix is not Hermitian (defect {gram.hermitian_defect()})")
    lo, hi = _extremes(gram.entries, "Gram matrix")
    return FrameEstimate(lo, hi, "gram-eigen", gram.size)


def frame_operator_bounds(system: OrbitSystem) -> FrameEstimate:
    """Extreme eigenvalues of the d x d frame operator ``S = sum phi_n phi_n*``."""
    phi = synthesis_matrix(system)
    s = phi @ phi.conj().T
    s = 0.5 * (s + s.conj().T)
    lo, hi = _extremes(s, "frame operator")
    return FrameEstimate(lo, hi, "frame-operator-eigen", phi.shape[1])


class RieszReport(NamedTuple):
    trials: int
    min_ratio: float
    max_ratio: float
    worst_lower: float
    worst_upper: float
    lower_violations: int
    upper_violations: int

    @property
    def violations(self) -> int:
        return self.lower_violations + self.upper_violations


def riesz_inequality_check(gram, bounds, trials: int, seed: int,
                           include_extremal: bool = True, rtol: float = 1e-12) -> RieszReport:
    """Test ``A ||c||^2 <= c* G c <= B ||c||^2`` on random complex vectors.

    With ``include_extremal`` the two extremal eigenvectors of G are added to
    the random probes, so bounds that are too tight are always detected.
    ``worst_lower = min ratio / A`` and ``worst_upper = max ratio / B``.
    """
    if not isinstance(gram, GramMatrix):
        gram = GramMatrix(np.asarray(gram))
    fb = _bounds(bounds)
    n = gram.size
    rng = np.random.default_rng(seed)
    probes = rng.standard_normal((trials, n)) + 1j * rng.standard_normal((trials, n))
    if include_extremal:
        _, vecs = np.linalg.eigh(gram.entries)
        probes = np.vstack([probes, vecs[:, 0], vecs[:, -1]])
    gc = probes @ gram.entries.T
    num = np.real(np.sum(probes.conj() * gc, axis=1))
    den = np.real(np.sum(probes.conj() * probes, axis=1))
    ratios = num / den
    low_bad = int(np.sum(ratios < fb.lower - rtol * fb.upper))
    high_bad = int(np.sum(ratios > fb.upper + rtol * fb.upper))
    return RieszReport(len(ratios), float(ratios.min()), float(ratios.max()),
                       float(ratios.min() / fb.lower), float(ratios.max() / fb.upper),
                       low_bad, high_bad)


class KadecUResult(NamedTuple):
    U: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.U <= self.bound + 1e-10 * max(1.0, self.bound)


def kadec_U_check(frequencies: SampleSet, c, B: float) -> KadecUResult:
    """``U = ||sum c_n (e_{gamma_n} - e_{gamma~_n})||`` against ``sqrt(B) eps(pi delta) ||c||``.

    Exponentials on (-pi, pi), so the spectrum bound is gamma = pi.
    """
    if frequencies.perturbed is None:
        raise ValueError("kadec_U_check needs perturbed points")
    c = np.asarray(c, dtype=complex).ravel()
    if c.size != len(frequencies):
        raise ValueError("coefficient vector length does not match the sample set")
    a, b = frequencies.points, frequencies.perturbed
    g = (exp_cross_gram(a, a) - exp_cross_gram(a, b)
         - exp_cross_gram(b, a) + exp_cross_gram(b, b))
    u2 = float(np.real(np.vdot(c, g @ c)))
    U = math.sqrt(max(u2, 0.0))
    bound = math.sqrt(B) * deviation_factor(math.pi * frequencies.delta_hat) * float(np.linalg.norm(c))
    return KadecUResult(U, bound)


class TrialRow(NamedTuple):
    trial: int
    delta_hat: float
    min_eig: float
    max_eig: float
    pred_lower: float
    pred_upper: float
    violation: bool


@dataclass
class ExperimentReport:
    delta: float
    seed: int
    bounds: FrameBounds
    spec: SpectrumInterval
    forced: bool
    rows: list = field(default_factory=list)

    @property
    def min_eig(self) -> float:
        return min(r.min_eig for r in self.rows)

    @property
    def max_eig(self) -> float:
        return max(r.max_eig for r in self.rows)

    @property
    def excursions(self) -> int:
        return sum(r.violation for r in self.rows)

    def margins(self) -> tuple[float, float]:
        """Worst (lower, upper) margins to the predicted window; negative means excursion."""
        lo = min((r.min_eig - r.pred_lower for r in self.rows if not math.isnan(r.pred_lower)),
                 default=math.nan)
        hi = min((r.pred_upper - r.max_eig for r in self.rows if not math.isnan(r.pred_upper)),
                 default=math.nan)
        return lo, hi


def _workers(workers: Optional[int]) -> int:
    if workers is None:
        workers = int(os.environ.get("ORBIT_KADEC_THREADS", "1") or 1)
    return workers if workers > 0 else (os.cpu_count() or 1)


def perturbation_experiment(base: SampleSet, delta: float, trials: int, seed: int,
                            bounds=(2 * math.pi, 2 * math.pi), spec=math.pi,
                            force: bool = False, workers: Optional[int] = None) -> ExperimentReport:
    """Random displacements of an exponential system and its Gram spectrum per trial.

    Trial ``k`` draws offsets uniform on [-delta, delta] from its own child of
    ``SeedSequence(seed)``, so the result does not depend on ``workers``.
    Predicted bounds use the realised ``delta_hat`` of each trial; they are NaN
    (and no excursion is flagged) when ``delta_hat`` reaches the threshold.
    """
    fb = _bounds(bounds)
    sp = _spec(spec)
    delta = float(delta)
    if delta < 0:
        raise DomainError(f"delta must be nonnegative, got {delta}")
    dmax = kadec_delta_max(fb, sp).delta
    if delta >= dmax and not force:
        raise DomainError(f"delta={delta} is not below the admissible threshold {dmax}; use force")
    children = np.random.SeedSequence(seed).spawn(trials)

    def run(k: int) -> TrialRow:
        rng = np.random.default_rng(children[k])
        offsets = delta * rng.uniform(-1.0, 1.0, len(base))
        mu = base.points + offsets
        est = frame_bounds_estimate(exp_gram(mu))
        dh = float(np.max(np.abs(offsets), initial=0.0))
        try:
            pred = perturbed_frame_bounds(fb, sp, dh)
            plo, phi = pred.lower, pred.upper
            bad = (est.lower_hat < plo - EXCURSION_TOL) or (est.upper_hat > phi + EXCURSION_TOL)
        except DomainError:
            plo = phi = math.nan
            bad = False
        return TrialRow(k, dh, est.lower_hat, est.upper_hat, plo, phi, bool(bad))

    n = _workers(workers)
    if n == 1:
        rows = [run(k) for k in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            rows = list(pool.map(run, range(trials)))
    return ExperimentReport(delta, seed, fb, sp, delta >= dmax, rows)
