"""Atomic decompositions of C^d with respect to l1 or l2 coefficient norms.

Atoms ``x_n`` and functionals ``y_n`` are stored as the columns of two d x N
matrices.  The pairing is ``<x, y_n> = y_n^* x``, so the analysis operator is
``Y^*`` and the synthesis operator is ``X``.  The space carries the Euclidean
norm, on which every diagonal unitary representation is isometric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .bounds import (
    FrameBounds,
    _bounds,
    _budget,
    atomic_delta_max,
    deviation_factor,
    perturbed_atomic_bounds,
)
from .errors import DomainError
from .frames import OrbitSystem, SampleSet, synthesis_matrix
from .repspace import DiagonalRep

__all__ = [
    "AtomicDecomposition",
    "AtomicReport",
    "AtomicPerturbationReport",
    "orbit_decomposition",
    "canonical_dual",
    "reconstruct",
    "synthesis_norm",
    "operator_norm",
    "analysis_bounds_exact",
    "verify_atomic",
    "atomic_perturbation_check",
]

SUPPORTED_P = (1, 2)


def _check_p(p) -> int:
    if p not in SUPPORTED_P:
        raise ValueError(f"p must be 1 or 2, got {p!r}")
    return int(p)


@dataclass(frozen=True)
class AtomicDecomposition:
    atoms: np.ndarray
    functionals: np.ndarray
    p: int
    bounds: FrameBounds
    orbit: Optional[OrbitSystem] = None

    def __post_init__(self):
        X = np.asarray(self.atoms, dtype=complex)
        Y = np.asarray(self.functionals, dtype=complex)
        if X.ndim != 2 or X.shape != Y.shape:
            raise ValueError(f"atoms {X.shape} and functionals {Y.shape} must be matching d x N arrays")
        object.__setattr__(self, "atoms", X)
        object.__setattr__(self, "functionals", Y)
        object.__setattr__(self, "p", _check_p(self.p))
        object.__setattr__(self, "bounds", _bounds(self.bounds))

    @property
    def dimension(self) -> int:
        return self.atoms.shape[0]

    @property
    def count(self) -> int:
        return self.atoms.shape[1]

    def analysis(self, x) -> np.ndarray:
        return self.functionals.conj().T @ np.asarray(x, dtype=complex)


def operator_norm(matrix: np.ndarray, p: int) -> float:
    """Norm of ``matrix`` as a map from l^p to Euclidean space.

    p = 1: the largest column norm (attained at a coordinate vector).
    p = 2: the largest singular value.
    """
    p = _check_p(p)
    m = np.asarray(matrix)
    if m.size == 0:
        return 0.0
    if p == 1:
        return float(np.max(np.linalg.norm(m, axis=0)))
    return float(np.linalg.svd(m, compute_uv=False)[0])


def synthesis_norm(decomp: AtomicDecomposition) -> float:
    return operator_norm(decomp.atoms, decomp.p)


def reconstruct(decomp: AtomicDecomposition, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (decomp.dimension,):
        raise ValueError(f"vector of shape {x.shape} does not match dimension {decomp.dimension}")
    return decomp.atoms @ decomp.analysis(x)


def canonical_dual(atoms: np.ndarray) -> np.ndarray:
    """Columns ``S^{-1} x_n`` with ``S = X X^*``; requires the atoms to span."""
    X = np.asarray(atoms, dtype=complex)
    return np.linalg.pinv(X).conj().T


def analysis_bounds_exact(decomp: AtomicDecomposition) -> tuple[float, float]:
    """Optimal (A, B) for p = 2: extreme singular values of the analysis matrix."""
    if decomp.p != 2:
        raise ValueError("exact analysis bounds are only computed for p = 2")
    s = np.linalg.svd(decomp.functionals.conj().T, compute_uv=False)
    s = s[: decomp.dimension]
    lo = float(s[-1]) if s.size == decomp.dimension else 0.0
    return lo, float(s[0])


def orbit_decomposition(rep: DiagonalRep, x, points, p: int = 2) -> AtomicDecomposition:
    """Sampled orbit ``T(gamma_n) x`` with its canonical dual as functionals.

    Declared bounds are exact for p = 2.  For p = 1 they are the valid but
    not sharp estimates ``A = max(sigma_min, 1/||T_X||)`` and
    ``B = min(sqrt(N) sigma_max, sum ||y_n||)`` from the l1/l2 norm comparison.
    """
    p = _check_p(p)
    samples = points if isinstance(points, SampleSet) else SampleSet(points)
    system = OrbitSystem.model(rep, x, samples)
    X = synthesis_matrix(system)
    if np.linalg.matrix_rank(X) < X.shape[0]:
        raise DomainError("sampled orbit does not span the space")
    Y = canonical_dual(X)
    s = np.linalg.svd(Y.conj().T, compute_uv=False)[: X.shape[0]]
    if p == 2:
        fb = FrameBounds(s[-1], s[0])
    else:
        lo = max(float(s[-1]), 1.0 / operator_norm(X, 1))
        hi = min(math.sqrt(X.shape[1]) * float(s[0]), float(np.sum(np.linalg.norm(Y, axis=0))))
        fb = FrameBounds(lo, max(lo, hi))
    return AtomicDecomposition(X, Y, p, fb, orbit=system)


class AtomicReport(NamedTuple):
    reconstruction_error: float
    min_ratio: float
    max_ratio: float
    norm_violations: int
    optimal: Optional[tuple]
    bounds_valid: bool
    is_basis: bool


def verify_atomic(decomp: AtomicDecomposition, trials: int, seed: int,
                  tol: float = 1e-10) -> AtomicReport:
    """Check reconstruction on the standard basis and norm equivalence on random vectors.

    For p = 2 the declared bounds are compared with the exact optimal pair;
    for p = 1 validity means no violation among the random probes.
    """
    d = decomp.dimension
    recon = decomp.atoms @ decomp.functionals.conj().T
    err = float(np.max(np.abs(recon - np.eye(d))))
    rng = np.random.default_rng(seed)
    xs = rng.standard_normal((trials, d)) + 1j * rng.standard_normal((trials, d))
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)
    coeffs = xs.conj() @ decomp.functionals  # row k: conj(<x_k, y_n>)
    ratios = np.linalg.norm(coeffs, ord=decomp.p, axis=1)
    A, B = decomp.bounds.lower, decomp.bounds.upper
    bad = int(np.sum((ratios < A * (1 - tol)) | (ratios > B * (1 + tol))))
    optimal = None
    if decomp.p == 2:
        optimal = analysis_bounds_exact(decomp)
        valid = A <= optimal[0] * (1 + tol) and B >= optimal[1] * (1 - tol)
    else:
        valid = bad == 0
    basis = decomp.count == d and np.linalg.matrix_rank(decomp.atoms) == d
    return AtomicReport(err, float(ratios.min()), float(ratios.max()), bad, optimal,
                        bool(valid and err <= tol), bool(basis))


class AtomicPerturbationReport(NamedTuple):
    trials: int
    p: int
    delta: float
    mu: float
    hypothesis_violations: int
    worst_hypothesis_ratio: float
    worst_operator_deviation: float
    predicted: FrameBounds
    dual_constructed: bool
    dual_reconstruction_error: float
    optimal_lower_min: float
    optimal_upper_max: float
    window_violations: int


def atomic_perturbation_check(decomp: AtomicDecomposition, budget, trials: int, seed: int,
                              dual: str = "pinv", tol: float = 1e-10) -> AtomicPerturbationReport:
    """Perturb the sampling points of an orbit decomposition and test the perturbation theorem.

    Each trial displaces every sample uniformly within [-delta, delta] and
    checks ``||(T_X - T_W) c|| <= mu ||c||_p`` for a random c and for the exact
    operator norm, where ``mu = ||T_X|| eps(delta gamma)``.  For p = 2 a dual
    Z of W is built (``"pinv"``: canonical dual; ``"neumann"``:
    ``Z^* = T_Y (T_W T_Y)^{-1}``) and its optimal bounds are compared with
    the predicted window at the realised displacement.
    """
    if decomp.orbit is None:
        raise ValueError("decomposition was not built from a sampled orbit")
    if dual not in ("pinv", "neumann"):
        raise ValueError(f"unknown dual construction {dual!r}")
    orbit = decomp.orbit
    rep, x, pts = orbit.rep, orbit.x, orbit.samples.points
    p = decomp.p
    delta = _budget(budget).delta
    gamma = rep.gamma
    norm_x = synthesis_norm(decomp)
    dmax = atomic_delta_max(decomp.bounds.upper, norm_x, rep.spec).delta
    if delta >= dmax:
        raise DomainError(f"delta={delta} is not below the admissible threshold {dmax}")
    predicted = perturbed_atomic_bounds(decomp.bounds, norm_x, rep.spec, delta)
    mu = norm_x * deviation_factor(delta * gamma)

    X = decomp.atoms
    Yh = decomp.functionals.conj().T
    d, N = X.shape
    rng = np.random.default_rng(seed)
    violations = window_bad = 0
    worst_ratio = worst_dev = worst_recon = 0.0
    lo_min, hi_max = math.inf, 0.0
    for _ in range(trials):
        offsets = delta * rng.uniform(-1.0, 1.0, N)
        W = np.exp(1j * np.outer(rep.spectrum_points, pts + offsets)) * x[:, None]
        D = X - W
        c = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        lhs = float(np.linalg.norm(D @ c))
        rhs = mu * float(np.linalg.norm(c, ord=p))
        dev = operator_norm(D, p)
        worst_dev = max(worst_dev, dev)
        if mu > 0:
            worst_ratio = max(worst_ratio, lhs / rhs, dev / mu)
        if lhs > rhs + tol or dev > mu + tol:
            violations += 1
        if p != 2:
            continue
        if dual == "pinv":
            Zh = np.linalg.pinv(W)
        else:
            Zh = Yh @ np.linalg.inv(W @ Yh)
        worst_recon = max(worst_recon, float(np.max(np.abs(W @ Zh - np.eye(d)))))
        s = np.linalg.svd(Zh, compute_uv=False)[:d]
        lo_min, hi_max = min(lo_min, float(s[-1])), max(hi_max, float(s[0]))
        dh = float(np.max(np.abs(offsets), initial=0.0))
        win = perturbed_atomic_bounds(decomp.bounds, norm_x, rep.spec, dh)
        if s[-1] < win.lower * (1 - tol) or s[0] > win.upper * (1 + tol):
            window_bad += 1
    if p != 2:
        lo_min = hi_max = math.nan
        worst_recon = math.nan
    return AtomicPerturbationReport(trials, p, delta, mu, violations, worst_ratio, worst_dev,
                                    predicted, p == 2, worst_recon, lo_min, hi_max, window_bad)
