"""Closed-form perturbation thresholds and frame-bound formulas.

Every function here is a pure function of its (validated) arguments.  The
angle ``delta * gamma`` appears throughout through the factor

    eps(x) = 1 - cos x + sin x = 2*sqrt(2) * sin(x/2) * sin(x/2 + pi/4),

which bounds ||T(t) - I|| for an isometric representation whose spectrum
lies in [0, gamma] (x = gamma * t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import DomainError

__all__ = [
    "SpectrumInterval",
    "FrameBounds",
    "PerturbationBudget",
    "deviation_factor",
    "kadec_delta_max",
    "within_kadec_budget",
    "perturbed_frame_bounds",
    "separation_satisfied",
    "isometry_deviation_bound",
    "baskakov_bound",
    "baskakov_meaningful_limit",
    "paley_wiener_perturbed_bounds",
    "christensen_heil_bounds",
    "atomic_delta_max",
    "perturbed_atomic_bounds",
]


@dataclass(frozen=True)
class SpectrumInterval:
    """Spectrum contained in [-gamma, gamma]."""

    gamma: float

    def __post_init__(self):
        g = float(self.gamma)
        if not (math.isfinite(g) and g > 0):
            raise DomainError(f"gamma must be positive and finite, got {self.gamma!r}")
        object.__setattr__(self, "gamma", g)


@dataclass(frozen=True)
class FrameBounds:
    """Lower/upper bounds (A, B) with 0 < A <= B."""

    lower: float
    upper: float

    def __post_init__(self):
        a, b = float(self.lower), float(self.upper)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(f"bounds must be finite, got ({a}, {b})")
        if a <= 0:
            raise DomainError(f"lower bound must be positive, got {a}")
        if a > b:
            raise DomainError(f"lower bound {a} exceeds upper bound {b}")
        object.__setattr__(self, "lower", a)
        object.__setattr__(self, "upper", b)

    @property
    def ratio(self) -> float:
        return self.lower / self.upper

    def astuple(self) -> tuple[float, float]:
        return (self.lower, self.upper)


@dataclass(frozen=True)
class PerturbationBudget:
    """Uniform bound on the sample displacements |new_n - old_n|."""

    delta: float

    def __post_init__(self):
        d = float(self.delta)
        if not (math.isfinite(d) and d >= 0):
            raise DomainError(f"delta must be nonnegative and finite, got {self.delta!r}")
        object.__setattr__(self, "delta", d)


SpecLike = Union[SpectrumInterval, float]
BudgetLike = Union[PerturbationBudget, float]


def _spec(spec: SpecLike) -> SpectrumInterval:
    return spec if isinstance(spec, SpectrumInterval) else SpectrumInterval(spec)


def _budget(budget: BudgetLike) -> PerturbationBudget:
    return budget if isinstance(budget, PerturbationBudget) else PerturbationBudget(budget)


def _bounds(bounds) -> FrameBounds:
    if isinstance(bounds, FrameBounds):
        return bounds
    a, b = bounds
    return FrameBounds(a, b)


def deviation_factor(angle: float) -> float:
    """``1 - cos(angle) + sin(angle)``."""
    return 1.0 - math.cos(angle) + math.sin(angle)


def _threshold(ratio_term: float, gamma: float) -> float:
    # pi/(4 gamma) - arcsin((1 - ratio_term)/sqrt 2)/gamma, ratio_term in (0, 1]
    arg = (1.0 - ratio_term) / math.sqrt(2.0)
    if not 0.0 <= arg < 1.0 / math.sqrt(2.0):
        raise DomainError(f"arcsin argument {arg} outside [0, 1/sqrt(2))")
    return (math.pi / 4.0 - math.asin(arg)) / gamma


def kadec_delta_max(bounds, spec: SpecLike) -> PerturbationBudget:
    """Supremum of admissible displacements for a frame with bounds (A, B).

    The admissible set is the open interval ``[0, delta_max)``; the value
    returned is its supremum.  For A = B and gamma = pi this is Kadec's 1/4.
    """
    fb = _bounds(bounds)
    sp = _spec(spec)
    return PerturbationBudget(_threshold(math.sqrt(fb.ratio), sp.gamma))


def within_kadec_budget(bounds, spec: SpecLike, budget: BudgetLike) -> bool:
    return _budget(budget).delta < kadec_delta_max(bounds, spec).delta


def perturbed_frame_bounds(bounds, spec: SpecLike, budget: BudgetLike) -> FrameBounds:
    """Frame bounds of the system sampled at the displaced points.

    Lower bound ``A (1 - sqrt(B/A) eps)^2`` and upper bound
    ``B (1 + eps)^2 = B (2 - cos + sin)^2`` with ``eps = deviation_factor(delta*gamma)``.
    The lower bound is the Paley-Wiener lemma applied with ``mu = sqrt(B) eps``;
    it is positive exactly when ``delta < kadec_delta_max``.
    """
    fb = _bounds(bounds)
    sp = _spec(spec)
    d = _budget(budget).delta
    dmax = kadec_delta_max(fb, sp).delta
    if d >= dmax:
        raise DomainError(f"delta={d} is not below the admissible threshold {dmax}")
    eps = deviation_factor(d * sp.gamma)
    a, b = fb.lower, fb.upper
    shrink = 1.0 - math.sqrt(b / a) * eps
    if shrink <= 0:
        raise DomainError(f"delta={d} leaves no positive lower bound")
    return FrameBounds(a * shrink**2, b * (1.0 + eps) ** 2)


def separation_satisfied(kappa: float, bounds, spec: SpecLike) -> bool:
    """Necessary separation condition for a Riesz basis with bounds (A, B).

    True iff ``2 (1 - cos(g k/2)) (1 + sin(g k/2)) >= A/B`` or ``k >= pi/(2 g)``.
    """
    kappa = float(kappa)
    if not (math.isfinite(kappa) and kappa > 0):
        raise DomainError(f"kappa must be positive, got {kappa}")
    fb = _bounds(bounds)
    g = _spec(spec).gamma
    if kappa >= math.pi / (2.0 * g):
        return True
    half = g * kappa / 2.0
    return 2.0 * (1.0 - math.cos(half)) * (1.0 + math.sin(half)) >= fb.ratio


def isometry_deviation_bound(spec: SpecLike, t: float, form: str = "sum") -> float:
    """Bound on ||T(t) - I|| when the spectrum lies in [0, gamma].

    Valid for ``0 <= t <= pi/(2 gamma)``.  ``form`` selects between the two
    equivalent closed forms: ``"sum"`` (1 - cos + sin) or ``"product"``
    (2 sqrt 2 sin(x/2) sin(x/2 + pi/4)).
    """
    g = _spec(spec).gamma
    t = float(t)
    if not 0.0 <= t <= math.pi / (2.0 * g):
        raise DomainError(f"t={t} outside [0, pi/(2 gamma)] = [0, {math.pi / (2 * g)}]")
    x = g * t
    if form == "sum":
        return deviation_factor(x)
    if form == "product":
        return 2.0 * math.sqrt(2.0) * math.sin(x / 2.0) * math.sin(x / 2.0 + math.pi / 4.0)
    raise ValueError(f"unknown form {form!r}")


def baskakov_bound(spec: SpecLike, t: float) -> float:
    """Older bound ``4 sqrt(2) sin(gamma t / 2)`` on ||T(t) - I||, t in [0, pi/gamma].

    Only informative below :func:`baskakov_meaningful_limit`; past that point it
    exceeds the trivial bound 2.
    """
    g = _spec(spec).gamma
    t = float(t)
    if not 0.0 <= t <= math.pi / g:
        raise DomainError(f"t={t} outside [0, pi/gamma] = [0, {math.pi / g}]")
    return 4.0 * math.sqrt(2.0) * math.sin(g * t / 2.0)


def baskakov_meaningful_limit(spec: SpecLike) -> float:
    g = _spec(spec).gamma
    return 2.0 / g * math.asin(1.0 / (2.0 * math.sqrt(2.0)))


def paley_wiener_perturbed_bounds(bounds, lam: float, mu: float) -> FrameBounds:
    fb = _bounds(bounds)
    lam, mu = float(lam), float(mu)
    if lam < 0 or mu < 0:
        raise DomainError(f"lambda and mu must be nonnegative, got ({lam}, {mu})")
    a, b = fb.lower, fb.upper
    q = lam + mu / math.sqrt(a)
    if q >= 1.0:
        raise DomainError(f"lambda + mu/sqrt(A) = {q} must be < 1")
    return FrameBounds(a * (1.0 - q) ** 2, b * (1.0 + lam + mu / math.sqrt(b)) ** 2)


def christensen_heil_bounds(bounds, mu: float) -> FrameBounds:
    """Atomic-decomposition bounds ``(A/(1 + mu B), B/(1 - mu B))`` for mu in [0, 1/B)."""
    fb = _bounds(bounds)
    mu = float(mu)
    a, b = fb.lower, fb.upper
    if mu < 0 or mu * b >= 1.0:
        raise DomainError(f"mu={mu} outside [0, 1/B) = [0, {1.0 / b})")
    return FrameBounds(a / (1.0 + mu * b), b / (1.0 - mu * b))


def atomic_delta_max(B: float, synthesis_norm: float, spec: SpecLike) -> PerturbationBudget:
    """Displacement threshold for an atomic decomposition with upper bound B.

    Reconstruction ``x = T_X T_Y x`` with ``||T_Y|| <= B`` forces
    ``B * ||T_X|| >= 1``; smaller products mean the data are inconsistent.
    """
    B, synthesis_norm = float(B), float(synthesis_norm)
    if B <= 0 or synthesis_norm <= 0:
        raise DomainError("B and synthesis_norm must be positive")
    prod = B * synthesis_norm
    if prod < 1.0 - 1e-12:
        raise DomainError(f"B * ||T_X|| = {prod} < 1 is impossible for an atomic decomposition")
    prod = max(prod, 1.0)  # rounding slack only
    return PerturbationBudget(_threshold(1.0 / prod, _spec(spec).gamma))


def perturbed_atomic_bounds(bounds, synthesis_norm: float, spec: SpecLike,
                            budget: BudgetLike) -> FrameBounds:
    fb = _bounds(bounds)
    sp = _spec(spec)
    d = _budget(budget).delta
    dmax = atomic_delta_max(fb.upper, synthesis_norm, sp).delta
    if d >= dmax:
        raise DomainError(f"delta={d} is not below the admissible threshold {dmax}")
    # Christensen-Heil with mu = ||T_X|| eps; mu B < 1 is equivalent to d < dmax
    return christensen_heil_bounds(fb, float(synthesis_norm) * deviation_factor(d * sp.gamma))
