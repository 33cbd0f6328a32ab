"""Kadec-type perturbation bounds for frames built from sampled group orbits."""

from .errors import DomainError
from .bounds import (
    FrameBounds,
    PerturbationBudget,
    SpectrumInterval,
    atomic_delta_max,
    baskakov_bound,
    christensen_heil_bounds,
    isometry_deviation_bound,
    kadec_delta_max,
    paley_wiener_perturbed_bounds,
    perturbed_atomic_bounds,
    perturbed_frame_bounds,
    separation_satisfied,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "FrameBounds",
    "PerturbationBudget",
    "SpectrumInterval",
    "atomic_delta_max",
    "baskakov_bound",
    "christensen_heil_bounds",
    "isometry_deviation_bound",
    "kadec_delta_max",
    "paley_wiener_perturbed_bounds",
    "perturbed_atomic_bounds",
    "perturbed_frame_bounds",
    "separation_satisfied",
]
