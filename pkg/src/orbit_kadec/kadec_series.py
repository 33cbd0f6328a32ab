"""Kadec's splitting of ``1 - exp(i delta t)`` on [-pi, pi].

    1 - e^{i d t} = h1 + sum_{v>=1} a_v cos(v t) + i sum_{v>=1} b_v sin((v - 1/2) t)

    h1  = 1 - sin(pi d) / (pi d)
    a_v = (-1)^v 2 d sin(pi d) / (pi (v^2 - d^2))
    b_v = (-1)^v 2 d cos(pi d) / (pi ((v - 1/2)^2 - d^2))

For 0 <= d < 1/2 the total coefficient mass |h1| + sum|a_v| + sum|b_v| is
``1 - cos(pi d) + sin(pi d)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import deviation_factor
from .errors import DomainError

__all__ = [
    "KadecCoefficients",
    "SeriesTruncation",
    "make_coefficients",
    "evaluate_partial",
    "coefficient_mass",
    "mass_closed_form",
    "kadec_defect",
    "DEFAULT_TERMS",
]

DEFAULT_TERMS = 100_000


@dataclass(frozen=True)
class SeriesTruncation:
    """Keep ``terms`` terms of each series; ``tail_bound`` bounds the dropped l1 mass."""

    terms: int
    tail_bound: float

    def __post_init__(self):
        if int(self.terms) < 1:
            raise DomainError(f"terms must be >= 1, got {self.terms}")
        if not self.tail_bound >= 0:
            raise DomainError(f"tail_bound must be nonnegative, got {self.tail_bound}")


@dataclass(frozen=True)
class KadecCoefficients:
    delta: float
    h1: float

    def cosine_coeffs(self, nu) -> np.ndarray:
        nu = np.asarray(nu, dtype=float)
        d = self.delta
        sign = np.where(nu % 2 == 0, 1.0, -1.0)
        return sign * 2.0 * d * math.sin(math.pi * d) / (math.pi * (nu**2 - d**2))

    def sine_coeffs(self, nu) -> np.ndarray:
        nu = np.asarray(nu, dtype=float)
        d = self.delta
        sign = np.where(nu % 2 == 0, 1.0, -1.0)
        return sign * 2.0 * d * math.cos(math.pi * d) / (math.pi * ((nu - 0.5) ** 2 - d**2))

    def truncation(self, terms: int = DEFAULT_TERMS) -> SeriesTruncation:
        """Truncation with a rigorous bound on the discarded coefficient mass.

        For v > M >= 1 and |d| < 1/2, both v^2 - d^2 and (v - 1/2)^2 - d^2 are
        at least v (v - 1), so each tail is dominated by the telescoping sum
        sum_{v>M} 1/(v (v - 1)) = 1/M.
        """
        terms = int(terms)
        if terms < 1:
            raise DomainError(f"terms must be >= 1, got {terms}")
        d = abs(self.delta)
        scale = 2.0 * d / math.pi * (abs(math.sin(math.pi * d)) + abs(math.cos(math.pi * d)))
        return SeriesTruncation(terms, scale / terms)


def make_coefficients(delta: float) -> KadecCoefficients:
    delta = float(delta)
    if not abs(delta) < 0.5:
        raise DomainError(f"|delta| must be < 1/2, got {delta}")
    if delta == 0.0:
        h1 = 0.0
    else:
        h1 = 1.0 - math.sin(math.pi * delta) / (math.pi * delta)
    return KadecCoefficients(delta, h1)


def evaluate_partial(coeffs: KadecCoefficients, t, trunc: SeriesTruncation):
    """Partial sum of the three-part decomposition at ``t`` (scalar or array) in [-pi, pi]."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(np.abs(t_arr) > math.pi):
        raise DomainError("t must lie in [-pi, pi]")
    nu = np.arange(1, trunc.terms + 1, dtype=float)
    a = coeffs.cosine_coeffs(nu)
    b = coeffs.sine_coeffs(nu)
    tt = t_arr.reshape(-1, 1)
    # chunk rows so the (len(t), M) phase table stays small
    out = np.empty(tt.shape[0], dtype=complex)
    step = max(1, 2_000_000 // max(trunc.terms, 1))
    for i in range(0, tt.shape[0], step):
        blk = tt[i:i + step]
        re = coeffs.h1 + np.cos(blk * nu) @ a
        im = np.sin(blk * (nu - 0.5)) @ b
        out[i:i + step] = re + 1j * im
    return complex(out[0]) if t_arr.ndim == 0 else out.reshape(t_arr.shape)


def coefficient_mass(coeffs: KadecCoefficients, trunc: SeriesTruncation) -> float:
    """Partial l1 mass; the exact mass lies in ``[mass, mass + trunc.tail_bound]``."""
    if coeffs.delta < 0:
        raise DomainError("coefficient_mass expects delta >= 0")
    d = coeffs.delta
    if d == 0.0:
        return 0.0
    nu = np.arange(1, trunc.terms + 1, dtype=float)
    d2 = d * d
    cos_sum = np.sum(1.0 / (nu * nu - d2))
    nu -= 0.5
    sin_sum = np.sum(1.0 / (nu * nu - d2))
    k = 2.0 * d / math.pi
    return (abs(coeffs.h1) + k * abs(math.sin(math.pi * d)) * float(cos_sum)
            + k * abs(math.cos(math.pi * d)) * float(sin_sum))


def mass_closed_form(delta: float) -> float:
    return deviation_factor(math.pi * float(delta))


def kadec_defect(delta: float, B: float) -> float:
    """``sqrt(B) (1 - cos(pi delta) + sin(pi delta))``: the Paley-Wiener ``mu`` at gamma = pi."""
    delta, B = float(delta), float(B)
    if delta < 0:
        raise DomainError(f"delta must be nonnegative, got {delta}")
    if B <= 0:
        raise DomainError(f"B must be positive, got {B}")
    return math.sqrt(B) * deviation_factor(math.pi * delta)
