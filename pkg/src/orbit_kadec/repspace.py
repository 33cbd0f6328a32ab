"""Finite diagonal models of isometric representations of the real line.

A :class:`DiagonalRep` acts on C^d by ``T(t) = diag(exp(i t lam_j))``.  Its
Beurling spectrum is the set of points ``lam_j``, and both the L1 module
action and the almost-periodic functional calculus become coordinatewise
multiplications, which is what makes every identity here checkable.

Vectors are plain complex numpy arrays of length ``d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .bounds import SpectrumInterval, _spec
from .errors import DomainError

__all__ = [
    "DiagonalRep",
    "AlmostPeriodicSymbol",
    "SampledFunction",
    "apply_rep",
    "module_action",
    "calculus_apply",
    "spectral_multiply",
    "operator_norm_deviation",
    "prodest_check",
    "ProdestResult",
    "rescale_rep",
    "uniform_rep",
]


@dataclass(frozen=True)
class DiagonalRep:
    spectrum_points: np.ndarray
    spec: SpectrumInterval

    def __post_init__(self):
        pts = np.array(self.spectrum_points, dtype=float).ravel()
        if pts.size < 1:
            raise DomainError("a representation needs at least one spectrum point")
        if not np.all(np.isfinite(pts)):
            raise DomainError("spectrum points must be finite")
        sp = _spec(self.spec)
        if np.any(np.abs(pts) > sp.gamma):
            raise DomainError(f"spectrum points must lie in [-{sp.gamma}, {sp.gamma}]")
        pts.setflags(write=False)
        object.__setattr__(self, "spectrum_points", pts)
        object.__setattr__(self, "spec", sp)

    @property
    def dimension(self) -> int:
        return self.spectrum_points.size

    @property
    def gamma(self) -> float:
        return self.spec.gamma

    def phases(self, t: float) -> np.ndarray:
        return np.exp(1j * float(t) * self.spectrum_points)

    def matrix(self, t: float) -> np.ndarray:
        return np.diag(self.phases(t))


def uniform_rep(d: int, gamma: float, low: float | None = None, high: float | None = None,
                endpoint: bool = True) -> DiagonalRep:
    """``d`` equally spaced spectrum points in [low, high] (default [-gamma, gamma])."""
    low = -gamma if low is None else low
    high = gamma if high is None else high
    return DiagonalRep(np.linspace(low, high, d, endpoint=endpoint), SpectrumInterval(gamma))


def _vec(rep: DiagonalRep, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (rep.dimension,):
        raise ValueError(f"vector of shape {x.shape} does not match dimension {rep.dimension}")
    return x


def apply_rep(rep: DiagonalRep, t: float, x) -> np.ndarray:
    return rep.phases(t) * _vec(rep, x)


@dataclass(frozen=True)
class AlmostPeriodicSymbol:
    """``h(xi) = sum_n c_n exp(i xi t_n)`` with finitely many terms."""

    coeffs: np.ndarray
    shifts: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        s = np.array(self.shifts, dtype=float).ravel()
        if c.shape != s.shape:
            raise ValueError("coeffs and shifts must have the same length")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(s))):
            raise ValueError("symbol terms must be finite")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "shifts", s)

    @classmethod
    def from_terms(cls, terms) -> "AlmostPeriodicSymbol":
        terms = list(terms)
        if not terms:
            return cls(np.zeros(0, complex), np.zeros(0))
        c, s = zip(*terms)
        return cls(c, s)

    @property
    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        return np.exp(1j * np.multiply.outer(xi, self.shifts)) @ self.coeffs

    def __mul__(self, other: "AlmostPeriodicSymbol") -> "AlmostPeriodicSymbol":
        # pointwise product = convolution of the coefficient lists
        c = np.multiply.outer(self.coeffs, other.coeffs).ravel()
        s = np.add.outer(self.shifts, other.shifts).ravel()
        return AlmostPeriodicSymbol(c, s)


@dataclass(frozen=True)
class SampledFunction:
    """Samples ``values[k] = f(start + k*step)`` of an integrable function.

    The caller certifies that f is negligible outside the sampled window.
    Fourier convention: ``fhat(xi) = int f(t) exp(-i t xi) dt``.
    """

    values: np.ndarray
    start: float
    step: float
    _weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).ravel()
        if v.size == 0:
            raise ValueError("empty sample grid")
        if not self.step > 0:
            raise ValueError("step must be positive")
        w = np.full(v.size, float(self.step))
        if v.size > 1:
            w[0] = w[-1] = 0.5 * self.step
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "_weights", w)

    @classmethod
    def from_callable(cls, f: Callable, start: float, stop: float, n: int) -> "SampledFunction":
        grid = np.linspace(start, stop, n)
        return cls(f(grid), start, grid[1] - grid[0] if n > 1 else 1.0)

    @property
    def grid(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.values.size)

    @property
    def l1_norm(self) -> float:
        return float(np.sum(self._weights * np.abs(self.values)))

    def fourier(self, xi) -> np.ndarray:
        """Trapezoidal approximation of ``fhat`` at ``xi``."""
        xi = np.asarray(xi, dtype=float)
        kernel = np.exp(-1j * np.multiply.outer(xi, self.grid))
        return kernel @ (self._weights * self.values)


def module_action(rep: DiagonalRep, f: SampledFunction, x) -> np.ndarray:
    """Trapezoidal value of ``int f(t) T(-t) x dt``."""
    x = _vec(rep, x)
    # T(-t) x has coordinates exp(-i t lam_j) x_j, so the integral is fhat(lam_j) x_j
    return f.fourier(rep.spectrum_points) * x


def calculus_apply(rep: DiagonalRep, h: AlmostPeriodicSymbol, x) -> np.ndarray:
    """Operator-side calculus ``sum_n c_n T(t_n) x``."""
    x = _vec(rep, x)
    out = np.zeros(rep.dimension, dtype=complex)
    for c, t in zip(h.coeffs, h.shifts):
        out += c * apply_rep(rep, t, x)
    return out


def spectral_multiply(rep: DiagonalRep, h: AlmostPeriodicSymbol, x) -> np.ndarray:
    """Symbol-side calculus ``(h(lam_j) x_j)_j``."""
    return h(rep.spectrum_points) * _vec(rep, x)


def operator_norm_deviation(rep: DiagonalRep, t: float) -> float:
    """Exact l2 operator norm of ``T(t) - I``."""
    return float(2.0 * np.max(np.abs(np.sin(0.5 * float(t) * rep.spectrum_points))))


class ProdestResult(NamedTuple):
    holds: bool
    vacuous: bool
    lhs: float
    rhs: float


def prodest_check(rep: DiagonalRep, h_values: Callable, a: float, b: float, x,
                  rtol: float = 1e-12) -> ProdestResult:
    """Check ``||h(A) x|| <= max(h(a), h(b)) ||x||`` for x spectrally supported in [a, b].

    ``h`` is assumed nonnegative and monotone on [a, b] (convex or with h' in
    L2 there); this is not verified.  An empty intersection of [a, b] with the
    spectrum gives a vacuous pass with ``vacuous=True``.
    """
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    x = _vec(rep, x)
    lam = rep.spectrum_points
    inside = (lam >= a) & (lam <= b)
    if np.any(x[~inside] != 0):
        raise DomainError("x has spectral mass outside [a, b]")
    if not np.any(inside):
        return ProdestResult(True, True, 0.0, 0.0)
    hv = np.asarray(h_values(lam[inside]), dtype=float)
    lhs = float(np.linalg.norm(hv * x[inside]))
    rhs = max(float(h_values(np.float64(a))), float(h_values(np.float64(b)))) * float(np.linalg.norm(x))
    return ProdestResult(lhs <= rhs * (1.0 + rtol) + 1e-300, False, lhs, rhs)


def rescale_rep(rep: DiagonalRep, target_gamma: float = math.pi) -> DiagonalRep:
    """The representation ``s -> T((target/gamma) s)``, with spectrum in [-target, target].

    With ``target_gamma = pi`` this is ``T_gamma(t) = T(pi t / gamma)``.  Orbits
    sampled at ``Gamma`` for ``rep`` equal orbits sampled at
    ``(gamma/target) Gamma`` for the result.
    """
    target = float(target_gamma)
    if not target > 0:
        raise DomainError(f"target gamma must be positive, got {target_gamma}")
    scale = target / rep.gamma
    pts = np.clip(rep.spectrum_points * scale, -target, target)
    return DiagonalRep(pts, SpectrumInterval(target))
