import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbit_kadec.atomic import (
    AtomicDecomposition,
    atomic_perturbation_check,
    canonical_dual,
    operator_norm,
    orbit_decomposition,
    reconstruct,
    synthesis_norm,
    verify_atomic,
)
from orbit_kadec.bounds import atomic_delta_max
from orbit_kadec.errors import DomainError
from orbit_kadec.repspace import uniform_rep
from orbit_kadec.verify import atomic_model

PI = math.pi


def orbit_model(d=8, p=2):
    rep, x, pts = atomic_model(d)
    return orbit_decomposition(rep, x, pts, p=p)


def test_identity_decomposition():
    eye = np.eye(3)
    dec = AtomicDecomposition(eye, eye, 2, (1, 1))
    v = np.array([1.0, -2.0, 0.5j])
    assert np.array_equal(reconstruct(dec, v), v)
    assert synthesis_norm(dec) == 1.0
    rep = verify_atomic(dec, 50, 0)
    assert rep.reconstruction_error == 0.0 and rep.bounds_valid and rep.is_basis
    assert rep.optimal == pytest.approx((1.0, 1.0))
    with pytest.raises(ValueError):
        reconstruct(dec, np.ones(2))


def test_validation():
    with pytest.raises(ValueError):
        AtomicDecomposition(np.eye(2), np.eye(3), 2, (1, 1))
    with pytest.raises(ValueError):
        AtomicDecomposition(np.eye(2), np.eye(2), 3, (1, 1))
    with pytest.raises(DomainError):
        AtomicDecomposition(np.eye(2), np.eye(2), 2, (2, 1))
    with pytest.raises(ValueError):
        operator_norm(np.eye(2), 4)


def test_operator_norms_against_oracle():
    rng = np.random.default_rng(4)
    m = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
    assert operator_norm(m, 2) == pytest.approx(np.linalg.norm(m, 2), rel=1e-14)
    cols = np.linalg.norm(m, axis=0)
    assert operator_norm(m, 1) == pytest.approx(cols.max(), rel=1e-15)
    # the l1 norm is attained on a coordinate vector and dominates random probes
    for _ in range(200):
        c = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        assert np.linalg.norm(m @ c) <= operator_norm(m, 1) * np.linalg.norm(c, 1) * (1 + 1e-14)


def test_canonical_dual_reconstructs_redundant_frame():
    rng = np.random.default_rng(2)
    X = rng.standard_normal((3, 7)) + 1j * rng.standard_normal((3, 7))
    Y = canonical_dual(X)
    assert np.max(np.abs(X @ Y.conj().T - np.eye(3))) <= 1e-13
    S = X @ X.conj().T
    assert np.allclose(Y, np.linalg.solve(S, X), atol=1e-13)


def test_verify_detects_wrong_bounds():
    dec = orbit_model()
    lo, hi = verify_atomic(dec, 10, 0).optimal
    assert verify_atomic(dec, 300, 0).bounds_valid
    loose = AtomicDecomposition(dec.atoms, dec.functionals, 2, (lo * 0.5, hi * 2))
    assert verify_atomic(loose, 300, 0).bounds_valid
    # the model is a tight frame, so tighten one side at a time
    for pair in ((lo * 1.01, hi * 1.02), (lo * 0.98, hi * 0.99)):
        tight = AtomicDecomposition(dec.atoms, dec.functionals, 2, pair)
        assert not verify_atomic(tight, 300, 0).bounds_valid


def test_verify_detects_broken_reconstruction():
    dec = orbit_model()
    bad = AtomicDecomposition(dec.atoms, 1.01 * dec.functionals, 2, dec.bounds)
    rep = verify_atomic(bad, 20, 0)
    assert rep.reconstruction_error > 1e-3 and not rep.bounds_valid


def test_basis_detection():
    rep = uniform_rep(4, PI)
    x = np.ones(4)
    square = orbit_decomposition(rep, x, np.arange(4) * 0.7)
    assert verify_atomic(square, 10, 0).is_basis
    assert not verify_atomic(orbit_model(), 10, 0).is_basis


def test_orbit_must_span():
    rep = uniform_rep(4, PI)
    with pytest.raises(DomainError):
        orbit_decomposition(rep, np.ones(4), [0.0, 1.0])
    with pytest.raises(DomainError):
        orbit_decomposition(rep, np.array([1.0, 0, 1, 1]), np.arange(8.0))


@pytest.mark.parametrize("p", [1, 2])
def test_orbit_decomposition_is_valid(p):
    dec = orbit_model(p=p)
    rep = verify_atomic(dec, 500, 1)
    assert rep.reconstruction_error <= 1e-12
    assert rep.norm_violations == 0 and rep.bounds_valid


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**32 - 1), st.sampled_from([1, 2]))
def test_upper_bound_times_norm_at_least_one(d, seed, p):
    rng = np.random.default_rng(seed)
    rep = uniform_rep(d, rng.uniform(0.5, 5))
    x = rng.uniform(0.5, 2, d) * np.exp(1j * rng.uniform(0, 2 * PI, d))
    dec = orbit_decomposition(rep, x, rng.uniform(-20, 20, 3 * d), p=p)
    assert dec.bounds.upper * synthesis_norm(dec) >= 1 - 1e-12
    # so the atomic threshold is always defined
    assert atomic_delta_max(dec.bounds.upper, synthesis_norm(dec), rep.gamma).delta > 0


def test_perturbation_zero_delta():
    dec = orbit_model()
    rep = atomic_perturbation_check(dec, 0.0, trials=5, seed=0)
    assert rep.mu == 0.0 and rep.worst_operator_deviation == 0.0
    assert rep.hypothesis_violations == 0 and rep.window_violations == 0
    assert rep.predicted.astuple() == dec.bounds.astuple()


@pytest.mark.parametrize("dual", ["pinv", "neumann"])
def test_perturbation_p2(dual):
    dec = orbit_model()
    rep = atomic_perturbation_check(dec, 0.02, trials=200, seed=5, dual=dual)
    assert rep.hypothesis_violations == 0 and rep.window_violations == 0
    assert rep.dual_reconstruction_error <= 1e-9
    assert rep.worst_hypothesis_ratio <= 1
    assert rep.predicted.lower <= rep.optimal_lower_min
    assert rep.optimal_upper_max <= rep.predicted.upper


def test_perturbation_p1():
    dec = orbit_model(p=1)
    rep = atomic_perturbation_check(dec, 0.02, trials=200, seed=5)
    assert rep.hypothesis_violations == 0
    assert rep.worst_operator_deviation <= rep.mu


def test_perturbation_errors():
    dec = orbit_model()
    dmax = atomic_delta_max(dec.bounds.upper, synthesis_norm(dec), PI).delta
    with pytest.raises(DomainError):
        atomic_perturbation_check(dec, dmax, trials=1, seed=0)
    with pytest.raises(ValueError):
        atomic_perturbation_check(dec, 0.0, trials=1, seed=0, dual="other")
    plain = AtomicDecomposition(dec.atoms, dec.functionals, 2, dec.bounds)
    with pytest.raises(ValueError):
        atomic_perturbation_check(plain, 0.0, trials=1, seed=0)
