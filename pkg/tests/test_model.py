import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparsephase.errors import InvalidSignal, PreconditionError
from sparsephase.model import (
    DERIVATIVE_WEIGHTED,
    IntensitySamples,
    RecoveryConfig,
    SpikeSignal,
    SplineSignal,
    SymmetricExponentialSum,
    make_signal,
    validate,
)

from data import random_spikes


def test_validate_distinct_differences_no_warning():
    assert validate(SpikeSignal([0, 1, 3], [1, 1j, 2])) == []


def test_validate_arithmetic_progression_warns():
    warnings = validate(SpikeSignal([0, 1, 2], [1, 1, 1]))
    assert any("collide" in w for w in warnings)


def test_validate_equal_endpoint_moduli_warns():
    warnings = validate(SpikeSignal([0, 1, 3], [1, 2, 1j]))
    assert any("equal modulus" in w for w in warnings)


def test_length_mismatch_rejected():
    with pytest.raises(InvalidSignal, match="coefficients"):
        make_signal(0, [0, 0.5], [1])


@pytest.mark.parametrize(
    "knots, coeffs",
    [([0, 0], [1, 1]), ([1, 0], [1, 1]), ([0, 1], [1, 0]), ([], []), ([0, np.nan], [1, 1])],
)
def test_spike_invariants(knots, coeffs):
    with pytest.raises(InvalidSignal):
        SpikeSignal(knots, coeffs)


def test_spline_knot_count():
    SplineSignal(2, [0, 1, 2], [1])
    with pytest.raises(InvalidSignal, match="knots"):
        SplineSignal(2, [0, 1, 2, 3], [1])
    with pytest.raises(InvalidSignal, match="order"):
        SplineSignal(0, [0, 1], [1])


def test_signals_are_immutable():
    s = SpikeSignal([0.0, 1.0], [1, 2])
    with pytest.raises(ValueError):
        s.knots[0] = 5.0


def test_validate_idempotent_and_pure():
    s = random_spikes(np.random.default_rng(3), 5)
    knots = s.knots.copy()
    assert validate(s) == validate(s)
    np.testing.assert_array_equal(s.knots, knots)


def test_expsum_from_coefficients_matches_autocorrelation():
    s = SymmetricExponentialSum.from_signal_coefficients([0, 1, 3], [1, 2j, 3])
    np.testing.assert_allclose(s.taus, [1, 2, 3])
    np.testing.assert_allclose(s.gammas, [2j * 1, 3 * np.conj(2j), 3])
    assert s.gamma0 == pytest.approx(14)
    taus, gammas = s.full()
    assert taus.size == 7 and gammas[3] == 14


def test_expsum_rejects_bad_taus():
    with pytest.raises(ValueError):
        SymmetricExponentialSum(1.0, [2, 1], [1, 1])
    with pytest.raises(ValueError):
        SymmetricExponentialSum(1.0, [0.0], [1])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_expsum_is_real(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(0, 8))
    taus = np.cumsum(rng.uniform(0.1, 2, m))
    s = SymmetricExponentialSum(rng.uniform(0, 5), taus, rng.normal(size=m) + 1j * rng.normal(size=m))
    w = rng.uniform(-50, 50, 1000)
    taus_full, gammas_full = s.full()
    direct = np.exp(-1j * np.outer(w, taus_full)) @ gammas_full
    scale = s.gamma0 + 2 * np.sum(np.abs(s.gammas))
    assert np.max(np.abs(direct.imag)) <= 1e-12 * max(scale, 1)
    np.testing.assert_allclose(s(w), direct.real, atol=1e-12 * max(scale, 1))


def test_intensity_samples_checks():
    s = IntensitySamples(0.5, [1, 2, 3])
    np.testing.assert_allclose(s.omegas, [0, 0.5, 1.0])
    assert len(s) == 3
    with pytest.raises(PreconditionError):
        IntensitySamples(0.0, [1])
    with pytest.raises(PreconditionError):
        IntensitySamples(1.0, [-1.0], DERIVATIVE_WEIGHTED)
    with pytest.raises(PreconditionError):
        IntensitySamples(1.0, [np.inf])


def test_recovery_config():
    assert RecoveryConfig(0, 16).exponential_bound == 241
    with pytest.raises(PreconditionError):
        RecoveryConfig(0, 1)
    with pytest.raises(PreconditionError):
        RecoveryConfig(0, 4, eps=0)
