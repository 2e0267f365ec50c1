"""Reference signals and random generators shared by the tests."""

import numpy as np

from sparsephase.model import SpikeSignal, SplineSignal, SymmetricExponentialSum

SPIKES_KNOTS = np.array([
    -53.5895, -50.2765, -49.3765, -42.6915, -28.3915, -28.1475, -22.6005, -19.6495,
    -6.1705, -3.8985, 1.3755, 20.0945, 33.4525, 34.8415, 53.5895,
])
SPIKES_COEFFS = np.array([
    4.910, -0.165 + 0.814j, -2.368 - 1.314j, -0.293 + 0.541j, -1.841 + 2.589j,
    0.278 + 0.598j, -1.450 + 3.246j, 0.508 + 0.243j, 0.073 - 0.528j, 3.135 + 0.339j,
    2.887 + 3.828j, -1.423 + 0.397j, 0.023 - 2.039j, -2.997 + 3.767j, -0.064 - 0.368j,
])
SPIKES_STEP = 3.655073e-2
SPIKES_COUNT = 1001

SPLINE_KNOTS = np.array([
    -17.022, -13.921, -9.536, -8.301, -7.745, -4.313, -0.336, 2.309, 9.318, 17.022,
])
SPLINE_COEFFS = np.array([
    5.342, -3.569 + 0.132j, 0.440 - 1.413j, -4.685 - 0.499j, 3.597 - 0.334j,
    0.554 - 2.251j, -4.072 + 1.433j,
])
SPLINE_ORDER = 3
SPLINE_STEP = 3.088663e-2
SPLINE_COUNT = 401


def ref_spikes():
    return SpikeSignal(SPIKES_KNOTS, SPIKES_COEFFS)


def ref_spline():
    return SplineSignal(SPLINE_ORDER, SPLINE_KNOTS, SPLINE_COEFFS)


def _distinct_differences(knots, gap):
    d = np.sort((knots[None, :] - knots[:, None])[np.triu_indices(knots.size, 1)])
    return d.size < 2 or np.min(np.diff(d)) >= gap


def random_spikes(rng, n, span=None, gap=0.3, margin=0.1):
    """Spike signal with pairwise distinct knot differences and ``|c_1| != |c_N|``.

    The default span grows with ``n`` so that rejection sampling stays cheap.
    """
    if span is None:
        span = max(10.0, 2.0 * gap * n * (n - 1))
    while True:
        knots = np.sort(rng.uniform(0, span, n))
        if n > 1 and not _distinct_differences(knots, gap):
            continue
        coeffs = rng.uniform(0.5, 2.0, n) * np.exp(2j * np.pi * rng.uniform(size=n))
        if n > 1 and abs(abs(coeffs[0]) - abs(coeffs[-1])) < margin:
            continue
        return SpikeSignal(knots, coeffs)


def random_spline(rng, n, m, span=10.0):
    knots = np.sort(rng.uniform(0, span, n + m))
    while np.min(np.diff(knots)) < 0.05:
        knots = np.sort(rng.uniform(0, span, n + m))
    coeffs = rng.normal(size=n) + 1j * rng.normal(size=n)
    return SplineSignal(m, knots, coeffs)


def random_expsum(rng, max_terms=15, gap=0.5):
    """Symmetric sum with ``M <= max_terms`` positive terms spaced at least ``gap`` apart.

    Returns the sum and a step with ``h * tau_max = 0.9 pi``.
    """
    M = int(rng.integers(1, max_terms + 1))
    taus = np.cumsum(gap + rng.uniform(0, gap, M))
    gammas = rng.normal(size=M) + 1j * rng.normal(size=M)
    gamma0 = 2 * np.sum(np.abs(gammas)) + 1.0
    return SymmetricExponentialSum(gamma0, taus, gammas), 0.9 * np.pi / taus[-1]


def double_sum_intensity(knots, coeffs, omega):
    """``|F|^2`` as the double sum over all knot pairs (oracle)."""
    omega = np.atleast_1d(np.asarray(omega, float))
    diff = knots[:, None] - knots[None, :]
    prod = coeffs[:, None] * np.conj(coeffs[None, :])
    out = np.einsum("jk,wjk->w", prod, np.exp(-1j * omega[:, None, None] * diff))
    return out.real
