"""Exact Fourier intensities of spike and spline signals.

The Fourier transform convention is ``F[f](w) = int f(t) e^{-i w t} dt``.
"""

import numpy as np

from .model import DERIVATIVE_WEIGHTED, MAGNITUDE, IntensitySamples, SpikeSignal, SplineSignal
from .errors import PreconditionError
from .splines import basis_matrix, distributional_coefficients

# below this value of |w| * (support length) the closed form cancels badly and
# the transform is integrated numerically instead
LOW_FREQUENCY = 20.0
GAUSS_NODES = 30


def _dirac_transform(knots, coefficients, omega):
    omega = np.asarray(omega, float)
    return np.exp(-1j * np.multiply.outer(omega, knots)) @ coefficients


def spike_intensity_squared(signal: SpikeSignal, omega):
    """``|sum_j c_j e^{-i w T_j}|^2``, scalar or vectorised over ``omega``."""
    out = np.abs(_dirac_transform(signal.knots, signal.coefficients, omega)) ** 2
    return float(out) if np.ndim(out) == 0 else out


def _spline_transform_quadrature(signal: SplineSignal, omega):
    """``F[f](w)`` by Gauss-Legendre quadrature on every knot interval.

    The integrand is a polynomial times ``e^{-i w t}``; with ``|w|`` times the
    support length at most ``LOW_FREQUENCY`` the rule is exact to rounding.
    """
    x, wt = np.polynomial.legendre.leggauss(GAUSS_NODES)
    a, b = signal.knots[:-1], signal.knots[1:]
    half = 0.5 * (b - a)[:, None]
    t = (half * x + 0.5 * (a + b)[:, None]).ravel()
    weights = (half * wt).ravel()
    f = basis_matrix(signal.knots, signal.order, t) @ signal.coefficients
    return np.exp(-1j * np.multiply.outer(omega, t)) @ (weights * f)


def spline_intensity_squared(signal: SplineSignal, omega):
    """``|F[f](w)|^2`` of a spline.

    Away from zero this is ``|sum_j c0_j e^{-i w T_j}|^2 / w^{2m}`` with the
    Dirac weights of the m-th derivative. That sum cancels to leading order
    at low frequencies, so there the transform is integrated directly; at
    ``w = 0`` the value is ``|int f|^2``.
    """
    m = signal.order
    knots = signal.knots
    c0 = distributional_coefficients(m, knots, signal.coefficients)
    omega = np.asarray(omega, float)
    w = np.atleast_1d(omega)
    out = np.empty(w.shape)
    low = np.abs(w) * (knots[-1] - knots[0]) <= LOW_FREQUENCY
    high = ~low
    out[high] = np.abs(_dirac_transform(knots, c0, w[high])) ** 2 / w[high] ** (2 * m)
    out[low] = np.abs(_spline_transform_quadrature(signal, w[low])) ** 2
    zero = w == 0
    if np.any(zero):
        integral = np.sum(signal.coefficients * (knots[m:] - knots[:-m])) / m
        out[zero] = abs(integral) ** 2
    return float(out[0]) if omega.ndim == 0 else out


def intensity_squared(signal, omega):
    if isinstance(signal, SpikeSignal):
        return spike_intensity_squared(signal, omega)
    if isinstance(signal, SplineSignal):
        return spline_intensity_squared(signal, omega)
    raise TypeError(f"unsupported signal type {type(signal).__name__}")


def sample_intensities(signal, step, count) -> IntensitySamples:
    """Magnitudes ``|F[f](step * k)|`` for ``k = 0..count-1``."""
    if not step > 0:
        raise PreconditionError(f"step must be positive, got {step}")
    if count < 1:
        raise PreconditionError(f"count must be >= 1, got {count}")
    omegas = step * np.arange(count)
    return IntensitySamples(step, np.sqrt(intensity_squared(signal, omegas)), MAGNITUDE)


def derivative_weight(samples: IntensitySamples, order) -> IntensitySamples:
    """Squared intensities of the ``order``-th derivative: ``(h k)^{2m} |F[f](h k)|^2``."""
    if samples.kind != MAGNITUDE:
        raise PreconditionError(f"expected magnitude samples, got {samples.kind}")
    if order < 0:
        raise PreconditionError("order must be >= 0")
    values = samples.values**2
    if order:
        values = samples.omegas ** (2 * order) * values
    return IntensitySamples(samples.step, values, DERIVATIVE_WEIGHTED)
