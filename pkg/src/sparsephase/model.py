"""Signal models, the symmetric exponential sum and configuration records.

All records are frozen; array fields are stored as read-only numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import InvalidSignal, PreconditionError

# relative tolerance used by the uniqueness-hypothesis checks in `validate`
COLLISION_RTOL = 1e-12


def _frozen(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype).reshape(-1)
    arr.flags.writeable = False
    return arr


def _check_knots(knots: np.ndarray, name: str = "knots") -> None:
    if not np.all(np.isfinite(knots)):
        raise InvalidSignal(f"{name}: non-finite value")
    if knots.size > 1 and np.any(np.diff(knots) <= 0):
        raise InvalidSignal(f"{name}: must be strictly increasing")


@dataclass(frozen=True)
class SpikeSignal:
    """Weighted Dirac spikes ``sum_j c_j delta(t - T_j)``."""

    knots: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        knots = _frozen(self.knots, float)
        coeffs = _frozen(self.coefficients, complex)
        if knots.size == 0:
            raise InvalidSignal("knots: at least one spike required")
        if knots.size != coeffs.size:
            raise InvalidSignal(
                f"coefficients: expected {knots.size} entries, got {coeffs.size}"
            )
        _check_knots(knots)
        if not np.all(np.isfinite(coeffs)):
            raise InvalidSignal("coefficients: non-finite value")
        if np.any(coeffs == 0):
            raise InvalidSignal("coefficients: spike amplitudes must be non-zero")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "coefficients", coeffs)

    order = 0

    @property
    def support_size(self) -> int:
        return self.knots.size

    def endpoint_coefficients(self) -> np.ndarray:
        return self.coefficients


@dataclass(frozen=True)
class SplineSignal:
    """Spline ``sum_j c_j B_{j,m}(t)`` of order ``m`` on strictly increasing knots.

    ``knots`` has ``N + m`` entries for ``N`` coefficients.
    """

    order: int
    knots: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        order = int(self.order)
        if order != self.order or order < 1:
            raise InvalidSignal(f"order: must be an integer >= 1, got {self.order!r}")
        knots = _frozen(self.knots, float)
        coeffs = _frozen(self.coefficients, complex)
        if coeffs.size < 1:
            raise InvalidSignal("coefficients: at least one coefficient required")
        if knots.size != coeffs.size + order:
            raise InvalidSignal(
                f"knots: expected {coeffs.size + order} entries "
                f"(coefficients + order), got {knots.size}"
            )
        _check_knots(knots)
        if not np.all(np.isfinite(coeffs)):
            raise InvalidSignal("coefficients: non-finite value")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def support_size(self) -> int:
        return self.knots.size

    def endpoint_coefficients(self) -> np.ndarray:
        """Coefficients of the distributional m-th derivative (one per knot)."""
        from .splines import distributional_coefficients

        return distributional_coefficients(self.order, self.knots, self.coefficients)


Signal = Union[SpikeSignal, SplineSignal]


def make_signal(order: int, knots, coefficients) -> Signal:
    """Build a spike signal for ``order == 0`` and a spline otherwise."""
    if order == 0:
        return SpikeSignal(knots, coefficients)
    if order < 0:
        raise InvalidSignal(f"order: must be >= 0, got {order}")
    return SplineSignal(order, knots, coefficients)


def validate(signal: Signal) -> list[str]:
    """Check the uniqueness hypotheses of the recovery procedure.

    Structural invariants are enforced at construction; this only looks for
    colliding knot differences and for equal endpoint moduli. Both make the
    recovery ambiguous but do not forbid attempting it, so they come back as
    warning messages rather than exceptions.
    """
    if not isinstance(signal, (SpikeSignal, SplineSignal)):
        raise InvalidSignal(f"not a signal model: {type(signal).__name__}")
    warnings = []
    knots = signal.knots
    k = knots.size
    if k >= 3:
        i, j = np.triu_indices(k, 1)
        diffs = np.sort(knots[j] - knots[i])
        scale = max(abs(knots[-1] - knots[0]), np.finfo(float).tiny)
        gaps = np.diff(diffs)
        if np.any(gaps <= COLLISION_RTOL * scale):
            at = diffs[:-1][gaps <= COLLISION_RTOL * scale]
            warnings.append(
                "knot differences collide (e.g. at %.17g); recovery may be ambiguous" % at[0]
            )
    c0 = signal.endpoint_coefficients()
    if c0.size >= 2:
        a, b = abs(c0[0]), abs(c0[-1])
        if abs(a - b) <= COLLISION_RTOL * max(a, b):
            warnings.append(
                "first and last (distributional) coefficients have equal modulus; "
                "reflection cannot be resolved"
            )
    return warnings


@dataclass(frozen=True)
class SymmetricExponentialSum:
    """Real exponential sum ``g0 + sum_l (g_l e^{-i w t_l} + conj(g_l) e^{i w t_l})``.

    Only the non-negative half is stored; the negative frequencies follow
    from conjugate symmetry.
    """

    gamma0: float
    taus: np.ndarray = field(default_factory=lambda: np.zeros(0))
    gammas: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))

    def __post_init__(self):
        g0 = complex(self.gamma0)
        taus = _frozen(self.taus, float)
        gammas = _frozen(self.gammas, complex)
        if taus.size != gammas.size:
            raise ValueError("taus and gammas must have equal length")
        if np.any(taus <= 0) or np.any(np.diff(taus) <= 0):
            raise ValueError("taus must be positive and strictly increasing")
        object.__setattr__(self, "gamma0", float(g0.real))
        object.__setattr__(self, "taus", taus)
        object.__setattr__(self, "gammas", gammas)

    @property
    def term_count(self) -> int:
        """Number of positive frequencies."""
        return self.taus.size

    @classmethod
    def from_signal_coefficients(cls, knots, coefficients) -> "SymmetricExponentialSum":
        """Autocorrelation sum of ``sum_j c_j e^{-i w T_j}`` (assumes distinct differences)."""
        knots = np.asarray(knots, float)
        c = np.asarray(coefficients, complex)
        i, j = np.triu_indices(knots.size, 1)
        taus = knots[j] - knots[i]
        gammas = c[j] * np.conj(c[i])
        order = np.argsort(taus)
        return cls(float(np.sum(np.abs(c) ** 2)), taus[order], gammas[order])

    def __call__(self, omega):
        omega = np.asarray(omega, float)
        phase = np.exp(-1j * np.multiply.outer(omega, self.taus))
        return self.gamma0 + 2.0 * np.real(phase @ self.gammas)

    def full(self) -> tuple[np.ndarray, np.ndarray]:
        """All ``2M + 1`` frequencies and coefficients in increasing frequency order."""
        taus = np.concatenate([-self.taus[::-1], [0.0], self.taus])
        gammas = np.concatenate([np.conj(self.gammas[::-1]), [self.gamma0], self.gammas])
        return taus, gammas


MAGNITUDE = "magnitude"
SQUARED = "squared"
DERIVATIVE_WEIGHTED = "derivative-weighted"
_KINDS = (MAGNITUDE, SQUARED, DERIVATIVE_WEIGHTED)


@dataclass(frozen=True)
class IntensitySamples:
    """Equidistant samples; ``values[k]`` belongs to frequency ``step * k``."""

    step: float
    values: np.ndarray
    kind: str = MAGNITUDE

    def __post_init__(self):
        values = _frozen(self.values, float)
        if not self.step > 0:
            raise PreconditionError(f"step must be positive, got {self.step}")
        if self.kind not in _KINDS:
            raise PreconditionError(f"unknown sample kind {self.kind!r}")
        if not np.all(np.isfinite(values)):
            raise PreconditionError("sample values must be finite")
        if np.any(values < 0):
            raise PreconditionError("sample values must be non-negative")
        object.__setattr__(self, "step", float(self.step))
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    @property
    def omegas(self) -> np.ndarray:
        return self.step * np.arange(self.values.size)


@dataclass(frozen=True)
class RecoveryConfig:
    """Inputs of the phase retrieval pipeline.

    ``upper_bound`` bounds the number of knots ``N + m``; the Prony stage
    then searches for at most ``L(L-1) + 1`` exponentials.
    """

    order: int = 0
    upper_bound: int = 2
    eps: float = 1e-3
    eps1: float = 1e-5
    eps2: float = 1e-7
    eps3: float = 1e-10

    def __post_init__(self):
        if self.order < 0:
            raise PreconditionError("order must be >= 0")
        if self.upper_bound < 2:
            raise PreconditionError("upper bound L must be >= 2")
        for name in ("eps", "eps1", "eps2", "eps3"):
            if not getattr(self, name) > 0:
                raise PreconditionError(f"{name} must be positive")

    @property
    def exponential_bound(self) -> int:
        L = self.upper_bound
        return L * (L - 1) + 1


@dataclass(frozen=True)
class RecoveryReport:
    knots: np.ndarray
    c0: np.ndarray
    cm: np.ndarray
    order: int
    residuals: dict
    warnings: tuple = ()
    sum: SymmetricExponentialSum | None = None

    def __post_init__(self):
        object.__setattr__(self, "knots", _frozen(self.knots, float))
        object.__setattr__(self, "c0", _frozen(self.c0, complex))
        object.__setattr__(self, "cm", _frozen(self.cm, complex))
        object.__setattr__(self, "warnings", tuple(self.warnings))

    def signal(self) -> Signal:
        if self.order == 0:
            return SpikeSignal(self.knots, self.c0)
        return SplineSignal(self.order, self.knots, self.cm)
