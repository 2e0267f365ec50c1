"""Parameter estimation for real symmetric exponential sums.

The sampled function is ``P(w) = g0 + sum_l (g_l e^{-i w t_l} + c.c.)``,
observed at ``w = h k``. Three estimators are provided:

* :func:`classical_prony` -- square Hankel system for the Prony polynomial,
* :func:`reduced_prony` -- uses the antisymmetry of the Prony polynomial of a
  real sum, needing only ``3M + 1`` samples,
* :func:`approximate_prony` -- the approximate Prony method (APM), which only
  needs an upper bound on the number of exponentials.
"""

from dataclasses import dataclass
import math

import numpy as np
import scipy.linalg

from .errors import (
    EmptyModel,
    NotTriangular,
    PreconditionError,
    RootCountMismatch,
)
from .model import DERIVATIVE_WEIGHTED, SQUARED, IntensitySamples, SymmetricExponentialSum
from .numerics import least_squares, polynomial_roots, smallest_right_singular_vectors, solve_square

UNIMODULAR_TOL = 1e-6
# APM angles below this are taken to be the zero frequency
ZERO_ANGLE = 1e-8


@dataclass(frozen=True)
class PronyPolynomial:
    """Monic polynomial ``sum_k coefficients[k] z^k``."""

    coefficients: np.ndarray

    @property
    def degree(self):
        return self.coefficients.size - 1

    def roots(self):
        return polynomial_roots(self.coefficients)

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coefficients)


@dataclass(frozen=True)
class ApmConfig:
    bound: int
    eps1: float = 1e-5
    eps2: float = 1e-7
    eps3: float = 1e-10

    def __post_init__(self):
        if self.bound < 1:
            raise PreconditionError("APM bound L must be >= 1")
        if min(self.eps1, self.eps2, self.eps3) <= 0:
            raise PreconditionError("APM accuracies must be positive")


def _values(samples):
    if isinstance(samples, IntensitySamples):
        if samples.kind not in (DERIVATIVE_WEIGHTED, SQUARED):
            raise PreconditionError(
                f"Prony estimators need squared intensities, got {samples.kind} samples"
            )
        return samples.step, samples.values
    raise TypeError("expected IntensitySamples")


def fit_coefficients(values, step, taus, weights=None):
    """Least-squares coefficients of the symmetric sum with known positive ``taus``.

    Returns ``(gamma0, gammas, residual)`` with conjugate symmetry enforced
    by averaging each coefficient with the conjugate of its mirror.
    """
    taus = np.asarray(taus, float)
    full = np.concatenate([-taus[::-1], [0.0], taus])
    k = np.arange(values.size)
    vander = np.exp(-1j * step * np.multiply.outer(k, full))
    gamma, residual = least_squares(vander, values, weights)
    m = taus.size
    gamma0 = gamma[m].real
    gammas = 0.5 * (gamma[m + 1 :] + np.conj(gamma[:m][::-1]))
    return gamma0, gammas, residual


def _sum_from_nodes(nodes, values, step, expected):
    """Map unimodular nodes ``e^{-i h tau}`` to a symmetrised exponential sum."""
    on_circle = nodes[np.abs(np.abs(nodes) - 1) <= UNIMODULAR_TOL]
    if on_circle.size != expected:
        raise RootCountMismatch(
            f"found {on_circle.size} unimodular roots, expected {expected}"
        )
    taus = np.sort(-np.angle(on_circle) / step)
    m = expected // 2
    taus = 0.5 * (taus[m + 1 :] - taus[:m][::-1])
    gamma0, gammas, _ = fit_coefficients(values, step, taus)
    return SymmetricExponentialSum(gamma0, taus, gammas)


def classical_prony(samples, term_count):
    """Classical Prony method for a sum with ``2 * term_count + 1`` exponentials.

    Needs at least ``2 (2M + 1)`` samples; the coefficients are fitted to
    all samples provided.
    """
    step, values = _values(samples)
    M = int(term_count)
    n = 2 * M + 1
    if values.size < 2 * n:
        raise PreconditionError(f"need {2 * n} samples for M = {M}, got {values.size}")
    hankel = scipy.linalg.hankel(values[:n], values[n - 1 : 2 * n - 1])
    lam = solve_square(hankel, -values[n : 2 * n])
    poly = PronyPolynomial(np.append(lam, 1.0))
    return _sum_from_nodes(poly.roots(), values, step, n)


def reduced_polynomial(values, term_count):
    """Antisymmetric Prony polynomial from ``3M + 1`` real samples."""
    M = int(term_count)
    n = 2 * M + 1
    P = np.asarray(values, float)
    if M == 0:
        return PronyPolynomial(np.array([-1.0, 1.0]))
    m = np.arange(M)[:, None]
    k = np.arange(1, M + 1)[None, :]
    system = P[k + m] - P[n + m - k]
    rhs = P[m[:, 0]] - P[n + m[:, 0]]
    lam = np.concatenate([[-1.0], np.real(solve_square(system, rhs))])
    coeffs = np.zeros(n + 1)
    coeffs[: M + 1] = lam
    coeffs[n - M :] = -lam[::-1]
    return PronyPolynomial(coeffs)


def reduced_prony(samples, term_count):
    """Prony method exploiting that ``P`` is real: ``3M + 1`` samples suffice."""
    step, values = _values(samples)
    M = int(term_count)
    if values.size < 3 * M + 1:
        raise PreconditionError(f"need {3 * M + 1} samples for M = {M}, got {values.size}")
    poly = reduced_polynomial(values, M)
    return _sum_from_nodes(poly.roots(), values, step, 2 * M + 1)


def _angles(vector, eps1):
    roots = polynomial_roots(vector)
    ang = np.angle(roots)
    keep = (np.abs(np.abs(roots) - 1) <= eps1) & (ang >= 0) & (ang < np.pi)
    return np.sort(ang[keep])


def _pair(a, b, eps2):
    """Greedy one-to-one matching of two angle sets by ascending distance."""
    if a.size == 0 or b.size == 0:
        return np.zeros(0)
    dist = np.abs(a[:, None] - b[None, :])
    ii, jj = np.nonzero(dist <= eps2)
    order = np.argsort(dist[ii, jj], kind="stable")
    used_a, used_b, out = set(), set(), []
    for i, j in zip(ii[order], jj[order]):
        if i in used_a or j in used_b:
            continue
        used_a.add(i)
        used_b.add(j)
        out.append(0.5 * (a[i] + b[j]))
    return np.sort(np.array(out))


def apm_weights(count):
    """Triangular preconditioner ``1 - |k - c| / (c + 1)`` centred on the samples."""
    centre = (count - 1) / 2
    return 1.0 - np.abs(np.arange(count) - centre) / (centre + 1)


def approximate_prony(samples, config: ApmConfig):
    """Approximate Prony method.

    Roots of the polynomials from the two smallest right singular vectors of
    the rectangular Hankel matrix are filtered to the unit circle, matched
    against each other, and the surviving frequencies are fitted by
    preconditioned least squares. Terms with ``|gamma| <= eps3`` are dropped
    and the fit is repeated.
    """
    step, values = _values(samples)
    L = config.bound
    n = values.size
    if (n - 1) // 2 < L:
        raise PreconditionError(f"APM with bound L = {L} needs >= {2 * L + 1} samples, got {n}")
    hankel = scipy.linalg.hankel(values[: n - L], values[n - L - 1 :])
    v1, v2 = smallest_right_singular_vectors(hankel, 2)
    omegas = _pair(_angles(v1, config.eps1), _angles(v2, config.eps1), config.eps2)
    if omegas.size == 0:
        raise EmptyModel("no frequency survived the root filtering and pairing")
    taus = omegas[omegas > ZERO_ANGLE] / step
    weights = apm_weights(n)
    _, gammas, _ = fit_coefficients(values, step, taus, weights)
    taus = taus[np.abs(gammas) > config.eps3]
    gamma0, gammas, _ = fit_coefficients(values, step, taus, weights)
    return SymmetricExponentialSum(gamma0, taus, gammas)


def relative_residual(expsum: SymmetricExponentialSum, samples) -> float:
    """``||P_fit(h k) - P(h k)|| / ||P(h k)||`` over all samples."""
    step, values = _values(samples)
    fitted = expsum(step * np.arange(values.size))
    norm = np.linalg.norm(values)
    return float(np.linalg.norm(fitted - values) / norm) if norm else float(np.linalg.norm(fitted))


def infer_support_size(term_count):
    """``K`` with ``K (K - 1) / 2 == term_count``."""
    if term_count < 0:
        raise ValueError("term count must be non-negative")
    k = (1 + math.isqrt(1 + 8 * term_count)) // 2
    if k * (k - 1) // 2 != term_count:
        raise NotTriangular(
            f"{term_count} positive frequencies is not a triangular number; "
            "knot differences collided or spurious terms survived"
        )
    return k
