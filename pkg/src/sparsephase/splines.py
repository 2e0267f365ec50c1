"""B-splines on strictly increasing knots and the derivative coefficient ladder.

Indices are zero-based: ``B_j`` of order ``m`` lives on ``knots[j:j+m+1]``
with half-open support ``[knots[j], knots[j+m])``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InconsistentSystem
from .numerics import least_squares

LIFT_RTOL = 1e-6


def basis_matrix(knots, order, t):
    """Values of all order-``order`` B-splines at the points ``t``.

    Returns an array of shape ``(len(t), len(knots) - order)`` built with
    the Cox-de Boor recursion starting from half-open indicators.
    """
    knots = np.asarray(knots, float)
    t = np.atleast_1d(np.asarray(t, float))
    b = ((knots[:-1] <= t[:, None]) & (t[:, None] < knots[1:])).astype(float)
    for p in range(2, order + 1):
        left = (t[:, None] - knots[: -p]) / (knots[p - 1 : -1] - knots[: -p])
        right = (knots[p:][None, :] - t[:, None]) / (knots[p:] - knots[1 : -p + 1])
        b = left * b[:, :-1] + right * b[:, 1:]
    return b


def bspline_value(knots, j, m, t):
    """``B_{j,m}(t)`` for a single basis function (``j`` zero-based)."""
    knots = np.asarray(knots, float)
    if m < 1 or j < 0 or j + m >= knots.size:
        raise ValueError(f"B_{{{j},{m}}} needs knots[{j}..{j + m}] (have {knots.size})")
    local = knots[j : j + m + 1]
    return float(basis_matrix(local, m, [t])[0, 0])


def spline_value(signal, t):
    """Evaluate a :class:`~sparsephase.model.SplineSignal` at ``t`` (scalar or array)."""
    scalar = np.ndim(t) == 0
    values = basis_matrix(signal.knots, signal.order, t) @ signal.coefficients
    return complex(values[0]) if scalar else values


@dataclass(frozen=True)
class CoefficientLadder:
    """``levels[k]`` holds ``c^(m-k)`` (length ``N + k``) for ``k = 0..m``."""

    order: int
    knots: np.ndarray
    levels: tuple

    @property
    def c0(self):
        return self.levels[-1]

    def level(self, p):
        """Coefficients of the order-``p`` spline (``p = 0``: Dirac weights)."""
        return self.levels[self.order - p]


def _difference(c):
    padded = np.concatenate([[0], c, [0]])
    return padded[1:] - padded[:-1]


def differentiate_ladder(order, knots, cm):
    """Coefficients of all derivatives down to the distributional m-th one.

    From order ``p`` to ``p - 1`` the coefficients are
    ``(p-1) (c_j - c_{j-1}) / (T_{j+p-1} - T_j)`` with zero padding at both
    ends; the last step to the Dirac weights is a plain difference.
    """
    knots = np.asarray(knots, float)
    c = np.asarray(cm, complex)
    m = int(order)
    if c.size + m != knots.size:
        raise ValueError("len(cm) + order must equal len(knots)")
    levels = [c]
    for p in range(m, 1, -1):
        n = c.size + 1
        c = (p - 1) * _difference(c) / (knots[p - 1 : p - 1 + n] - knots[:n])
        levels.append(c)
    levels.append(_difference(c))
    return CoefficientLadder(m, knots, tuple(levels))


def distributional_coefficients(order, knots, cm):
    return differentiate_ladder(order, knots, cm).c0


def difference_matrix(knots, p, n_upper):
    """Matrix mapping order-``p`` coefficients (length ``n_upper``) to order ``p-1``.

    For ``p == 1`` this is the plain first-difference matrix.
    """
    knots = np.asarray(knots, float)
    n = n_upper + 1
    c = np.zeros((n, n_upper))
    idx = np.arange(n_upper)
    c[idx, idx] = 1.0
    c[idx + 1, idx] = -1.0
    if p > 1:
        c *= ((p - 1) / (knots[p - 1 : p - 1 + n] - knots[:n]))[:, None]
    return c


def lifting_matrix(order, knots):
    """Product ``C^(0) C^(1) ... C^(m-1)`` taking ``c^(m)`` to ``c^(0)``."""
    knots = np.asarray(knots, float)
    n = knots.size - order
    prod = np.eye(n)
    for p in range(order, 0, -1):
        prod = difference_matrix(knots, p, prod.shape[0]) @ prod
    return prod


def lift_coefficients(order, knots, c0, rtol=LIFT_RTOL):
    """Order-``m`` coefficients whose distributional derivative best matches ``c0``.

    Solves the stacked over-determined system in the least-squares sense.

    Returns
    -------
    cm : complex array of length ``len(knots) - order``
    residual : float
        Absolute residual norm ``||C cm - c0||``.

    Raises
    ------
    InconsistentSystem
        If the residual exceeds ``rtol * ||c0||``.
    """
    knots = np.asarray(knots, float)
    c0 = np.asarray(c0, complex)
    if order < 1:
        raise ValueError("order must be >= 1")
    if c0.size != knots.size:
        raise ValueError("len(c0) must equal len(knots)")
    if knots.size <= order:
        raise InconsistentSystem(
            f"{knots.size} knots cannot carry an order-{order} spline (need at least {order + 1})"
        )
    cm, residual = least_squares(lifting_matrix(order, knots), c0)
    norm = np.linalg.norm(c0)
    if residual > rtol * norm:
        raise InconsistentSystem(
            f"relative lifting residual {residual / norm:.3g} exceeds {rtol:g}; "
            "coefficients are not the derivative of an order-%d spline" % order
        )
    return cm, residual
