"""Knots and coefficients from the recovered autocorrelation sum.

The positive frequencies of ``P`` are the knot differences ``T_j - T_k`` and
their coefficients are ``c_j conj(c_k)``. Knots are placed greedily from the
largest distance down; at each step the two ways to explain the current
distance (a knot near the left end or one near the right end) are told apart
by the coefficient of the complementary distance.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import (
    AmbiguousCase,
    NotTriangular,
    PoolInconsistent,
    PreconditionError,
    RetrievalError,
    SparsePhaseError,
    UnmatchedDistance,
)
from .model import (
    RecoveryConfig,
    RecoveryReport,
    SpikeSignal,
    SplineSignal,
    SymmetricExponentialSum,
    validate,
)
from .prony import ApmConfig, approximate_prony, infer_support_size, relative_residual
from .splines import lift_coefficients
from .synthesis import derivative_weight

TIE_RTOL = 1e-6
# recovered signals whose intensities miss the data by more than this are rejected
CONSISTENCY_RTOL = 1e-4
SEARCH_BUDGET = 20000


class DistancePool:
    """Positive frequencies still waiting to be explained by a pair of knots.

    With ``period`` set (``2 pi / h``) a true distance ``d`` in
    ``(period / 2, period)`` is looked up at its alias ``period - d`` and
    its coefficient is read conjugated.
    """

    def __init__(self, taus, gammas, eps, period=None):
        self.taus = np.asarray(taus, float)
        self.gammas = np.asarray(gammas, complex)
        self.eps = eps
        self.period = period
        self.alive = np.ones(self.taus.size, bool)

    def __len__(self):
        return int(self.alive.sum())

    def copy(self):
        other = DistancePool(self.taus, self.gammas, self.eps, self.period)
        other.alive = self.alive.copy()
        return other

    def _aliased(self, d):
        return self.period is not None and d > self.period / 2

    def find(self, d, exclude=None):
        """Index of the live entry closest to distance ``d`` within ``eps``, or None."""
        target = self.period - d if self._aliased(d) else d
        err = np.abs(self.taus - target)
        err[~self.alive] = np.inf
        if exclude is not None:
            err[exclude] = np.inf
        i = int(np.argmin(err)) if err.size else 0
        if err.size == 0 or err[i] > self.eps:
            return None
        return i

    def coefficient(self, i, d):
        g = self.gammas[i]
        return np.conj(g) if self._aliased(d) else g

    def remove(self, i):
        if not self.alive[i]:
            raise PoolInconsistent(f"distance {self.taus[i]:.17g} already consumed")
        self.alive[i] = False

    def candidates(self, bound):
        """``(distance, index)`` readings of live entries below ``bound``, largest first."""
        idx = np.nonzero(self.alive)[0]
        if self.period is None:
            if idx.size == 0:
                return []
            i = idx[np.argmax(self.taus[idx])]
            return [(self.taus[i], i)]
        out = [(self.taus[i], i) for i in idx if self.taus[i] < bound]
        out += [(self.period - self.taus[i], i) for i in idx if self.period - self.taus[i] < bound]
        out.sort(key=lambda x: -x[0])
        return out


def _two_knots(expsum):
    # |c1|^2 + |c2|^2 = gamma0 and |c1 c2| = |gamma1|; reflection fixed by |c1| <= |c2|
    g0 = expsum.gamma0
    g1 = expsum.gammas[0]
    disc = math.sqrt(max(g0 * g0 - 4 * abs(g1) ** 2, 0.0))
    c1 = math.sqrt(max((g0 - disc) / 2, 0.0))
    if c1 == 0:
        raise PoolInconsistent("degenerate two-knot sum (zero endpoint coefficient)")
    return np.array([0.0, expsum.taus[0]]), np.array([c1, g1 / c1])


class _Search:
    def __init__(self, K, eps, tie_rtol, budget):
        self.K = K
        self.eps = eps
        self.tie_rtol = tie_rtol
        self.budget = budget

    def tick(self):
        self.budget -= 1
        if self.budget < 0:
            raise RetrievalError("knot placement search budget exhausted")

    def start(self, pool, D, iD):
        """Fix ``T_1 = 0``, ``T_K = D`` and the second largest distance, then descend."""
        explore = pool.period is not None
        first_error = None
        for d2, i2 in pool.candidates(D - self.eps / 2) if explore else _direct_second(pool, iD):
            self.tick()
            if i2 == iD:
                continue
            j = pool.find(D - d2, exclude=iD)
            if j is None:
                if not explore:
                    raise UnmatchedDistance(
                        f"no distance complements {d2:.17g} to the length {D:.17g}"
                    )
                continue
            gD = pool.coefficient(iD, D)
            g2 = pool.coefficient(i2, d2)
            gl = pool.coefficient(j, D - d2)
            c1 = math.sqrt(abs(gD * np.conj(g2) / gl))
            if c1 == 0:
                continue
            trial = pool.copy()
            trial.remove(iD)
            trial.remove(i2)
            if j != i2:
                trial.remove(j)
            knots = [0.0, D, d2]
            coeffs = [complex(c1), gD / c1, g2 / c1]
            try:
                result = self.step(trial, knots, coeffs)
            except SparsePhaseError as exc:
                if not explore:
                    raise
                first_error = first_error or exc
                continue
            if result is not None:
                return result
        if not explore:
            raise UnmatchedDistance("no second largest distance available")
        return None

    def step(self, pool, knots, coeffs):
        explore = pool.period is not None
        if len(pool) == 0:
            if len(knots) == self.K:
                return knots, coeffs
            raise PoolInconsistent(f"distances exhausted after {len(knots)} of {self.K} knots")
        if len(knots) >= self.K:
            raise PoolInconsistent(f"{len(pool)} distances left unexplained after {self.K} knots")
        D = knots[1]
        c1 = coeffs[0].real
        cK = coeffs[1]
        for d, ik in pool.candidates(D - self.eps / 2):
            self.tick()
            try:
                placements = self._place(pool, knots, d, ik, D, c1, cK)
            except SparsePhaseError:
                if not explore:
                    raise
                continue
            for trial, t_new, c_new in placements:
                try:
                    result = self.step(trial, knots + [t_new], coeffs + [c_new])
                except SparsePhaseError:
                    if not explore:
                        raise
                    continue
                if result is not None:
                    return result
        if not explore:
            raise UnmatchedDistance("no distance left to place")
        return None

    def _place(self, pool, knots, d, ik, D, c1, cK):
        explore = pool.period is not None
        rest = D - d
        centre = abs(d - rest) <= self.eps
        j = pool.find(rest) if centre else pool.find(rest, exclude=ik)
        if j is None:
            if explore:
                return []
            raise UnmatchedDistance(
                f"no distance complements {d:.17g} to the length {D:.17g} within {self.eps:g}"
            )
        gk = pool.coefficient(ik, d)
        gl = pool.coefficient(j, rest)
        if centre:
            options = [(D / 2, gk / c1)]
        else:
            d_right = gk / c1
            d_left = gl / c1
            right = (0.5 * (d + D - rest), d_right)
            left = (0.5 * (rest + D - d), d_left)
            r_right = abs(cK * np.conj(d_right) - gl)
            r_left = abs(cK * np.conj(d_left) - gk)
            if abs(r_right - r_left) <= self.tie_rtol * (abs(gk) + abs(gl)):
                if not explore:
                    raise AmbiguousCase(
                        f"cannot tell which end distance {d:.17g} belongs to; "
                        "the endpoint coefficients have (nearly) equal modulus"
                    )
                # both sides explain the data so far; let the remaining distances decide
                options = [right, left]
            else:
                options = [right] if r_right < r_left else [left]
        out = []
        for t_new, c_new in options:
            trial = self._consume(pool, knots, ik, j, t_new, explore)
            if trial is not None:
                out.append((trial, t_new, c_new))
        return out

    @staticmethod
    def _consume(pool, knots, ik, j, t_new, explore):
        """Pool without the distances from ``t_new`` to every placed knot, or None."""
        trial = pool.copy()
        trial.remove(ik)
        if j != ik:
            trial.remove(j)
        for t in knots[2:]:
            dist = abs(t_new - t)
            i = trial.find(dist)
            if i is None:
                if explore:
                    return None
                raise PoolInconsistent(
                    f"distance {dist:.17g} between knots {t:.17g} and {t_new:.17g} not found"
                )
            trial.remove(i)
        return trial


def _complemented(pool, readings, D, iD):
    """Number of entries with a reading ``d`` whose complement ``D - d`` is also present.

    Every interior knot of a signal of length ``D`` contributes two such
    entries, so this bounds which lengths are worth a full search.
    """
    hit = set()
    for d, i in readings:
        if i == iD or d >= D or i in hit:
            continue
        j = pool.find(D - d, exclude=iD)
        if j is not None and (j != i or abs(2 * d - D) <= pool.eps):
            hit.add(i)
    return len(hit)


def _direct_second(pool, iD):
    idx = np.nonzero(pool.alive)[0]
    idx = idx[idx != iD]
    if idx.size == 0:
        return []
    i = idx[np.argmax(pool.taus[idx])]
    return [(pool.taus[i], i)]


def recover_support(expsum: SymmetricExponentialSum, eps, period=None, tie_rtol=TIE_RTOL):
    """Knots (first at 0) and Dirac coefficients explaining ``expsum``.

    Parameters
    ----------
    expsum : SymmetricExponentialSum
        Autocorrelation sum; its positive term count must be triangular.
    eps : float
        Absolute tolerance for matching distances.
    period : float, optional
        ``2 pi / h``. When given, distances beyond ``period / 2`` that were
        folded back by the sampling are searched for as well. Without it
        the greedy placement never branches.

    Returns
    -------
    knots : ndarray, ascending, ``knots[0] == 0``
    c0 : complex ndarray, first entry real and non-negative
    """
    K = infer_support_size(expsum.term_count)
    if K == 1:
        return np.array([0.0]), np.array([complex(math.sqrt(max(expsum.gamma0, 0.0)))])
    if K == 2:
        return _two_knots(expsum)
    search = _Search(K, eps, tie_rtol, SEARCH_BUDGET)
    pool = DistancePool(expsum.taus, expsum.gammas, eps, period)
    if period is None:
        iD = int(np.argmax(pool.taus))
        result = search.start(pool, pool.taus[iD], iD)
    else:
        result = None
        # samples on h*Z fix knots only modulo the period; prefer the shortest support
        readings = pool.candidates(np.inf)
        for D, iD in sorted(readings, key=lambda x: x[0]):
            if D < pool.taus.max():
                continue
            if _complemented(pool, readings, D, iD) < 2 * (K - 2) - 1:
                continue
            result = search.start(pool, D, iD)
            if result is not None:
                break
        if result is None:
            raise UnmatchedDistance("no consistent placement of the knots was found")
    knots, coeffs = result
    order = np.argsort(knots)
    return np.asarray(knots)[order], np.asarray(coeffs, complex)[order]


def _tag(stage, func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except SparsePhaseError as exc:
        if exc.stage is None:
            exc.stage = stage
        raise


def _support_residual(knots, c0, weighted):
    fitted = np.abs(np.exp(-1j * np.outer(weighted.omegas, knots)) @ c0) ** 2
    return float(np.linalg.norm(fitted - weighted.values) / np.linalg.norm(weighted.values))


def _trim_to_triangular(expsum, warnings):
    n = expsum.term_count
    k = (1 + math.isqrt(1 + 8 * n)) // 2
    target = k * (k - 1) // 2
    keep = np.sort(np.argsort(-np.abs(expsum.gammas))[:target])
    warnings.append(
        f"{n} positive frequencies is not triangular; dropped the {n - target} "
        f"weakest terms to keep {target}"
    )
    return SymmetricExponentialSum(expsum.gamma0, expsum.taus[keep], expsum.gammas[keep])


def recover_signal(samples, config: RecoveryConfig) -> RecoveryReport:
    """Full recovery from magnitude samples ``|F[f](h k)|``."""
    m = config.order
    L = config.upper_bound
    half = (len(samples) - 1) // 2
    if L * (L - 1) >= half:
        raise PreconditionError(
            f"bound L = {L} needs L(L-1) < {half} (half the sample count); "
            f"got {len(samples)} samples"
        )
    weighted = _tag("weighting", derivative_weight, samples, m)
    apm = ApmConfig(config.exponential_bound, config.eps1, config.eps2, config.eps3)
    expsum = _tag("prony", approximate_prony, weighted, apm)
    warnings = []
    residuals = {"apm": relative_residual(expsum, weighted)}
    try:
        infer_support_size(expsum.term_count)
    except NotTriangular:
        expsum = _trim_to_triangular(expsum, warnings)
        if expsum.term_count == 0:
            raise
    K = _tag("support", infer_support_size, expsum.term_count)
    if K > L:
        warnings.append(f"recovered {K} knots, more than the bound L = {L}")

    best, best_res, error = None, np.inf, None
    try:
        best = recover_support(expsum, config.eps)
        best_res = _support_residual(*best, weighted)
    except RetrievalError as exc:
        error = exc
    if best_res > CONSISTENCY_RTOL and K >= 3:
        try:
            alt = recover_support(expsum, config.eps, period=2 * np.pi / samples.step)
            alt_res = _support_residual(*alt, weighted)
            if alt_res < best_res:
                best, best_res = alt, alt_res
                if alt[0][-1] > np.pi / samples.step:
                    warnings.append(
                        "the signal length exceeds pi/h; knot differences were unfolded "
                        "from their sampling aliases"
                    )
                else:
                    warnings.append(
                        f"greedy knot placement failed ({error}); "
                        "recovered by searching over consistent placements"
                    )
        except RetrievalError as exc:
            error = error or exc
    if best is None:
        error.stage = error.stage or "support"
        raise error
    knots, c0 = best
    residuals["support"] = best_res
    residuals["gamma0_gap"] = abs(expsum.gamma0 - float(np.sum(np.abs(c0) ** 2)))
    if best_res > CONSISTENCY_RTOL:
        warnings.append(f"recovered signal misses the intensity data (relative residual {best_res:.3g})")

    if m >= 1:
        cm, lift_res = _tag("lifting", lift_coefficients, m, knots, c0)
        residuals["lifting"] = lift_res
        signal = SplineSignal(m, knots, cm)
    else:
        cm = np.zeros(0, complex)
        residuals["lifting"] = 0.0
        signal = SpikeSignal(knots, c0)
    warnings.extend(validate(signal))
    return RecoveryReport(knots, c0, cm, m, residuals, warnings, expsum)


def _reflect(signal):
    if isinstance(signal, SpikeSignal):
        return SpikeSignal(-signal.knots[::-1], np.conj(signal.coefficients[::-1]))
    return SplineSignal(signal.order, -signal.knots[::-1], np.conj(signal.coefficients[::-1]))


def _rebuild(signal, knots, coeffs):
    if isinstance(signal, SpikeSignal):
        return SpikeSignal(knots, coeffs)
    return SplineSignal(signal.order, knots, coeffs)


def canonicalize(signal):
    """Representative of the orbit under rotation, shift and conjugate reflection.

    First knot at 0, ``|c0_first| <= |c0_last|`` for the Dirac weights, and
    first coefficient real and non-negative.
    """
    c0 = signal.endpoint_coefficients()
    if abs(c0[0]) > abs(c0[-1]):
        signal = _reflect(signal)
    knots = signal.knots - signal.knots[0]
    coeffs = np.array(signal.coefficients)
    nz = np.nonzero(coeffs)[0]
    first = coeffs[nz[0]] if nz.size else 1.0
    if not (first.imag == 0 and first.real >= 0):
        coeffs = coeffs * (np.conj(first) / abs(first))
        coeffs[nz[0]] = abs(first)
    return _rebuild(signal, knots, coeffs)


def equivalent_mod_trivial(a, b, tol):
    """Compare two signals up to trivial ambiguities.

    Returns
    -------
    equivalent : bool
    knot_deviation, coefficient_deviation : float
        Maximum absolute deviations between the canonical forms (``inf`` on
        a size mismatch).
    """
    if type(a) is not type(b) or getattr(a, "order", 0) != getattr(b, "order", 0):
        raise PreconditionError("signals must have the same model type and order")
    ca, cb = canonicalize(a), canonicalize(b)
    if ca.knots.size != cb.knots.size or ca.coefficients.size != cb.coefficients.size:
        return False, math.inf, math.inf
    dk = float(np.max(np.abs(ca.knots - cb.knots)))
    dc = float(np.max(np.abs(ca.coefficients - cb.coefficients)))
    return bool(dk <= tol and dc <= tol), dk, dc
