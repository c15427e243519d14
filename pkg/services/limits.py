"""
Convergence experiments: the generalized large-deviation limit, the
q-Gaussian local limit, density collapse and decay-slope estimation.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np
from scipy import stats

from config import DENSITY_WINDOW, MIN_FIT_POINTS, MIN_WINDOW_POINTS, RESIDUAL_WINDOW, SWEEP_WORKERS
from exceptions import (
    ConstraintError,
    DegenerateError,
    DomainError,
    FitFailure,
    NumericFailure,
    QDeformError,
    WindowError,
)
from schemas.combinatorics import QFactorialTable
from schemas.deformation import DeformationParameter
from schemas.distribution import NormalizationMode, QBinomialPmf, QBinomialSpec
from schemas.divergence import ProbVector
from schemas.limits import (
    CltResidualReport,
    CltSweep,
    CollapseReport,
    CollapseSeries,
    DecayPoint,
    LdpEntry,
    LdpSeries,
    QGaussianFit,
    ScaledDensity,
)
from services.divergence import q_divergence, rate_function
from services.qalgebra import power, q_exp, q_ln
from services.qbinomial import build_pmf, qlog_cumulative_below
from services.qcombinatorics import build_factorial_table

logger = logging.getLogger(__name__)

T = TypeVar("T")


def _check_n_list(n_list: Sequence[int]) -> List[int]:
    ns = [int(n) for n in n_list]
    if not ns:
        raise ConstraintError("n_list is empty")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ConstraintError("n_list must be strictly increasing", {"n_list": ns})
    return ns


def _sweep(task: Callable[[int], T], ns: Sequence[int], max_workers: Optional[int]) -> List[T]:
    """Run task for every n, in parallel when allowed, returning results in n order."""

    def annotated(n: int) -> T:
        try:
            return task(n)
        except QDeformError as exc:
            exc.payload.setdefault("n", n)
            raise

    workers = max_workers or SWEEP_WORKERS
    if workers <= 1 or len(ns) == 1:
        return [annotated(n) for n in ns]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(annotated, ns))


def ldp_scaled_statistic(spec: QBinomialSpec, table: QFactorialTable, x: float) -> float:
    """
    Scaled q-log lower tail (1 / n^(2-q)) ln_q P(k <= n x).

    Equals q_ln(cumulative_below) / n^(2-q) whenever the tail mass is a
    positive normal float. Underflowed tails and tails past the compact
    support of q < 1 go through `qlog_cumulative_below`, which stays finite.

    Raises:
        NumericFailure: If the tail statistic is not finite
    """
    if not 0.0 < x < 1.0:
        raise DomainError("x must lie in (0, 1)", {"x": x})
    pmf = build_pmf(spec, table)
    value, largest = qlog_cumulative_below(pmf, x)
    if not math.isfinite(value):
        raise NumericFailure("q-log tail mass is not finite", {"largest_k": largest, "n": spec.n})
    return value / power(float(spec.n), 2.0 - spec.param.q)


def ldp_convergence_series(
    param: DeformationParameter,
    r: float,
    x: float,
    n_list: Sequence[int],
    mode: NormalizationMode = NormalizationMode.EXACT_CQ,
    max_workers: Optional[int] = None,
) -> LdpSeries:
    """
    Scaled q-log tail over n_list, with target -rate_function(param, x, r).

    The limit is stated for the ExactCq distribution. Under MaxShift the
    q-log of the normalized tail carries the factor W^(q-1) of the linear
    normalization, which does not vanish for q != 1.

    For q > 1 the limit is not covered by the large-deviation bound; the
    series is still produced, flagged with ldp_regime = False.

    Args:
        param: Deformation parameter
        r: Success parameter
        x: Tail threshold
        n_list: Strictly increasing trial counts
        mode: Normalization mode
        max_workers: Threads for the sweep (defaults to SWEEP_WORKERS)

    Returns:
        LdpSeries ordered by n
    """
    ns = _check_n_list(n_list)
    table = build_factorial_table(param, ns[-1])
    target = -rate_function(param, x, r)
    ldp_regime = param.q < 1.0 or param.is_classical
    if not ldp_regime:
        logger.warning("q=%r is outside 0 < q < 1; LDP series is a breakdown diagnostic", param.q)

    def task(n: int) -> LdpEntry:
        spec = QBinomialSpec(param=param, n=n, r=r, mode=mode)
        return LdpEntry(n=n, scaled_stat=ldp_scaled_statistic(spec, table, x))

    entries = _sweep(task, ns, max_workers)
    return LdpSeries(param=param, r=r, x=x, entries=entries, target=target, ldp_regime=ldp_regime)


def clt_residuals(spec: QBinomialSpec, table: QFactorialTable, window: float = RESIDUAL_WINDOW) -> CltResidualReport:
    """
    q-log residuals of the local limit theorem.

    residual_k = q_ln p_k - q_ln P_n^* + x_k^2 / 2 for |x_k| <= window,
    computed from `qlog_probs` (mode independent).

    Raises:
        WindowError: If fewer than MIN_WINDOW_POINTS grid points fall in the window
    """
    if not window > 0.0:
        raise DomainError("window must be positive", {"window": window})
    pmf = build_pmf(spec, table)
    inside = np.abs(pmf.grid) <= window
    if int(np.count_nonzero(inside)) < MIN_WINDOW_POINTS:
        raise WindowError(
            f"fewer than {MIN_WINDOW_POINTS} grid points with |x| <= {window}",
            {"n": spec.n, "points": int(np.count_nonzero(inside))},
        )
    ell = pmf.qlog_probs
    k = np.flatnonzero(inside)
    x = pmf.grid[k]
    residual = ell[k] - ell[spec.floor_index] + 0.5 * x * x
    return CltResidualReport(
        param=spec.param,
        r=spec.r,
        n=spec.n,
        window=window,
        k=k,
        x=x,
        residual=residual,
        max_abs_residual=float(np.max(np.abs(residual))),
    )


def residual_decay_slope(points: Sequence[Union[DecayPoint, Tuple[int, float]]]) -> float:
    """
    Least-squares slope of log(residual) against log(n).

    Args:
        points: DecayPoint records or (n, max_abs_residual) pairs

    Raises:
        ConstraintError: With fewer than three points or a negative residual
        DegenerateError: If a residual is exactly zero
    """
    pairs = [(p.n, p.max_abs_residual) if isinstance(p, DecayPoint) else (int(p[0]), float(p[1])) for p in points]
    if len(pairs) < 3:
        raise ConstraintError("decay slope needs at least three points", {"points": len(pairs)})
    ns = np.array([n for n, _ in pairs], dtype=float)
    residuals = np.array([res for _, res in pairs], dtype=float)
    if np.any(residuals == 0.0):
        raise DegenerateError("zero residual in decay sweep", {"n": [int(n) for n in ns[residuals == 0.0]]})
    if np.any(residuals < 0.0):
        raise ConstraintError("residuals must be positive")
    return float(stats.linregress(np.log(ns), np.log(residuals)).slope)


def clt_decay_sweep(
    param: DeformationParameter,
    r: float,
    n_list: Sequence[int],
    window: float = RESIDUAL_WINDOW,
    max_workers: Optional[int] = None,
) -> CltSweep:
    """Largest CLT residual for every n in n_list and, with three or more n, its decay slope."""
    ns = _check_n_list(n_list)
    table = build_factorial_table(param, ns[-1])

    def task(n: int) -> DecayPoint:
        report = clt_residuals(QBinomialSpec(param=param, n=n, r=r), table, window)
        return DecayPoint(n=n, max_abs_residual=report.max_abs_residual)

    points = _sweep(task, ns, max_workers)
    slope = residual_decay_slope(points) if len(points) >= 3 else None
    return CltSweep(param=param, r=r, window=window, points=points, slope=slope)


def qlog_divergence_gap(pmf: QBinomialPmf, k: int) -> float:
    """
    Distance between the scaled q-log pmf and the q-divergence at k.

    Returns -(2-q) / n^(2-q) * (l_k - l_floor(nr)) - D_(2-q)((k/n, 1-k/n) || (r, 1-r)),
    which is O(ln_q n / n^(2-q)).
    """
    n = pmf.n
    if not 0 <= k <= n:
        raise DomainError(f"k={k} outside 0..{n}", {"k": k, "n": n})
    param = pmf.param
    a = 2.0 - param.q
    ell = pmf.qlog_probs
    scaled = -a / power(float(n), a) * float(ell[k] - ell[pmf.spec.floor_index])
    divergence = q_divergence(param.dual(), ProbVector.of(k / n, (n - k) / n), ProbVector.binary(pmf.spec.r))
    return scaled - divergence


def scaled_density(pmf: QBinomialPmf) -> ScaledDensity:
    """Step density (grid[k], sigma_q * probs[k]); sums to one with spacing 1 / sigma_q."""
    return ScaledDensity(x=pmf.grid, g=pmf.sigma_q * pmf.probs, spacing=1.0 / pmf.sigma_q)


def fit_q_gaussian(density: ScaledDensity, param: DeformationParameter, window: float = DENSITY_WINDOW) -> QGaussianFit:
    """
    Fit amplitude * exp_q(-beta x^2) to a density on |x| <= window.

    The amplitude is the density value nearest x = 0; beta is the
    least-squares slope through the origin of q_ln(g / amplitude) against -x^2
    over the positive points in the window.

    Raises:
        WindowError: With fewer than MIN_FIT_POINTS positive points in the window
        FitFailure: If the regression is degenerate or beta is not positive
    """
    x, g = density.x, density.g
    inside = np.abs(x) <= window
    usable = inside & (g > 0.0)
    if int(np.count_nonzero(usable)) < MIN_FIT_POINTS:
        raise WindowError(
            f"fewer than {MIN_FIT_POINTS} positive points with |x| <= {window}",
            {"points": int(np.count_nonzero(usable))},
        )
    amplitude = float(g[int(np.argmin(np.abs(x)))])
    if not amplitude > 0.0:
        raise FitFailure("density vanishes at the center", {"amplitude": amplitude})
    design = -x[usable] ** 2
    target = np.asarray(q_ln(param, g[usable] / amplitude))
    norm = float(np.dot(design, design))
    if norm == 0.0:
        raise FitFailure("all fit points sit at x = 0")
    beta = float(np.dot(design, target)) / norm
    if not math.isfinite(beta) or beta <= 0.0:
        raise FitFailure("fitted beta is not positive", {"beta": beta})
    model = amplitude * np.asarray(q_exp(param, -beta * x[inside] ** 2))
    sup_error = float(np.max(np.abs(model - g[inside])))
    return QGaussianFit(
        param=param,
        beta=beta,
        amplitude=amplitude,
        sup_error=sup_error,
        window=window,
        points=int(np.count_nonzero(usable)),
    )


def density_sup_distance(coarse: ScaledDensity, fine: ScaledDensity, window: float = DENSITY_WINDOW) -> float:
    """
    Largest |g_coarse - g_fine| on the coarse grid within |x| <= window.

    The finer density is linearly interpolated and held constant past its ends.
    """
    inside = np.abs(coarse.x) <= window
    interpolated = np.interp(coarse.x[inside], fine.x, fine.g)
    return float(np.max(np.abs(coarse.g[inside] - interpolated)))


def collapse_sup_distance(densities: Sequence[ScaledDensity], window: float = DENSITY_WINDOW) -> float:
    """
    Largest sup-distance between consecutive densities, relative to the peak of the coarser one.

    Both densities are first restricted to |x| <= window, so densities rebuilt
    from window-trimmed artifact rows give the same value.
    """
    trimmed = [density.within(window) for density in densities]
    distance = 0.0
    for coarse, fine in zip(trimmed, trimmed[1:]):
        peak = float(np.max(coarse.g))
        distance = max(distance, density_sup_distance(coarse, fine, window) / peak)
    return distance


def collapse_experiment(
    param: DeformationParameter,
    r: float,
    n_list: Sequence[int],
    window: float = DENSITY_WINDOW,
    mode: NormalizationMode = NormalizationMode.MAX_SHIFT,
    max_workers: Optional[int] = None,
) -> CollapseReport:
    """
    Scaled densities and q-Gaussian fits over n_list.

    sup_distance comes from `collapse_sup_distance` on the window; beta_spread is
    (max beta - min beta) / min beta.
    """
    ns = _check_n_list(n_list)
    table = build_factorial_table(param, ns[-1])

    def task(n: int) -> CollapseSeries:
        pmf = build_pmf(QBinomialSpec(param=param, n=n, r=r, mode=mode), table)
        density = scaled_density(pmf)
        return CollapseSeries(n=n, density=density, fit=fit_q_gaussian(density, param, window))

    series = _sweep(task, ns, max_workers)
    sup_distance = collapse_sup_distance([item.density for item in series], window)
    betas = [item.fit.beta for item in series]
    return CollapseReport(
        param=param,
        r=r,
        window=window,
        series=series,
        sup_distance=sup_distance,
        beta_spread=(max(betas) - min(betas)) / min(betas),
    )
