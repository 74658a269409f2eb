"""
Generalized hypergeometric series p+1Fp at (mostly) unit argument.

Classification, plain partial summation, tail extrapolation for the slowly
converging unit-argument case, and exact rational summation of terminating
series.
"""

import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .config import DEFAULT_SETTINGS, Settings
from .errors import NoConvergence, SpecError
from .schemas import EvalResult, RationalSeriesSpec, SeriesClassification, SeriesSpec

logger = logging.getLogger(__name__)

MACHINE_EPS = float(np.finfo(float).eps)
LEVIN_MAX_ORDER = 30
LEVIN_BETA = 1.0
RICHARDSON_MIN_START = 8


def _snap(value: complex, tolerance: float) -> Optional[int]:
    """-n when value is within tolerance of a nonpositive integer n, else None"""
    nearest = round(value.real)
    if nearest <= 0 and abs(value - nearest) <= tolerance:
        return int(nearest)
    return None


def _effective_numerators(spec: SeriesSpec, settings: Settings) -> List[complex]:
    out = []
    for a in spec.numerator_params:
        snapped = _snap(a, settings.snap_tolerance)
        out.append(complex(snapped) if snapped is not None else a)
    return out


def terminating_length(spec: SeriesSpec, settings: Settings = DEFAULT_SETTINGS) -> Optional[int]:
    """Number of nonzero terms of a terminating series (N+1 for a numerator -N)"""
    snapped = [_snap(a, settings.snap_tolerance) for a in spec.numerator_params]
    snapped = [s for s in snapped if s is not None]
    return -max(snapped) + 1 if snapped else None


def _close(x: complex, y: complex, tol: float) -> bool:
    return abs(x - y) <= tol


def _pairs_up(numerators: Sequence[complex], denominators: Sequence[complex], total: complex, tol: float) -> bool:
    """Can every numerator be matched with a distinct denominator summing to ``total``?"""
    unused = list(denominators)
    for a in numerators:
        for i, b in enumerate(unused):
            if _close(a + b, total, tol):
                del unused[i]
                break
        else:
            return False
    return not unused


def _poisedness(spec: SeriesSpec, tol: float):
    numer = list(spec.numerator_params)
    denom = list(spec.denominator_params)
    well = False
    very_well = False
    for i, a1 in enumerate(numer):
        rest = numer[:i] + numer[i + 1:]
        if not _pairs_up(rest, denom, 1 + a1, tol):
            continue
        well = True
        if any(_close(a2, 1 + a1 / 2, tol) for a2 in rest):
            very_well = True
            break
    return well, very_well


def classify(spec: SeriesSpec, settings: Settings = DEFAULT_SETTINGS) -> SeriesClassification:
    excess = sum(spec.denominator_params, 0j) - sum(spec.numerator_params, 0j)
    well, very_well = _poisedness(spec, settings.saalschutz_tolerance)
    return SeriesClassification(
        terminating=terminating_length(spec, settings) is not None,
        saalschutzian=_close(excess, 1, settings.saalschutz_tolerance),
        well_poised=well,
        very_well_poised=very_well,
        converges_at_unit=excess.real > 0,
        excess=excess,
    )


def term_ratios(spec: SeriesSpec, n: int, settings: Settings = DEFAULT_SETTINGS) -> np.ndarray:
    """t_{k+1} / t_k for k = 0 .. n-1"""
    k = np.arange(n, dtype=np.float64)
    numer = np.full(n, complex(spec.argument), dtype=np.complex128)
    for a in _effective_numerators(spec, settings):
        numer = numer * (a + k)
    denom = k + 1.0
    for b in spec.denominator_params:
        denom = denom * (b + k)
    return numer / denom


def _terms(spec: SeriesSpec, n: int, settings: Settings) -> np.ndarray:
    """The first n terms t_0 = 1, t_1, ..., t_{n-1}"""
    if n <= 1:
        return np.ones(max(n, 0), dtype=np.complex128)
    ratios = term_ratios(spec, n - 1, settings)
    return np.concatenate(([1.0 + 0j], np.cumprod(ratios)))


def sum_direct(
    spec: SeriesSpec,
    max_terms: int,
    target_abs: float,
    settings: Settings = DEFAULT_SETTINGS,
) -> EvalResult:
    """Plain partial summation.

    Stops after three consecutive terms below ``target_abs * max(1, |partial|)``
    with term ratio of modulus below one, or as soon as the series terminates.
    """
    info = classify(spec, settings)
    z = complex(spec.argument)
    if not (info.terminating or abs(z) < 1 or (abs(z) == 1 and info.converges_at_unit)):
        raise SpecError(f"series does not converge (|z| = {abs(z)}, excess = {info.excess})")

    numer = _effective_numerators(spec, settings)
    denom = list(spec.denominator_params)
    term = 1 + 0j
    total = 1 + 0j
    magnitude = 1.0
    small_run = 0
    count = 1
    ratio = 0j
    while count < max_terms:
        k = count - 1
        num = z
        for a in numer:
            num *= a + k
        if num == 0:
            return EvalResult(
                value=total,
                abs_error_estimate=4 * MACHINE_EPS * magnitude * count,
                method="terminating-exact",
                work=count,
            )
        den = complex(k + 1)
        for b in denom:
            den *= b + k
        ratio = num / den
        term *= ratio
        total += term
        magnitude = max(magnitude, abs(total), abs(term))
        count += 1
        if abs(term) < target_abs * max(1.0, abs(total)) and abs(ratio) < 1:
            small_run += 1
            if small_run >= 3:
                break
        else:
            small_run = 0
    else:
        if abs(term) >= target_abs * max(1.0, abs(total)):
            raise NoConvergence(f"{max_terms} terms summed, last term still {abs(term):.3e}")

    if abs(z) < 1:
        r = abs(ratio)
        tail = abs(term) * r / (1 - r) if r < 1 else abs(term)
    else:
        tail = abs(term) * count / max(info.excess.real, MACHINE_EPS)
    return EvalResult(
        value=total,
        abs_error_estimate=tail + 4 * MACHINE_EPS * magnitude * count,
        method="direct",
        work=count,
    )


def richardson_tableau(partials: Sequence[complex], exponents: Sequence[complex], ratio: float = 2.0) -> List[np.ndarray]:
    """Generalised Richardson elimination on partial sums taken at N, rN, r^2 N, ...

    Row m removes the tail components N^{-p} for the first m exponents.
    """
    rows = [np.asarray(partials, dtype=np.complex128)]
    for p in exponents:
        prev = rows[-1]
        if len(prev) < 2:
            break
        factor = ratio ** complex(p)
        rows.append((factor * prev[1:] - prev[:-1]) / (factor - 1))
    return rows


def _richardson(partials: np.ndarray, excess: complex, budget: int, settings: Settings):
    levels = settings.series_checkpoints
    while levels >= 3 and budget // 2 ** (levels - 1) < RICHARDSON_MIN_START:
        levels -= 1
    if levels < 3:
        return None
    start = budget // 2 ** (levels - 1)
    checkpoints = [start * 2**j for j in range(levels)]
    sums = [partials[n - 1] for n in checkpoints]
    rows = richardson_tableau(sums, [excess + j for j in range(levels - 1)])
    value = complex(rows[-1][0])
    spread = abs(value - complex(rows[-2][-1]))
    logger.debug("richardson checkpoints=%s spread=%.3e", checkpoints, spread)
    return value, spread, checkpoints[-1]


def _levin_u(partials: np.ndarray, terms: np.ndarray):
    """Levin u-transform from the origin, keeping the order with the smallest spread"""
    top = min(LEVIN_MAX_ORDER, len(terms) - 1)
    if top < 3 or np.any(terms[: top + 1] == 0):
        return None
    j_all = np.arange(top + 1, dtype=np.float64)
    omega = (LEVIN_BETA + j_all) * terms[: top + 1]
    estimates = []
    for k in range(1, top + 1):
        j = j_all[: k + 1]
        binom = np.array([math.comb(k, int(i)) for i in j], dtype=np.float64)
        weights = (-1.0) ** j * binom * ((LEVIN_BETA + j) / (LEVIN_BETA + k)) ** (k - 1) / omega[: k + 1]
        norm = np.sum(weights)
        if norm == 0 or not np.isfinite(norm):
            estimates.append(complex(math.nan))
            continue
        estimates.append(complex(np.sum(weights * partials[: k + 1]) / norm))
    best = None
    for k in range(2, len(estimates)):
        # spread over the last two differences
        spread = max(abs(estimates[k] - estimates[k - 1]), abs(estimates[k - 1] - estimates[k - 2]))
        if not math.isfinite(spread):
            continue
        if best is None or spread < best[1]:
            best = (estimates[k], spread, k + 2)
    if best is not None:
        logger.debug("levin order=%d spread=%.3e", best[2] - 2, best[1])
    return best


def _extrapolate_once(spec: SeriesSpec, excess: complex, budget: int, settings: Settings) -> EvalResult:
    terms = _terms(spec, budget, settings)
    partials = np.cumsum(terms)
    floor = 4 * MACHINE_EPS * float(np.max(np.abs(partials)))
    candidates = [c for c in (_richardson(partials, excess, budget, settings), _levin_u(partials, terms)) if c]
    if not candidates:
        raise NoConvergence(f"budget {budget} too small to extrapolate")
    value, spread, work = min(candidates, key=lambda c: c[1])
    return EvalResult(value=value, abs_error_estimate=spread + floor, method="extrapolated", work=work)


def sum_extrapolated(
    spec: SeriesSpec,
    budget: Optional[int] = None,
    settings: Settings = DEFAULT_SETTINGS,
    target_abs: Optional[float] = None,
) -> EvalResult:
    """Sum a convergent series by extrapolating its partial sums.

    Terminating series and |z| < 1 fall through to sum_direct. With
    ``target_abs`` the budget is doubled (up to ``series_max_terms``) until
    the spread drops below it.
    """
    budget = budget or settings.series_budget
    info = classify(spec, settings)
    if info.terminating:
        return sum_direct(spec, terminating_length(spec, settings) + 1, 0.0, settings)
    if abs(complex(spec.argument)) < 1:
        return sum_direct(spec, settings.series_max_terms, MACHINE_EPS, settings)
    if abs(complex(spec.argument)) > 1 or not info.converges_at_unit:
        raise SpecError(f"series diverges at unit argument (excess = {info.excess})")

    result = _extrapolate_once(spec, info.excess, budget, settings)
    if target_abs is None:
        return result
    while result.abs_error_estimate > target_abs:
        budget *= 2
        if budget > settings.series_max_terms:
            raise NoConvergence(f"extrapolation spread {result.abs_error_estimate:.3e} above target {target_abs:.3e}")
        refined = _extrapolate_once(spec, info.excess, budget, settings)
        if refined.abs_error_estimate >= result.abs_error_estimate:
            raise NoConvergence(f"extrapolation spread stagnates at {refined.abs_error_estimate:.3e}")
        result = refined
    return result


def sum_terminating_rational(spec: RationalSeriesSpec, n: Optional[int] = None) -> Fraction:
    """Exact value of a terminating unit-argument series with a numerator -n

    ``n`` defaults to the first place the series terminates.
    """
    if n is None:
        n = spec.terminating_index()
        if n is None:
            raise SpecError("no numerator parameter is a nonpositive integer")
    if n < 0 or Fraction(-n) not in spec.numerator_params:
        raise SpecError(f"-{n} is not a numerator parameter")
    total = Fraction(1)
    term = Fraction(1)
    for k in range(n):
        den = Fraction(k + 1)
        for b in spec.denominator_params:
            den *= b + k
        if den == 0:
            raise SpecError(f"denominator Pochhammer factor vanishes at k = {k}")
        num = Fraction(1)
        for a in spec.numerator_params:
            num *= a + k
        term = term * num / den
        total += term
    return total


def hypergeometric(
    numer: Sequence[complex],
    denom: Sequence[complex],
    settings: Settings = DEFAULT_SETTINGS,
) -> EvalResult:
    """p+1Fp(numer; denom; 1)"""
    spec = SeriesSpec(numerator_params=list(numer), denominator_params=list(denom), argument=1)
    length = terminating_length(spec, settings)
    if length is not None:
        return sum_direct(spec, length + 1, 0.0, settings)
    return sum_extrapolated(spec, settings.series_budget, settings)
