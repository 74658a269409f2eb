"""
Mellin-Barnes integrals along a straight vertical contour.

The integrand is a product of Gamma(a_i + t)^(+-1) and Gamma(b_j - t)^(+-1)
factors. ``integrate`` returns (1/2 pi i) times the contour integral; along
t = c + iy this is (1/2 pi) times the integral over y.
"""

import logging
import math
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from .config import DEFAULT_SETTINGS, Settings
from .errors import ContourError, DomainError, QuadratureStall
from .gamma_core import _log_gamma_array, gamma_product, log_reciprocal_gamma_masked
from .schemas import BarnesIntegrand, EvalResult, IdentityReport

logger = logging.getLogger(__name__)

MAX_TRUNCATION_HEIGHT = 1000.0


@lru_cache(maxsize=8)
def _gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def contour_gap(ig: BarnesIntegrand) -> Tuple[Optional[float], Optional[float]]:
    """(max -Re a_i, min Re b_j) over the Gamma(+1) factors; None where a family is empty"""
    left = [-a.real for a, sign in ig.plus_offsets if sign == 1]
    right = [b.real for b, sign in ig.minus_offsets if sign == 1]
    lower = max(left) if left else None
    upper = min(right) if right else None
    if lower is not None and upper is not None and lower >= upper:
        raise ContourError(f"no vertical line separates the poles: need {lower} < c < {upper}")
    return lower, upper


def choose_contour(ig: BarnesIntegrand) -> float:
    """Midpoint of the gap between the two pole families of the Gamma(+1) factors"""
    lower, upper = contour_gap(ig)
    if lower is None and upper is None:
        return 0.0
    if lower is None:
        return upper - 1.0
    if upper is None:
        return lower + 1.0
    return 0.5 * (lower + upper)


def decay_rate(ig: BarnesIntegrand) -> float:
    """Exponential decay rate of |integrand| in |Im t|: (n_up - n_down) pi / 2"""
    rate = (ig.n_up - ig.n_down) * math.pi / 2
    if rate <= 0:
        raise ContourError(f"integrand does not decay (n_up={ig.n_up}, n_down={ig.n_down})")
    return rate


def integrand_values(ig: BarnesIntegrand, t: np.ndarray) -> np.ndarray:
    """The integrand at the points t (no poles may lie among them)"""
    t = np.asarray(t, dtype=np.complex128)
    log_total = np.zeros_like(t)
    vanish = np.zeros(t.shape, dtype=bool)
    factors: List[Tuple[np.ndarray, int]] = [(a + t, sign) for a, sign in ig.plus_offsets]
    factors += [(b - t, sign) for b, sign in ig.minus_offsets]
    for arg, sign in factors:
        if sign == 1:
            log_total += _log_gamma_array(arg)
        else:
            values, zeros = log_reciprocal_gamma_masked(arg)
            log_total += values.reshape(t.shape)
            vanish |= zeros.reshape(t.shape)
    out = np.exp(log_total)
    out[vanish] = 0
    return out


def truncation_height(ig: BarnesIntegrand, c: float, target_abs: float, settings: Settings = DEFAULT_SETTINGS) -> float:
    """Smallest Y >= the minimum height, in unit steps, where the tail bound drops below target/10"""
    rate = decay_rate(ig)
    height = settings.min_truncation_height
    while height <= MAX_TRUNCATION_HEIGHT:
        edge = integrand_values(ig, np.array([c + 1j * height, c - 1j * height]))
        if np.max(np.abs(edge)) / rate < target_abs / 10:
            return height
        height += 1.0
    raise QuadratureStall(f"integrand still above {target_abs / 10:.1e} at |Im t| = {MAX_TRUNCATION_HEIGHT}")


def _panel(ig: BarnesIntegrand, c: float, lo: float, hi: float, order: int) -> complex:
    nodes, weights = _gauss_legendre(order)
    half = 0.5 * (hi - lo)
    y = lo + half * (nodes + 1.0)
    return complex(half * np.sum(weights * integrand_values(ig, c + 1j * y)))


def integrate(
    ig: BarnesIntegrand,
    c: float,
    target_abs: float = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> EvalResult:
    """(1/2 pi i) times the integral of the integrand along Re t = c.

    Adaptive Gauss-Legendre on [-Y, Y]: a panel is accepted once its value
    agrees with the sum over its two halves; panels are reduced in position
    order so results are bit-stable.
    """
    target_abs = target_abs or settings.quadrature_target
    lower, upper = contour_gap(ig)
    if (lower is not None and c <= lower) or (upper is not None and c >= upper):
        raise ContourError(f"abscissa c = {c} is outside the pole gap ({lower}, {upper})")
    height = truncation_height(ig, c, target_abs, settings)
    order = settings.quadrature_order
    # tolerance on the y-integral, which carries the extra 2 pi
    budget_tol = 2 * math.pi * target_abs
    span = 2 * height

    edges = np.linspace(-height, height, settings.quadrature_initial_panels + 1)
    pending = [(lo, hi, _panel(ig, c, lo, hi, order)) for lo, hi in zip(edges[:-1], edges[1:])]
    nodes_used = order * len(pending)
    accepted: List[Tuple[float, complex, float]] = []
    while pending:
        lo, hi, whole = pending.pop()
        mid = 0.5 * (lo + hi)
        left = _panel(ig, c, lo, mid, order)
        right = _panel(ig, c, mid, hi, order)
        nodes_used += 2 * order
        if nodes_used > settings.quadrature_node_budget:
            raise QuadratureStall(f"node budget {settings.quadrature_node_budget} exhausted")
        diff = abs(left + right - whole)
        if diff <= budget_tol * (hi - lo) / span:
            accepted.append((lo, left + right, diff))
        else:
            pending.append((lo, mid, left))
            pending.append((mid, hi, right))

    accepted.sort(key=lambda panel: panel[0])
    total = sum((value for _, value, _ in accepted), 0j)
    panel_error = sum(err for _, _, err in accepted)
    tail = np.max(np.abs(integrand_values(ig, np.array([c + 1j * height, c - 1j * height])))) / decay_rate(ig)
    logger.debug("quadrature c=%.4f Y=%.0f panels=%d nodes=%d", c, height, len(accepted), nodes_used)
    return EvalResult(
        value=total / (2 * math.pi),
        abs_error_estimate=(panel_error + 2 * tail) / (2 * math.pi),
        method="barnes",
        work=nodes_used,
    )


def barnes_first_lemma_check(alpha, beta, gamma_, delta, settings: Settings = DEFAULT_SETTINGS) -> IdentityReport:
    """Integral of G(a+t)G(b+t)G(c-t)G(d-t) against G(a+c)G(a+d)G(b+c)G(b+d)/G(a+b+c+d)"""
    alpha, beta, gamma_, delta = (complex(x) for x in (alpha, beta, gamma_, delta))
    for name, value in (("alpha+gamma", alpha + gamma_), ("alpha+delta", alpha + delta),
                        ("beta+gamma", beta + gamma_), ("beta+delta", beta + delta)):
        if abs(value - round(value.real)) <= settings.integer_pair_tolerance:
            raise DomainError(f"{name} = {value} is an integer")
    ig = BarnesIntegrand(plus_offsets=[(alpha, 1), (beta, 1)], minus_offsets=[(gamma_, 1), (delta, 1)])
    lhs = integrate(ig, choose_contour(ig), settings=settings)
    rhs = gamma_product(
        [alpha + gamma_, alpha + delta, beta + gamma_, beta + delta],
        [alpha + beta + gamma_ + delta],
        settings,
    )
    return IdentityReport(lhs=lhs.value, rhs=rhs, abs_diff=abs(lhs.value - rhs), lhs_error_estimate=lhs.abs_error_estimate)


def _second_lemma_rhs(a, b, c, e, f, settings: Settings) -> complex:
    return gamma_product([a, b, c, 1 + a - e, 1 + b - e, 1 + c - e], [f - a, f - b, f - c], settings)


def _check_second_lemma_condition(a, b, c, e, f, settings: Settings) -> None:
    residual = e + f - a - b - c - 1
    if abs(residual) > settings.hyperplane_tolerance:
        raise DomainError(f"e+f-a-b-c-1 = {residual} is not zero")


def barnes_second_lemma_check(a, b, c, e, f, settings: Settings = DEFAULT_SETTINGS) -> IdentityReport:
    a, b, c, e, f = (complex(x) for x in (a, b, c, e, f))
    _check_second_lemma_condition(a, b, c, e, f, settings)
    ig = BarnesIntegrand(
        plus_offsets=[(a, 1), (b, 1), (c, 1), (f, -1)],
        minus_offsets=[(1 - e, 1), (0, 1)],
    )
    lhs = integrate(ig, choose_contour(ig), settings=settings)
    rhs = _second_lemma_rhs(a, b, c, e, f, settings)
    return IdentityReport(lhs=lhs.value, rhs=rhs, abs_diff=abs(lhs.value - rhs), lhs_error_estimate=lhs.abs_error_estimate)


def barnes_second_lemma_via_l(a, b, c, e, f, g, settings: Settings = DEFAULT_SETTINGS) -> IdentityReport:
    """Second lemma reached through L at d = g, where Gamma(g+t) cancels in the integral form"""
    from .l_function import eval_l_series, make_point

    a, b, c, e, f, g = (complex(x) for x in (a, b, c, e, f, g))
    _check_second_lemma_condition(a, b, c, e, f, settings)
    point = make_point(a, b, c, g, e, f, g, settings=settings)
    result = eval_l_series(point, settings)
    scale = math.pi * gamma_product([a, b, c, g, 1 + a - e, 1 + b - e, 1 + c - e, 1 + g - e], [], settings)
    lhs = result.value * scale
    rhs = _second_lemma_rhs(a, b, c, e, f, settings)
    return IdentityReport(
        lhs=lhs,
        rhs=rhs,
        abs_diff=abs(lhs - rhs),
        lhs_error_estimate=result.abs_error_estimate * abs(scale),
    )
