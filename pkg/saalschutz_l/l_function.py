"""
The L function on the hyperplane V = {e+f+g-a-b-c-d = 1}.

L(a,b,c,d;e;f,g) =   4F3(a,b,c,d; e,f,g; 1)
                   / (sin(pi e) G(e) G(f) G(g) G(1+a-e) G(1+b-e) G(1+c-e) G(1+d-e))
                 - 4F3(1+a-e,1+b-e,1+c-e,1+d-e; 1+f-e,1+g-e,2-e; 1)
                   / (sin(pi e) G(a) G(b) G(c) G(d) G(1+f-e) G(1+g-e) G(2-e))

Three evaluation paths: the series definition above, the very-well-poised
7F6 form (needs Re(f-d) > 0) and the Barnes integral.
"""

import logging
from typing import Iterable, Literal, Sequence, Tuple

import numpy as np

from .barnes_quadrature import choose_contour, integrate
from .config import DEFAULT_SETTINGS, Settings
from .errors import ContourError, DomainError, PoleError, QuadratureStall, SpecError
from .gamma_core import LOG_PI, gamma_product, log_reciprocal_gamma_masked, log_sin_pi
from .schemas import PARAMETER_NAMES, BarnesIntegrand, EvalResult, Matrix, ParameterPoint
from .series_engine import hypergeometric

logger = logging.getLogger(__name__)

Method = Literal["auto", "series", "7f6", "barnes"]
METHODS: Tuple[str, ...] = ("auto", "series", "7f6", "barnes")


def make_point(a, b, c, d, e, f, g, settings: Settings = DEFAULT_SETTINGS) -> ParameterPoint:
    """Validated point of V; HyperplaneError or DomainError otherwise"""
    values = dict(zip(PARAMETER_NAMES, (a, b, c, d, e, f, g)))
    return ParameterPoint.model_validate(values, context={"settings": settings})


def as_vector(p: ParameterPoint) -> Tuple[complex, ...]:
    return p.as_tuple()


def point_from_vector(v: Sequence[complex], settings: Settings = DEFAULT_SETTINGS) -> ParameterPoint:
    if len(v) != 7:
        raise DomainError(f"a parameter vector has 7 entries, got {len(v)}")
    return make_point(*v, settings=settings)


def apply_element(matrix: Matrix, p: ParameterPoint, settings: Settings = DEFAULT_SETTINGS) -> ParameterPoint:
    """The image M p; raises DomainError when M p leaves the admissible region"""
    v = as_vector(p)
    image = [sum((entry * x for entry, x in zip(row, v) if entry), 0j) for row in matrix]
    return point_from_vector(image, settings)


def _reciprocal_gamma_product(args: Iterable[complex], extra_log: complex = 0j) -> complex:
    """exp(extra_log) / prod Gamma(args); exactly 0 if any argument is a pole"""
    values, zeros = log_reciprocal_gamma_masked(np.array(list(args), dtype=np.complex128))
    if np.any(zeros):
        return 0j
    return complex(np.exp(np.sum(values) + extra_log))


def _series_terms(p: ParameterPoint):
    a, b, c, d, e, f, g = p.as_tuple()
    first = ([a, b, c, d], [e, f, g], [e, f, g, 1 + a - e, 1 + b - e, 1 + c - e, 1 + d - e])
    second = (
        [1 + a - e, 1 + b - e, 1 + c - e, 1 + d - e],
        [1 + f - e, 1 + g - e, 2 - e],
        [a, b, c, d, 1 + f - e, 1 + g - e, 2 - e],
    )
    return first, second


def eval_l_series(p: ParameterPoint, settings: Settings = DEFAULT_SETTINGS) -> EvalResult:
    """L from its defining pair of Saalschutzian 4F3(1) series"""
    neg_log_sin = -log_sin_pi(p.e, settings)
    value = 0j
    error = 0.0
    work = 0
    methods = set()
    for sign, (numer, denom, gamma_args) in zip((1, -1), _series_terms(p)):
        prefactor = _reciprocal_gamma_product(gamma_args, neg_log_sin)
        if prefactor == 0:
            continue
        series = hypergeometric(numer, denom, settings)
        value += sign * prefactor * series.value
        error += abs(prefactor) * series.abs_error_estimate
        work += series.work
        methods.add(series.method)
    method = "terminating-exact" if methods == {"terminating-exact"} else "extrapolated"
    return EvalResult(value=value, abs_error_estimate=error, method=method, work=work, evaluator="series")


def seven_f_six_parameters(p: ParameterPoint):
    """(numerators, denominators) of the very-well-poised 7F6 form"""
    a, b, c, d, e, f, g = p.as_tuple()
    s = d + g - e
    numer = [s, 1 + s / 2, g - a, g - b, g - c, d, 1 + d - e]
    denom = [s / 2, 1 + a + d - e, 1 + b + d - e, 1 + c + d - e, 1 + g - e, g]
    return numer, denom


def eval_l_7f6(p: ParameterPoint, settings: Settings = DEFAULT_SETTINGS) -> EvalResult:
    a, b, c, d, e, f, g = p.as_tuple()
    if (f - d).real <= 0:
        raise DomainError(f"the 7F6 form needs Re(f-d) > 0, got {(f - d).real}")
    numer, denom = seven_f_six_parameters(p)
    try:
        prefactor = gamma_product(
            [1 + d + g - e],
            [g, 1 + g - e, f - d, 1 + a + d - e, 1 + b + d - e, 1 + c + d - e],
            settings,
        ) * np.exp(-LOG_PI)
        series = hypergeometric(numer, denom, settings)
    except (PoleError, SpecError) as exc:
        raise DomainError(f"7F6 form not admissible here: {exc}") from exc
    return EvalResult(
        value=prefactor * series.value,
        abs_error_estimate=abs(prefactor) * series.abs_error_estimate,
        method=series.method,
        work=series.work,
        evaluator="7f6",
    )


def barnes_integrand_for(p: ParameterPoint) -> BarnesIntegrand:
    """G(a+t)G(b+t)G(c+t)G(d+t)G(1-e-t)G(-t) / (G(f+t)G(g+t))"""
    a, b, c, d, e, f, g = p.as_tuple()
    return BarnesIntegrand(
        plus_offsets=[(a, 1), (b, 1), (c, 1), (d, 1), (f, -1), (g, -1)],
        minus_offsets=[(1 - e, 1), (0, 1)],
    )


def l_barnes_prefactor(p: ParameterPoint) -> complex:
    """1 / (pi G(a)G(b)G(c)G(d)G(1+a-e)G(1+b-e)G(1+c-e)G(1+d-e))"""
    a, b, c, d, e, f, g = p.as_tuple()
    return _reciprocal_gamma_product([a, b, c, d, 1 + a - e, 1 + b - e, 1 + c - e, 1 + d - e], -LOG_PI)


def eval_l_barnes(p: ParameterPoint, settings: Settings = DEFAULT_SETTINGS) -> EvalResult:
    ig = barnes_integrand_for(p)
    contour = choose_contour(ig)
    integral = integrate(ig, contour, settings.quadrature_target, settings)
    prefactor = l_barnes_prefactor(p)
    return EvalResult(
        value=prefactor * integral.value,
        abs_error_estimate=abs(prefactor) * integral.abs_error_estimate,
        method="barnes",
        work=integral.work,
        evaluator="barnes",
    )


def eval_l(p: ParameterPoint, method: Method = "auto", settings: Settings = DEFAULT_SETTINGS) -> EvalResult:
    """Evaluate L; ``auto`` tries the Barnes integral first and falls back to the series"""
    if method == "series":
        return eval_l_series(p, settings)
    if method == "7f6":
        return eval_l_7f6(p, settings)
    if method == "barnes":
        return eval_l_barnes(p, settings)
    if method != "auto":
        raise DomainError(f"unknown evaluation method {method!r}, expected one of {', '.join(METHODS)}")
    try:
        return eval_l_barnes(p, settings)
    except (ContourError, DomainError, QuadratureStall) as exc:
        logger.debug("barnes path unavailable (%s), summing the series", exc)
        return eval_l_series(p, settings)


def closed_form_at_d_equals_g(p: ParameterPoint, settings: Settings = DEFAULT_SETTINGS) -> complex:
    """L on d = g: 1 / (pi G(g) G(1+g-e) G(f-a) G(f-b) G(f-c))"""
    a, b, c, d, e, f, g = p.as_tuple()
    if abs(d - g) > settings.hyperplane_tolerance:
        raise DomainError(f"closed form needs d = g, got d - g = {d - g}")
    return _reciprocal_gamma_product([g, 1 + g - e, f - a, f - b, f - c], -LOG_PI)
