"""
Randomized verification of the invariance relations of L and of the
classical identities that follow from them (Thomae, Bailey, Barnes' lemmas).

Every check lands in a VerificationReport; evaluation errors are recorded as
failed checks with a reason instead of being raised.
"""

import logging
import math
from fractions import Fraction
from typing import Callable, Iterable, List, Literal, Optional, Sequence, Tuple

import numpy as np

from .barnes_quadrature import barnes_first_lemma_check, barnes_second_lemma_check
from .config import DEFAULT_SETTINGS, Settings
from .errors import DomainError, LFunctionError, SamplerExhausted, UnknownLabel, UsageError
from .gamma_core import gamma_product, log_gamma, pochhammer, sin_pi, sine_bound_constant
from .group_engine import cached_double_cosets, generate_group, permutation_subgroup
from .l_function import apply_element, barnes_integrand_for, eval_l, make_point
from .relation_catalog import parse_affine, render_linear
from .schemas import (
    PARAMETER_NAMES,
    Check,
    GroupElement,
    ParameterPoint,
    RationalSeriesSpec,
    SampleConstraints,
    VerificationReport,
)
from .series_engine import hypergeometric, sum_terminating_rational

logger = logging.getLogger(__name__)

ClassicalSuite = Literal["thomae", "bailey", "barnes1", "barnes2", "eq530", "kernel", "all"]
CLASSICAL_SUITES: Tuple[str, ...] = ("thomae", "bailey", "barnes1", "barnes2", "eq530", "kernel", "all")

SERIES_TOL = 1e-6
QUADRATURE_TOL = 1e-8
BAILEY_MAX_N = 12
SINE_BOUND_EPSILONS = (0.1, 0.3, 0.5)


# Sampling
def _point_from_rng(rng: np.random.Generator, constraints: SampleConstraints) -> Optional[Tuple[complex, ...]]:
    cap = constraints.magnitude_cap
    a, b, c, d, f = rng.uniform(0.0, cap, size=5)
    e = rng.uniform(-cap, cap)
    values = [complex(x) for x in (a, b, c, d, e, f)]
    if constraints.complex_points:
        imag = rng.uniform(-cap / 4, cap / 4, size=6)
        values = [v + 1j * y for v, y in zip(values, imag)]
    a, b, c, d, e, f = values
    g = 1 + a + b + c + d - e - f
    if abs(g.real) > cap or abs(g.imag) > cap:
        return None
    return a, b, c, d, e, f, g


def _admissible(p: ParameterPoint, constraints: SampleConstraints) -> bool:
    if not constraints.require_contour:
        return True
    lower = max(-p.a.real, -p.b.real, -p.c.real, -p.d.real)
    upper = min(0.0, 1 - p.e.real)
    if upper - lower < constraints.contour_gap_min:
        return False
    barnes_integrand_for(p)
    return True


def sample_point(
    constraints: SampleConstraints = SampleConstraints(),
    elements: Sequence[GroupElement] = (),
    settings: Settings = DEFAULT_SETTINGS,
    rng: Optional[np.random.Generator] = None,
) -> ParameterPoint:
    """Random admissible point of V whose images under ``elements`` are admissible too"""
    rng = rng if rng is not None else np.random.default_rng(constraints.seed)
    local = settings.model_copy(update={"e_integer_gap": constraints.e_integer_gap})
    budget = settings.sampler_max_rejections
    for attempt in range(budget):
        values = _point_from_rng(rng, constraints)
        if values is None:
            continue
        try:
            p = make_point(*values, settings=local)
            if not _admissible(p, constraints):
                continue
            if all(_admissible(apply_element(m.matrix, p, local), constraints) for m in elements):
                if attempt > budget // 10:
                    logger.warning("sampler needed %d rejections (budget %d)", attempt, budget)
                return p
        except UsageError:
            continue
    raise SamplerExhausted(f"no admissible point after {budget} attempts")


def select_elements(selection: str, seed: int = 0) -> List[GroupElement]:
    """"all", "reps" (the six coset representatives) or "random:K" """
    if selection == "all":
        return list(generate_group())
    if selection == "reps":
        return [c.representative for c in cached_double_cosets()]
    if selection.startswith("random:"):
        try:
            k = int(selection.split(":", 1)[1])
        except ValueError:
            raise UnknownLabel(f"bad element selection {selection!r}")
        group = generate_group()
        picks = np.random.default_rng(seed).choice(len(group), size=min(k, len(group)), replace=False)
        return [group[i] for i in sorted(picks)]
    raise UnknownLabel(f"element selection must be all, reps or random:K, got {selection!r}")


# Invariance
def verify_invariance(
    elements: Sequence[GroupElement],
    n_points: int,
    tol: float = SERIES_TOL,
    constraints: SampleConstraints = SampleConstraints(),
    method: str = "auto",
    settings: Settings = DEFAULT_SETTINGS,
) -> VerificationReport:
    """Compare L(p) with L(M p); tolerance is tol * (1 + |L(p)|).

    Points are drawn per element from a generator seeded by (seed, element
    position), rejecting until both p and M p are admissible.
    """
    rows = []
    local = settings.model_copy(update={"e_integer_gap": constraints.e_integer_gap})
    for position, element in enumerate(elements):
        rng = np.random.default_rng([constraints.seed, position])
        name = f"invariance {element.word_text()}"
        for index in range(n_points):
            try:
                p = sample_point(constraints, [element], settings, rng)
            except SamplerExhausted as exc:
                rows.append((index, position, Check.failure(name, str(exc), tol)))
                continue
            point = list(p.as_tuple())
            try:
                lhs = eval_l(p, method, settings).value
                rhs = eval_l(apply_element(element.matrix, p, local), method, settings).value
                check = Check.compare(name, lhs, rhs, tol * (1 + abs(lhs)), point)
            except LFunctionError as exc:
                check = Check.failure(name, f"{type(exc).__name__}: {exc}", tol, point)
            rows.append((index, position, check))
    rows.sort(key=lambda row: (row[0], row[1]))
    report = VerificationReport(checks=[check for _, _, check in rows])
    logger.info("invariance: %s", report.summary)
    return report


def verify_trivial_invariances(p: ParameterPoint, tol: float = QUADRATURE_TOL, settings: Settings = DEFAULT_SETTINGS) -> VerificationReport:
    """L(p) against L(sigma p) for all 48 coordinate permutations in the group"""
    base = eval_l(p, "auto", settings).value
    checks = []
    for sigma in permutation_subgroup():
        name = f"permutation {sigma.word_text()}"
        try:
            value = eval_l(apply_element(sigma.matrix, p, settings), "auto", settings).value
            checks.append(Check.compare(name, base, value, tol * (1 + abs(base)), list(p.as_tuple())))
        except LFunctionError as exc:
            checks.append(Check.failure(name, str(exc), tol, list(p.as_tuple())))
    return VerificationReport(checks=checks)


def verify_representation_consistency(p: ParameterPoint, tol: float = 1e-5, settings: Settings = DEFAULT_SETTINGS) -> VerificationReport:
    """Pairwise agreement of the series, Barnes and (when Re(f-d) > 0) 7F6 evaluations"""
    methods = ["series", "barnes"]
    if (p.f - p.d).real > 0:
        methods.append("7f6")
    values = {}
    checks = []
    point = list(p.as_tuple())
    for method in methods:
        try:
            values[method] = eval_l(p, method, settings).value
        except LFunctionError as exc:
            checks.append(Check.failure(f"evaluate {method}", f"{type(exc).__name__}: {exc}", tol, point))
    for i, first in enumerate(methods):
        for second in methods[i + 1:]:
            if first in values and second in values:
                checks.append(Check.compare(f"{first} vs {second}", values[first], values[second], tol, point))
    return VerificationReport(checks=checks)


# Hypergeometric identities
def _normalized_3f2(numer, denom, gamma_denoms, settings: Settings) -> complex:
    """3F2(numer; denom; 1) / prod Gamma(gamma_denoms), parameter lists in canonical order"""

    def canonical(values):
        return sorted((complex(v) for v in values), key=lambda z: (z.real, z.imag))

    series = hypergeometric(canonical(numer), canonical(denom), settings)
    return series.value * gamma_product([], canonical(gamma_denoms), settings)


def _require_positive(name: str, value: complex) -> None:
    if value.real <= 0:
        raise DomainError(f"Re({name}) = {value.real} must be positive")


def verify_eq_530(b, c, d, f, g, tol: float = SERIES_TOL, settings: Settings = DEFAULT_SETTINGS) -> Check:
    """3F2(b,c,d;f,g)/(G(f)G(g)G(f+g-b-c-d)) = 3F2(b,g-c,g-d;f+g-c-d,g)/(G(f+g-c-d)G(g)G(f-b))"""
    b, c, d, f, g = (complex(x) for x in (b, c, d, f, g))
    _require_positive("f+g-b-c-d", f + g - b - c - d)
    _require_positive("f-b", f - b)
    lhs = _normalized_3f2([b, c, d], [f, g], [f, g, f + g - b - c - d], settings)
    rhs = _normalized_3f2([b, g - c, g - d], [f + g - c - d, g], [f + g - c - d, g, f - b], settings)
    return Check.compare("eq530", lhs, rhs, tol, [b, c, d, f, g])


def verify_thomae(b, c, d, f, g, tol: float = SERIES_TOL, settings: Settings = DEFAULT_SETTINGS) -> Check:
    """3F2(b,c,d;f,g)/(G(f)G(g)G(s)) = 3F2(f-b,g-b,s;f+g-b-d,f+g-b-c)/(G(b)G(f+g-b-d)G(f+g-b-c)), s = f+g-b-c-d"""
    b, c, d, f, g = (complex(x) for x in (b, c, d, f, g))
    s = f + g - b - c - d
    _require_positive("f+g-b-c-d", s)
    _require_positive("b", b)
    lhs = _normalized_3f2([b, c, d], [f, g], [f, g, s], settings)
    rhs = _normalized_3f2([f - b, g - b, s], [f + g - b - d, f + g - b - c], [b, f + g - b - d, f + g - b - c], settings)
    return Check.compare("thomae", lhs, rhs, tol, [b, c, d, f, g])


def _bailey_sides(n: int, b: Fraction, c: Fraction, d: Fraction, f: Fraction, g: Fraction):
    if not 0 <= n <= BAILEY_MAX_N:
        raise DomainError(f"n must lie in 0..{BAILEY_MAX_N}, got {n}")
    e = 1 - n - f - g + b + c + d
    left_denoms = [e, f, g]
    right_denoms = [1 - n + b - f, 1 - n + b - e, g]
    for value in left_denoms + right_denoms:
        if value.denominator == 1 and -n < value <= 0:
            raise DomainError(f"denominator parameter {value} makes a Pochhammer factor vanish")
    scale_den = pochhammer(e, n) * pochhammer(f, n)
    if scale_den == 0:
        raise DomainError("(e)_n (f)_n vanishes")
    lhs = sum_terminating_rational(RationalSeriesSpec(numerator_params=[-n, b, c, d], denominator_params=left_denoms), n)
    rhs_series = sum_terminating_rational(
        RationalSeriesSpec(numerator_params=[-n, b, g - c, g - d], denominator_params=right_denoms), n
    )
    rhs = pochhammer(e - b, n) * pochhammer(f - b, n) / scale_den * rhs_series
    return lhs, rhs


def verify_bailey(n: int, b, c, d, f, g) -> Check:
    """Exact rational check of Bailey's terminating Saalschutzian 4F3 transformation"""
    b, c, d, f, g = (Fraction(x) for x in (b, c, d, f, g))
    lhs, rhs = _bailey_sides(n, b, c, d, f, g)
    diff = abs(lhs - rhs)
    abs_diff = 0.0 if diff == 0 else max(float(diff), math.ulp(0.0))
    return Check(
        name=f"bailey n={n}",
        point=[complex(x) for x in (b, c, d, f, g)],
        lhs=float(lhs),
        rhs=float(rhs),
        abs_diff=abs_diff,
        tol=0.0,
        passed=abs_diff <= 0.0,
        exact=f"{lhs} == {rhs}" if diff == 0 else f"{lhs} != {rhs}",
    )


# Symbolic substitutions on the 3F2 parameter list (b, c, d; f, g)
Forms = Tuple[str, str, str, str, str]


def _linear(text: str):
    return parse_affine(text)


def _combine(*terms):
    """Sum of (sign, linear form) pairs"""
    constant = 0
    coeffs = [0] * len(PARAMETER_NAMES)
    for sign, (k, row) in terms:
        constant += sign * k
        for i, x in enumerate(row):
            coeffs[i] += sign * x
    return render_linear(constant, coeffs)


def eq530_parameters(params: Forms) -> Forms:
    """(b, c, d; f, g) -> (b, g-c, g-d; f+g-c-d, g)"""
    b, c, d, f, g = (_linear(x) for x in params)
    return (
        _combine((1, b)),
        _combine((1, g), (-1, c)),
        _combine((1, g), (-1, d)),
        _combine((1, f), (1, g), (-1, c), (-1, d)),
        _combine((1, g)),
    )


def thomae_parameters(params: Forms) -> Forms:
    """(b, c, d; f, g) -> (f-b, g-b, f+g-b-c-d; f+g-b-d, f+g-b-c)"""
    b, c, d, f, g = (_linear(x) for x in params)
    return (
        _combine((1, f), (-1, b)),
        _combine((1, g), (-1, b)),
        _combine((1, f), (1, g), (-1, b), (-1, c), (-1, d)),
        _combine((1, f), (1, g), (-1, b), (-1, d)),
        _combine((1, f), (1, g), (-1, b), (-1, c)),
    )


def normalize_forms(params: Forms) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """Numerators and denominators as sorted multisets (the series is symmetric in each)"""
    return tuple(sorted(params[:3])), tuple(sorted(params[3:]))


BASE_FORMS: Forms = ("b", "c", "d", "f", "g")


def _symbolic_check(name: str, left: Forms, right: Forms) -> Check:
    same = normalize_forms(left) == normalize_forms(right)
    return Check(
        name=name,
        abs_diff=0.0 if same else 1.0,
        tol=0.0,
        passed=same,
        exact=f"{','.join(left)} {'==' if same else '!='} {','.join(right)}",
    )


def verify_substitution_compositions() -> VerificationReport:
    """eq530 applied twice is the identity; Thomae applied twice is eq530"""
    twice_530 = eq530_parameters(eq530_parameters(BASE_FORMS))
    twice_thomae = thomae_parameters(thomae_parameters(BASE_FORMS))
    return VerificationReport(
        checks=[
            _symbolic_check("eq530 twice", twice_530, BASE_FORMS),
            _symbolic_check("thomae twice", twice_thomae, eq530_parameters(BASE_FORMS)),
        ]
    )


# Gamma kernel
def verify_reflection(n_samples: int = 1000, seed: int = 0, tol: float = 1e-10 * math.pi) -> Check:
    """Worst residual of Gamma(z) Gamma(1-z) sin(pi z) = pi over random z"""
    rng = np.random.default_rng(seed)
    z = np.empty(0, dtype=np.complex128)
    while z.size < n_samples:
        draw = rng.uniform(-20, 20, size=n_samples) + 1j * rng.uniform(-20, 20, size=n_samples)
        dist = np.abs(draw - np.round(draw.real))
        z = np.concatenate((z, draw[(dist > 0.1) & (np.abs(draw) < 20)]))
    z = z[:n_samples]
    values = np.exp(log_gamma(z) + log_gamma(1 - z)) * sin_pi(z)
    residual = np.abs(values - math.pi)
    worst = int(np.argmax(residual))
    return Check.compare("reflection", complex(values[worst]), math.pi, tol, [complex(z[worst])])


def verify_sine_bound(eps: float, n_samples: int = 1000, seed: int = 0) -> Check:
    """|sin(pi z)| >= K(eps) e^{pi |Im z|} whenever dist(z, Z) >= eps"""
    rng = np.random.default_rng([seed, int(eps * 1000)])
    k = sine_bound_constant(eps)
    z = np.empty(0, dtype=np.complex128)
    while z.size < n_samples:
        draw = rng.uniform(-10, 10, size=n_samples) + 1j * rng.uniform(-5, 5, size=n_samples)
        z = np.concatenate((z, draw[np.abs(draw - np.round(draw.real)) >= eps]))
    z = z[:n_samples]
    lhs = np.abs(sin_pi(z))
    rhs = k * np.exp(math.pi * np.abs(z.imag))
    ratio = lhs / rhs
    worst = int(np.argmin(ratio))
    shortfall = max(0.0, float(rhs[worst] - lhs[worst]))
    return Check(
        name=f"sine bound eps={eps}",
        point=[complex(z[worst])],
        lhs=float(lhs[worst]),
        rhs=float(rhs[worst]),
        abs_diff=shortfall,
        tol=0.0,
        passed=shortfall <= 0.0,
    )


# Random classical instances
def _guarded(name: str, tol: float, build: Callable[[], Check]) -> Check:
    try:
        return build()
    except LFunctionError as exc:
        return Check.failure(name, f"{type(exc).__name__}: {exc}", tol)


def _near_pole(z: complex, gap: float = 0.05) -> bool:
    return z.real <= gap and abs(z - round(z.real)) < gap


def _barnes1_instances(rng, n: int, constraints: SampleConstraints) -> Iterable[Tuple[complex, ...]]:
    produced = 0
    while produced < n:
        values = [complex(x) for x in rng.uniform(0.1, 1.5, size=4)]
        if constraints.complex_points:
            values = [v + 1j * y for v, y in zip(values, rng.uniform(-0.5, 0.5, size=4))]
        alpha, beta, gamma_, delta = values
        pairs = (alpha + gamma_, alpha + delta, beta + gamma_, beta + delta)
        if any(abs(p - round(p.real)) < 0.05 for p in pairs):
            continue
        produced += 1
        yield alpha, beta, gamma_, delta


def _barnes2_instances(rng, n: int, constraints: SampleConstraints) -> Iterable[Tuple[complex, ...]]:
    produced = 0
    while produced < n:
        a, b, c = (complex(x) for x in rng.uniform(0.1, 1.5, size=3))
        e = complex(rng.uniform(-0.5, 0.9))
        if abs(e - round(e.real)) < 0.05 or min(a.real, b.real, c.real) - max(e.real - 1, 0) < constraints.contour_gap_min:
            continue
        if any(abs(z - round(z.real)) < 0.05 for x in (a, b, c) for z in (x, x + 1 - e)):
            continue
        f = 1 + a + b + c - e
        produced += 1
        yield a, b, c, e, f


def _three_f_two_instances(rng, n: int, constraints: SampleConstraints, thomae: bool) -> Iterable[Tuple[complex, ...]]:
    margin = constraints.convergence_margin
    produced = 0
    while produced < n:
        if thomae:
            b = complex(rng.uniform(margin, margin + 1.0))
        else:
            b = complex(rng.uniform(0.1, 1.0))
        c, d = (complex(x) for x in rng.uniform(0.1, 1.0, size=2))
        f = b + margin + rng.uniform(0.0, 1.0)
        g = margin + rng.uniform(0.0, 1.0) + b + c + d - f
        if any(_near_pole(z) for z in (f, g, f + g - c - d, f + g - b - d, f + g - b - c)):
            continue
        produced += 1
        yield b, c, d, complex(f), complex(g)


def _bailey_instances(rng, n: int) -> Iterable[tuple]:
    produced = 0
    while produced < n:
        order = int(rng.integers(0, 7))
        values = [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10))) for _ in range(5)]
        try:
            _bailey_sides(order, *values)
        except (UsageError, ZeroDivisionError):
            continue
        produced += 1
        yield (order, *values)


def run_classical_suite(
    which: ClassicalSuite = "all",
    seed: int = 0,
    n_instances: int = 10,
    constraints: SampleConstraints = SampleConstraints(),
    settings: Settings = DEFAULT_SETTINGS,
    bailey_instances: int = 100,
) -> VerificationReport:
    if which not in CLASSICAL_SUITES:
        raise UnknownLabel(f"unknown suite {which!r}, expected one of {', '.join(CLASSICAL_SUITES)}")
    wanted = set(CLASSICAL_SUITES[:-1]) if which == "all" else {which}
    checks: List[Check] = []

    if "barnes1" in wanted:
        rng = np.random.default_rng([seed, 1])
        for args in _barnes1_instances(rng, n_instances, constraints):
            checks.append(_guarded("barnes1", QUADRATURE_TOL, lambda args=args: _identity_check(
                "barnes1", barnes_first_lemma_check(*args, settings=settings), QUADRATURE_TOL, args)))
    if "barnes2" in wanted:
        rng = np.random.default_rng([seed, 2])
        for args in _barnes2_instances(rng, n_instances, constraints):
            checks.append(_guarded("barnes2", SERIES_TOL, lambda args=args: _identity_check(
                "barnes2", barnes_second_lemma_check(*args, settings=settings), SERIES_TOL, args)))
    if "eq530" in wanted:
        rng = np.random.default_rng([seed, 3])
        for args in _three_f_two_instances(rng, n_instances, constraints, thomae=False):
            checks.append(_guarded("eq530", SERIES_TOL, lambda args=args: verify_eq_530(*args, settings=settings)))
    if "thomae" in wanted:
        rng = np.random.default_rng([seed, 4])
        for args in _three_f_two_instances(rng, n_instances, constraints, thomae=True):
            checks.append(_guarded("thomae", SERIES_TOL, lambda args=args: verify_thomae(*args, settings=settings)))
    if wanted & {"eq530", "thomae"}:
        checks.extend(verify_substitution_compositions().checks)
    if "bailey" in wanted:
        rng = np.random.default_rng([seed, 5])
        for args in _bailey_instances(rng, bailey_instances):
            checks.append(_guarded("bailey", 0.0, lambda args=args: verify_bailey(*args)))
    if "kernel" in wanted:
        checks.append(verify_reflection(seed=seed))
        checks.extend(verify_sine_bound(eps, seed=seed) for eps in SINE_BOUND_EPSILONS)

    report = VerificationReport(checks=checks)
    logger.info("classical suite %s: %s", which, report.summary)
    return report


def _identity_check(name: str, report, tol: float, args) -> Check:
    return Check.compare(name, report.lhs, report.rhs, tol, list(args))


def report_to_json(report: VerificationReport) -> str:
    return report.model_dump_json(by_alias=True, indent=2)
