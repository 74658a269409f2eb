#!/usr/bin/env python3
"""
Tests for Mellin-Barnes quadrature and Barnes' two lemmas
"""

import math

import numpy as np
import pytest

from saalschutz_l.barnes_quadrature import (
    barnes_first_lemma_check,
    barnes_second_lemma_check,
    barnes_second_lemma_via_l,
    choose_contour,
    contour_gap,
    decay_rate,
    integrand_values,
    integrate,
    truncation_height,
)
from saalschutz_l.config import Settings
from saalschutz_l.errors import ContourError, DomainError, QuadratureStall
from saalschutz_l.gamma_core import gamma_product
from saalschutz_l.schemas import BarnesIntegrand


@pytest.mark.parametrize(
    "alpha, beta, gamma_, delta",
    [
        (0.3, 0.7, 0.4, 0.6),
        (1.2, 0.25, 0.35, 1.1),
        (0.5 + 0.3j, 0.8, 0.45 - 0.2j, 0.9),
    ],
)
def test_first_lemma(alpha, beta, gamma_, delta):
    report = barnes_first_lemma_check(alpha, beta, gamma_, delta)
    assert report.abs_diff < 1e-9 * max(1.0, abs(report.rhs))
    assert report.lhs_error_estimate < 1e-8


def test_first_lemma_rejects_integer_pairs():
    with pytest.raises(DomainError):
        barnes_first_lemma_check(0.5, 0.3, 0.5, 0.4)


def test_second_lemma():
    a, b, c, e = 0.3, 0.4, 0.5, 0.2
    f = 1 + a + b + c - e
    report = barnes_second_lemma_check(a, b, c, e, f)
    assert report.abs_diff < 1e-8 * max(1.0, abs(report.rhs))


def test_second_lemma_needs_balanced_parameters():
    with pytest.raises(DomainError):
        barnes_second_lemma_check(0.3, 0.4, 0.5, 0.2, 1.5)


def test_second_lemma_through_l():
    a, b, c, e = 0.3, 0.4, 0.5, 0.2
    report = barnes_second_lemma_via_l(a, b, c, e, 1 + a + b + c - e, 0.6)
    assert report.abs_diff < 1e-7 * abs(report.rhs)


def test_contour_sits_in_the_gap():
    ig = BarnesIntegrand(plus_offsets=[(0.3, 1), (0.7, 1)], minus_offsets=[(0.4, 1), (0.6, 1)])
    assert choose_contour(ig) == pytest.approx(0.5 * (-0.3 + 0.4))


def test_contour_error_when_pole_families_overlap():
    ig = BarnesIntegrand(plus_offsets=[(-0.5, 1)], minus_offsets=[(0.0, 1)])
    with pytest.raises(ContourError):
        choose_contour(ig)


def test_colliding_pole_families_are_rejected():
    with pytest.raises(DomainError):
        BarnesIntegrand(plus_offsets=[(0.5, 1)], minus_offsets=[(0.5, 1)])


def test_decay_rate():
    ig = BarnesIntegrand(plus_offsets=[(0.3, 1), (0.7, 1)], minus_offsets=[(0.4, 1), (0.6, 1)])
    assert decay_rate(ig) == pytest.approx(2 * math.pi)
    flat = BarnesIntegrand(plus_offsets=[(0.5, 1), (0.2, -1)])
    with pytest.raises(ContourError):
        decay_rate(flat)


def test_integrand_values_zero_at_reciprocal_poles():
    ig = BarnesIntegrand(plus_offsets=[(0.5, 1), (0.0, -1)])
    values = integrand_values(ig, np.array([0.0 + 0j, -1.0 + 0j, 0.5 + 0j]))
    assert values[0] == 0
    assert values[1] == 0
    assert values[2] == pytest.approx(gamma_product([1.0], [0.5]))


def test_truncation_height_grows_with_accuracy():
    ig = BarnesIntegrand(plus_offsets=[(0.3, 1), (0.7, 1)], minus_offsets=[(0.4, 1), (0.6, 1)])
    c = choose_contour(ig)
    loose = truncation_height(ig, c, 1e-4)
    tight = truncation_height(ig, c, 1e-14)
    assert Settings().min_truncation_height <= loose <= tight


def test_integration_is_bit_stable():
    ig = BarnesIntegrand(plus_offsets=[(0.3, 1), (0.7, 1)], minus_offsets=[(0.4, 1), (0.6, 1)])
    c = choose_contour(ig)
    first = integrate(ig, c)
    second = integrate(ig, c)
    assert first.value == second.value
    assert first.method == "barnes"
    assert first.work > 0


def test_quadrature_stall_on_small_budget():
    settings = Settings(quadrature_order=4, quadrature_node_budget=1000, quadrature_target=1e-14)
    ig = BarnesIntegrand(plus_offsets=[(0.3, 1), (0.7, 1)], minus_offsets=[(0.4, 1), (0.6, 1)])
    with pytest.raises(QuadratureStall):
        integrate(ig, choose_contour(ig), settings=settings)


# first lemma integrand with gap (-0.3, 0.5)
GAP_CASE = BarnesIntegrand(plus_offsets=[(0.3, 1), (0.45, 1)], minus_offsets=[(0.5, 1), (0.6, 1)])


def test_contour_gap():
    assert contour_gap(GAP_CASE) == pytest.approx((-0.3, 0.5))
    assert contour_gap(BarnesIntegrand(plus_offsets=[(0.5, 1), (0.2, -1)])) == (-0.5, None)


@pytest.mark.parametrize("c", [1.2, 0.5, -0.3, -1.0])
def test_integrate_rejects_abscissa_outside_the_gap(c):
    with pytest.raises(ContourError):
        integrate(GAP_CASE, c)


def test_contour_independence():
    first = integrate(GAP_CASE, -0.2)
    second = integrate(GAP_CASE, 0.35)
    roundoff = 1e-14 * abs(first.value)
    assert abs(first.value - second.value) <= first.abs_error_estimate + second.abs_error_estimate + roundoff
    exact = gamma_product([0.8, 0.9, 0.95, 1.05], [1.85])
    assert abs(first.value - exact) < 1e-8


def test_doubling_the_truncation_height_changes_little():
    target = 1e-10
    c = choose_contour(GAP_CASE)
    height = truncation_height(GAP_CASE, c, target)
    nodes, weights = np.polynomial.legendre.leggauss(200)
    half = 0.5 * height
    y = 1.5 * height + half * nodes
    extra = half * np.sum(weights * (integrand_values(GAP_CASE, c + 1j * y) + integrand_values(GAP_CASE, c - 1j * y)))
    assert abs(extra) / (2 * math.pi) < target / 10


def test_real_parameters_give_a_real_integral():
    for ig in (GAP_CASE, BarnesIntegrand(plus_offsets=[(0.3, 1), (0.7, 1)], minus_offsets=[(0.4, 1), (0.6, 1)])):
        result = integrate(ig, choose_contour(ig))
        assert abs(result.value.imag) <= 1e-10
