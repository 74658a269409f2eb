#!/usr/bin/env python3
"""
Tests for the randomized verification suites
"""

import json
import math
from fractions import Fraction

import numpy as np
import pytest

from saalschutz_l.config import Settings
from saalschutz_l.errors import DomainError, SamplerExhausted, UnknownLabel
from saalschutz_l.group_engine import generate_group, identity
from saalschutz_l.l_function import apply_element, make_point
from saalschutz_l.schemas import Check, GroupElement, SampleConstraints, VerificationReport
from saalschutz_l.verifier import (
    BASE_FORMS,
    eq530_parameters,
    normalize_forms,
    report_to_json,
    run_classical_suite,
    sample_point,
    select_elements,
    thomae_parameters,
    verify_bailey,
    verify_eq_530,
    verify_invariance,
    verify_reflection,
    verify_representation_consistency,
    verify_sine_bound,
    verify_substitution_compositions,
    verify_thomae,
    verify_trivial_invariances,
)

IDENTITY = GroupElement(matrix=identity())


def test_sample_point_is_reproducible():
    constraints = SampleConstraints(seed=11)
    assert sample_point(constraints) == sample_point(constraints)


def test_sample_point_respects_the_contour_gap():
    constraints = SampleConstraints(seed=3)
    elements = select_elements("reps")
    p = sample_point(constraints, elements)
    for q in [p] + [apply_element(m.matrix, p) for m in elements]:
        lower = max(-q.a.real, -q.b.real, -q.c.real, -q.d.real)
        upper = min(0.0, 1 - q.e.real)
        assert upper - lower >= constraints.contour_gap_min


def test_sample_point_complex():
    p = sample_point(SampleConstraints(seed=5, complex_points=True))
    assert any(z.imag != 0 for z in p.as_tuple())


def test_sampler_exhausted():
    settings = Settings(sampler_max_rejections=50)
    with pytest.raises(SamplerExhausted):
        sample_point(SampleConstraints(contour_gap_min=5.0), settings=settings)


def test_sampler_exhausted_on_empty_region():
    settings = Settings(sampler_max_rejections=200)
    with pytest.raises(SamplerExhausted):
        sample_point(SampleConstraints(magnitude_cap=0), settings=settings)


def test_select_elements():
    assert len(select_elements("all")) == 1920
    assert len(select_elements("reps")) == 6
    picks = select_elements("random:5", seed=2)
    assert len(picks) == 5
    assert picks == select_elements("random:5", seed=2)
    with pytest.raises(UnknownLabel):
        select_elements("some")
    with pytest.raises(UnknownLabel):
        select_elements("random:x")


def test_identity_relation_is_exact():
    report = verify_invariance([IDENTITY], 2, constraints=SampleConstraints(seed=1))
    assert report.all_passed
    assert all(check.abs_diff == 0.0 for check in report.checks)


def test_representative_relations_hold():
    report = verify_invariance(select_elements("reps"), 2, 1e-6, SampleConstraints(seed=7))
    assert report.summary == {"total": 12, "passed": 12, "failed": 0}


def test_invariance_report_order():
    elements = select_elements("reps")[:3]
    report = verify_invariance(elements, 2, constraints=SampleConstraints(seed=2))
    names = [check.name for check in report.checks]
    expected = [f"invariance {m.word_text()}" for m in elements] * 2
    assert names == expected


@pytest.mark.slow
def test_full_invariance_sweep():
    report = verify_invariance(list(generate_group()), 1, 1e-6, SampleConstraints(seed=0))
    assert report.summary["total"] == 1920
    assert report.all_passed, [c for c in report.checks if not c.passed][:3]


@pytest.mark.slow
def test_complex_invariance():
    report = verify_invariance(select_elements("random:20", seed=4), 1, 1e-6, SampleConstraints(seed=4, complex_points=True))
    assert report.all_passed


def test_trivial_invariances():
    p = make_point(0.1, 0.2, 0.3, 0.4, 0.5, 0.7, 0.8)
    report = verify_trivial_invariances(p, 1e-8)
    assert report.summary["total"] == 48
    assert report.all_passed


def test_representation_consistency():
    report = verify_representation_consistency(make_point(0.1, 0.2, 0.3, 0.4, 0.5, 0.7, 0.8))
    assert [check.name for check in report.checks] == ["series vs barnes", "series vs 7f6", "barnes vs 7f6"]
    assert report.all_passed


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_representation_consistency_at_random_points(seed):
    # keep Re(f-d) >= 0.5 so the 7F6 series converges at least like 1/N
    rng = np.random.default_rng(seed)
    while True:
        a, b, c, d = rng.uniform(0.1, 0.6, size=4)
        e = rng.uniform(0.2, 0.8)
        f = d + rng.uniform(0.5, 1.2)
        g = 1 + a + b + c + d - e - f
        if g > 0.2 and d + g - e > 0.1:
            break
    report = verify_representation_consistency(make_point(a, b, c, d, e, f, g))
    assert [check.name for check in report.checks] == ["series vs barnes", "series vs 7f6", "barnes vs 7f6"]
    assert report.summary["total"] >= 1
    assert report.all_passed, [c for c in report.checks if not c.passed]


def test_representation_consistency_skips_7f6():
    report = verify_representation_consistency(make_point(0.1, 0.2, 0.3, 0.9, 0.5, 0.5, 1.5))
    assert [check.name for check in report.checks] == ["series vs barnes"]


def test_eq_530():
    check = verify_eq_530(0.5, 0.6, 0.7, 2.5, 1.8)
    assert check.passed


def test_eq_530_needs_convergent_sides():
    with pytest.raises(DomainError):
        verify_eq_530(0.5, 0.6, 0.7, 0.4, 3.0)
    with pytest.raises(DomainError):
        verify_eq_530(0.5, 0.6, 0.7, 1.0, 0.7)


def test_thomae():
    check = verify_thomae(1.6, 0.4, 0.7, 3.4, 1.2)
    assert check.passed


def test_thomae_self_map_is_exact():
    b, f, g = 0.5, 1.5, 1.75
    check = verify_thomae(b, f - b, g - b, f, g)
    assert check.abs_diff == 0.0


def test_thomae_needs_positive_b():
    with pytest.raises(DomainError):
        verify_thomae(-0.5, 0.4, 0.7, 3.4, 1.2)


@pytest.mark.parametrize(
    "n, b, c, d, f, g",
    [
        (0, "1/2", "1/3", "1/4", "7/5", "5/3"),
        (3, "1/2", "1/3", "1/4", "7/5", "5/3"),
        (6, "-3/7", "2/9", "5/4", "11/6", "-1/3"),
    ],
)
def test_bailey_exact(n, b, c, d, f, g):
    check = verify_bailey(n, *(Fraction(x) for x in (b, c, d, f, g)))
    assert check.passed
    assert check.abs_diff == 0.0
    assert "==" in check.exact


def test_bailey_rejects_large_n():
    with pytest.raises(DomainError):
        verify_bailey(13, 1, 2, 3, 4, 5)


def test_substitution_maps():
    assert eq530_parameters(BASE_FORMS) == ("b", "g-c", "g-d", "f+g-c-d", "g")
    assert thomae_parameters(BASE_FORMS) == ("f-b", "g-b", "f+g-b-c-d", "f+g-b-d", "f+g-b-c")
    twice = thomae_parameters(thomae_parameters(BASE_FORMS))
    assert normalize_forms(twice) == normalize_forms(eq530_parameters(BASE_FORMS))
    assert verify_substitution_compositions().all_passed


def test_reflection_residual():
    check = verify_reflection(1000, seed=1)
    assert check.passed
    assert check.abs_diff <= 1e-10 * math.pi


@pytest.mark.parametrize("eps", [0.1, 0.3, 0.5])
def test_sine_bound(eps):
    assert verify_sine_bound(eps, 1000, seed=1).passed


@pytest.mark.parametrize("which", ["barnes1", "barnes2", "eq530", "thomae", "kernel"])
def test_classical_suites(which):
    report = run_classical_suite(which, seed=3, n_instances=3)
    assert report.summary["total"] >= 3
    assert report.all_passed, [c for c in report.checks if not c.passed]


def test_bailey_suite_seed_7():
    report = run_classical_suite("bailey", seed=7)
    assert report.summary["total"] == 100
    assert report.all_passed


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_bailey_suite_many_seeds(seed):
    assert run_classical_suite("bailey", seed=seed).all_passed


def test_unknown_suite():
    with pytest.raises(UnknownLabel):
        run_classical_suite("gosper")


def test_report_to_json_uses_pass_key():
    report = VerificationReport(checks=[Check.compare("x", 1.0, 1.0, 0.0), Check.failure("y", "boom", 1e-6)])
    data = json.loads(report_to_json(report))
    assert data["summary"] == {"total": 2, "passed": 1, "failed": 1}
    assert data["checks"][0]["pass"] is True
    assert data["checks"][1]["reason"] == "boom"
