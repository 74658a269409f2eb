#!/usr/bin/env python3
"""
Tests for the relation catalog: display forms, export and import
"""

import io
import json
from fractions import Fraction

import pytest

from saalschutz_l.errors import CatalogIOError
from saalschutz_l.group_engine import find_element, generate_group, class_representatives
from saalschutz_l.relation_catalog import (
    affine_display,
    build_catalog,
    class_relations,
    evaluate_affine,
    export_catalog,
    format_relation,
    load_catalog,
    parameter_list,
    parse_affine,
    relation_for,
    render_catalog,
    render_linear,
)
from saalschutz_l.schemas import TEMPLATE_IDS

# a rational point of e+f+g-a-b-c-d = 1
_A, _B, _C, _D, _E, _F = (Fraction(1, 10), Fraction(2, 7), Fraction(1, 3), Fraction(3, 11), Fraction(2, 9), Fraction(5, 13))
POINT = (_A, _B, _C, _D, _E, _F, 1 + _A + _B + _C + _D - _E - _F)


@pytest.mark.parametrize(
    "row, expected",
    [
        ((1, 0, 0, 0, 0, 0, 0), "a"),
        ((0, 0, -1, 0, 0, 0, 1), "g-c"),
        ((0, 0, -1, -1, 1, 0, 1), "1+a+b-f"),
        ((-1, -1, -1, -1, 0, 2, 1), "1+f-e"),
        ((1, 1, 1, 1, -2, -2, -2), "a+b+c+d-2e-2f-2g"),
        ((0, 0, 0, 0, -1, 0, 0), "-e"),
    ],
)
def test_affine_display(row, expected):
    assert affine_display(row) == expected


def test_render_linear_ordering():
    assert render_linear(1, (1, 0, 0, 1, -1, 0, 0)) == "1+a+d-e"
    assert render_linear(0, (0, -1, 0, 0, 0, 0, 1)) == "g-b"
    assert render_linear(-1, (0, 0, 0, 0, 0, 2, 0)) == "2f-1"
    assert render_linear(0, (0,) * 7) == "0"


@pytest.mark.parametrize("text", ["1+a+b-f", "2-e", "g-a", "1+g-b-c", "2f-1", "a"])
def test_parse_affine_inverts_render(text):
    assert render_linear(*parse_affine(text)) == text


@pytest.mark.parametrize("text", ["", "1+a+-b", "x", "a*b"])
def test_parse_affine_errors(text):
    with pytest.raises(CatalogIOError):
        parse_affine(text)


@pytest.mark.parametrize("template_id", TEMPLATE_IDS)
def test_representatives_reproduce_printed_relations(template_id):
    _, matrix = class_representatives()[template_id]
    relation = relation_for(find_element(matrix))
    assert relation.template_id == template_id
    assert parameter_list(relation.target_params) == class_relations()[template_id]


def test_class_relations_cover_every_template():
    relations = class_relations()
    assert list(relations) == list(TEMPLATE_IDS)
    relations["I"] = "changed"
    assert class_relations()["I"] != "changed"


def test_catalog_covers_the_group():
    catalog = build_catalog()
    assert len(catalog) == len(generate_group()) == 1920
    counts = {tid: sum(1 for rel in catalog if rel.template_id == tid) for tid in TEMPLATE_IDS}
    assert counts == {"I": 48, "II": 576, "III": 576, "IV": 576, "V": 96, "VI": 48}
    assert [rel.template_id for rel in catalog] == sorted((rel.template_id for rel in catalog), key=TEMPLATE_IDS.index)


def test_display_constants_never_exceed_two():
    for rel in build_catalog():
        for form in rel.target_params:
            constant, _ = parse_affine(form)
            assert 0 <= constant <= 2


def test_display_forms_agree_with_matrices_on_the_hyperplane():
    for rel in build_catalog()[::7]:
        for row, form in zip(rel.element.matrix, rel.target_params):
            direct = sum(entry * x for entry, x in zip(row, POINT))
            assert evaluate_affine(form, POINT) == direct


def test_format_relation():
    relation = relation_for(find_element(class_representatives()["II"][1]))
    assert format_relation(relation) == "L[a,b,c,d;e;f,g] = L[a,b,g-c,g-d;1+a+b-f;1+a+b-e,g]"


def test_export_and_load_round_trip(tmp_path):
    path = tmp_path / "catalog.json"
    rendered = export_catalog("json", path)
    records = load_catalog(path)
    assert len(records) == 1920
    assert json.loads(rendered)[0]["template"] == "I"
    assert records[0].params["a'"] == "a"


def test_export_is_deterministic():
    assert export_catalog("text") == export_catalog("text")


def test_export_to_file_object():
    buffer = io.StringIO()
    export_catalog("text", buffer)
    lines = buffer.getvalue().splitlines()
    assert len(lines) == 1920
    assert lines[0] == "L[a,b,c,d;e;f,g] = L[a,b,c,d;e;f,g]"


def test_unknown_format():
    with pytest.raises(CatalogIOError):
        render_catalog(build_catalog()[:1], "yaml")


def test_load_catalog_rejects_malformed_files(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('[{"word": "I", "matrix": [[1]], "template": "I", "params": {}}]', encoding="utf-8")
    with pytest.raises(CatalogIOError):
        load_catalog(path)
    with pytest.raises(CatalogIOError):
        load_catalog(tmp_path / "missing.json")
