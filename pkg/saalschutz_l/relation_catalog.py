"""
Invariance relations of L rendered as parameter substitutions.

Each group element M gives L(x) = L(Mx). Row i of M is a linear form in
(a,...,g); on V the constant 1 equals e+f+g-a-b-c-d, so a row is shown as
k + (row - k phi).(a,...,g) for the k in {0,1,2} giving the shortest form.
"""

import json
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, TextIO, Tuple, Union

from pydantic import TypeAdapter, ValidationError

from .errors import CatalogIOError
from .group_engine import (
    GENERATOR_LABELS,
    HYPERPLANE_FUNCTIONAL,
    generate_group,
    template_of,
)
from .schemas import PARAMETER_NAMES, TEMPLATE_IDS, GroupElement, Relation, RelationRecord

logger = logging.getLogger(__name__)

CatalogFormat = Literal["json", "text"]
MAX_SHIFT = 2

# the printed parameter lists of the six relation types, in (a,b,c,d;e;f,g) layout
CLASS_RELATIONS: Dict[str, str] = {
    "I": "a,b,c,d;e;f,g",
    "II": "a,b,g-c,g-d;1+a+b-f;1+a+b-e,g",
    "III": "1+a-e,g-c,a,f-c;1+a-c;1+a+b-e,1+a+d-e",
    "IV": "1+d-e,1+a-e,g-c,g-b;1+g-b-c;1+a+d-e,1+g-e",
    "V": "g-a,g-b,g-c,g-d;1+g-f;1+g-e,g",
    "VI": "1+c-e,1+d-e,1+a-e,1+b-e;2-e;1+g-e,1+f-e",
}

_TERM = re.compile(r"([+-])(\d*)([a-g]?)")


def _shift(row: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    best = None
    for k in range(MAX_SHIFT + 1):
        rest = tuple(r - k * p for r, p in zip(row, HYPERPLANE_FUNCTIONAL))
        norm = sum(abs(x) for x in rest)
        if best is None or norm < best[0]:
            best = (norm, k, rest)
    return best[1], best[2]


def render_linear(constant: int, coeffs: Sequence[int]) -> str:
    """constant, then positive terms, then negative terms, in variable order"""

    def term(coeff: int, name: str) -> str:
        size = abs(coeff)
        return (str(size) if size != 1 else "") + name

    leading = [str(constant)] if constant > 0 else []
    positives = [term(c, n) for c, n in zip(coeffs, PARAMETER_NAMES) if c > 0]
    negatives = [term(c, n) for c, n in zip(coeffs, PARAMETER_NAMES) if c < 0]
    if constant < 0:
        negatives.append(str(-constant))
    text = "+".join(leading + positives)
    if negatives:
        text += "-" + "-".join(negatives)
    return text or "0"


def affine_display(row: Sequence[int]) -> str:
    """Render a matrix row in the shortest constant-bearing form, e.g. "1+a+b-f" """
    return render_linear(*_shift(row))


def parse_affine(text: str) -> Tuple[int, Tuple[int, ...]]:
    """Inverse of affine_display: (constant, coefficients over a..g)"""
    src = re.sub(r"\s+", "", text).replace("−", "-")
    if not src:
        raise CatalogIOError("empty affine form")
    if src[0] not in "+-":
        src = "+" + src
    constant = 0
    coeffs = [0] * len(PARAMETER_NAMES)
    pos = 0
    while pos < len(src):
        match = _TERM.match(src, pos)
        if not match or match.end() == pos + 1:
            raise CatalogIOError(f"cannot parse affine form {text!r} at position {pos}")
        sign = -1 if match.group(1) == "-" else 1
        digits, name = match.group(2), match.group(3)
        if name:
            coeffs[PARAMETER_NAMES.index(name)] += sign * (int(digits) if digits else 1)
        else:
            constant += sign * int(digits)
        pos = match.end()
    return constant, tuple(coeffs)


def evaluate_affine(text: str, point: Sequence[Union[complex, Fraction]]):
    """Value of an affine form at (a,...,g); exact for Fraction points"""
    constant, coeffs = parse_affine(text)
    total = constant
    for c, x in zip(coeffs, point):
        if c:
            total = total + c * x
    return total


def relation_for(g: GroupElement) -> Relation:
    params = tuple(affine_display(row) for row in g.matrix)
    return Relation(element=g, target_params=params, template_id=template_of(g.matrix))


def parameter_list(params: Sequence[str]) -> str:
    """Seven forms in the "a,b,c,d;e;f,g" layout"""
    return f"{','.join(params[:4])};{params[4]};{','.join(params[5:])}"


def format_relation(rel: Relation) -> str:
    return f"L[{parameter_list(PARAMETER_NAMES)}] = L[{parameter_list(rel.target_params)}]"


def class_relations() -> Dict[str, str]:
    return dict(CLASS_RELATIONS)


def _sort_key(rel: Relation):
    word = rel.element.word
    return (TEMPLATE_IDS.index(rel.template_id), len(word), tuple(GENERATOR_LABELS.index(w) for w in word))


def build_catalog() -> List[Relation]:
    """Relations for all group elements, sorted by (template, word length, word)"""
    return sorted((relation_for(g) for g in generate_group()), key=_sort_key)


def render_catalog(relations: Sequence[Relation], fmt: CatalogFormat = "json") -> str:
    if fmt == "json":
        return json.dumps([rel.to_record() for rel in relations], indent=2) + "\n"
    if fmt == "text":
        return "".join(format_relation(rel) + "\n" for rel in relations)
    raise CatalogIOError(f"unknown catalog format {fmt!r}")


def export_catalog(fmt: CatalogFormat = "json", destination: Optional[Union[str, Path, TextIO]] = None) -> str:
    """Write the full catalog to ``destination`` (path or open file); returns the rendered text"""
    relations = build_catalog()
    rendered = render_catalog(relations, fmt)
    if destination is None:
        return rendered
    try:
        if hasattr(destination, "write"):
            destination.write(rendered)
        else:
            Path(destination).write_text(rendered, encoding="utf-8")
    except OSError as exc:
        raise CatalogIOError(f"failed to write catalog to {destination}: {exc}") from exc
    logger.info("catalog exported: %d relations (%s) to %s", len(relations), fmt, destination)
    return rendered


_RECORDS = TypeAdapter(List[RelationRecord])


def load_catalog(path: Union[str, Path]) -> List[RelationRecord]:
    """Read a JSON catalog back, validating every record"""
    try:
        raw = Path(path).read_text(encoding="utf-8")
        return _RECORDS.validate_json(raw)
    except OSError as exc:
        raise CatalogIOError(f"failed to read catalog {path}: {exc}") from exc
    except ValidationError as exc:
        raise CatalogIOError(f"catalog {path} is malformed: {exc}") from exc
