"""
Pydantic schemas shared across saalschutz_l
"""

import cmath
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    ValidationInfo,
    computed_field,
    field_validator,
    model_validator,
)

from .config import DEFAULT_SETTINGS, Settings
from .errors import DomainError, HyperplaneError, SpecError
from .gamma_core import distance_to_integers, distance_to_nonpositive_integers


def parse_complex(text: str) -> complex:
    """Parse "re" or "re+imi" (an "i" or "j" suffix marks the imaginary part)"""
    cleaned = text.strip().replace(" ", "").replace("i", "j").replace("J", "j")
    if not cleaned:
        raise ValueError("empty complex literal")
    try:
        return complex(cleaned)
    except ValueError:
        raise ValueError(f"not a complex literal: {text!r}")


def format_complex(z: complex, digits: int = 17) -> str:
    """Inverse of parse_complex, printing with the requested significant digits"""
    re_part = f"{z.real:.{digits}g}"
    if z.imag == 0:
        return re_part
    sign = "+" if z.imag >= 0 else "-"
    return f"{re_part}{sign}{abs(z.imag):.{digits}g}i"


def _to_complex(value: Any) -> complex:
    if isinstance(value, bool):
        raise ValueError("booleans are not complex values")
    if isinstance(value, str):
        z = parse_complex(value)
    elif isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError("complex pairs must be [re, im]")
        z = complex(float(value[0]), float(value[1]))
    else:
        try:
            z = complex(value)
        except TypeError:
            raise ValueError(f"cannot interpret {value!r} as a complex number")
    if not cmath.isfinite(z):
        raise ValueError(f"complex value must be finite, got {z!r}")
    return z


def _to_fraction(value: Any) -> Fraction:
    if isinstance(value, bool):
        raise ValueError("booleans are not rational values")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a rational literal: {value!r}")
    raise ValueError(f"cannot interpret {value!r} as a rational number")


ComplexValue = Annotated[
    complex,
    BeforeValidator(_to_complex),
    PlainSerializer(lambda z: [z.real, z.imag], return_type=list),
]

RationalValue = Annotated[
    Fraction,
    BeforeValidator(_to_fraction),
    PlainSerializer(lambda q: f"{q.numerator}/{q.denominator}", return_type=str),
]

MethodTag = Literal["direct", "extrapolated", "terminating-exact", "barnes"]
TemplateId = Literal["I", "II", "III", "IV", "V", "VI"]
GeneratorLabel = Literal["s12", "s23", "s34", "s67", "A"]

TEMPLATE_IDS: Tuple[str, ...] = ("I", "II", "III", "IV", "V", "VI")
PARAMETER_NAMES: Tuple[str, ...] = ("a", "b", "c", "d", "e", "f", "g")


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


# Series schemas
class SeriesSpec(_Frozen):
    numerator_params: List[ComplexValue] = Field(..., description="a_1 ... a_{p+1}")
    denominator_params: List[ComplexValue] = Field(default_factory=list, description="b_1 ... b_p")
    argument: ComplexValue = Field(1, description="z")

    @model_validator(mode="after")
    def validate_shape(self):
        if len(self.numerator_params) != len(self.denominator_params) + 1:
            raise SpecError(
                f"need one more numerator than denominator parameter, got "
                f"{len(self.numerator_params)} and {len(self.denominator_params)}"
            )
        for i, b in enumerate(self.denominator_params):
            if distance_to_nonpositive_integers(b) <= DEFAULT_SETTINGS.pole_tolerance:
                raise SpecError(f"denominator parameter b_{i + 1} = {b} is a nonpositive integer")
        return self


class RationalSeriesSpec(_Frozen):
    numerator_params: List[RationalValue]
    denominator_params: List[RationalValue] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_shape(self):
        if len(self.numerator_params) != len(self.denominator_params) + 1:
            raise SpecError("need one more numerator than denominator parameter")
        return self

    def terminating_index(self) -> Optional[int]:
        """Smallest n with -n among the numerator parameters, if any"""
        candidates = [-q for q in self.numerator_params if q.denominator == 1 and q <= 0]
        return int(min(candidates)) if candidates else None


class SeriesClassification(_Frozen):
    terminating: bool
    saalschutzian: bool
    well_poised: bool
    very_well_poised: bool
    converges_at_unit: bool
    excess: ComplexValue


class EvalResult(_Frozen):
    value: ComplexValue
    abs_error_estimate: float = Field(..., ge=0)
    method: MethodTag
    work: int = Field(..., ge=0, description="Terms summed or quadrature nodes used")
    evaluator: Optional[Literal["series", "7f6", "barnes"]] = None


# L function schemas
class ParameterPoint(_Frozen):
    """A point of V = {e+f+g-a-b-c-d = 1} where L is defined.

    Validation honours ``context={"settings": Settings(...)}``.
    """

    a: ComplexValue
    b: ComplexValue
    c: ComplexValue
    d: ComplexValue
    e: ComplexValue
    f: ComplexValue
    g: ComplexValue

    @model_validator(mode="after")
    def validate_domain(self, info: ValidationInfo):
        settings: Settings = (info.context or {}).get("settings", DEFAULT_SETTINGS)
        a, b, c, d, e, f, g = self.as_tuple()
        residual = e + f + g - a - b - c - d - 1
        if abs(residual) > settings.hyperplane_tolerance:
            raise HyperplaneError(f"e+f+g-a-b-c-d-1 = {residual} is not zero")
        if distance_to_integers(e) < settings.e_integer_gap:
            raise DomainError(f"e = {e} is within {settings.e_integer_gap} of an integer (sin(pi e) = 0)")
        denominators = {
            "e": e,
            "f": f,
            "g": g,
            "1+f-e": 1 + f - e,
            "1+g-e": 1 + g - e,
            "2-e": 2 - e,
        }
        for name, value in denominators.items():
            if distance_to_nonpositive_integers(value) <= settings.hyperplane_tolerance:
                raise DomainError(f"{name} = {value} is a nonpositive integer")
        return self

    def as_tuple(self) -> Tuple[complex, ...]:
        return (self.a, self.b, self.c, self.d, self.e, self.f, self.g)


# Barnes integral schemas
class BarnesIntegrand(_Frozen):
    """Gamma^eps(a_i + t) factors (plus) and Gamma^eps(b_j - t) factors (minus)"""

    plus_offsets: List[Tuple[ComplexValue, Literal[1, -1]]] = Field(default_factory=list)
    minus_offsets: List[Tuple[ComplexValue, Literal[1, -1]]] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_pole_families(self):
        tol = DEFAULT_SETTINGS.integer_pair_tolerance
        for a, sa in self.plus_offsets:
            for b, sb in self.minus_offsets:
                if sa == 1 and sb == 1 and distance_to_integers(a + b) <= tol:
                    raise DomainError(f"a_i + b_j = {a + b} is an integer: pole families collide")
        return self

    @property
    def n_up(self) -> int:
        return sum(1 for _, s in self.plus_offsets + self.minus_offsets if s == 1)

    @property
    def n_down(self) -> int:
        return sum(1 for _, s in self.plus_offsets + self.minus_offsets if s == -1)


class IdentityReport(_Frozen):
    lhs: ComplexValue
    rhs: ComplexValue
    abs_diff: float
    lhs_error_estimate: float = 0.0


# Group schemas
Matrix = Tuple[Tuple[int, ...], ...]


class GroupElement(_Frozen):
    matrix: Matrix
    word: Tuple[GeneratorLabel, ...] = ()

    @field_validator("matrix")
    @classmethod
    def validate_matrix(cls, v):
        if len(v) != 7 or any(len(row) != 7 for row in v):
            raise ValueError("group elements are 7x7 integer matrices")
        return v

    def word_text(self) -> str:
        return format_word(self.word)


GENERATOR_TEXT: Dict[str, str] = {"s12": "(12)", "s23": "(23)", "s34": "(34)", "s67": "(67)", "A": "A"}


def format_word(word) -> str:
    """Compact rendering of a generator word; the empty word is "I" """
    if not word:
        return "I"
    return "".join(GENERATOR_TEXT[label] for label in word)


class DoubleCosetClass(_Frozen):
    representative: GroupElement
    size: int = Field(..., gt=0)
    template_id: TemplateId
    class_word: str
    members: Tuple[Matrix, ...] = Field(default=(), repr=False)


class Relation(_Frozen):
    element: GroupElement
    target_params: Tuple[str, str, str, str, str, str, str]
    template_id: TemplateId

    def to_record(self) -> Dict[str, Any]:
        return {
            "word": self.element.word_text(),
            "matrix": [list(row) for row in self.element.matrix],
            "template": self.template_id,
            "params": {f"{name}'": form for name, form in zip(PARAMETER_NAMES, self.target_params)},
        }


class RelationRecord(BaseModel):
    """One exported catalog line, as read back from JSON"""

    word: str
    matrix: List[List[int]]
    template: TemplateId
    params: Dict[str, str]

    @field_validator("matrix")
    @classmethod
    def validate_matrix(cls, v):
        if len(v) != 7 or any(len(row) != 7 for row in v):
            raise ValueError("matrix must be 7x7")
        return v

    @field_validator("params")
    @classmethod
    def validate_params(cls, v):
        expected = {f"{name}'" for name in PARAMETER_NAMES}
        if set(v) != expected:
            raise ValueError(f"params must have exactly the keys {sorted(expected)}")
        return v


# Verification schemas
class SampleConstraints(_Frozen):
    e_integer_gap: float = Field(1e-3, gt=0)
    contour_gap_min: float = Field(0.05, gt=0)
    convergence_margin: float = Field(1.5, gt=0)
    magnitude_cap: float = Field(2.0, ge=0)
    seed: int = 0
    complex_points: bool = False
    require_contour: bool = True


class Check(BaseModel):
    name: str
    point: List[ComplexValue] = Field(default_factory=list)
    lhs: Optional[ComplexValue] = None
    rhs: Optional[ComplexValue] = None
    abs_diff: Optional[float] = None
    tol: float = Field(..., ge=0)
    passed: bool = Field(False, serialization_alias="pass")
    reason: Optional[str] = None
    exact: Optional[str] = None

    @model_validator(mode="after")
    def validate_verdict(self):
        expected = self.abs_diff is not None and self.abs_diff <= self.tol
        if self.passed != expected:
            raise ValueError(f"pass flag {self.passed} contradicts abs_diff={self.abs_diff}, tol={self.tol}")
        return self

    @classmethod
    def compare(cls, name: str, lhs: complex, rhs: complex, tol: float, point=()) -> "Check":
        diff = abs(complex(lhs) - complex(rhs))
        if diff != diff:
            return cls.failure(name, "comparison produced NaN", tol, point)
        return cls(name=name, point=list(point), lhs=lhs, rhs=rhs, abs_diff=diff, tol=tol, passed=diff <= tol)

    @classmethod
    def failure(cls, name: str, reason: str, tol: float, point=()) -> "Check":
        return cls(name=name, point=list(point), tol=tol, passed=False, reason=reason)


class VerificationReport(BaseModel):
    checks: List[Check] = Field(default_factory=list)

    @computed_field
    @property
    def summary(self) -> Dict[str, int]:
        passed = sum(1 for check in self.checks if check.passed)
        return {"total": len(self.checks), "passed": passed, "failed": len(self.checks) - passed}

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks)


class CoxeterReport(BaseModel):
    """Outcome of checking (a_i a_j)^m_ij = 1 over the D5 diagram"""

    nodes: Tuple[str, ...]
    orders: Dict[str, int] = Field(default_factory=dict, description="'i,j' -> m_ij for every ordered pair")
    ok: bool = True
