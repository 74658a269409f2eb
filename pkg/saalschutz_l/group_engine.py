"""
The invariance group of L as exact 7x7 integer matrices.

Matrices act on column vectors (a,b,c,d,e,f,g). A permutation sigma of the
coordinates is the matrix P with P e_j = e_sigma(j). The group is generated
by (12), (23), (34), (67) and the matrix A of the fundamental two-term
relation; it is the Coxeter group W(D5) of order 1920.
"""

import logging
import re
import time
from collections import OrderedDict
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from .errors import ClosureOverflow, PartitionError, PresentationFailure, UnknownLabel
from .schemas import CoxeterReport, DoubleCosetClass, GroupElement, Matrix

logger = logging.getLogger(__name__)

SIZE = 7
GROUP_ORDER = 1920
SIGMA_ORDER = 48
COSET_SIZES = (48, 576, 576, 576, 96, 48)
MAX_ELEMENTS = 10**5
HYPERPLANE_FUNCTIONAL = (-1, -1, -1, -1, 1, 1, 1)

GENERATOR_LABELS: Tuple[str, ...] = ("s12", "s23", "s34", "s67", "A")
LABEL_ALIASES = {"(12)": "s12", "(23)": "s23", "(34)": "s34", "(67)": "s67", "a": "A"}

A_MATRIX: Matrix = (
    (1, 0, 0, 0, 0, 0, 0),
    (0, 1, 0, 0, 0, 0, 0),
    (0, 0, -1, 0, 0, 0, 1),
    (0, 0, 0, -1, 0, 0, 1),
    (0, 0, -1, -1, 1, 0, 1),
    (0, 0, -1, -1, 0, 1, 1),
    (0, 0, 0, 0, 0, 0, 1),
)

# representative words of the six double cosets
CLASS_WORDS = OrderedDict(
    [
        ("I", "I"),
        ("II", "A"),
        ("III", "((123)(67)A)^2"),
        ("IV", "((123)(67)A)^3"),
        ("V", "((123)A)^3"),
        ("VI", "((123)(67)A)^4"),
    ]
)

# D5 diagram: 1 - 2 - 3 - 4 with 1' hanging off 2
COXETER_NODES: Tuple[str, ...] = ("1", "2", "3", "4", "1'")
COXETER_EDGES = {frozenset(("1", "2")), frozenset(("2", "3")), frozenset(("3", "4")), frozenset(("1'", "2"))}

MatrixLike = Union[Matrix, GroupElement]


def _as_matrix(x: MatrixLike) -> Matrix:
    return x.matrix if isinstance(x, GroupElement) else tuple(tuple(int(v) for v in row) for row in x)


def identity() -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(SIZE)) for i in range(SIZE))


def is_identity(m: MatrixLike) -> bool:
    return _as_matrix(m) == identity()


def multiply(x: MatrixLike, y: MatrixLike) -> Matrix:
    x, y = _as_matrix(x), _as_matrix(y)
    n = len(y[0])
    out = []
    for row in x:
        acc = [0] * n
        for k, entry in enumerate(row):
            if entry:
                yk = y[k]
                for j in range(n):
                    if yk[j]:
                        acc[j] += entry * yk[j]
        out.append(tuple(acc))
    return tuple(out)


def power(m: MatrixLike, k: int) -> Matrix:
    result = identity()
    for _ in range(k):
        result = multiply(result, m)
    return result


def determinant(m: MatrixLike) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination"""
    a = [list(row) for row in _as_matrix(m)]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def permutation_matrix(cycles: Iterable[Sequence[int]]) -> Matrix:
    """Matrix of a permutation of {1..7} in cycle notation, P e_j = e_sigma(j).

    Several cycles multiply like matrices: the rightmost acts first.
    """
    result = identity()
    for cycle in cycles:
        cycle = [int(i) - 1 for i in cycle]
        if any(not 0 <= i < SIZE for i in cycle) or len(set(cycle)) != len(cycle):
            raise UnknownLabel(f"bad cycle {tuple(i + 1 for i in cycle)}")
        image = {cycle[i]: cycle[(i + 1) % len(cycle)] for i in range(len(cycle))}
        rows = [[0] * SIZE for _ in range(SIZE)]
        for j in range(SIZE):
            rows[image.get(j, j)][j] = 1
        result = multiply(result, tuple(tuple(row) for row in rows))
    return result


GENERATOR_MATRICES: Dict[str, Matrix] = {
    "s12": permutation_matrix([(1, 2)]),
    "s23": permutation_matrix([(2, 3)]),
    "s34": permutation_matrix([(3, 4)]),
    "s67": permutation_matrix([(6, 7)]),
    "A": A_MATRIX,
}


def _normalize_label(label: str) -> str:
    label = label.strip()
    label = LABEL_ALIASES.get(label, label)
    if label not in GENERATOR_MATRICES:
        raise UnknownLabel(f"unknown generator {label!r}, expected one of {', '.join(GENERATOR_LABELS)}")
    return label


def generator(label: str) -> GroupElement:
    label = _normalize_label(label)
    return GroupElement(matrix=GENERATOR_MATRICES[label], word=(label,))


# Word parser: factors are cycles "(123)", "A", "I", parenthesised words, each optionally "^k"
_SUPERSCRIPTS = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹", "0123456789")


class _WordParser:
    def __init__(self, text: str):
        self.text = text
        self.src = re.sub(r"\s+", "", text)
        self.src = re.sub(r"([⁰¹²³⁴⁵⁶⁷⁸⁹]+)", lambda m: "^" + m.group(1).translate(_SUPERSCRIPTS), self.src)
        self.pos = 0

    def error(self, message: str) -> UnknownLabel:
        return UnknownLabel(f"cannot parse word {self.text!r}: {message} at position {self.pos}")

    def peek(self) -> str:
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def parse(self) -> Matrix:
        result = self.word()
        if self.pos != len(self.src):
            raise self.error(f"unexpected {self.peek()!r}")
        return result

    def word(self) -> Matrix:
        result = identity()
        while self.peek() and self.peek() != ")":
            result = multiply(result, self.factor())
        return result

    def factor(self) -> Matrix:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            match = re.match(r"\d+", self.src[self.pos:])
            if not match:
                raise self.error("exponent expected")
            self.pos += match.end()
            base = power(base, int(match.group()))
        return base

    def atom(self) -> Matrix:
        ch = self.peek()
        if ch == "A":
            self.pos += 1
            return A_MATRIX
        if ch == "I":
            self.pos += 1
            return identity()
        if ch == "(":
            cycle = re.match(r"\((\d+)\)", self.src[self.pos:])
            if cycle:
                self.pos += cycle.end()
                return permutation_matrix([tuple(int(d) for d in cycle.group(1))])
            self.pos += 1
            inner = self.word()
            if self.peek() != ")":
                raise self.error("missing ')'")
            self.pos += 1
            return inner
        raise self.error(f"unexpected {ch!r}" if ch else "unexpected end")


def parse_word(text: str) -> Matrix:
    """Evaluate a word such as "((123)(67)A)^2", "(34)A" or "I" to its matrix"""
    if not text or not text.strip():
        raise UnknownLabel("empty word")
    return _WordParser(text).parse()


def preserves_hyperplane(g: MatrixLike) -> bool:
    """phi M = phi for the row functional phi = (-1,-1,-1,-1,1,1,1)"""
    m = _as_matrix(g)
    return all(
        sum(HYPERPLANE_FUNCTIONAL[i] * m[i][j] for i in range(SIZE)) == HYPERPLANE_FUNCTIONAL[j]
        for j in range(SIZE)
    )


@lru_cache(maxsize=1)
def generate_group() -> Tuple[GroupElement, ...]:
    """Breadth-first closure of the five generators.

    Words grow on the right in label order over a discovery-ordered frontier,
    so each element carries its lexicographically smallest shortest word.
    """
    started = time.perf_counter()
    start = identity()
    words: Dict[Matrix, Tuple[str, ...]] = {start: ()}
    frontier = [start]
    while frontier:
        next_frontier = []
        for m in frontier:
            for label in GENERATOR_LABELS:
                product = multiply(m, GENERATOR_MATRICES[label])
                if product in words:
                    continue
                words[product] = words[m] + (label,)
                next_frontier.append(product)
                if len(words) > MAX_ELEMENTS:
                    raise ClosureOverflow(f"more than {MAX_ELEMENTS} elements generated")
        frontier = next_frontier
    group = tuple(GroupElement(matrix=m, word=w) for m, w in words.items())
    logger.info("group generated: order=%d in %.2fs", len(group), time.perf_counter() - started)
    return group


@lru_cache(maxsize=1)
def _element_index() -> Dict[Matrix, GroupElement]:
    return {g.matrix: g for g in generate_group()}


def find_element(m: MatrixLike) -> GroupElement:
    """The enumerated element with this matrix (carrying its shortest word)"""
    element = _element_index().get(_as_matrix(m))
    if element is None:
        raise UnknownLabel("matrix is not an element of the group")
    return element


def element_for_word(text: str) -> GroupElement:
    return find_element(parse_word(text))


def entry_range(group: Sequence[GroupElement]) -> Tuple[int, int]:
    entries = [v for g in group for row in g.matrix for v in row]
    return min(entries), max(entries)


def _coxeter_generators() -> Dict[str, Matrix]:
    return {
        "1": GENERATOR_MATRICES["s34"],
        "2": GENERATOR_MATRICES["s23"],
        "3": multiply(GENERATOR_MATRICES["s34"], A_MATRIX),
        "4": GENERATOR_MATRICES["s67"],
        "1'": GENERATOR_MATRICES["s12"],
    }


def coxeter_order(i: str, j: str) -> int:
    if i == j:
        return 1
    return 3 if frozenset((i, j)) in COXETER_EDGES else 2


def verify_coxeter_presentation() -> CoxeterReport:
    """Check (a_i a_j)^m_ij = 1 for all 25 ordered pairs of D5 generators"""
    gens = _coxeter_generators()
    orders = {}
    for i in COXETER_NODES:
        for j in COXETER_NODES:
            m = coxeter_order(i, j)
            if not is_identity(power(multiply(gens[i], gens[j]), m)):
                raise PresentationFailure((i, j), m)
            orders[f"{i},{j}"] = m
    return CoxeterReport(nodes=COXETER_NODES, orders=orders, ok=True)


def _is_permutation(m: Matrix) -> bool:
    if any(v not in (0, 1) for row in m for v in row):
        return False
    return all(sum(row) == 1 for row in m) and all(sum(m[i][j] for i in range(SIZE)) == 1 for j in range(SIZE))


def permutation_subgroup(group: Sequence[GroupElement] = None) -> Tuple[GroupElement, ...]:
    """All 0/1 permutation matrices in the group"""
    group = generate_group() if group is None else group
    return tuple(g for g in group if _is_permutation(g.matrix))


def class_representatives() -> "OrderedDict[str, Tuple[str, Matrix]]":
    return OrderedDict((tid, (word, parse_word(word))) for tid, word in CLASS_WORDS.items())


def _double_coset_orbit(x: Matrix, sigma: Sequence[Matrix]) -> set:
    left = {multiply(s, x) for s in sigma}
    return {multiply(y, t) for y in left for t in sigma}


def double_cosets(group: Sequence[GroupElement] = None, sigma: Sequence[GroupElement] = None) -> List[DoubleCosetClass]:
    """Partition of the group into Sigma x Sigma orbits, labelled I..VI by the class words they contain"""
    group = generate_group() if group is None else group
    sigma = permutation_subgroup(group) if sigma is None else sigma
    sigma_matrices = [s.matrix for s in sigma]
    order = {g.matrix: idx for idx, g in enumerate(group)}

    orbits = []
    seen = set()
    for g in group:
        if g.matrix in seen:
            continue
        orbit = _double_coset_orbit(g.matrix, sigma_matrices)
        seen |= orbit
        orbits.append(orbit)
    if len(orbits) != len(COSET_SIZES):
        raise PartitionError(f"expected {len(COSET_SIZES)} double cosets, found {len(orbits)}")

    by_element = {g.matrix: g for g in group}
    classes = []
    used = set()
    for template_id, (word, matrix) in class_representatives().items():
        hits = [i for i, orbit in enumerate(orbits) if matrix in orbit]
        if len(hits) != 1 or hits[0] in used:
            raise PartitionError(f"word {word} does not land in its own double coset")
        used.add(hits[0])
        orbit = orbits[hits[0]]
        classes.append(
            DoubleCosetClass(
                representative=by_element[matrix],
                size=len(orbit),
                template_id=template_id,
                class_word=word,
                members=tuple(sorted(orbit, key=order.__getitem__)),
            )
        )
    sizes = sorted(c.size for c in classes)
    if sizes != sorted(COSET_SIZES) or sum(sizes) != len(group):
        raise PartitionError(f"double coset sizes {sizes} do not match {sorted(COSET_SIZES)}")
    return classes


@lru_cache(maxsize=1)
def cached_double_cosets() -> Tuple[DoubleCosetClass, ...]:
    return tuple(double_cosets())


@lru_cache(maxsize=1)
def _template_index() -> Dict[Matrix, str]:
    return {m: c.template_id for c in cached_double_cosets() for m in c.members}


def template_of(m: MatrixLike) -> str:
    template = _template_index().get(_as_matrix(m))
    if template is None:
        raise UnknownLabel("matrix is not an element of the group")
    return template


__all__ = [
    "GENERATOR_LABELS",
    "generator",
    "generate_group",
    "verify_coxeter_presentation",
    "permutation_subgroup",
    "double_cosets",
    "preserves_hyperplane",
    "parse_word",
    "permutation_matrix",
    "multiply",
    "identity",
    "is_identity",
    "determinant",
    "entry_range",
    "class_representatives",
    "find_element",
    "element_for_word",
    "template_of",
]
