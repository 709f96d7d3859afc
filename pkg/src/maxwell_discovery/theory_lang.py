"""Term alphabet, candidate theories and equation rendering."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence


class Field(str, Enum):
    E = "E"
    B = "B"


class Op(str, Enum):
    IDENTITY = "identity"
    DIV = "div"
    CURL = "curl"
    LAPLACIAN = "laplacian"
    DT = "dt"
    DTT = "dtt"


SCALAR = "scalar"
VECTOR3 = "vector3"

OP_WEIGHTS = {
    Op.IDENTITY: 1,
    Op.DIV: 4,
    Op.DT: 4,
    Op.CURL: 7,
    Op.LAPLACIAN: 7,
    Op.DTT: 7,
}

# canonical order for sorting and rendering
FIELD_ORDER = (Field.E, Field.B)
OP_ORDER = (Op.IDENTITY, Op.DIV, Op.CURL, Op.LAPLACIAN, Op.DT, Op.DTT)

# letter pairs in decoder order; first of each pair acts on E, second on B
_LETTER_OPS = (Op.IDENTITY, Op.DIV, Op.DT, Op.CURL, Op.LAPLACIAN, Op.DTT)

_OP_SYMBOL = {
    Op.IDENTITY: "{f}",
    Op.DIV: "∇·{f}",
    Op.CURL: "∇×{f}",
    Op.LAPLACIAN: "∇²{f}",
    Op.DT: "∂t {f}",
    Op.DTT: "∂tt {f}",
}


@dataclass(frozen=True)
class Term:
    """One operator applied to one field, e.g. the curl of E."""

    field: Field
    op: Op
    letter: str
    weight: int

    @property
    def rank(self) -> str:
        return SCALAR if self.op is Op.DIV else VECTOR3

    @property
    def sort_key(self) -> tuple[int, int]:
        return FIELD_ORDER.index(self.field), OP_ORDER.index(self.op)

    @property
    def symbol(self) -> str:
        return _OP_SYMBOL[self.op].format(f=self.field.value)

    def __str__(self) -> str:
        return self.letter


def _build_alphabet() -> tuple[Term, ...]:
    terms = []
    letters = iter("ABCDEFGHIJKL")
    for op in _LETTER_OPS:
        for field in FIELD_ORDER:
            terms.append(Term(field, op, next(letters), OP_WEIGHTS[op]))
    return tuple(terms)


ALPHABET: tuple[Term, ...] = _build_alphabet()
BY_LETTER: dict[str, Term] = {t.letter: t for t in ALPHABET}


def term(field: Field | str, op: Op | str) -> Term:
    field, op = Field(field), Op(op)
    for t in ALPHABET:
        if t.field is field and t.op is op:
            return t
    raise KeyError((field, op))


@dataclass(frozen=True)
class Candidate:
    """A set of unique terms hypothesised to satisfy sum(c_i * term_i) = 0.

    Terms are held in canonical order so equal sets compare equal.
    Works for any term type exposing ``weight`` and ``sort_key``.
    """

    terms: tuple

    def __init__(self, terms: Iterable):
        items = tuple(terms)
        if len(set(items)) != len(items):
            raise ValueError(f"duplicate terms in candidate: {items}")
        object.__setattr__(self, "terms", tuple(sorted(items, key=lambda t: t.sort_key)))

    @property
    def complexity(self) -> int:
        return candidate_complexity(self)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def issubset(self, other: "Candidate") -> bool:
        return set(self.terms) <= set(other.terms)

    @property
    def letters(self) -> str:
        return "".join(str(t) for t in self.terms)

    def __str__(self) -> str:
        return "{" + ", ".join(str(t) for t in self.terms) + "}"


def candidate(letters: str) -> Candidate:
    """Build a physics candidate from alphabet letters, e.g. ``candidate("GF")``."""
    return Candidate(BY_LETTER[ch] for ch in letters)


def candidate_complexity(c: Candidate) -> int:
    return sum(t.weight for t in c.terms)


def rank_homogeneous(c: Candidate) -> bool:
    return len({t.rank for t in c.terms}) <= 1


def _format_coefficient(value: float) -> str:
    return f"{value:.6g}"


def render(c: Candidate, coeffs: Sequence[float]) -> str:
    """Render a candidate with its coefficients as ``... = 0``."""
    if len(coeffs) != len(c.terms):
        raise ValueError(f"{len(coeffs)} coefficients for {len(c.terms)} terms")
    parts = []
    for i, (t, value) in enumerate(zip(c.terms, coeffs)):
        magnitude = _format_coefficient(abs(value))
        body = t.symbol if magnitude == "1" else f"{magnitude} {t.symbol}"
        if i == 0:
            parts.append(("−" if value < 0 else "") + body)
        else:
            parts.append(("− " if value < 0 else "+ ") + body)
    return " ".join(parts) + " = 0"
