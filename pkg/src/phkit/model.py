"""Core data model for predicate-head annotation.

A document is an ordered list of labeling units: manually segmented
sentences or clauses. Each unit stores its plain text plus a flat,
non-overlapping sequence of typed elements. All offsets are Unicode
codepoint offsets into the unit text; the markup characters of the inline
serialization (brackets, tags, parentheses, separators) never appear in
the text itself.

Every type here is an immutable value: safe to share between threads and
usable as a dict key where hashable fields allow.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class ModelError(ValueError):
    """A constructed object violates a model invariant."""


class ElementType(str, enum.Enum):
    PRE = "PRE"  # predicate head
    SUB = "SUB"  # subject element
    TEM = "TEM"  # temporal element
    LOC = "LOC"  # locational element
    ADV = "ADV"  # adverbial element
    COM = "COM"  # complemental element
    UNC = "UNC"  # unclear unit; annotation covers the whole sentence
    RAI = "RAI"  # legacy tag accepted on input; validation suggests COM


class PredicatePattern(str, enum.Enum):
    """Structural pattern of a predicate head (PRE elements only)."""

    SINGLETON = "S"
    REDUPLICATED = "R"
    COORDINATED = "L"
    MODIFIED = "M"
    SPECIFIC = "V"


class ElementForm(str, enum.Enum):
    """Composition of a non-predicate element: word, phrase, or clause."""

    WORD = "W"
    PHRASE = "P"
    CLAUSE = "C"


#: Element kinds that carry a form postfix (everything except PRE and UNC).
FORM_KINDS = frozenset(
    {
        ElementType.SUB,
        ElementType.TEM,
        ElementType.LOC,
        ElementType.ADV,
        ElementType.COM,
        ElementType.RAI,
    }
)

# Characters that cannot occur in unit text: the model is line-based and
# exported to tab-separated columns, so line breaks and tabs are reserved.
_FORBIDDEN_TEXT_CHARS = ("\n", "\r", "\t")


@dataclass(frozen=True, slots=True)
class Span:
    """Half-open codepoint interval [start, end); always non-empty."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end):
            raise ModelError(f"invalid span [{self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def overlaps(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end

    def contains(self, other: "Span") -> bool:
        return self.start <= other.start and other.end <= self.end


@dataclass(frozen=True, slots=True)
class Segment:
    """A contiguous stretch of element content with an optional head.

    The head marks the core word of the segment. It must be a proper
    sub-span: inside the segment and strictly smaller than it.
    """

    span: Span
    head: Span | None = None

    def __post_init__(self) -> None:
        if self.head is not None:
            if not self.span.contains(self.head) or len(self.head) >= len(self.span):
                raise ModelError(
                    f"head {self.head} is not strictly inside segment {self.span}"
                )


@dataclass(frozen=True, slots=True)
class Element:
    """One annotated element of a labeling unit.

    An element is a body segment, optionally preceded by a trigger segment
    (the preposition or verb introducing it). When a trigger is present the
    two segments are adjacent; the boundary between them is where the "-"
    separator sits in the inline serialization. The separator is markup,
    not text, so it occupies no codepoints.

    Tag compatibility: PRE carries a pattern and no form; UNC carries
    neither; every other kind carries a form and no pattern.
    """

    kind: ElementType
    body: Segment
    trigger: Segment | None = None
    pattern: PredicatePattern | None = None
    form: ElementForm | None = None

    def __post_init__(self) -> None:
        if self.kind is ElementType.PRE:
            if self.pattern is None or self.form is not None:
                raise ModelError("PRE elements take a pattern and no form")
        elif self.kind is ElementType.UNC:
            if self.pattern is not None or self.form is not None:
                raise ModelError("UNC elements take neither pattern nor form")
        else:
            if self.form is None or self.pattern is not None:
                raise ModelError(f"{self.kind.value} elements take a form and no pattern")
        if self.trigger is not None and self.trigger.span.end != self.body.span.start:
            raise ModelError("trigger segment must end exactly where the body begins")

    @property
    def span(self) -> Span:
        """Whole element extent: trigger (if any) plus body."""
        start = self.trigger.span.start if self.trigger else self.body.span.start
        return Span(start, self.body.span.end)

    @property
    def separator_offset(self) -> int | None:
        """Text offset of the trigger/body boundary, or None without a trigger."""
        return self.body.span.start if self.trigger is not None else None

    @property
    def tag(self) -> str:
        """Serialized tag, e.g. "PRE-S", "ADV-P", or bare "UNC"."""
        if self.pattern is not None:
            return f"{self.kind.value}-{self.pattern.value}"
        if self.form is not None:
            return f"{self.kind.value}-{self.form.value}"
        return self.kind.value


@dataclass(frozen=True, slots=True)
class LabelingUnit:
    """One segmented sentence or clause with its annotated elements.

    Element spans are pairwise disjoint and sorted by start offset.
    Characters not covered by any element are gap text (conjunctions,
    punctuation) and are preserved verbatim.
    """

    text: str
    elements: tuple[Element, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.elements, tuple):
            object.__setattr__(self, "elements", tuple(self.elements))
        for ch in _FORBIDDEN_TEXT_CHARS:
            if ch in self.text:
                raise ModelError(f"unit text may not contain {ch!r}")
        prev_end = 0
        text_len = len(self.text)
        for el in self.elements:
            start = (el.trigger or el.body).span.start
            end = el.body.span.end
            if start < prev_end:
                raise ModelError(
                    f"element spans overlap or are out of order at [{start}, {end})"
                )
            if end > text_len:
                raise ModelError(
                    f"element span [{start}, {end}) exceeds text length {text_len}"
                )
            prev_end = end


@dataclass(frozen=True, slots=True)
class Document:
    """An ordered collection of labeling units with optional metadata.

    ``metadata`` holds raw comment lines (each starting with "#"). The
    document id is kept separately; when the id is empty, no metadata line
    may start with "#id:" or the id could not survive a round trip through
    the inline format.
    """

    id: str = ""
    metadata: tuple[str, ...] = ()
    units: tuple[LabelingUnit, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.metadata, tuple):
            object.__setattr__(self, "metadata", tuple(self.metadata))
        if not isinstance(self.units, tuple):
            object.__setattr__(self, "units", tuple(self.units))
        if self.id != self.id.strip() or "\n" in self.id or "\r" in self.id:
            raise ModelError(f"invalid document id {self.id!r}")
        for line in self.metadata:
            if not line.startswith("#") or "\n" in line or "\r" in line:
                raise ModelError(f"metadata line must be a single '#' comment: {line!r}")
            if not self.id and line.startswith("#id:"):
                raise ModelError("metadata '#id:' line conflicts with an empty document id")
        for unit in self.units:
            if not unit.text:
                raise ModelError("documents cannot contain units with empty text")
            if unit.text.startswith("#") and (
                not unit.elements or unit.elements[0].span.start > 0
            ):
                # Such a unit would serialize to a line starting with "#",
                # which the inline format reserves for metadata.
                raise ModelError("unit text may not start with '#' outside an element")


def unit_surface(unit: LabelingUnit) -> str:
    """Return the unit's plain text (the anchor for reconstruction checks)."""
    return unit.text


def span_surface(unit: LabelingUnit, span: Span) -> str:
    """Return the codepoints of ``unit.text`` covered by ``span``."""
    if span.end > len(unit.text):
        raise ModelError(f"span {span} out of bounds for unit of length {len(unit.text)}")
    return unit.text[span.start : span.end]


def element_surface(unit: LabelingUnit, element: Element) -> str:
    """Return the codepoints of ``unit.text`` covered by ``element``."""
    return span_surface(unit, element.span)
