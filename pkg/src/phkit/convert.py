"""Lossless conversion between the document model and storage formats.

Standoff format: one document per line as a JSON record. Field order is
fixed: ``id``, optional ``meta`` (raw comment lines), ``units`` with
``text`` and ``elements``; each element carries ``kind``, optional
``sub`` (pattern or form letter), ``start``/``end``, and the optional
trigger, trigger-head and body-head offsets. Absent optionals are
omitted entirely. All offsets are codepoint offsets into the unit text.

Column format: one row per codepoint, tab-separated into character,
boundary tag (``B-PRE-S`` / ``I-PRE-S`` / ``O``), and role flag
(``T`` trigger, ``TH`` trigger head, ``B`` body, ``H`` body head,
``O`` outside). Units are separated by a blank line; each document opens
with a ``# doc <id>`` header, followed by one ``# meta\t<line>`` row per
metadata line. The trigger/body separator has no character of its own:
it is re-derived as the boundary between the T-flagged and B-flagged
runs.

Error codes: C001 bad span geometry, C002 overlapping elements, C003
illegal kind/subtag combination, C004 malformed standoff record, C010
I-tag without a matching B, C011 role flag inconsistent with the
boundary tag, C012 bad document structure, C013 malformed column row.
"""

from __future__ import annotations

import json
from typing import Any, Iterable

from .model import (
    Document,
    Element,
    ElementForm,
    ElementType,
    LabelingUnit,
    ModelError,
    PredicatePattern,
    Segment,
    Span,
)

_KINDS = {k.value: k for k in ElementType}
_PATTERNS = {p.value: p for p in PredicatePattern}
_FORMS = {f.value: f for f in ElementForm}


class ConvertError(ValueError):
    """A record cannot be converted into a valid document."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


def _element_record(el: Element) -> dict[str, Any]:
    rec: dict[str, Any] = {"kind": el.kind.value}
    if el.pattern is not None:
        rec["sub"] = el.pattern.value
    elif el.form is not None:
        rec["sub"] = el.form.value
    sp = el.span
    rec["start"] = sp.start
    rec["end"] = sp.end
    if el.trigger is not None:
        rec["trig_start"] = el.trigger.span.start
        rec["trig_end"] = el.trigger.span.end
        if el.trigger.head is not None:
            rec["trig_head_start"] = el.trigger.head.start
            rec["trig_head_end"] = el.trigger.head.end
    if el.body.head is not None:
        rec["head_start"] = el.body.head.start
        rec["head_end"] = el.body.head.end
    return rec


def to_standoff(doc: Document) -> str:
    """Serialize one document as a single standoff JSON line (no newline)."""
    rec: dict[str, Any] = {"id": doc.id}
    if doc.metadata:
        rec["meta"] = list(doc.metadata)
    rec["units"] = [
        {"text": u.text, "elements": [_element_record(e) for e in u.elements]}
        for u in doc.units
    ]
    return json.dumps(rec, ensure_ascii=False, separators=(",", ":"))


def _require(cond: bool, code: str, message: str) -> None:
    if not cond:
        raise ConvertError(code, message)


def _get_offset(rec: dict[str, Any], key: str) -> int | None:
    value = rec.get(key)
    if value is None:
        return None
    _require(isinstance(value, int) and not isinstance(value, bool), "C004",
             f"field {key!r} must be an integer")
    return value


def _element_from_record(rec: Any, text_len: int) -> Element:
    _require(isinstance(rec, dict), "C004", "element record must be an object")
    kind_name = rec.get("kind")
    _require(isinstance(kind_name, str), "C004", "element record needs a 'kind'")
    kind = _KINDS.get(kind_name)
    _require(kind is not None, "C003", f"unknown element kind {kind_name!r}")
    sub = rec.get("sub")
    pattern = form = None
    if kind is ElementType.PRE:
        pattern = _PATTERNS.get(sub) if isinstance(sub, str) else None
        _require(pattern is not None, "C003", f"PRE requires a pattern subtag, got {sub!r}")
    elif kind is ElementType.UNC:
        _require(sub is None, "C003", "UNC takes no subtag")
    else:
        form = _FORMS.get(sub) if isinstance(sub, str) else None
        _require(form is not None, "C003",
                 f"{kind.value} requires a form subtag, got {sub!r}")

    start = _get_offset(rec, "start")
    end = _get_offset(rec, "end")
    _require(start is not None and end is not None, "C004",
             "element record needs 'start' and 'end'")
    _require(0 <= start < end <= text_len, "C001",
             f"element span [{start}, {end}) out of bounds for text of length {text_len}")

    trig_start = _get_offset(rec, "trig_start")
    trig_end = _get_offset(rec, "trig_end")
    trigger = None
    body_start = start
    if trig_start is not None or trig_end is not None:
        _require(trig_start == start, "C001", "trigger must start at the element start")
        _require(trig_end is not None and trig_start < trig_end < end, "C001",
                 "trigger must end strictly inside the element")
        trig_head = _span_pair(rec, "trig_head_start", "trig_head_end",
                               trig_start, trig_end)
        trigger = Segment(Span(trig_start, trig_end), trig_head)
        body_start = trig_end
    else:
        _require("trig_head_start" not in rec and "trig_head_end" not in rec, "C001",
                 "trigger head offsets without a trigger span")
    body_head = _span_pair(rec, "head_start", "head_end", body_start, end)
    body = Segment(Span(body_start, end), body_head)
    return Element(kind, body, trigger, pattern, form)


def _span_pair(
    rec: dict[str, Any], start_key: str, end_key: str, lo: int, hi: int
) -> Span | None:
    s = _get_offset(rec, start_key)
    e = _get_offset(rec, end_key)
    if s is None and e is None:
        return None
    _require(s is not None and e is not None, "C001",
             f"{start_key}/{end_key} must be given together")
    _require(lo <= s < e <= hi and e - s < hi - lo, "C001",
             f"head [{s}, {e}) is not strictly inside its segment [{lo}, {hi})")
    return Span(s, e)


def from_standoff(line: str) -> Document:
    """Reconstruct a document from one standoff JSON line."""
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ConvertError("C004", f"record is not valid JSON: {exc}") from None
    _require(isinstance(rec, dict), "C004", "record must be a JSON object")
    doc_id = rec.get("id", "")
    _require(isinstance(doc_id, str), "C004", "'id' must be a string")
    meta = rec.get("meta", [])
    _require(
        isinstance(meta, list) and all(isinstance(m, str) for m in meta),
        "C004",
        "'meta' must be a list of strings",
    )
    units_rec = rec.get("units", [])
    _require(isinstance(units_rec, list), "C004", "'units' must be a list")
    units = []
    for urec in units_rec:
        _require(isinstance(urec, dict), "C004", "unit record must be an object")
        text = urec.get("text")
        _require(isinstance(text, str), "C004", "unit record needs a 'text' string")
        elements_rec = urec.get("elements", [])
        _require(isinstance(elements_rec, list), "C004", "'elements' must be a list")
        elements = sorted(
            (_element_from_record(erec, len(text)) for erec in elements_rec),
            key=lambda el: el.span.start,
        )
        prev_end = 0
        for el in elements:
            _require(el.span.start >= prev_end, "C002",
                     f"element spans overlap at [{el.span.start}, {el.span.end})")
            prev_end = el.span.end
        try:
            units.append(LabelingUnit(text, tuple(elements)))
        except ModelError as exc:
            raise ConvertError("C001", str(exc)) from None
    try:
        return Document(doc_id, tuple(meta), tuple(units))
    except ModelError as exc:
        raise ConvertError("C004", str(exc)) from None


def read_standoff(text: str) -> list[Document]:
    """Parse a standoff stream: one JSON record per nonempty line."""
    return [from_standoff(line) for line in text.split("\n") if line.strip()]


def _unit_rows(unit: LabelingUnit) -> list[str]:
    n = len(unit.text)
    btags = ["O"] * n
    roles = ["O"] * n
    for el in unit.elements:
        tag = el.tag
        sp = el.span
        btags[sp.start] = "B-" + tag
        for i in range(sp.start + 1, sp.end):
            btags[i] = "I-" + tag
        if el.trigger is not None:
            tseg = el.trigger
            for i in range(tseg.span.start, tseg.span.end):
                roles[i] = "T"
            if tseg.head is not None:
                for i in range(tseg.head.start, tseg.head.end):
                    roles[i] = "TH"
        for i in range(el.body.span.start, el.body.span.end):
            roles[i] = "B"
        if el.body.head is not None:
            for i in range(el.body.head.start, el.body.head.end):
                roles[i] = "H"
    return [f"{unit.text[i]}\t{btags[i]}\t{roles[i]}" for i in range(n)]


def to_columns(doc: Document) -> str:
    """Serialize one document in the per-character column format."""
    lines: list[str] = ["# doc " + doc.id if doc.id else "# doc"]
    for meta in doc.metadata:
        lines.append("# meta\t" + meta)
    for index, unit in enumerate(doc.units):
        if index:
            lines.append("")
        lines.extend(_unit_rows(unit))
    return "\n".join(lines) + "\n"


def _parse_btag(btag: str) -> tuple[str, ElementType, PredicatePattern | None, ElementForm | None]:
    prefix, _, tag = btag.partition("-")
    kind_name, _, sub = tag.partition("-")
    kind = _KINDS.get(kind_name)
    _require(kind is not None, "C003", f"unknown element kind in tag {btag!r}")
    pattern = form = None
    if kind is ElementType.PRE:
        pattern = _PATTERNS.get(sub)
        _require(pattern is not None, "C003", f"bad PRE pattern in tag {btag!r}")
    elif kind is ElementType.UNC:
        _require(not sub, "C003", f"UNC takes no subtag: {btag!r}")
    else:
        form = _FORMS.get(sub)
        _require(form is not None, "C003", f"bad form subtag in tag {btag!r}")
    return prefix, kind, pattern, form


def _element_from_rows(
    start: int,
    kind: ElementType,
    pattern: PredicatePattern | None,
    form: ElementForm | None,
    roles: list[str],
) -> Element:
    n = len(roles)
    for r in roles:
        _require(r in ("T", "TH", "B", "H"), "C011",
                 f"role flag {r!r} inside an element")
    t_len = 0
    while t_len < n and roles[t_len] in ("T", "TH"):
        t_len += 1
    _require(
        all(r in ("B", "H") for r in roles[t_len:]),
        "C011",
        "trigger roles may not resume after the body has begun",
    )
    _require(t_len < n, "C011", "element has no body roles")

    trigger = None
    if t_len:
        head = _head_from_roles(roles[:t_len], "TH", start)
        trigger = Segment(Span(start, start + t_len), head)
    body_head = _head_from_roles(roles[t_len:], "H", start + t_len)
    body = Segment(Span(start + t_len, start + n), body_head)
    return Element(kind, body, trigger, pattern, form)


def _head_from_roles(roles: list[str], flag: str, offset: int) -> Span | None:
    positions = [i for i, r in enumerate(roles) if r == flag]
    if not positions:
        return None
    first, last = positions[0], positions[-1]
    _require(len(positions) == last - first + 1, "C011",
             f"{flag} run is not contiguous (two head groups?)")
    _require(len(positions) < len(roles), "C011",
             f"{flag} run covers its whole segment")
    return Span(offset + first, offset + last + 1)


def read_columns(text: str) -> list[Document]:
    """Parse a column-format stream into documents."""
    docs: list[Document] = []
    doc_id = ""
    meta: list[str] = []
    units: list[LabelingUnit] = []
    rows: list[tuple[str, str, str]] = []
    started = False

    def close_unit() -> None:
        nonlocal rows
        if not rows:
            return
        units.append(_unit_from_rows(rows))
        rows = []

    def close_doc() -> None:
        nonlocal doc_id, meta, units
        close_unit()
        if started:
            try:
                docs.append(Document(doc_id, tuple(meta), tuple(units)))
            except ModelError as exc:
                raise ConvertError("C012", str(exc)) from None
        doc_id = ""
        meta = []
        units = []

    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw[:-1] if raw.endswith("\r") else raw
        if not line:
            close_unit()
            continue
        if line == "# doc" or line.startswith("# doc "):
            close_doc()
            started = True
            doc_id = line[6:] if len(line) > 6 else ""
            continue
        if line.startswith("# meta\t"):
            started = True
            meta.append(line[7:])
            continue
        fields = line.split("\t")
        _require(len(fields) == 3, "C013",
                 f"line {line_no}: expected 3 tab-separated fields")
        char, btag, role = fields
        _require(len(char) == 1, "C013",
                 f"line {line_no}: first field must be a single character")
        started = True
        rows.append((char, btag, role))
    close_doc()
    return docs


def _unit_from_rows(rows: list[tuple[str, str, str]]) -> LabelingUnit:
    text = "".join(char for char, _, _ in rows)
    elements: list[Element] = []
    i = 0
    n = len(rows)
    while i < n:
        _, btag, role = rows[i]
        if btag == "O":
            _require(role == "O", "C011",
                     f"role {role!r} on an O-tagged character")
            i += 1
            continue
        _require(btag.startswith("B-"), "C010",
                 f"{btag!r} without a preceding matching B tag")
        prefix, kind, pattern, form = _parse_btag(btag)
        start = i
        tag = btag[2:]
        i += 1
        while i < n and rows[i][1] == "I-" + tag:
            i += 1
        if i < n and rows[i][1].startswith("I-"):
            _require(False, "C010",
                     f"{rows[i][1]!r} without a preceding matching B tag")
        roles = [r for _, _, r in rows[start:i]]
        elements.append(_element_from_rows(start, kind, pattern, form, roles))
    try:
        return LabelingUnit(text, tuple(elements))
    except ModelError as exc:
        raise ConvertError("C011", str(exc)) from None


def from_columns(text: str) -> Document:
    """Reconstruct a single document from column-format text."""
    docs = read_columns(text)
    if not docs:
        return Document()
    _require(len(docs) == 1, "C012",
             f"expected one document, found {len(docs)} '# doc' headers")
    return docs[0]


def standoff_stream(docs: Iterable[Document]) -> str:
    """Standoff lines for a sequence of documents (with trailing newline)."""
    lines = [to_standoff(d) for d in docs]
    return "".join(line + "\n" for line in lines)


def columns_stream(docs: Iterable[Document]) -> str:
    """Column blocks for a sequence of documents."""
    return "".join(to_columns(d) for d in docs)
