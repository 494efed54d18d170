"""Acceptance suite: one test per release criterion.

Run with ``pytest tests/test_acceptance.py -v`` to get one pass/fail line
per criterion.
"""

import math
import re
import time

from hypothesis import given, settings
from hypothesis import strategies as st

from phkit.convert import from_columns, from_standoff, to_columns, to_standoff
from phkit.inline import emit_document, parse_document, parse_unit
from phkit.metrics import agree, char_kappa, corpus_stats
from phkit.model import Document, ElementType
from phkit.segmentation import split
from phkit.validation import Severity, validate_document, validate_unit

from .strategies import documents
from .test_metrics import _align, brute_force_kappa

# --- criterion 1: golden corpus fidelity -----------------------------------


def test_criterion_1_golden_corpus_fidelity(golden_text):
    result = parse_document(golden_text)
    assert result.ok, result.diagnostics
    doc = result.document
    assert len(doc.units) == 10

    findings = validate_document(doc)
    assert not any(d.severity is Severity.ERROR for d in findings)
    assert {d.code for d in findings} == {"W020"}
    rai_units = {
        i
        for i, unit in enumerate(doc.units)
        for e in unit.elements
        if e.kind is ElementType.RAI
    }
    assert {d.unit_index for d in findings} == rai_units

    assert emit_document(doc) == golden_text


# --- criterion 2: golden statistics -----------------------------------------


def test_criterion_2_golden_statistics(golden_doc):
    stats = corpus_stats([golden_doc])
    assert stats.by_pattern.get("S") == 5
    assert stats.by_pattern.get("M") == 5
    assert stats.by_tag.get("SUB-W") == 5
    assert stats.by_tag.get("TEM-W") == 1
    assert stats.by_tag.get("ADV-P") == 6
    assert stats.by_tag.get("LOC-W") == 1
    assert stats.by_kind.get("COM") == 8
    assert stats.by_tag.get("RAI-W") == 1
    assert stats.by_pattern == {"S": 5, "M": 5}


# --- criterion 3: round-trip suites ------------------------------------------


@given(documents())
@settings(max_examples=1000, deadline=None)
def test_criterion_3_round_trip_suites(doc):
    inline_result = parse_document(emit_document(doc))
    assert inline_result.ok, inline_result.diagnostics
    assert inline_result.document == doc
    assert from_standoff(to_standoff(doc)) == doc
    assert from_columns(to_columns(doc)) == doc


# --- criterion 4: validator mutation suite -----------------------------------

_PRE_GROUP = re.compile(r"\[PRE-[SRLMV] [^\]]*\]")


def _error_codes(line: str) -> set[str]:
    unit, diags = parse_unit(line)
    assert not diags, (line, diags)
    return {
        d.code
        for d in validate_unit(unit)
        if d.severity is Severity.ERROR
    }


def test_criterion_4_validator_mutation_suite(golden_lines):
    assert len(golden_lines) == 10
    pre_m_lines = 0
    for line in golden_lines:
        match = _PRE_GROUP.search(line)
        assert match is not None, line

        duplicated = line + match.group(0)
        assert "E001" in _error_codes(duplicated), duplicated

        deleted = line[: match.start()] + line[match.end() :]
        assert "E001" in _error_codes(deleted), deleted

        if "[PRE-M " in line:
            pre_m_lines += 1
            bare = (
                line[: match.start()]
                + match.group(0).replace("(", "").replace(")", "")
                + line[match.end() :]
            )
            assert "E003" in _error_codes(bare), bare
    assert pre_m_lines == 5


# --- criterion 5: agreement oracle -------------------------------------------


def test_criterion_5_agreement_self_and_worked_kappa(golden_doc):
    report = agree(golden_doc, golden_doc)
    assert report.spans.precision == 1.0
    assert report.spans.recall == 1.0
    assert report.spans.f1 == 1.0
    assert report.kappa == 1.0

    a = Document(units=(parse_unit("[PRE-S 发生争]执吧了")[0],))
    b = Document(units=(parse_unit("[PRE-S 发生]争执吧了")[0],))
    kappa = char_kappa(a, b)
    oracle = brute_force_kappa(a, b)
    assert kappa is not None and oracle is not None
    assert math.isclose(kappa, 2 / 3, rel_tol=0, abs_tol=1e-12)
    assert math.isclose(kappa, oracle, rel_tol=0, abs_tol=1e-12)


@given(documents(), documents())
@settings(max_examples=100, deadline=None)
def test_criterion_5_swap_symmetry(doc_a, doc_b):
    a, b = _align(doc_a, doc_b)
    fwd = agree(a, b)
    rev = agree(b, a)
    assert fwd.spans.precision == rev.spans.recall
    assert fwd.spans.recall == rev.spans.precision
    assert fwd.spans.f1 == rev.spans.f1
    assert fwd.kappa == rev.kappa


# --- criterion 6: segmenter partition ----------------------------------------

_CJK_ALPHABET = (
    "的一是不了人我在有他这中大来上国个到说们为子和你地出道也时年得就那要下"
    "以生会自着去之过家学对可她里后小么心多天而能好都然没日于起还发成事只作当"
    "想看文无开手十用主行方又如前所本见经头面公同三已老从动两长知民样现分将外"
    "但身些与高意进把法此实回二理美点月明器如其并且然后。，、；！？”」"
)


def test_criterion_6_running_example_split(golden_doc):
    paragraph = "".join(u.text for u in golden_doc.units)
    pieces = split(paragraph, policy="all")
    assert pieces == [u.text for u in golden_doc.units]
    assert "".join(pieces) == paragraph


@given(
    st.text(alphabet=_CJK_ALPHABET, max_size=60),
    st.sampled_from(["all", "hard_only"]),
)
@settings(max_examples=1000, deadline=None)
def test_criterion_6_lossless_partition(text, policy):
    assert "".join(split(text, policy=policy)) == text


# --- criterion 7: throughput sanity ------------------------------------------


def test_criterion_7_throughput_10mb_under_10s(golden_text):
    body = "".join(
        line + "\n" for line in golden_text.split("\n") if line and not line.startswith("#")
    )
    target_bytes = 10 * 1024 * 1024
    copies = target_bytes // len(body.encode("utf-8")) + 1
    corpus = "#id: synthetic\n" + body * copies
    assert len(corpus.encode("utf-8")) >= target_bytes

    start = time.perf_counter()
    result = parse_document(corpus)
    findings = validate_document(result.document)
    elapsed = time.perf_counter() - start

    assert result.ok
    assert len(result.document.units) == 10 * copies
    # One W020 per replica of the RAI-bearing unit.
    assert sum(1 for d in findings if d.code == "W020") == copies
    assert elapsed < 10.0, f"parse+validate took {elapsed:.2f}s"
