"""Command line interface for batch corpus work.

Subcommands: ``parse``, ``validate``, ``segment``, ``convert``, ``stats``,
``agree``. Data goes to stdout, diagnostics to stderr, output is UTF-8
with LF endings and is byte-identical across runs on identical input.

Exit status: 0 success, 1 validation errors present, 2 usage or I/O
error, 3 parse failure.

Input format is sniffed per file (inline, standoff JSON lines, or column
rows) and can be forced with ``--from``. ``-`` reads stdin. A JSON config
file may supply defaults for flags; explicit flags always win. The
``PHK_CONJ_LEXICON`` environment variable points at a default conjunction
lexicon file (one entry per line, UTF-8).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import convert as conv
from . import metrics
from . import segmentation as seg
from . import validation
from .inline import ParseResult, emit_document, parse_bytes
from .model import Document
from .validation import Severity

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_PARSE = 3

ENV_CONJ_LEXICON = "PHK_CONJ_LEXICON"


class CliError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(EXIT_USAGE, f"cannot read {path}: {exc.strerror or exc}") from None


def _decode(path: str, data: bytes) -> str:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CliError(
            EXIT_PARSE, f"{path}: P010 input is not valid UTF-8 at byte {exc.start}"
        ) from None
    return text[1:] if text.startswith("﻿") else text


def _print_parse_diags(path: str, result: ParseResult) -> None:
    for d in result.diagnostics:
        print(f"{path}:{d.line}:{d.column}: {d.code} {d.message}", file=sys.stderr)


def sniff_format(text: str) -> str:
    """Guess the storage format of ``text``: inline, standoff, or columns."""
    for raw in text.split("\n"):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("{"):
            return "standoff"
        if line == "# doc" or line.startswith("# doc "):
            return "columns"
        return "inline"
    return "inline"


def _load_documents(
    path: str, forced_format: str | None
) -> tuple[list[Document], int, list[int] | None]:
    """Read one file in any supported format.

    Returns the documents, a status (0, or EXIT_PARSE when inline lines
    failed to parse; failed lines are omitted from the result), and the
    source line of each unit when the input was inline.
    """
    data = _read_bytes(path)
    text = _decode(path, data)
    fmt = forced_format or sniff_format(text)
    if fmt == "inline":
        result = parse_bytes(data)
        _print_parse_diags(path, result)
        status = EXIT_PARSE if result.diagnostics else EXIT_OK
        return [result.document], status, result.unit_lines
    try:
        if fmt == "standoff":
            return conv.read_standoff(text), EXIT_OK, None
        return conv.read_columns(text), EXIT_OK, None
    except conv.ConvertError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc.code} {exc.message}") from None


def _is_empty(doc: Document) -> bool:
    return not doc.id and not doc.metadata and not doc.units


def _config_value(args: argparse.Namespace, section: str, key: str):
    config = getattr(args, "_config", None)
    if isinstance(config, dict):
        sub = config.get(section)
        if isinstance(sub, dict):
            return sub.get(key)
    return None


def _conjunctions(args: argparse.Namespace) -> tuple[str, ...]:
    # Precedence: --conj flag, PHK_CONJ_LEXICON, config file, built-in default.
    if args.conj:
        return _load_lexicon(args.conj)
    env_path = os.environ.get(ENV_CONJ_LEXICON)
    if env_path:
        return _load_lexicon(env_path)
    from_config = _config_value(args, "segment", "conjunctions")
    if isinstance(from_config, list) and from_config:
        return tuple(str(c) for c in from_config)
    return seg.DEFAULT_CONJUNCTIONS


def _load_lexicon(path: str) -> tuple[str, ...]:
    entries = []
    for line in _decode(path, _read_bytes(path)).split("\n"):
        line = line.strip()
        if line and not line.startswith("#"):
            entries.append(line)
    if not entries:
        raise CliError(EXIT_USAGE, f"conjunction lexicon {path} has no entries")
    return tuple(entries)


def cmd_parse(args: argparse.Namespace) -> int:
    status = EXIT_OK
    for path in args.files:
        result = parse_bytes(_read_bytes(path))
        _print_parse_diags(path, result)
        if result.diagnostics:
            status = EXIT_PARSE
        if not args.check and not _is_empty(result.document):
            print(conv.to_standoff(result.document))
    return status


def cmd_validate(args: argparse.Namespace) -> int:
    parse_failed = False
    errors = False
    for path in args.files:
        docs, status, unit_lines = _load_documents(path, args.from_format)
        parse_failed = parse_failed or status == EXIT_PARSE
        for doc in docs:
            findings = validation.validate_document(doc)
            if args.strict:
                findings = [
                    validation.Diagnostic(
                        d.code,
                        Severity.ERROR if d.severity is Severity.WARNING else d.severity,
                        d.unit_index,
                        d.span,
                        d.message,
                    )
                    for d in findings
                ]
            if any(d.severity is Severity.ERROR for d in findings):
                errors = True
            if args.format == "records":
                lines = validation.render_records(findings, path, unit_lines)
            else:
                lines = validation.render_text(findings, path, unit_lines)
            for line in lines:
                print(line)
    if parse_failed:
        return EXIT_PARSE
    return EXIT_VALIDATION if errors else EXIT_OK


def cmd_segment(args: argparse.Namespace) -> int:
    comma_policy = (
        args.commas
        or _config_value(args, "segment", "commas")
        or seg.CommaPolicy.CANDIDATE.value
    )
    policy = args.policy or _config_value(args, "segment", "policy") or "all"
    try:
        config = seg.SegmenterConfig(
            _conjunctions(args), seg.CommaPolicy(comma_policy)
        )
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    text = _decode(args.rawfile, _read_bytes(args.rawfile))
    sidecar: list[str] = []
    for line_no, line in enumerate(text.split("\n"), start=1):
        if not line:
            continue
        for piece in seg.split(line, config, policy):
            print(piece)
        if args.boundaries:
            for b in seg.propose_boundaries(line, config):
                sidecar.append(
                    json.dumps(
                        {
                            "line": line_no,
                            "position": b.position,
                            "kind": b.kind.value,
                            "cause": b.cause.value,
                        },
                        separators=(",", ":"),
                    )
                )
    if args.boundaries:
        Path(args.boundaries).write_text(
            "".join(rec + "\n" for rec in sidecar), encoding="utf-8"
        )
    return EXIT_OK


def cmd_convert(args: argparse.Namespace) -> int:
    docs: list[Document] = []
    status = EXIT_OK
    for path in args.files:
        loaded, file_status, _ = _load_documents(path, args.from_format)
        status = max(status, file_status)
        docs.extend(d for d in loaded if not _is_empty(d))
    if args.to == "inline":
        if len(docs) > 1:
            raise CliError(
                EXIT_USAGE, "inline output holds a single document per stream"
            )
        if docs:
            sys.stdout.write(emit_document(docs[0]))
    elif args.to == "standoff":
        sys.stdout.write(conv.standoff_stream(docs))
    else:
        sys.stdout.write(conv.columns_stream(docs))
    return status


def cmd_stats(args: argparse.Namespace) -> int:
    docs: list[Document] = []
    status = EXIT_OK
    for path in args.files:
        loaded, file_status, _ = _load_documents(path, args.from_format)
        status = max(status, file_status)
        docs.extend(loaded)
    report = metrics.corpus_stats(docs)
    if args.format == "records":
        print(metrics.stats_records(report))
    else:
        for row in metrics.stats_table(report):
            print(row)
    return status


_MATCH_BY_FLAG = {
    "exact": metrics.MatchCriterion.EXACT,
    "type": metrics.MatchCriterion.TYPE_ONLY,
    "head": metrics.MatchCriterion.HEAD_OVERLAP,
}


def cmd_agree(args: argparse.Namespace) -> int:
    match = args.match or _config_value(args, "agree", "match") or "exact"
    if match not in _MATCH_BY_FLAG:
        raise CliError(EXIT_USAGE, f"unknown match criterion {match!r}")
    normalize = args.normalize_rai
    if normalize is None:
        normalize = bool(_config_value(args, "agree", "normalize_rai"))
    docs = []
    for path in (args.file_a, args.file_b):
        loaded, status, _ = _load_documents(path, args.from_format)
        if status != EXIT_OK:
            return EXIT_PARSE
        if len(loaded) != 1:
            raise CliError(EXIT_USAGE, f"{path}: expected exactly one document")
        docs.append(loaded[0])
    try:
        report = metrics.agree(docs[0], docs[1], _MATCH_BY_FLAG[match], normalize)
    except metrics.AgreementError as exc:
        raise CliError(EXIT_USAGE, f"{exc.code} {exc.message}") from None
    if args.format == "records":
        print(metrics.agreement_records(report))
    else:
        for row in metrics.agreement_table(report):
            print(row)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phk",
        description="Tools for predicate-head annotated corpora: parse, "
        "validate, segment, convert, and compare annotation files.",
    )
    parser.add_argument(
        "--config", metavar="FILE", help="JSON config file with flag defaults"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse inline files to a standoff stream")
    p.add_argument("files", nargs="+")
    p.add_argument("--check", action="store_true", help="suppress output, only report")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("validate", help="check files against the annotation rules")
    p.add_argument("files", nargs="+")
    p.add_argument("--strict", action="store_true", help="treat warnings as errors")
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.add_argument("--from", dest="from_format", choices=("inline", "standoff", "columns"))
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("segment", help="propose labeling-unit boundaries in raw text")
    p.add_argument("rawfile")
    p.add_argument("--commas", choices=("candidate", "hard", "ignore"))
    p.add_argument("--conj", metavar="FILE", help="conjunction lexicon, one entry per line")
    p.add_argument("--policy", choices=("all", "hard_only"))
    p.add_argument(
        "--boundaries", metavar="FILE", help="write boundary records to a sidecar file"
    )
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("convert", help="convert between storage formats")
    p.add_argument("--to", required=True, choices=("inline", "standoff", "columns"))
    p.add_argument("--from", dest="from_format", choices=("inline", "standoff", "columns"))
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("stats", help="corpus statistics")
    p.add_argument("files", nargs="+")
    p.add_argument("--format", choices=("table", "records"), default="table")
    p.add_argument("--from", dest="from_format", choices=("inline", "standoff", "columns"))
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("agree", help="inter-annotator agreement between two files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--match", choices=("exact", "type", "head"))
    p.add_argument("--normalize-rai", action="store_true", default=None)
    p.add_argument("--format", choices=("table", "records"), default="table")
    p.add_argument("--from", dest="from_format", choices=("inline", "standoff", "columns"))
    p.set_defaults(func=cmd_agree)

    return parser


def main(argv: list[str] | None = None) -> int:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8", newline="\n")
        sys.stderr.reconfigure(encoding="utf-8", newline="\n")
    parser = build_parser()
    args = parser.parse_args(argv)
    config = None
    if args.config:
        try:
            config = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
            print(f"phk: cannot load config {args.config}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    args._config = config
    try:
        return args.func(args)
    except CliError as exc:
        print(f"phk: {exc}", file=sys.stderr)
        return exc.status
    except BrokenPipeError:
        return EXIT_OK


def run() -> None:
    raise SystemExit(main())
