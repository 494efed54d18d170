import json
import subprocess
import sys

import pytest

from phkit.cli import main

GOLDEN_PARAGRAPH = (
    "被告人陈某某因家庭矛盾迁怒岳父滕某某。"
    "2015年6月29日凌晨，陈某某谎称购买房屋，"
    "将其骗至其新房南侧桥上，"
    "两人发生争执并互相厮打。"
    "陈某某持刀捅刺滕某某，"
    "用砖头多次击打其头部，"
    "并将其头部撞向地面，"
    "致其死亡。"
    "陈某某驾驶电动三轮车抛尸至大桥下的河中。"
)


def run_cli(capsys, *argv):
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def test_parse_golden_emits_one_standoff_record(capsys, golden_path):
    status, out, err = run_cli(capsys, "parse", str(golden_path))
    assert status == 0
    assert err == ""
    lines = out.splitlines()
    assert len(lines) == 1
    record = json.loads(lines[0])
    assert record["id"] == "golden"
    assert len(record["units"]) == 10


def test_parse_empty_file(capsys, tmp_path):
    empty = tmp_path / "empty.ann"
    empty.write_text("", encoding="utf-8")
    status, out, err = run_cli(capsys, "parse", str(empty))
    assert (status, out, err) == (0, "", "")


def test_parse_check_broken_file(capsys, tmp_path):
    broken = tmp_path / "broken.ann"
    broken.write_text("[SUB-W 王某\n", encoding="utf-8")
    status, out, err = run_cli(capsys, "parse", str(broken), "--check")
    assert status == 3
    assert out == ""
    assert "P001" in err


def test_parse_unreadable_file_is_exit_2(capsys, tmp_path):
    status, out, err = run_cli(capsys, "parse", str(tmp_path / "missing.ann"))
    assert status == 2
    assert "missing.ann" in err


def test_validate_golden(capsys, golden_path):
    status, out, err = run_cli(capsys, "validate", str(golden_path))
    assert status == 0
    assert "W020" in out
    assert out.count("\n") == 1
    assert str(golden_path) + ":2:" in out


def test_validate_strict_promotes_warnings(capsys, golden_path):
    status, out, _ = run_cli(capsys, "validate", str(golden_path), "--strict")
    assert status == 1
    assert "W020 error" in out


def test_validate_two_pre_file(capsys, tmp_path):
    bad = tmp_path / "two_pre.ann"
    bad.write_text("[PRE-S 发生][PRE-S 厮打]\n", encoding="utf-8")
    status, out, _ = run_cli(capsys, "validate", str(bad))
    assert status == 1
    assert "E001" in out


def test_validate_unparseable_file_is_exit_3(capsys, tmp_path):
    bad = tmp_path / "broken.ann"
    bad.write_text("[SUB-W 王某\n", encoding="utf-8")
    status, out, err = run_cli(capsys, "validate", str(bad))
    assert status == 3
    assert "P001" in err


def test_stats_reads_standoff_input(capsys, golden_path, tmp_path):
    status, standoff, _ = run_cli(capsys, "convert", "--to", "standoff", str(golden_path))
    stream = tmp_path / "golden.jsonl"
    stream.write_text(standoff, encoding="utf-8")
    status, out, _ = run_cli(capsys, "stats", str(stream))
    assert status == 0
    assert "units: 10" in out.splitlines()


def test_validate_records_format(capsys, golden_path):
    status, out, _ = run_cli(
        capsys, "validate", str(golden_path), "--format", "records"
    )
    assert status == 0
    record = json.loads(out.splitlines()[0])
    assert record["code"] == "W020"
    assert record["line"] == 2


def test_segment_running_example(capsys, tmp_path, golden_doc):
    raw = tmp_path / "raw.txt"
    raw.write_text(GOLDEN_PARAGRAPH + "\n", encoding="utf-8")
    status, out, err = run_cli(capsys, "segment", str(raw))
    assert status == 0
    assert out.splitlines() == [u.text for u in golden_doc.units]


def test_segment_empty_file(capsys, tmp_path):
    raw = tmp_path / "raw.txt"
    raw.write_text("", encoding="utf-8")
    status, out, _ = run_cli(capsys, "segment", str(raw))
    assert (status, out) == (0, "")


def test_segment_boundary_sidecar(capsys, tmp_path):
    raw = tmp_path / "raw.txt"
    raw.write_text("甲，乙。丙\n", encoding="utf-8")
    sidecar = tmp_path / "bounds.jsonl"
    status, out, _ = run_cli(
        capsys, "segment", str(raw), "--boundaries", str(sidecar)
    )
    assert status == 0
    records = [json.loads(l) for l in sidecar.read_text("utf-8").splitlines()]
    assert records == [
        {"line": 1, "position": 1, "kind": "candidate", "cause": "comma"},
        {"line": 1, "position": 3, "kind": "hard", "cause": "end_mark"},
    ]


def test_segment_policy_and_commas_flags(capsys, tmp_path):
    raw = tmp_path / "raw.txt"
    raw.write_text("甲，乙。丙\n", encoding="utf-8")
    status, out, _ = run_cli(capsys, "segment", str(raw), "--policy", "hard_only")
    assert out.splitlines() == ["甲，乙。", "丙"]
    status, out, _ = run_cli(capsys, "segment", str(raw), "--commas", "hard", "--policy", "hard_only")
    assert out.splitlines() == ["甲，", "乙。", "丙"]
    status, out, _ = run_cli(capsys, "segment", str(raw), "--commas", "ignore")
    assert out.splitlines() == ["甲，乙。", "丙"]


def test_segment_conj_lexicon_env(capsys, tmp_path, monkeypatch):
    raw = tmp_path / "raw.txt"
    raw.write_text("甲或乙\n", encoding="utf-8")
    lexicon = tmp_path / "conj.txt"
    lexicon.write_text("或\n", encoding="utf-8")
    status, out, _ = run_cli(capsys, "segment", str(raw))
    assert out.splitlines() == ["甲或乙"]
    monkeypatch.setenv("PHK_CONJ_LEXICON", str(lexicon))
    status, out, _ = run_cli(capsys, "segment", str(raw))
    assert out.splitlines() == ["甲", "或乙"]


def test_convert_round_trip_through_all_formats(capsys, golden_path, tmp_path, golden_text):
    status, standoff, _ = run_cli(capsys, "convert", "--to", "standoff", str(golden_path))
    assert status == 0
    standoff_file = tmp_path / "golden.jsonl"
    standoff_file.write_text(standoff, encoding="utf-8")
    status, columns, _ = run_cli(capsys, "convert", "--to", "columns", str(standoff_file))
    assert status == 0
    columns_file = tmp_path / "golden.cols"
    columns_file.write_text(columns, encoding="utf-8")
    status, inline, _ = run_cli(capsys, "convert", "--to", "inline", str(columns_file))
    assert status == 0
    assert inline == golden_text


def test_convert_inline_rejects_multiple_documents(capsys, tmp_path):
    stream = tmp_path / "two.jsonl"
    stream.write_text(
        '{"id":"a","units":[]}\n{"id":"b","units":[]}\n', encoding="utf-8"
    )
    status, out, err = run_cli(capsys, "convert", "--to", "inline", str(stream))
    assert status == 2
    assert "single document" in err


def test_stats_table_and_records(capsys, golden_path):
    status, out, _ = run_cli(capsys, "stats", str(golden_path))
    assert status == 0
    assert "pattern S: 5" in out.splitlines()
    assert "pattern M: 5" in out.splitlines()
    status, out, _ = run_cli(capsys, "stats", str(golden_path), "--format", "records")
    record = json.loads(out)
    assert record["by_tag"]["ADV-P"] == 6


def test_stats_empty_corpus(capsys, tmp_path):
    empty = tmp_path / "empty.ann"
    empty.write_text("", encoding="utf-8")
    status, out, _ = run_cli(capsys, "stats", str(empty))
    assert status == 0
    assert "units: 0" in out.splitlines()


def test_agree_self(capsys, golden_path):
    status, out, _ = run_cli(capsys, "agree", str(golden_path), str(golden_path))
    assert status == 0
    assert "precision: 1.0000" in out.splitlines()
    assert "kappa: 1.0000" in out.splitlines()


def test_agree_text_mismatch_is_exit_2(capsys, golden_path, tmp_path):
    other = tmp_path / "other.ann"
    other.write_text("[PRE-S 走]\n", encoding="utf-8")
    status, out, err = run_cli(capsys, "agree", str(golden_path), str(other))
    assert status == 2
    assert "AGR002" in err


def test_agree_match_and_normalize_flags(capsys, tmp_path):
    a = tmp_path / "a.ann"
    b = tmp_path / "b.ann"
    a.write_text("[RAI-W 岳父]\n", encoding="utf-8")
    b.write_text("[COM-W 岳父]\n", encoding="utf-8")
    status, out, _ = run_cli(capsys, "agree", str(a), str(b), "--match", "type")
    assert "f1: 0.0000" in out.splitlines()
    status, out, _ = run_cli(
        capsys, "agree", str(a), str(b), "--match", "type", "--normalize-rai"
    )
    assert "f1: 1.0000" in out.splitlines()


def test_config_file_defaults_flags_win(capsys, tmp_path):
    raw = tmp_path / "raw.txt"
    raw.write_text("甲，乙。丙\n", encoding="utf-8")
    config = tmp_path / "phk.json"
    config.write_text(json.dumps({"segment": {"commas": "ignore"}}), encoding="utf-8")
    _, out, _ = run_cli(capsys, "--config", str(config), "segment", str(raw))
    assert out.splitlines() == ["甲，乙。", "丙"]
    _, out, _ = run_cli(
        capsys, "--config", str(config), "segment", str(raw), "--commas", "candidate"
    )
    assert out.splitlines() == ["甲，", "乙。", "丙"]


def test_repeated_invocations_are_byte_identical(golden_path):
    cmd = [sys.executable, "-m", "phkit", "parse", str(golden_path)]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    assert first.stdout == second.stdout
    assert first.returncode == second.returncode == 0


def test_pipeline_parse_convert_equals_direct(golden_path):
    parse = subprocess.run(
        [sys.executable, "-m", "phkit", "parse", str(golden_path)],
        capture_output=True,
        check=True,
    )
    piped = subprocess.run(
        [sys.executable, "-m", "phkit", "convert", "--to", "columns", "-"],
        input=parse.stdout,
        capture_output=True,
        check=True,
    )
    direct = subprocess.run(
        [sys.executable, "-m", "phkit", "convert", "--to", "columns", str(golden_path)],
        capture_output=True,
        check=True,
    )
    assert piped.stdout == direct.stdout
    assert piped.stdout


def test_usage_error_is_exit_2():
    with pytest.raises(SystemExit) as err:
        main(["parse"])  # missing files argument
    assert err.value.code == 2
