import json
import re
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from parse_adapter.backends import BackendUnavailable, HeuristicBackend, make_backend
from parse_adapter.batch import SentenceRequest, parse_batch, read_requests
from parse_adapter.cli import main
from parse_adapter.heuristic import parse as heuristic_parse, tokenize

FIXTURES = Path(__file__).parent / "fixtures"
REQUESTS50 = FIXTURES / "requests50.jsonl"


def run(*argv) -> int:
    return main([str(a) for a in argv])


def primary_parse_check(path: Path) -> subprocess.CompletedProcess:
    """Invoke the pipeline's parse-check CLI (the consumption boundary)."""
    if shutil.which("rc2nli"):
        cmd = ["rc2nli", "parse-check", "--in", str(path)]
    else:
        cmd = [sys.executable, "-m", "rc2nli.cli", "parse-check", "--in", str(path)]
    return subprocess.run(cmd, capture_output=True, text=True)


def emitted_sent_ids(path: Path) -> list[str]:
    ids = []
    for line in path.read_text(encoding="utf-8").splitlines():
        m = re.match(r"#\s*sent_id\s*=\s*(.+)$", line)
        if m:
            ids.append(m.group(1).strip())
    return ids


# --- tokenizer / heuristic parser --------------------------------------------


def test_tokenize_contractions():
    assert tokenize("What's the best title?") == ["What", "'s", "the", "best", "title", "?"]
    assert tokenize("Don't stop now.") == ["Do", "n't", "stop", "now", "."]


def test_heuristic_parse_valid_rows():
    rows = heuristic_parse("The grey fox ate the farmer's corn.")
    assert [r[0] for r in rows] == list(range(1, len(rows) + 1))
    roots = [r for r in rows if r[6] == 0]
    assert len(roots) == 1 and roots[0][7] == "root"
    n = len(rows)
    for r in rows:
        assert 0 <= r[6] <= n and r[6] != r[0]


def test_heuristic_parse_rejects_empty():
    with pytest.raises(ValueError):
        heuristic_parse("   ")


# --- parse_batch ---------------------------------------------------------------


def test_parse_batch_preserves_ids_in_order():
    requests = read_requests(REQUESTS50)
    doc, errors = parse_batch(requests, HeuristicBackend())
    assert errors == []
    ids = re.findall(r"# sent_id = (.+)", doc)
    assert ids == [r.sentence_id for r in requests]


def test_parse_batch_empty_input():
    doc, errors = parse_batch([], HeuristicBackend())
    assert doc == ""
    assert errors == []


def test_parse_batch_sidecars_bad_requests():
    requests = [
        SentenceRequest("a#0/q", "A good sentence."),
        SentenceRequest("a#0/o1", "   "),
        SentenceRequest("bad-id", "Text with a bad id."),
        SentenceRequest("a#0/q", "A duplicate id."),
    ]
    doc, errors = parse_batch(requests, HeuristicBackend())
    ids = re.findall(r"# sent_id = (.+)", doc)
    assert ids == ["a#0/q"]
    assert [e.sentence_id for e in errors] == ["a#0/o1", "bad-id", "a#0/q"]
    assert "empty text" in errors[0].error
    assert set(ids) | {e.sentence_id for e in errors} == {r.sentence_id for r in requests}


# --- CLI and primary-side conformance -------------------------------------------


def test_parse_batch_cli_conformance(tmp_path):
    out = tmp_path / "parses.conllu"
    code = run("--in", REQUESTS50, "--out", out, "--backend", "heuristic")
    assert code == 0
    proc = primary_parse_check(out)
    assert proc.returncode == 0, proc.stderr
    assert "50 sentences" in proc.stdout
    requested = [r.sentence_id for r in read_requests(REQUESTS50)]
    assert emitted_sent_ids(out) == requested
    sidecar = Path(str(out) + ".errors.jsonl")
    assert sidecar.exists() and sidecar.read_text() == ""


def test_cli_sidecar_lists_skipped(tmp_path):
    reqs = tmp_path / "reqs.jsonl"
    reqs.write_text(
        json.dumps({"sentence_id": "x#0/q", "text": "A fine sentence."})
        + "\n"
        + json.dumps({"sentence_id": "x#0/o0", "text": ""})
        + "\n"
    )
    out = tmp_path / "out.conllu"
    errs = tmp_path / "errs.jsonl"
    assert run("--in", reqs, "--out", out, "--errors", errs, "--backend", "heuristic") == 0
    assert emitted_sent_ids(out) == ["x#0/q"]
    sidecar = [json.loads(l) for l in errs.read_text().splitlines()]
    assert sidecar[0]["sentence_id"] == "x#0/o0"
    proc = primary_parse_check(out)
    assert proc.returncode == 0


def test_cli_empty_input_valid_empty_document(tmp_path):
    reqs = tmp_path / "empty.jsonl"
    reqs.write_text("")
    out = tmp_path / "out.conllu"
    assert run("--in", reqs, "--out", out, "--backend", "heuristic") == 0
    assert out.read_text() == ""
    proc = primary_parse_check(out)
    assert proc.returncode == 0
    assert "0 sentences" in proc.stdout


def test_cli_rerun_byte_identical(tmp_path):
    a, b = tmp_path / "a.conllu", tmp_path / "b.conllu"
    assert run("--in", REQUESTS50, "--out", a, "--backend", "heuristic") == 0
    assert run("--in", REQUESTS50, "--out", b, "--backend", "heuristic") == 0
    assert a.read_bytes() == b.read_bytes()


def _spacy_importable() -> bool:
    try:
        import spacy  # noqa: F401

        return True
    except ImportError:
        return False


def test_cli_spacy_unavailable_actionable(tmp_path, capsys):
    if _spacy_importable():
        pytest.skip("spacy installed; unavailability path not testable")
    out = tmp_path / "out.conllu"
    code = run("--in", REQUESTS50, "--out", out, "--backend", "spacy")
    assert code == 1
    err = capsys.readouterr().err
    assert "spacy" in err and "heuristic" in err


def test_malformed_request_file_exits_2(tmp_path, capsys):
    reqs = tmp_path / "bad.jsonl"
    reqs.write_text("{not json}\n")
    assert run("--in", reqs, "--out", tmp_path / "o.conllu") == 2
    assert "line 1" in capsys.readouterr().err


def test_missing_input_exits_1(tmp_path):
    assert run("--in", tmp_path / "nope.jsonl", "--out", tmp_path / "o.conllu", "--backend", "heuristic") == 1
