"""Batch parsing of sentence requests into one CoNLL-U document.

Requests arrive as JSONL {"sentence_id": ..., "text": ...} where ids
follow the pipeline scheme "<example_id>/q" or "<example_id>/o<k>".
Failed requests (empty text, bad id, parser error) are never silently
dropped: they are skipped in the output and listed in a sidecar, so
emitted ids plus sidecar ids always equal the requested ids.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from dataclasses import dataclass
from pathlib import Path

ID_SCHEME = re.compile(r"^.+/(q|o[0-3])$")


@dataclass(frozen=True)
class SentenceRequest:
    sentence_id: str
    text: str


@dataclass(frozen=True)
class RequestError:
    sentence_id: str
    error: str


def read_requests(path: str | Path) -> list[SentenceRequest]:
    requests = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise ValueError(f"{path} line {lineno}: not valid JSON ({e})") from e
            if "sentence_id" not in rec or "text" not in rec:
                raise ValueError(f"{path} line {lineno}: need sentence_id and text")
            requests.append(SentenceRequest(str(rec["sentence_id"]), str(rec["text"])))
    return requests


def parse_batch(requests, backend) -> tuple[str, list[RequestError]]:
    """Returns (conllu document text, per-sentence errors)."""
    blocks: list[str] = []
    errors: list[RequestError] = []
    seen: set[str] = set()
    for req in requests:
        if not ID_SCHEME.match(req.sentence_id):
            errors.append(RequestError(req.sentence_id, "sentence_id does not match '<example_id>/q' or '<example_id>/o<k>'"))
            continue
        if req.sentence_id in seen:
            errors.append(RequestError(req.sentence_id, "duplicate sentence_id"))
            continue
        if not req.text.strip():
            errors.append(RequestError(req.sentence_id, "empty text"))
            continue
        try:
            rows = backend.parse(req.text)
        except Exception as e:  # a single bad sentence must not kill the batch
            errors.append(RequestError(req.sentence_id, f"parser failure: {e}"))
            continue
        seen.add(req.sentence_id)
        lines = [f"# sent_id = {req.sentence_id}"]
        lines.append("# text = " + " ".join(str(r[1]) for r in rows))
        lines.extend("\t".join(str(c) for c in row) for row in rows)
        blocks.append("\n".join(lines))
    doc = "\n\n".join(blocks) + ("\n" if blocks else "")
    return doc, errors


def atomic_write(path: str | Path, content: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_errors(path: str | Path, errors: list[RequestError]) -> None:
    lines = [
        json.dumps({"sentence_id": e.sentence_id, "error": e.error}, ensure_ascii=False)
        for e in errors
    ]
    atomic_write(path, "\n".join(lines) + ("\n" if lines else ""))
