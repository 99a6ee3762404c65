"""parse-batch: dependency-parse sentence requests into a CoNLL-U file.

Exit codes: 0 success (even with per-sentence errors, which go to the
sidecar), 1 environment/I-O failure (unreadable files, missing parser
model), 2 malformed request file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .backends import DEFAULT_SPACY_MODEL, BackendUnavailable, make_backend
from .batch import atomic_write, parse_batch, read_requests, write_errors


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parse-batch",
        description="Parse JSONL sentence requests ({sentence_id, text}) into CoNLL-U.",
    )
    parser.add_argument("--in", dest="infile", required=True, help="requests JSONL")
    parser.add_argument("--out", required=True, help="output CoNLL-U file")
    parser.add_argument("--errors", help="sidecar error file (default: <out>.errors.jsonl)")
    parser.add_argument(
        "--backend",
        choices=("spacy", "heuristic"),
        default="spacy",
        help="parser to use (default: spacy; 'heuristic' needs no model)",
    )
    parser.add_argument("--model", default=DEFAULT_SPACY_MODEL, help="spacy model name")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    errors_path = Path(args.errors) if args.errors else Path(str(args.out) + ".errors.jsonl")
    try:
        requests = read_requests(args.infile)
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        backend = make_backend(args.backend, args.model)
    except BackendUnavailable as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    doc, errors = parse_batch(requests, backend)
    try:
        atomic_write(args.out, doc)
        write_errors(errors_path, errors)
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 1
    emitted = len(requests) - len(errors)
    print(f"parsed {emitted} of {len(requests)} sentences -> {args.out}")
    if errors:
        print(f"{len(errors)} sentences skipped; see {errors_path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
