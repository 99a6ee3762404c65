"""Command-line pipeline: filter -> convert -> categorize -> evaluate/delta.

Exit codes: 0 success, 1 I/O failure, 2 validation failure (bad inputs,
malformed records, coverage mismatches).  All outputs are written
atomically and re-running a command on unchanged inputs produces
byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    delta as compute_delta,
)
from .analysis import (
    distribution,
    emit_delta_report,
    emit_eval_report,
    load_predictions,
    per_category_report,
)
from .categorize import heuristic_categorize, load_annotations
from .converter import convert_example
from .corpus import compute_stats, filter_subset, load_race, read_dataset_jsonl, write_dataset_jsonl
from .errors import ValidationError
from .io_utils import atomic_write_text, write_jsonl
from .parsetree import ParseBundle, parse_conllu_file

RULE_ORDER = ("cloze", "which_true", "wh", "fallback")


def _stats_json(stats) -> str:
    return json.dumps(stats.to_dict(), indent=2, sort_keys=True) + "\n"


def cmd_filter(args) -> int:
    examples = load_race(args.infile, split=args.split)
    stats = compute_stats(examples, strict_question_mark=args.strict_question_mark)
    subset = filter_subset(examples, strict_question_mark=args.strict_question_mark)
    out = Path(args.out)
    write_dataset_jsonl(subset, out)
    atomic_write_text(out.with_suffix(".stats.json"), _stats_json(stats))
    print(f"kept {len(subset)} of {len(examples)} examples -> {out}")
    return 0


def cmd_stats(args) -> int:
    examples = load_race(args.infile, split=args.split)
    stats = compute_stats(examples, strict_question_mark=args.strict_question_mark)
    text = _stats_json(stats)
    if args.out:
        atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_convert(args) -> int:
    examples = read_dataset_jsonl(args.infile)
    bundle = ParseBundle.from_file(args.parses) if args.parses else None
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    nli_rows, qa_rows = [], []
    rule_counts = {rule: 0 for rule in RULE_ORDER}
    for example in examples:
        nli, qa = convert_example(example, bundle)
        for record in nli:
            rule_counts[record.rule_id] = rule_counts.get(record.rule_id, 0) + 1
            nli_rows.append(record.to_dict())
        qa_rows.extend(record.to_dict() for record in qa)

    write_jsonl(outdir / "nli.jsonl", nli_rows)
    write_jsonl(outdir / "qa.jsonl", qa_rows)

    total = len(nli_rows)
    audit = ["rule_id,count,fraction"]
    for rule in RULE_ORDER:
        count = rule_counts.get(rule, 0)
        audit.append(f"{rule},{count},{count / total:.4f}" if total else f"{rule},0,0.0000")
    audit.append(f"total,{total},1.0000" if total else "total,0,0.0000")
    atomic_write_text(outdir / "audit.csv", "\n".join(audit) + "\n")
    fallback_rate = rule_counts.get("fallback", 0) / total if total else 0.0
    print(f"converted {len(examples)} examples ({total} pairs), fallback rate {fallback_rate:.4f}")
    return 0


def cmd_categorize(args) -> int:
    examples = read_dataset_jsonl(args.infile)
    rows = []
    for example in examples:
        flags = heuristic_categorize(example.question, example.passage)
        rows.append({"example_id": example.example_id, **flags.to_dict()})
    write_jsonl(args.out, rows)
    print(f"categorized {len(rows)} examples -> {args.out}")
    return 0


def _gold_and_flags(path):
    examples = read_dataset_jsonl(path)
    gold = {e.example_id: e.gold_index for e in examples}
    flags = {e.example_id: heuristic_categorize(e.question, e.passage) for e in examples}
    return gold, flags


def cmd_evaluate(args) -> int:
    gold, flags = _gold_and_flags(args.infile)
    preds_qa = load_predictions(args.preds_qa, "qa")
    preds_nli = load_predictions(args.preds_nli, "nli")
    report = per_category_report(preds_qa, preds_nli, gold, flags)
    atomic_write_text(args.out, emit_eval_report(report, args.format))
    print(f"overall accuracy: qa={report.overall_qa:.4f} nli={report.overall_nli:.4f}")
    return 0


def cmd_delta(args) -> int:
    gold, _ = _gold_and_flags(args.infile)
    preds_qa = load_predictions(args.preds_qa, "qa")
    preds_nli = load_predictions(args.preds_nli, "nli")
    report = compute_delta(preds_qa, preds_nli, gold)

    gain_dist = loss_dist = None
    if args.annotations:
        annotations = load_annotations(args.annotations)
        gain_dist = distribution(report.gain_ids, annotations, args.include_improper)
        loss_dist = distribution(report.loss_ids, annotations, args.include_improper)
        for tag, dist in (("gain", gain_dist), ("loss", loss_dist)):
            if dist.missing_ids:
                print(
                    f"warning: {len(dist.missing_ids)} unannotated {tag} ids: "
                    + ", ".join(dist.missing_ids),
                    file=sys.stderr,
                )
    atomic_write_text(args.out, emit_delta_report(report, args.format, gain_dist, loss_dist))
    if args.plot:
        if gain_dist is None or loss_dist is None:
            raise ValidationError("--plot requires --annotations")
        if str(args.plot).endswith(".png"):
            from .analysis import write_distribution_plot

            write_distribution_plot(gain_dist, loss_dist, args.plot)
        else:
            from .analysis import emit_distribution_data

            atomic_write_text(args.plot, emit_distribution_data(gain_dist, loss_dist))
    print(
        f"delta={len(report.delta_ids)} gain={len(report.gain_ids)} "
        f"loss={len(report.loss_ids)} both_wrong={len(report.both_wrong_ids)}"
    )
    return 0


def cmd_parse_check(args) -> int:
    from collections import Counter

    parses = parse_conllu_file(args.infile)
    counts = Counter(p.sentence_id for p in parses)
    dupes = sorted(sid for sid, n in counts.items() if n > 1)
    if dupes:
        raise ValidationError(f"duplicate sent_ids: {', '.join(dupes)}")
    print(f"{len(parses)} sentences, no structural errors")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rc2nli",
        description="Convert multiple-choice reading comprehension to two-class NLI and analyze model predictions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter", help="load RACE-format files and write the non-cloze subset")
    p.add_argument("--in", dest="infile", required=True, help="dataset directory or file")
    p.add_argument("--out", required=True, help="output dataset JSONL")
    p.add_argument("--split", choices=("train", "dev", "test"), help="override split inference")
    p.add_argument("--strict-question-mark", action="store_true",
                   help="also require a terminal '?' for subset membership")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("stats", help="dataset counts and cloze fraction")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.add_argument("--split", choices=("train", "dev", "test"))
    p.add_argument("--strict-question-mark", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("convert", help="build NLI and QA dataset forms plus a conversion audit")
    p.add_argument("--in", dest="infile", required=True, help="dataset JSONL (filter output)")
    p.add_argument("--parses", help="CoNLL-U bundle keyed by '<example_id>/q' and '/o<k>'")
    p.add_argument("--out", required=True, help="output directory (nli.jsonl, qa.jsonl, audit.csv)")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("categorize", help="heuristic question-type flags per example")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True, help="output JSONL")
    p.set_defaults(func=cmd_categorize)

    p = sub.add_parser("evaluate", help="per-category accuracy table for two prediction files")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--preds-qa", required=True)
    p.add_argument("--preds-nli", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json", "markdown"), default="csv")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("delta", help="delta/gain/loss id sets and category distributions")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--preds-qa", required=True)
    p.add_argument("--preds-nli", required=True)
    p.add_argument("--annotations", help="reasoning-category CSV")
    p.add_argument("--include-improper", action="store_true",
                   help="keep ids marked not properly converted in the distributions")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json", "markdown"), default="json")
    p.add_argument("--plot", help="gain/loss distribution chart: .png (needs matplotlib) "
                                  "or a plot-tool-ready data file for any other suffix")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("parse-check", help="validate a CoNLL-U file")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_parse_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
