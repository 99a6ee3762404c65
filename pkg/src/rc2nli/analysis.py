"""Accuracy tables and the delta/gain/loss decomposition of two prediction files.

Given gold answers plus predictions from a question+answer-form model
("QA") and a hypothesis-form model ("NLI"), this module computes overall
and per-category accuracies, the subset where the two models disagree
(delta), the part the NLI model wins (gain), its complement (loss, which
deliberately includes examples both models get wrong in different ways),
and reasoning-category histograms over annotated id sets.

All emission is deterministic: fixed row order, fixed decimal formatting
("84.19"-style percentages in human formats, 4-decimal fractions in JSON).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .categorize import (
    CATEGORY_DISPLAY_NAMES,
    HEURISTIC_CATEGORIES,
    AnnotationRecord,
    HeuristicFlags,
    ReasoningCategory,
)
from .errors import CoverageError, ValidationError

FORMATS = ("csv", "json", "markdown")


@dataclass(frozen=True)
class PredictionRecord:
    example_id: str
    predicted_index: int
    model_tag: str

    def __post_init__(self):
        if self.predicted_index not in (0, 1, 2, 3):
            raise ValidationError(
                f"{self.example_id}: predicted_index {self.predicted_index} outside 0..3"
            )


@dataclass(frozen=True)
class CategoryRow:
    name: str
    fraction: float
    accuracy_qa: Optional[float]
    accuracy_nli: Optional[float]

    @property
    def display_name(self) -> str:
        return CATEGORY_DISPLAY_NAMES.get(self.name, self.name)


@dataclass(frozen=True)
class EvalReport:
    overall_qa: float
    overall_nli: float
    total: int
    rows: tuple[CategoryRow, ...]


@dataclass(frozen=True)
class DeltaReport:
    delta_ids: frozenset[str]
    gain_ids: frozenset[str]
    loss_ids: frozenset[str]
    both_wrong_ids: frozenset[str]


@dataclass(frozen=True)
class CategoryDistribution:
    counts: Mapping[ReasoningCategory, int]
    missing_ids: tuple[str, ...]
    excluded_improper: int
    total_counted: int


GoldLike = Mapping[str, int]


def _gold_map(gold) -> dict[str, int]:
    if isinstance(gold, Mapping):
        return dict(gold)
    return {ex.example_id: ex.gold_index for ex in gold}


def _pred_map(preds: Iterable[PredictionRecord]) -> dict[str, int]:
    out: dict[str, int] = {}
    for p in preds:
        if p.example_id in out:
            raise ValidationError(f"duplicate prediction for {p.example_id!r}")
        out[p.example_id] = p.predicted_index
    return out


def _check_coverage(pred_ids: set[str], gold_ids: set[str], tag: str) -> None:
    missing = sorted(gold_ids - pred_ids)
    extra = sorted(pred_ids - gold_ids)
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing ids: {', '.join(missing)}")
        if extra:
            parts.append(f"extra ids: {', '.join(extra)}")
        raise CoverageError(f"{tag} predictions do not cover the dataset exactly; " + "; ".join(parts))


def accuracy(preds: Iterable[PredictionRecord], gold) -> float:
    """Fraction of gold examples predicted correctly; requires exact coverage."""
    gold = _gold_map(gold)
    pmap = _pred_map(preds)
    _check_coverage(set(pmap), set(gold), "model")
    correct = sum(1 for ex_id, idx in gold.items() if pmap[ex_id] == idx)
    return correct / len(gold)


def delta(preds_qa, preds_nli, gold) -> DeltaReport:
    """Ids where the two models disagree, split into gain and its complement."""
    gold = _gold_map(gold)
    qa = _pred_map(preds_qa)
    nli = _pred_map(preds_nli)
    _check_coverage(set(qa), set(gold), "QA")
    _check_coverage(set(nli), set(gold), "NLI")
    delta_ids = frozenset(ex_id for ex_id in gold if qa[ex_id] != nli[ex_id])
    gain_ids = frozenset(ex_id for ex_id in delta_ids if nli[ex_id] == gold[ex_id])
    loss_ids = delta_ids - gain_ids
    both_wrong = frozenset(
        ex_id for ex_id in loss_ids if qa[ex_id] != gold[ex_id] and nli[ex_id] != gold[ex_id]
    )
    return DeltaReport(
        delta_ids=delta_ids, gain_ids=gain_ids, loss_ids=loss_ids, both_wrong_ids=both_wrong
    )


def per_category_report(
    preds_qa, preds_nli, gold, flags: Mapping[str, HeuristicFlags]
) -> EvalReport:
    """One row per heuristic category, accuracies restricted to flagged examples."""
    gold = _gold_map(gold)
    qa = _pred_map(preds_qa)
    nli = _pred_map(preds_nli)
    _check_coverage(set(qa), set(gold), "QA")
    _check_coverage(set(nli), set(gold), "NLI")
    unflagged = sorted(set(gold) - set(flags))
    if unflagged:
        raise CoverageError(f"missing heuristic flags for ids: {', '.join(unflagged)}")

    rows = []
    for name in HEURISTIC_CATEGORIES:
        members = [ex_id for ex_id in gold if flags[ex_id][name]]
        if members:
            acc_qa = sum(1 for m in members if qa[m] == gold[m]) / len(members)
            acc_nli = sum(1 for m in members if nli[m] == gold[m]) / len(members)
        else:
            acc_qa = acc_nli = None
        rows.append(
            CategoryRow(
                name=name,
                fraction=len(members) / len(gold) if gold else 0.0,
                accuracy_qa=acc_qa,
                accuracy_nli=acc_nli,
            )
        )
    correct_qa = sum(1 for ex_id, idx in gold.items() if qa[ex_id] == idx)
    correct_nli = sum(1 for ex_id, idx in gold.items() if nli[ex_id] == idx)
    return EvalReport(
        overall_qa=correct_qa / len(gold) if gold else 0.0,
        overall_nli=correct_nli / len(gold) if gold else 0.0,
        total=len(gold),
        rows=tuple(rows),
    )


def distribution(
    ids: Iterable[str], annotations: Iterable[AnnotationRecord], include_improper: bool
) -> CategoryDistribution:
    """Reasoning-category histogram over an id set.

    Unannotated ids are reported in ``missing_ids``, never silently dropped;
    improperly converted examples are excluded first unless requested.
    """
    ids = set(ids)
    by_id = {a.example_id: a for a in annotations}
    counts = {category: 0 for category in ReasoningCategory}
    missing = []
    excluded = 0
    counted = 0
    for ex_id in sorted(ids):
        record = by_id.get(ex_id)
        if record is None:
            missing.append(ex_id)
            continue
        if not include_improper and not record.properly_converted:
            excluded += 1
            continue
        counts[record.category] += 1
        counted += 1
    return CategoryDistribution(
        counts=counts,
        missing_ids=tuple(missing),
        excluded_improper=excluded,
        total_counted=counted,
    )


# --- prediction file ingestion -------------------------------------------------


def load_predictions(path: str | Path, model_tag: str) -> list[PredictionRecord]:
    """Read JSONL ({example_id, predicted_index}) or CSV (same columns)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    records: list[PredictionRecord] = []
    seen: set[str] = set()

    def add(ex_id: str, raw_index, where: str):
        try:
            idx = int(raw_index)
        except (TypeError, ValueError):
            raise ValidationError(f"{where}: predicted_index {raw_index!r} is not an integer")
        if ex_id in seen:
            raise ValidationError(f"{where}: duplicate prediction for {ex_id!r}")
        seen.add(ex_id)
        records.append(PredictionRecord(ex_id, idx, model_tag))

    stripped = text.lstrip()
    if stripped.startswith("{"):
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise ValidationError(f"{path} line {lineno}: not valid JSON ({e})") from e
            if not isinstance(rec, dict) or "example_id" not in rec or "predicted_index" not in rec:
                raise ValidationError(f"{path} line {lineno}: need example_id and predicted_index")
            add(str(rec["example_id"]), rec["predicted_index"], f"{path} line {lineno}")
    else:
        import csv as _csv
        import io

        reader = _csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None or not {"example_id", "predicted_index"}.issubset(
            reader.fieldnames
        ):
            raise ValidationError(
                f"{path}: CSV header must contain example_id,predicted_index (got {reader.fieldnames})"
            )
        for rownum, row in enumerate(reader, start=1):
            add((row["example_id"] or "").strip(), row["predicted_index"], f"{path} row {rownum}")
    return records


# --- emission -------------------------------------------------------------------


def _pct(value: Optional[float]) -> str:
    return "" if value is None else f"{value * 100:.2f}"


def _round4(value: Optional[float]) -> Optional[float]:
    return None if value is None else round(value, 4)


def emit_eval_report(report: EvalReport, fmt: str) -> str:
    if fmt == "csv":
        lines = ["Type,Fraction,QA,NLI"]
        for row in report.rows:
            lines.append(
                f"{row.display_name},{row.fraction:.2f},{_pct(row.accuracy_qa)},{_pct(row.accuracy_nli)}"
            )
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        lines = ["| Type | Fraction | QA | NLI |", "| --- | --- | --- | --- |"]
        for row in report.rows:
            qa = _pct(row.accuracy_qa) or "-"
            nli = _pct(row.accuracy_nli) or "-"
            lines.append(f"| {row.display_name} | {row.fraction:.2f} | {qa} | {nli} |")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = {
            "total": report.total,
            "overall": {"qa": _round4(report.overall_qa), "nli": _round4(report.overall_nli)},
            "rows": [
                {
                    "type": row.display_name,
                    "category": row.name,
                    "fraction": _round4(row.fraction),
                    "accuracy_qa": _round4(row.accuracy_qa),
                    "accuracy_nli": _round4(row.accuracy_nli),
                }
                for row in report.rows
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    raise ValidationError(f"unknown report format {fmt!r}")


def _dist_payload(dist: CategoryDistribution) -> dict:
    return {
        "counts": {category.value: dist.counts[category] for category in ReasoningCategory},
        "missing_ids": list(dist.missing_ids),
        "excluded_improper": dist.excluded_improper,
        "total_counted": dist.total_counted,
    }


def emit_delta_report(
    report: DeltaReport,
    fmt: str,
    gain_dist: Optional[CategoryDistribution] = None,
    loss_dist: Optional[CategoryDistribution] = None,
) -> str:
    if fmt == "json":
        payload = {
            "delta_size": len(report.delta_ids),
            "gain_size": len(report.gain_ids),
            "loss_size": len(report.loss_ids),
            "both_wrong_size": len(report.both_wrong_ids),
            "delta_ids": sorted(report.delta_ids),
            "gain_ids": sorted(report.gain_ids),
            "loss_ids": sorted(report.loss_ids),
            "both_wrong_ids": sorted(report.both_wrong_ids),
        }
        if gain_dist is not None:
            payload["gain_distribution"] = _dist_payload(gain_dist)
        if loss_dist is not None:
            payload["loss_distribution"] = _dist_payload(loss_dist)
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        lines = ["subset,size", f"delta,{len(report.delta_ids)}", f"gain,{len(report.gain_ids)}"]
        lines.append(f"loss,{len(report.loss_ids)}")
        lines.append(f"both_wrong,{len(report.both_wrong_ids)}")
        if gain_dist is not None and loss_dist is not None:
            lines.append("")
            lines.append("Category,Gain,Loss")
            for category in ReasoningCategory:
                lines.append(
                    f"{category.value},{gain_dist.counts[category]},{loss_dist.counts[category]}"
                )
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        lines = [
            "| Subset | Size |",
            "| --- | --- |",
            f"| delta | {len(report.delta_ids)} |",
            f"| gain | {len(report.gain_ids)} |",
            f"| loss | {len(report.loss_ids)} |",
            f"| both wrong | {len(report.both_wrong_ids)} |",
        ]
        if gain_dist is not None and loss_dist is not None:
            lines.append("")
            lines.append("| Category | Gain | Loss |")
            lines.append("| --- | --- | --- |")
            for category in ReasoningCategory:
                lines.append(
                    f"| {category.value} | {gain_dist.counts[category]} | {loss_dist.counts[category]} |"
                )
        return "\n".join(lines) + "\n"
    raise ValidationError(f"unknown report format {fmt!r}")


def emit_distribution_data(
    gain_dist: CategoryDistribution, loss_dist: CategoryDistribution
) -> str:
    """Plot-tool-ready columns: category, gain count, loss count."""
    lines = ["# category gain loss"]
    for category in ReasoningCategory:
        lines.append(f"{category.value} {gain_dist.counts[category]} {loss_dist.counts[category]}")
    return "\n".join(lines) + "\n"


def write_distribution_plot(
    gain_dist: CategoryDistribution, loss_dist: CategoryDistribution, path: str | Path
) -> None:
    """Grouped bar chart of gain vs loss category counts (requires matplotlib)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    categories = [c.value for c in ReasoningCategory]
    gains = [gain_dist.counts[c] for c in ReasoningCategory]
    losses = [loss_dist.counts[c] for c in ReasoningCategory]
    x = range(len(categories))
    width = 0.4
    fig, ax = plt.subplots(figsize=(9, 4.5))
    ax.bar([i - width / 2 for i in x], gains, width, label="gain")
    ax.bar([i + width / 2 for i in x], losses, width, label="loss")
    ax.set_xticks(list(x))
    ax.set_xticklabels(categories, rotation=30, ha="right")
    ax.set_ylabel("examples")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
