"""Scoring of prediction files: per-class precision/recall/F1 and macro F1.

Macro F1 always averages over all five relation classes, including classes
with zero support in the scored set; undefined precision or recall counts
as zero rather than being skipped. The confusion matrix is indexed
rows = gold, columns = predicted, in label order.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .brat import LABELS, RelationLabel, coerce_label
from .errors import CoverageMismatch
from .samples import Dataset

N_CLASSES = len(LABELS)
_INDEX = {label: i for i, label in enumerate(LABELS)}


@dataclass
class PredictionSet:
    """sample_id -> predicted label, plus a tag naming the predictor run."""

    entries: dict[str, RelationLabel]
    source_tag: str = ""

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]], source_tag: str = "") -> "PredictionSet":
        entries: dict[str, RelationLabel] = {}
        for sample_id, label in pairs:
            if sample_id in entries:
                raise CoverageMismatch(f"duplicate prediction for {sample_id}")
            entries[sample_id] = coerce_label(label)
        return cls(entries=entries, source_tag=source_tag)


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass
class MetricsReport:
    per_class: dict[RelationLabel, ClassMetrics]
    macro_f1: float
    confusion: list[list[int]]
    n: int
    source_tag: str = ""

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "source_tag": self.source_tag,
            "macro_f1": self.macro_f1,
            "per_class": {
                label.value: {
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "support": m.support,
                }
                for label, m in self.per_class.items()
            },
            "confusion": self.confusion,
            "labels": [label.value for label in LABELS],
        }


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def score(gold: Dataset | Mapping[str, RelationLabel], preds: PredictionSet) -> MetricsReport:
    """Score predictions against gold labels.

    Predictions must cover exactly the gold sample ids; anything missing or
    extra raises CoverageMismatch.
    """
    if isinstance(gold, Dataset):
        gold_labels = {s.sample_id: s.label for s in gold.samples}
    else:
        gold_labels = dict(gold)
    missing = sorted(set(gold_labels) - set(preds.entries))
    extra = sorted(set(preds.entries) - set(gold_labels))
    if missing or extra:
        raise CoverageMismatch(
            f"predictions do not cover gold ids exactly "
            f"(missing {len(missing)}: {missing[:3]}, extra {len(extra)}: {extra[:3]})"
        )

    confusion = [[0] * N_CLASSES for _ in range(N_CLASSES)]
    for sample_id, gold_label in gold_labels.items():
        confusion[_INDEX[gold_label]][_INDEX[preds.entries[sample_id]]] += 1

    per_class: dict[RelationLabel, ClassMetrics] = {}
    f1_sum = 0.0
    for label, i in _INDEX.items():
        tp = confusion[i][i]
        support = sum(confusion[i])
        predicted = sum(confusion[r][i] for r in range(N_CLASSES))
        precision = _safe_div(tp, predicted)
        recall = _safe_div(tp, support)
        f1 = _safe_div(2 * precision * recall, precision + recall)
        per_class[label] = ClassMetrics(precision, recall, f1, support)
        f1_sum += f1
    return MetricsReport(
        per_class=per_class,
        macro_f1=f1_sum / N_CLASSES,
        confusion=confusion,
        n=len(gold_labels),
        source_tag=preds.source_tag,
    )


@dataclass(frozen=True)
class AggregateStats:
    mean: float
    minimum: float
    maximum: float
    std: float
    n: int
    degenerate: bool = False  # singleton input: std reported as 0


def aggregate(reports: Sequence[MetricsReport | float]) -> AggregateStats:
    """Mean/min/max and sample standard deviation of macro F1 values."""
    if not reports:
        raise ValueError("aggregate requires at least one report")
    values = [r.macro_f1 if isinstance(r, MetricsReport) else float(r) for r in reports]
    if len(values) == 1:
        return AggregateStats(values[0], values[0], values[0], 0.0, 1, degenerate=True)
    return AggregateStats(
        mean=statistics.fmean(values),
        minimum=min(values),
        maximum=max(values),
        std=statistics.stdev(values),
        n=len(values),
    )


def normalize_confusion(report: MetricsReport) -> list[list[float]]:
    """Row-normalized confusion matrix; zero-support rows stay all-zero."""
    rows = []
    for row in report.confusion:
        total = sum(row)
        rows.append([v / total for v in row] if total else [0.0] * N_CLASSES)
    return rows


def confusion_render(report: MetricsReport, normalize: bool = False) -> str:
    """Plain-text confusion matrix; normalized rows sum to 1 when requested.

    Zero-support rows render as zeros with a footnote instead of NaN.
    """
    names = [label.value for label in LABELS]
    width = max(len(n) for n in names) + 2
    cell = 12 if normalize else max(8, width)
    lines = [" " * width + "".join(n.rjust(cell) for n in names)]
    zero_rows = [names[i] for i in range(N_CLASSES) if sum(report.confusion[i]) == 0]
    rows = normalize_confusion(report) if normalize else report.confusion
    for name, row in zip(names, rows):
        values = [f"{v:.3f}" if normalize else str(v) for v in row]
        lines.append(name.ljust(width) + "".join(v.rjust(cell) for v in values))
    if normalize:
        for name in zero_rows:
            lines.append(f"note: class {name} has zero support; row shown as zeros")
    return "\n".join(lines)


def report_table(report: MetricsReport) -> str:
    """Per-class precision/recall/F1 table with the macro row."""
    width = max(len(label.value) for label in LABELS) + 2
    header = "".join(h.rjust(11) for h in ("precision", "recall", "f1", "support"))
    lines = [" " * width + header]
    for label in LABELS:
        m = report.per_class[label]
        lines.append(
            label.value.ljust(width)
            + f"{m.precision:11.3f}{m.recall:11.3f}{m.f1:11.3f}{m.support:11d}"
        )
    mean_p = sum(report.per_class[l].precision for l in LABELS) / N_CLASSES
    mean_r = sum(report.per_class[l].recall for l in LABELS) / N_CLASSES
    lines.append(
        "macro-average".ljust(width)
        + f"{mean_p:11.3f}{mean_r:11.3f}{report.macro_f1:11.3f}{report.n:11d}"
    )
    return "\n".join(lines)


def render_grid(
    cells: Mapping[tuple[str, str], float | None],
    train_tags: Sequence[str],
    test_tags: Sequence[str],
) -> str:
    """Train-by-test macro F1 grid as text; missing cells render as '-'."""
    width = max([len(t) for t in train_tags] + [5]) + 2
    cell_w = max([len(t) for t in test_tags] + [6]) + 2
    lines = ["train".ljust(width) + "".join(t.rjust(cell_w) for t in test_tags)]
    for train in train_tags:
        row = []
        for test in test_tags:
            value = cells.get((train, test))
            row.append(("-" if value is None else f"{value:.3f}").rjust(cell_w))
        lines.append(train.ljust(width) + "".join(row))
    return "\n".join(lines)
