import random
import statistics

import pytest

from relstress.brat import LABELS, RelationLabel
from relstress.errors import CoverageMismatch, UnknownLabel
from relstress.metrics import (
    AggregateStats,
    PredictionSet,
    aggregate,
    confusion_render,
    normalize_confusion,
    render_grid,
    report_table,
    score,
)
from relstress.samples import Dataset, Sample


def gold_dataset(labels):
    samples = [
        Sample(f"s{i}", "d", "a b", (0, 1), (2, 3), label, "anaphor", "antecedent")
        for i, label in enumerate(labels)
    ]
    return Dataset("gold", samples)


def preds_for(labels):
    return PredictionSet.from_pairs((f"s{i}", l.value) for i, l in enumerate(labels))


def brute_force(gold_labels, pred_labels):
    """Independent per-class TP/FP/FN counter."""
    per_class = {}
    for label in LABELS:
        tp = sum(1 for g, p in zip(gold_labels, pred_labels) if g == label and p == label)
        fp = sum(1 for g, p in zip(gold_labels, pred_labels) if g != label and p == label)
        fn = sum(1 for g, p in zip(gold_labels, pred_labels) if g == label and p != label)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[label] = (precision, recall, f1)
    macro = sum(v[2] for v in per_class.values()) / len(LABELS)
    return per_class, macro


class TestScore:
    def test_perfect_predictions(self):
        labels = [l for l in LABELS for _ in range(3)]
        report = score(gold_dataset(labels), preds_for(labels))
        assert report.macro_f1 == 1.0
        for label in LABELS:
            m = report.per_class[label]
            assert (m.precision, m.recall, m.f1, m.support) == (1.0, 1.0, 1.0, 3)
        for i in range(5):
            for j in range(5):
                assert report.confusion[i][j] == (3 if i == j else 0)

    def test_hand_counted_three_items(self):
        a, b = RelationLabel.CONTAINED, RelationLabel.WORK_UP
        report = score(gold_dataset([a, a, b]), preds_for([a, b, b]))
        ma, mb = report.per_class[a], report.per_class[b]
        assert (ma.precision, ma.recall) == (1.0, 0.5)
        assert ma.f1 == pytest.approx(2 / 3, abs=1e-12)
        assert (mb.precision, mb.recall) == (0.5, 1.0)
        assert mb.f1 == pytest.approx(2 / 3, abs=1e-12)

    def test_macro_always_averages_over_five_classes(self):
        # Only two classes present; three absent classes contribute zero.
        a, b = RelationLabel.COREFERENCE, RelationLabel.TRANSFORMED
        report = score(gold_dataset([a, b]), preds_for([a, b]))
        assert report.macro_f1 == pytest.approx(2 / 5, abs=1e-12)

    def test_matches_brute_force_on_random_sets(self):
        rng = random.Random(5)
        for _ in range(50):
            labels = [rng.choice(LABELS) for _ in range(rng.randint(1, 50))]
            preds = [rng.choice(LABELS) for _ in labels]
            report = score(gold_dataset(labels), preds_for(preds))
            expected, macro = brute_force(labels, preds)
            assert report.macro_f1 == pytest.approx(macro, abs=1e-12)
            for label in LABELS:
                m = report.per_class[label]
                assert m.precision == pytest.approx(expected[label][0], abs=1e-12)
                assert m.recall == pytest.approx(expected[label][1], abs=1e-12)
                assert m.f1 == pytest.approx(expected[label][2], abs=1e-12)

    def test_permutation_invariance(self):
        rng = random.Random(6)
        labels = [rng.choice(LABELS) for _ in range(40)]
        preds = [rng.choice(LABELS) for _ in labels]
        pairs = [(f"s{i}", p.value) for i, p in enumerate(preds)]
        report_a = score(gold_dataset(labels), PredictionSet.from_pairs(pairs))
        rng.shuffle(pairs)
        report_b = score(gold_dataset(labels), PredictionSet.from_pairs(pairs))
        assert report_a.confusion == report_b.confusion
        assert report_a.macro_f1 == report_b.macro_f1

    def test_bounds_and_row_sums(self):
        rng = random.Random(7)
        labels = [rng.choice(LABELS) for _ in range(60)]
        preds = [rng.choice(LABELS) for _ in labels]
        report = score(gold_dataset(labels), preds_for(preds))
        f1s = [report.per_class[l].f1 for l in LABELS]
        assert min(f1s) <= report.macro_f1 <= max(f1s)
        assert sum(map(sum, report.confusion)) == report.n
        for label, i in zip(LABELS, range(5)):
            assert sum(report.confusion[i]) == report.per_class[label].support

    def test_coverage_mismatch(self):
        labels = [RelationLabel.WORK_UP, RelationLabel.CONTAINED]
        with pytest.raises(CoverageMismatch):
            score(gold_dataset(labels), preds_for(labels[:1]))
        extra = PredictionSet.from_pairs(
            [("s0", "WORK_UP"), ("s1", "CONTAINED"), ("s9", "WORK_UP")]
        )
        with pytest.raises(CoverageMismatch):
            score(gold_dataset(labels), extra)

    def test_unknown_label(self):
        with pytest.raises(UnknownLabel):
            PredictionSet.from_pairs([("s0", "NO_RELATION")])

    def test_macro_row_is_unweighted_mean_of_class_rows(self):
        precisions = [0.967, 0.969, 0.973, 0.879, 0.982]
        recalls = [1.000, 0.952, 0.976, 0.872, 0.986]
        f1s = [0.983, 0.960, 0.975, 0.876, 0.984]
        assert round(sum(precisions) / 5, 3) == 0.954
        assert round(sum(recalls) / 5, 3) == 0.957
        assert round(sum(f1s) / 5, 3) == 0.956


class TestAggregate:
    def test_identical_reports(self):
        stats = aggregate([0.9, 0.9, 0.9])
        assert stats == AggregateStats(0.9, 0.9, 0.9, 0.0, 3)

    def test_five_fold_aggregate_example(self):
        values = [0.944, 0.944, 0.946, 0.950, 0.956]
        stats = aggregate(values)
        assert stats.mean == pytest.approx(statistics.fmean(values), abs=1e-15)
        assert round(stats.mean, 3) == 0.948
        assert stats.std == pytest.approx(statistics.stdev(values), abs=1e-15)
        assert round(stats.std, 3) == 0.005
        assert (stats.minimum, stats.maximum) == (0.944, 0.956)

    def test_singleton_flagged(self):
        stats = aggregate([0.5])
        assert stats.std == 0.0 and stats.degenerate

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate([])


class TestRendering:
    def test_normalized_rows_sum_to_one(self):
        rng = random.Random(8)
        labels = [rng.choice(LABELS) for _ in range(80)]
        preds = [rng.choice(LABELS) for _ in labels]
        report = score(gold_dataset(labels), preds_for(preds))
        for row in normalize_confusion(report):
            assert sum(row) == pytest.approx(1.0, abs=1e-9)
        assert confusion_render(report, normalize=True)  # renders without error

    def test_diagonal_normalizes_to_identity(self):
        labels = [l for l in LABELS for _ in range(2)]
        report = score(gold_dataset(labels), preds_for(labels))
        rows = normalize_confusion(report)
        for i, row in enumerate(rows):
            assert row[i] == 1.0 and sum(row) == 1.0

    def test_zero_support_row_renders_zeros_with_footnote(self):
        a = RelationLabel.COREFERENCE
        report = score(gold_dataset([a, a]), preds_for([a, a]))
        rendered = confusion_render(report, normalize=True)
        assert "zero support" in rendered
        assert "CONTAINED" in rendered

    def test_report_table_contains_macro_row(self):
        a = RelationLabel.COREFERENCE
        report = score(gold_dataset([a]), preds_for([a]))
        table = report_table(report)
        assert "macro-average" in table

    def test_grid_renders_missing_cells(self):
        text = render_grid({("clean", "clean"): 0.95}, ["clean", "ocr5"], ["clean"])
        lines = text.splitlines()
        assert "0.950" in lines[1]
        assert lines[2].split()[-1] == "-"
