from collections import Counter
from fractions import Fraction

import pytest

from relstress.brat import RelationLabel
from relstress.errors import ClassTooSmall
from relstress.samples import Dataset, Sample
from relstress.splitting import (
    SplitSpec,
    StratifiedSplitter,
    round_half_up,
    stratified_split,
    to_fraction,
)

LABELS = list(RelationLabel)


def make_dataset(counts: dict[RelationLabel, int], name="synthetic") -> Dataset:
    samples = []
    for label, n in counts.items():
        for i in range(n):
            samples.append(
                Sample(
                    f"{label.value}:{i:05d}", "doc", "alpha beta gamma",
                    (0, 5), (6, 10), label, "anaphor", "antecedent",
                )
            )
    return Dataset(name, samples)


def label_counts(dataset: Dataset) -> Counter:
    return Counter(s.label for s in dataset.samples)


class TestHoldout:
    def test_full_corpus_sized_split_is_8874_2958(self):
        # 11832 samples across five classes; 25% test must give exactly
        # 8874 train / 2958 test regardless of the class mix.
        counts = {
            RelationLabel.CONTAINED: 591,
            RelationLabel.COREFERENCE: 3110,
            RelationLabel.REACTION_ASSOCIATED: 2713,
            RelationLabel.TRANSFORMED: 1556,
            RelationLabel.WORK_UP: 3862,
        }
        assert sum(counts.values()) == 11832
        result = stratified_split(make_dataset(counts), SplitSpec(seed=42))
        assert len(result.train.samples) == 8874
        assert len(result.test.samples) == 2958

    def test_single_class_exact_quarter(self):
        dataset = make_dataset({RelationLabel.WORK_UP: 100})
        result = stratified_split(dataset, SplitSpec(seed=0))
        assert len(result.train.samples) == 75
        assert len(result.test.samples) == 25

    def test_per_class_test_counts_within_one_of_rounded_quota(self):
        counts = dict(zip(LABELS, (17, 23, 40, 9, 61)))
        dataset = make_dataset(counts)
        result = stratified_split(dataset, SplitSpec(seed=3))
        test_by_class = label_counts(result.test)
        for label, total in counts.items():
            quota = round_half_up(Fraction(1, 4) * total)
            assert abs(test_by_class[label] - quota) <= 1

    def test_no_leakage(self):
        dataset = make_dataset(dict(zip(LABELS, (20, 20, 20, 20, 20))))
        result = stratified_split(dataset, SplitSpec(seed=1))
        train_ids = {s.sample_id for s in result.train.samples}
        test_ids = {s.sample_id for s in result.test.samples}
        assert train_ids.isdisjoint(test_ids)
        assert len(train_ids) + len(test_ids) == len(dataset.samples)


class TestFolds:
    def test_validation_folds_partition_train(self):
        dataset = make_dataset(dict(zip(LABELS, (25, 30, 35, 40, 45))))
        result = stratified_split(dataset, SplitSpec(seed=9))
        seen = Counter()
        for _, val in result.folds:
            seen.update(s.sample_id for s in val.samples)
        train_ids = [s.sample_id for s in result.train.samples]
        assert seen == Counter(train_ids)
        for tr, val in result.folds:
            val_ids = {s.sample_id for s in val.samples}
            assert val_ids.isdisjoint(s.sample_id for s in tr.samples)
            assert len(val.samples) + len(tr.samples) == len(train_ids)

    def test_stratification_within_one_per_fold(self):
        counts = dict(zip(LABELS, (26, 53, 11, 97, 40)))
        dataset = make_dataset(counts)
        result = stratified_split(dataset, SplitSpec(seed=5))
        train_by_class = label_counts(result.train)
        for _, val in result.folds:
            val_by_class = label_counts(val)
            for label in LABELS:
                expected = train_by_class[label] / 5
                assert abs(val_by_class[label] - expected) <= 1

    def test_class_too_small(self):
        counts = dict(zip(LABELS, (20, 20, 20, 20, 4)))
        with pytest.raises(ClassTooSmall):
            stratified_split(make_dataset(counts), SplitSpec(seed=0))

    def test_class_too_small_after_holdout(self):
        # Five members survive the precondition but only four reach training.
        counts = dict(zip(LABELS, (20, 20, 20, 20, 5)))
        with pytest.raises(ClassTooSmall):
            stratified_split(make_dataset(counts), SplitSpec(seed=0))


class TestDeterminism:
    def test_identical_inputs_identical_outputs(self):
        dataset = make_dataset(dict(zip(LABELS, (10, 15, 20, 25, 30))))
        a = stratified_split(dataset, SplitSpec(seed=7))
        b = stratified_split(dataset, SplitSpec(seed=7))
        assert [s.sample_id for s in a.test.samples] == [s.sample_id for s in b.test.samples]
        for (_, va), (_, vb) in zip(a.folds, b.folds):
            assert [s.sample_id for s in va.samples] == [s.sample_id for s in vb.samples]

    def test_assignment_ignores_insertion_order(self):
        dataset = make_dataset(dict(zip(LABELS, (10, 15, 20, 25, 30))))
        shuffled = Dataset(dataset.name, list(reversed(dataset.samples)))
        a = stratified_split(dataset, SplitSpec(seed=7))
        b = stratified_split(shuffled, SplitSpec(seed=7))
        assert {s.sample_id for s in a.test.samples} == {s.sample_id for s in b.test.samples}
        for (_, va), (_, vb) in zip(a.folds, b.folds):
            assert {s.sample_id for s in va.samples} == {s.sample_id for s in vb.samples}

    def test_different_seed_changes_assignment(self):
        dataset = make_dataset(dict(zip(LABELS, (10, 15, 20, 25, 30))))
        a = stratified_split(dataset, SplitSpec(seed=7))
        b = stratified_split(dataset, SplitSpec(seed=8))
        assert {s.sample_id for s in a.test.samples} != {s.sample_id for s in b.test.samples}


class TestSpecAndEstimator:
    def test_spec_validation(self):
        with pytest.raises(ValueError):
            SplitSpec(seed=0, test_fraction=Fraction(3, 2))
        with pytest.raises(ValueError):
            SplitSpec(seed=0, k_folds=1)

    def test_to_fraction_uses_decimal_repr(self):
        assert to_fraction(0.05) == Fraction(1, 20)
        assert to_fraction("0.25") == Fraction(1, 4)

    def test_splitter_yields_fold_indices(self):
        dataset = make_dataset(dict(zip(LABELS, (10, 10, 10, 10, 10))))
        splitter = StratifiedSplitter(seed=4, test_fraction=0.25, k_folds=5)
        assert splitter.get_n_splits() == 5
        folds = list(splitter.split(dataset.samples))
        assert len(folds) == 5
        result = splitter.split_dataset(dataset)
        for (tr_idx, val_idx), (_, val) in zip(folds, result.folds):
            assert {dataset.samples[i].sample_id for i in val_idx} == {
                s.sample_id for s in val.samples
            }
            assert set(tr_idx).isdisjoint(val_idx)

    def test_get_params_round_trip(self):
        splitter = StratifiedSplitter(seed=4, test_fraction=0.2, k_folds=3)
        clone = StratifiedSplitter(**splitter.get_params())
        assert clone.get_params() == splitter.get_params()
