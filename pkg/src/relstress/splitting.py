"""Stratified train/test holdout and stratified k-fold assignment.

Assignment is driven entirely by per-sample priorities derived from
(seed, sample_id), so the input ordering of a dataset can never change the
split. Count arithmetic uses exact rationals with round-half-up, and test
quotas are apportioned per class by largest remainder so the global test
size equals round(test_fraction * n) while each class stays within one
sample of its own rounded quota.

Stratification is per sample, not per document: samples extracted from the
same snippet may land on both sides of the holdout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator

from .brat import RelationLabel
from .errors import ClassTooSmall
from .rng import keyed_u64
from .samples import Dataset, Sample


def to_fraction(value: float | int | str | Fraction) -> Fraction:
    """Exact rational from a config value.

    Floats go through their shortest decimal repr, so 0.05 means 1/20 and
    not the nearest binary double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def round_half_up(value: Fraction) -> int:
    return math.floor(value + Fraction(1, 2))


@dataclass(frozen=True)
class SplitSpec:
    seed: int
    test_fraction: Fraction = Fraction(1, 4)
    k_folds: int = 5

    def __post_init__(self):
        object.__setattr__(self, "test_fraction", to_fraction(self.test_fraction))
        if not (0 < self.test_fraction < 1):
            raise ValueError(f"test_fraction {self.test_fraction} outside (0, 1)")
        if self.k_folds < 2:
            raise ValueError(f"k_folds {self.k_folds} < 2")


@dataclass
class SplitResult:
    train: Dataset
    test: Dataset
    folds: list[tuple[Dataset, Dataset]] = field(default_factory=list)


def _largest_remainder(quotas: Sequence[Fraction], total: int) -> list[int]:
    """Integer apportionment: floor each quota, then hand out remainders."""
    floors = [int(q) for q in quotas]
    leftover = total - sum(floors)
    order = sorted(range(len(quotas)), key=lambda i: (-(quotas[i] - floors[i]), i))
    for i in order[:leftover]:
        floors[i] += 1
    return floors


def _by_class(samples: Iterable[Sample]) -> dict[RelationLabel, list[Sample]]:
    groups: dict[RelationLabel, list[Sample]] = {}
    for s in samples:
        groups.setdefault(s.label, []).append(s)
    return groups


def _priority_order(samples: list[Sample], seed: int, stage: str) -> list[Sample]:
    return sorted(samples, key=lambda s: (keyed_u64(seed, stage, s.sample_id), s.sample_id))


def stratified_split(dataset: Dataset, spec: SplitSpec) -> SplitResult:
    """75/25-style stratified holdout plus stratified k-fold CV on the train set.

    Raises ClassTooSmall when a label class cannot place at least one sample
    in every fold after the holdout.
    """
    groups = _by_class(dataset.samples)
    labels = sorted(groups, key=lambda l: l.value)
    quotas = [spec.test_fraction * len(groups[l]) for l in labels]
    total_test = round_half_up(spec.test_fraction * Fraction(len(dataset.samples)))
    test_counts = dict(zip(labels, _largest_remainder(quotas, total_test)))

    test_ids: set[str] = set()
    fold_of: dict[str, int] = {}
    for label in labels:
        members = groups[label]
        if len(members) < spec.k_folds:
            raise ClassTooSmall(
                f"class {label.value} has {len(members)} samples, fewer than "
                f"{spec.k_folds} folds"
            )
        ordered = _priority_order(members, spec.seed, "split-test")
        n_test = test_counts[label]
        test_ids.update(s.sample_id for s in ordered[:n_test])
        train_members = ordered[n_test:]
        if len(train_members) < spec.k_folds:
            raise ClassTooSmall(
                f"class {label.value} has {len(train_members)} training samples, "
                f"cannot populate {spec.k_folds} folds"
            )
        rotation = keyed_u64(spec.seed, "split-rotation", label.value) % spec.k_folds
        for j, s in enumerate(_priority_order(train_members, spec.seed, "split-fold")):
            fold_of[s.sample_id] = (j + rotation) % spec.k_folds

    # Subsets preserve the parent dataset's deterministic ordering.
    train_samples = [s for s in dataset.samples if s.sample_id not in test_ids]
    test_samples = [s for s in dataset.samples if s.sample_id in test_ids]
    result = SplitResult(
        train=Dataset("train", train_samples, dataset.provenance),
        test=Dataset("test", test_samples, dataset.provenance),
    )
    for f in range(spec.k_folds):
        val = [s for s in train_samples if fold_of[s.sample_id] == f]
        tr = [s for s in train_samples if fold_of[s.sample_id] != f]
        result.folds.append(
            (
                Dataset(f"fold{f + 1}.train", tr, dataset.provenance),
                Dataset(f"fold{f + 1}.val", val, dataset.provenance),
            )
        )
    return result


class StratifiedSplitter(BaseEstimator):
    """Estimator-style wrapper over stratified_split.

    split() follows the cross-validator convention: it yields
    (train_indices, val_indices) pairs over the samples passed in, one per
    fold, after carving off the stratified holdout internally.
    """

    def __init__(self, seed: int = 0, test_fraction: float = 0.25, k_folds: int = 5):
        self.seed = seed
        self.test_fraction = test_fraction
        self.k_folds = k_folds

    def _spec(self) -> SplitSpec:
        return SplitSpec(
            seed=self.seed,
            test_fraction=to_fraction(self.test_fraction),
            k_folds=self.k_folds,
        )

    def get_n_splits(self, X=None, y=None, groups=None) -> int:
        return self.k_folds

    def split_dataset(self, dataset: Dataset) -> SplitResult:
        return stratified_split(dataset, self._spec())

    def split(self, X: Sequence[Sample], y=None, groups=None):
        result = stratified_split(Dataset("input", list(X)), self._spec())
        index_of = {s.sample_id: i for i, s in enumerate(X)}
        for tr, val in result.folds:
            yield (
                [index_of[s.sample_id] for s in tr.samples],
                [index_of[s.sample_id] for s in val.samples],
            )
