"""Input validation helpers for the estimator-style wrappers."""

from __future__ import annotations

from typing import Iterable, Sequence

from .brat import Document
from .samples import Sample


def check_samples(X: Iterable[Sample]) -> list[Sample]:
    """Materialize and type-check a sample collection."""
    samples = list(X)
    for i, s in enumerate(samples):
        if not isinstance(s, Sample):
            raise TypeError(f"X[{i}] is {type(s).__name__}, expected Sample")
    return samples


def check_documents(X: Iterable[Document]) -> list[Document]:
    documents = list(X)
    for i, d in enumerate(documents):
        if not isinstance(d, Document):
            raise TypeError(f"X[{i}] is {type(d).__name__}, expected Document")
    return documents


def check_disjoint_ids(*id_sets: Sequence[str]) -> None:
    seen: set[str] = set()
    for ids in id_sets:
        overlap = seen.intersection(ids)
        if overlap:
            raise ValueError(f"sample ids appear in more than one part: {sorted(overlap)[:5]}")
        seen.update(ids)
