"""Corpus cleaning and relation-sample extraction.

A Sample is one anaphoric relation rendered as a standalone classification
unit: a sentence window of the source snippet, the two entity spans rebased
to that window, and the relation label. Marker rendering
(``<e1> .. </e1>`` / ``<e2> .. </e2>``) is derived on demand;
render_marked_text is the single source of truth for the marker syntax.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from sklearn.base import BaseEstimator, TransformerMixin

from .brat import Document, RelationLabel, parse_document
from .errors import BratParseError
from .text import sentence_spans, token_spans

logger = logging.getLogger(__name__)

MARKERS = ("<e1>", "</e1>", "<e2>", "</e2>")

ANAPHOR = "anaphor"
ANTECEDENT = "antecedent"


@dataclass(frozen=True)
class Sample:
    """One relation instance with its context window.

    Spans are [start, end) offsets into ``text``. e1 is the entity that
    occurs earlier in the document; anaphor/antecedent roles are carried as
    metadata. ``noise_tag`` is empty for clean samples.
    """

    sample_id: str
    doc_id: str
    text: str
    e1_span: tuple[int, int]
    e2_span: tuple[int, int]
    label: RelationLabel
    e1_role: str
    e2_role: str
    noise_tag: str = ""

    def __post_init__(self):
        for name, (s, e) in (("e1", self.e1_span), ("e2", self.e2_span)):
            if not (0 <= s < e <= len(self.text)):
                raise ValueError(f"{self.sample_id}: {name} span [{s}, {e}) outside text")

    @property
    def e1_surface(self) -> str:
        return self.text[self.e1_span[0] : self.e1_span[1]]

    @property
    def e2_surface(self) -> str:
        return self.text[self.e2_span[0] : self.e2_span[1]]

    def span_of(self, target: str) -> tuple[int, int]:
        if target == "e1":
            return self.e1_span
        if target == "e2":
            return self.e2_span
        raise ValueError(f"unknown entity target {target!r}")


@dataclass
class Dataset:
    """Named, ordered collection of samples with provenance."""

    name: str
    samples: list[Sample] = field(default_factory=list)
    provenance: str = "clean"
    warnings: list[str] = field(default_factory=list, compare=False)

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self) -> Iterator[Sample]:
        return iter(self.samples)

    def check_unique_ids(self) -> None:
        counts = Counter(s.sample_id for s in self.samples)
        dupes = [sid for sid, c in counts.items() if c > 1]
        if dupes:
            raise ValueError(f"dataset {self.name}: duplicate sample_ids {dupes[:5]}")


# ------------------------------------------------------------- rendering


def _marker_insertions(sample: Sample) -> list[tuple[int, str]]:
    """Ordered (raw position, marker string) insertions for a sample.

    The output order equals left-to-right order in the marked text. At a
    shared position, closing markers precede opening markers; among two
    openers the longer span opens first (outermost), among two closers the
    shorter closes first. This keeps rendering total for nested, crossing,
    or identical spans, which NER mutations can produce.
    """
    events = []
    for idx, (span, open_m, close_m) in enumerate(
        [(sample.e1_span, "<e1> ", " </e1>"), (sample.e2_span, "<e2> ", " </e2>")]
    ):
        length = span[1] - span[0]
        events.append(((span[0], 1, -length, idx), open_m))
        events.append(((span[1], 0, length, -idx), close_m))
    events.sort(key=lambda ev: ev[0])
    return [(key[0], marker) for key, marker in events]


def render_marked_text(sample: Sample) -> str:
    """Insert entity marker tokens around both spans."""
    out = []
    prev = 0
    for pos, marker in _marker_insertions(sample):
        out.append(sample.text[prev:pos])
        out.append(marker)
        prev = pos
    out.append(sample.text[prev:])
    return "".join(out)


def marker_ranges_in_marked(sample: Sample) -> list[tuple[int, int]]:
    """[start, end) ranges of the four inserted marker strings in the marked text."""
    ranges = []
    shift = 0
    for pos, marker in _marker_insertions(sample):
        start = pos + shift
        ranges.append((start, start + len(marker)))
        shift += len(marker)
    return ranges


@dataclass(frozen=True)
class MarkedToken:
    """One whitespace token of the marked text.

    ``raw_span`` locates the token in the sample's raw text and is None for
    tokens that overlap an inserted marker (the markers themselves, plus any
    punctuation glued to one when a span abuts non-space text).
    """

    index: int
    token: str
    marked_span: tuple[int, int]
    raw_span: tuple[int, int] | None

    @property
    def eligible(self) -> bool:
        return self.raw_span is not None


def marked_token_view(sample: Sample) -> list[MarkedToken]:
    """Whitespace tokens of the marked text, mapped back to raw offsets."""
    marked = render_marked_text(sample)
    marker_ranges = marker_ranges_in_marked(sample)
    tokens = []
    for i, (ts, te) in enumerate(token_spans(marked)):
        overlaps = any(ts < me and te > ms for ms, me in marker_ranges)
        if overlaps:
            raw_span = None
        else:
            shift = 0
            for ms, me in marker_ranges:
                if me <= ts:
                    shift += me - ms
            raw_span = (ts - shift, te - shift)
        tokens.append(MarkedToken(i, marked[ts:te], (ts, te), raw_span))
    return tokens


# -------------------------------------------------------------- cleaning


@dataclass(frozen=True)
class RawSnippet:
    """Unparsed file pair; either side may be missing."""

    stem: str
    text_content: str | None
    ann_content: str | None


@dataclass
class CleaningReport:
    removed: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def remove(self, stem: str, reason: str) -> None:
        self.removed.append((stem, reason))


def clean_corpus(snippets: Iterable[RawSnippet]) -> tuple[list[Document], CleaningReport]:
    """Drop unusable snippets and parse the rest.

    Removals: annotation files without a text file, empty text files,
    exact-duplicate text files (keeping the lexicographically first stem),
    and pairs whose annotations fail to parse. Every removal is a report
    entry; nothing raises.
    """
    report = CleaningReport()
    ordered = sorted(snippets, key=lambda s: s.stem)
    survivors: list[RawSnippet] = []
    for snip in ordered:
        if snip.text_content is None:
            report.remove(snip.stem, "orphan annotation file (no text file)")
        elif snip.text_content.strip() == "":
            report.remove(snip.stem, "empty text file")
        else:
            survivors.append(snip)

    seen_texts: dict[str, str] = {}
    documents: list[Document] = []
    for snip in survivors:
        first = seen_texts.get(snip.text_content)
        if first is not None:
            report.remove(snip.stem, f"duplicate text file (same content as {first})")
            continue
        seen_texts[snip.text_content] = snip.stem
        if snip.ann_content is None:
            report.warnings.append(f"{snip.stem}: no annotation file, kept with zero annotations")
        try:
            doc = parse_document(snip.text_content, snip.ann_content or "", snip.stem)
        except BratParseError as err:
            report.remove(snip.stem, f"parse error: {err}")
            continue
        for w in doc.warnings:
            report.warnings.append(f"{snip.stem}: {w}")
        documents.append(doc)
    return documents, report


# ------------------------------------------------------------ extraction


def _relation_sort_key(rel_id: str) -> tuple[int, str]:
    digits = rel_id[1:]
    return (int(digits), rel_id) if digits.isdigit() else (1 << 62, rel_id)


def _window(text: str, lo: int, hi: int) -> tuple[int, int] | None:
    """Minimal run of consecutive sentences covering [lo, hi), or None."""
    start = end = None
    last = max(hi - 1, lo)
    for s, e in sentence_spans(text):
        if s <= lo < e:
            start = s
        if s <= last < e:
            end = e
    if start is None or end is None or end < hi:
        return None
    # Trim surrounding whitespace without cutting into the covered region.
    while start < lo and text[start].isspace():
        start += 1
    while end > hi and text[end - 1].isspace():
        end -= 1
    return start, end


def extract_samples(documents: Iterable[Document], name: str = "original") -> Dataset:
    """Build one Sample per relation over cleaned documents.

    The context window is the minimal run of whole sentences containing both
    entities; spans are rebased to window-local offsets. e1 is the entity
    with the smaller document offset, roles kept as metadata. Relations over
    discontinuous mentions are skipped with a warning. Output order is fixed
    by (doc_id, relation number) so extraction is order-independent.
    """
    dataset = Dataset(name=name, provenance="clean")
    for doc in sorted(documents, key=lambda d: d.doc_id):
        by_id = doc.entity_by_id()
        for rel in sorted(doc.relations, key=lambda r: _relation_sort_key(r.id)):
            anaphor = by_id[rel.anaphor_id]
            antecedent = by_id[rel.antecedent_id]
            if anaphor.discontinuous or antecedent.discontinuous:
                dataset.warnings.append(
                    f"{doc.doc_id}:{rel.id}: skipped, touches a discontinuous span"
                )
                continue
            pairs = [(anaphor, ANAPHOR), (antecedent, ANTECEDENT)]
            pairs.sort(key=lambda p: (p[0].start, p[0].end, p[0].id))
            (first, first_role), (second, second_role) = pairs
            if first.start == second.start:
                dataset.warnings.append(
                    f"{doc.doc_id}:{rel.id}: entities share a start offset; "
                    "ordered by span end"
                )
            lo = first.start
            hi = max(first.end, second.end)
            window = _window(doc.text, lo, hi)
            if window is None:
                dataset.warnings.append(
                    f"{doc.doc_id}:{rel.id}: windowing failed, using whole document text"
                )
                window = (0, len(doc.text))
            ws, we = window
            dataset.samples.append(
                Sample(
                    sample_id=f"{doc.doc_id}:{rel.id}",
                    doc_id=doc.doc_id,
                    text=doc.text[ws:we],
                    e1_span=(first.start - ws, first.end - ws),
                    e2_span=(second.start - ws, second.end - ws),
                    label=rel.label,
                    e1_role=first_role,
                    e2_role=second_role,
                )
            )
    dataset.check_unique_ids()
    for w in dataset.warnings:
        logger.warning(w)
    return dataset


def dataset_stats(dataset: Dataset) -> dict[str, dict[str, float | int]]:
    """Per-label counts and proportions; counts sum to len(dataset)."""
    counts = Counter(s.label for s in dataset.samples)
    total = len(dataset.samples)
    stats = {}
    for label in RelationLabel:
        c = counts.get(label, 0)
        stats[label.value] = {
            "count": c,
            "proportion": c / total if total else 0.0,
        }
    return stats


class SampleExtractor(BaseEstimator, TransformerMixin):
    """Estimator wrapper: documents in, relation samples out.

    Stateless; exists so extraction composes with sklearn pipelines and
    shares the get_params/set_params conventions.
    """

    def __init__(self, name: str = "original"):
        self.name = name

    def fit(self, X: Iterable[Document], y=None):
        # Local import: validation imports Sample from this module.
        from .validation import check_documents

        check_documents(X)
        return self

    def transform(self, X: Iterable[Document]) -> list[Sample]:
        from .validation import check_documents

        return extract_samples(check_documents(X), name=self.name).samples


def strip_markers(marked_text: str) -> tuple[str, tuple[int, int], tuple[int, int]]:
    """Recover raw text and spans from a marked string.

    Inverse of render_marked_text for texts that do not themselves contain
    marker tokens. Used by tests and by consumers that only persist the
    marked form.
    """
    positions = {}
    for marker in MARKERS:
        idx = marked_text.find(marker)
        if idx < 0 or marked_text.find(marker, idx + 1) >= 0:
            raise ValueError(f"marker {marker} must occur exactly once")
        pad = len(marker) + 1  # opening markers carry a trailing space, closing a leading one
        positions[marker] = (idx, pad)
    events = []
    for marker, (idx, pad) in positions.items():
        if marker.startswith("</"):
            events.append((idx - 1, idx - 1 + pad, marker))
        else:
            events.append((idx, idx + pad, marker))
    events.sort()
    raw_parts = []
    prev = 0
    raw_pos = {}
    removed = 0
    for start, end, marker in events:
        raw_parts.append(marked_text[prev:start])
        raw_pos[marker] = start - removed
        removed += end - start
        prev = end
    raw_parts.append(marked_text[prev:])
    raw = "".join(raw_parts)
    e1 = (raw_pos["<e1>"], raw_pos["</e1>"])
    e2 = (raw_pos["<e2>"], raw_pos["</e2>"])
    return raw, e1, e2
