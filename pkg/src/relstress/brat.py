"""Brat standoff annotation parsing and serialization.

A snippet is stored as a pair of files: ``<stem>.txt`` with the raw text and
``<stem>.ann`` with one annotation per line. Text-bound annotations
(``T<id>``) carry a type label, character offsets, and the surface string;
relations (``R<id>``) link two text-bound ids as ``Arg1`` (anaphor) and
``Arg2`` (antecedent). Offsets count Unicode code points; CRLF input is
normalized to LF before any offset is interpreted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    DanglingReference,
    DuplicateAnnotationId,
    MalformedLine,
    OffsetMismatch,
    UnknownLabel,
    UnknownRelationLabel,
)


class RelationLabel(str, Enum):
    """The closed set of anaphoric relation labels."""

    CONTAINED = "CONTAINED"
    COREFERENCE = "COREFERENCE"
    REACTION_ASSOCIATED = "REACTION_ASSOCIATED"
    TRANSFORMED = "TRANSFORMED"
    WORK_UP = "WORK_UP"


LABELS: tuple[RelationLabel, ...] = tuple(RelationLabel)


def coerce_label(value: str | RelationLabel) -> RelationLabel:
    if isinstance(value, RelationLabel):
        return value
    try:
        return RelationLabel(value)
    except ValueError:
        raise UnknownLabel(f"label {value!r} outside the closed five-label set") from None


@dataclass(frozen=True)
class EntityMention:
    """A text-bound annotation.

    ``fragments`` holds every (start, end) pair from the annotation line;
    contiguous mentions have exactly one. For discontinuous mentions,
    ``start``/``end`` give the covering extent and the mention is flagged so
    relations touching it can be excluded downstream.
    """

    id: str
    type_label: str
    start: int
    end: int
    surface: str
    fragments: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if not self.fragments:
            object.__setattr__(self, "fragments", ((self.start, self.end),))
        if self.start >= self.end:
            raise ValueError(f"{self.id}: empty span [{self.start}, {self.end})")

    @property
    def discontinuous(self) -> bool:
        return len(self.fragments) > 1

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class RelationInstance:
    """A binary anaphoric relation; Arg1 is the anaphor, Arg2 the antecedent."""

    id: str
    label: RelationLabel
    anaphor_id: str
    antecedent_id: str


@dataclass
class Document:
    """One patent snippet: its text plus parsed annotations."""

    doc_id: str
    text: str
    entities: list[EntityMention] = field(default_factory=list)
    relations: list[RelationInstance] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list, compare=False)

    def entity_by_id(self) -> dict[str, EntityMention]:
        return {e.id: e for e in self.entities}


_T_LINE_RE = re.compile(r"^(T\d+)\t(\S+) (\d+ \d+(?:;\d+ \d+)*)\t(.*)$")
_R_LINE_RE = re.compile(r"^(R\d+)\t(\S+) Arg1:(\S+) Arg2:(\S+)\s*$")
# Annotation kinds brat may emit that this toolkit does not model.
_SKIPPED_KINDS = ("#", "A", "M", "E", "N", "*")


def normalize_newlines(s: str) -> str:
    return s.replace("\r\n", "\n").replace("\r", "\n")


def _parse_spans(span_text: str) -> tuple[tuple[int, int], ...]:
    fragments = []
    for chunk in span_text.split(";"):
        start_s, end_s = chunk.split(" ")
        fragments.append((int(start_s), int(end_s)))
    return tuple(fragments)


def _verify_surface(mention: EntityMention, text: str, doc_id: str, line_no: int) -> None:
    if mention.end > len(text):
        raise OffsetMismatch(
            f"{mention.id}: span [{mention.start}, {mention.end}) exceeds text "
            f"length {len(text)}",
            doc_id,
            line_no,
        )
    # Brat joins discontinuous fragments with a single space in the surface
    # column; a contiguous mention reduces to the plain slice.
    expected = " ".join(text[s:e] for s, e in mention.fragments)
    if expected != mention.surface:
        raise OffsetMismatch(
            f"{mention.id}: surface {mention.surface!r} != text slice {expected!r}",
            doc_id,
            line_no,
        )


def parse_document(text_content: str, ann_content: str, doc_id: str = "") -> Document:
    """Parse a .txt/.ann pair into a Document.

    T-lines with any type label become EntityMentions; R-lines become
    RelationInstances. Other annotation kinds (comments, attributes, events,
    normalizations) are skipped with a recorded warning. Any structural
    problem raises: the returned Document always satisfies its invariants.
    """
    text = normalize_newlines(text_content)
    doc = Document(doc_id=doc_id, text=text)
    seen_ids: set[str] = set()
    pending_relations: list[tuple[int, str, str, str, str]] = []

    for line_no, line in enumerate(normalize_newlines(ann_content).split("\n"), start=1):
        if not line.strip():
            continue
        kind = line[0]
        if kind == "T":
            m = _T_LINE_RE.match(line)
            if not m:
                raise MalformedLine(f"unparseable T-line {line!r}", doc_id, line_no)
            tid, type_label, span_text, surface = m.groups()
            if tid in seen_ids:
                raise DuplicateAnnotationId(f"duplicate id {tid}", doc_id, line_no)
            seen_ids.add(tid)
            fragments = _parse_spans(span_text)
            for s, e in fragments:
                if s >= e:
                    raise MalformedLine(f"{tid}: empty fragment [{s}, {e})", doc_id, line_no)
            mention = EntityMention(
                id=tid,
                type_label=type_label,
                start=fragments[0][0],
                end=fragments[-1][1],
                surface=surface,
                fragments=fragments,
            )
            _verify_surface(mention, text, doc_id, line_no)
            if mention.discontinuous:
                doc.warnings.append(f"{tid}: discontinuous span, flagged for exclusion")
            doc.entities.append(mention)
        elif kind == "R":
            m = _R_LINE_RE.match(line)
            if not m:
                raise MalformedLine(f"unparseable R-line {line!r}", doc_id, line_no)
            rid, label_text, arg1, arg2 = m.groups()
            if rid in seen_ids:
                raise DuplicateAnnotationId(f"duplicate id {rid}", doc_id, line_no)
            seen_ids.add(rid)
            try:
                label = RelationLabel(label_text)
            except ValueError:
                raise UnknownRelationLabel(
                    f"{rid}: unknown relation label {label_text!r}", doc_id, line_no
                ) from None
            if arg1 == arg2:
                raise MalformedLine(f"{rid}: Arg1 and Arg2 are both {arg1}", doc_id, line_no)
            pending_relations.append((line_no, rid, label, arg1, arg2))
        elif kind in _SKIPPED_KINDS:
            doc.warnings.append(f"line {line_no}: skipped unsupported {kind!r} annotation")
        else:
            raise MalformedLine(f"unrecognized line {line!r}", doc_id, line_no)

    known = {e.id for e in doc.entities}
    for line_no, rid, label, arg1, arg2 in pending_relations:
        for ref in (arg1, arg2):
            if ref not in known:
                raise DanglingReference(f"{rid}: unknown entity {ref}", doc_id, line_no)
        doc.relations.append(
            RelationInstance(id=rid, label=label, anaphor_id=arg1, antecedent_id=arg2)
        )
    return doc


def serialize_document(doc: Document) -> tuple[str, str]:
    """Inverse of parse_document, up to annotation ordering and warnings."""
    lines = []
    for e in doc.entities:
        span_text = ";".join(f"{s} {e_}" for s, e_ in e.fragments)
        lines.append(f"{e.id}\t{e.type_label} {span_text}\t{e.surface}")
    for r in doc.relations:
        lines.append(f"{r.id}\t{r.label.value} Arg1:{r.anaphor_id} Arg2:{r.antecedent_id}")
    ann_content = "\n".join(lines) + "\n" if lines else ""
    return doc.text, ann_content
