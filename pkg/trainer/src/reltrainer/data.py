"""Reading the toolkit's JSONL dataset export and encoding model inputs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import torch

from .labels import LABEL2ID
from .preprocess import to_model_text, truncate_around_entities


@dataclass(frozen=True)
class RelationExample:
    sample_id: str
    model_text: str
    label_id: int


def read_export(path: Path) -> list[RelationExample]:
    """Load a dataset export; one record per line with a marked_text field."""
    examples = []
    seen = set()
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            record = json.loads(line)
            sample_id = record["sample_id"]
            if sample_id in seen:
                raise ValueError(f"{path}:{line_no}: duplicate sample_id {sample_id}")
            seen.add(sample_id)
            label = record["label"]
            if label not in LABEL2ID:
                raise ValueError(f"{path}:{line_no}: unknown label {label!r}")
            examples.append(
                RelationExample(sample_id, to_model_text(record["marked_text"]), LABEL2ID[label])
            )
    return examples


@dataclass
class EncodedDataset:
    input_ids: torch.Tensor
    attention_mask: torch.Tensor
    labels: torch.Tensor
    sample_ids: list[str]
    flagged: list[str]  # samples whose entity region did not fit max_length


def encode(examples: list[RelationExample], tokenizer, max_length: int) -> EncodedDataset:
    """Tokenize with entity-aware truncation; pads to the longest sequence."""
    pad_id = tokenizer.pad_token_id
    cls_id = tokenizer.cls_token_id
    sep_id = tokenizer.sep_token_id
    rows = []
    flagged = []
    for example in examples:
        tokens = tokenizer.tokenize(example.model_text)
        window, fits = truncate_around_entities(tokens, max_length - 2)
        if not fits:
            flagged.append(example.sample_id)
        rows.append([cls_id] + tokenizer.convert_tokens_to_ids(window) + [sep_id])
    width = max((len(r) for r in rows), default=2)
    input_ids = torch.full((len(rows), width), pad_id, dtype=torch.long)
    attention_mask = torch.zeros((len(rows), width), dtype=torch.long)
    for i, row in enumerate(rows):
        input_ids[i, : len(row)] = torch.tensor(row, dtype=torch.long)
        attention_mask[i, : len(row)] = 1
    labels = torch.tensor([e.label_id for e in examples], dtype=torch.long)
    return EncodedDataset(
        input_ids=input_ids,
        attention_mask=attention_mask,
        labels=labels,
        sample_ids=[e.sample_id for e in examples],
        flagged=flagged,
    )
