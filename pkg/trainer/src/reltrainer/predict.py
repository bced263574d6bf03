"""Prediction over dataset exports, written in the scorer's wire format."""

from __future__ import annotations

import json
from pathlib import Path

import torch

from .data import RelationExample, encode
from .labels import ID2LABEL
from .model import load_checkpoint


@torch.no_grad()
def predict(model_dir: Path, examples: list[RelationExample], max_length: int = 384,
            batch_size: int = 8) -> list[tuple[str, str]]:
    """(sample_id, label) per input example, in input order."""
    tokenizer, model = load_checkpoint(Path(model_dir))
    model.eval()
    if not examples:
        return []
    data = encode(examples, tokenizer, max_length)
    pairs: list[tuple[str, str]] = []
    for start in range(0, len(examples), batch_size):
        sl = slice(start, start + batch_size)
        logits = model(
            input_ids=data.input_ids[sl], attention_mask=data.attention_mask[sl]
        ).logits
        for sample_id, label_id in zip(data.sample_ids[sl], logits.argmax(dim=-1).tolist()):
            pairs.append((sample_id, ID2LABEL[label_id]))
    return pairs


def write_predictions(pairs: list[tuple[str, str]], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for sample_id, label in pairs:
            fh.write(json.dumps({"sample_id": sample_id, "label": label}))
            fh.write("\n")
