"""Fine-tuning loop for the relation classifier."""

from __future__ import annotations

import json
import logging
import random
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import torch

from .data import EncodedDataset, RelationExample, encode
from .model import load_backbone

logger = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    backbone: str = "bert-base-uncased"
    train_batch: int = 4
    eval_batch: int = 8
    max_length: int = 384
    learning_rate: float = 2e-5
    epochs: int = 5
    dropout: float = 0.1
    seed: int = 0


@dataclass
class TrainResult:
    model_dir: Path
    step_losses: list[float]
    epoch_losses: list[float]
    val_losses: list[float]
    flagged: list[str]


def set_determinism(seed: int) -> None:
    random.seed(seed)
    np.random.seed(seed % (2**32))
    torch.manual_seed(seed)


def _batches(n: int, batch_size: int, order=None):
    order = list(range(n)) if order is None else list(order)
    for i in range(0, n, batch_size):
        yield order[i : i + batch_size]


@torch.no_grad()
def _mean_loss(model, dataset: EncodedDataset, batch_size: int) -> float:
    model.eval()
    total, count = 0.0, 0
    for batch in _batches(len(dataset.sample_ids), batch_size):
        out = model(
            input_ids=dataset.input_ids[batch],
            attention_mask=dataset.attention_mask[batch],
            labels=dataset.labels[batch],
        )
        total += float(out.loss) * len(batch)
        count += len(batch)
    return total / count if count else 0.0


def train(
    train_examples: list[RelationExample],
    val_examples: list[RelationExample],
    cfg: TrainConfig,
    out_dir: Path,
) -> TrainResult:
    """Fine-tune and save a checkpoint plus its training log.

    The log records every step loss and per-epoch means; a non-decreasing
    epoch sequence is reported as a warning, not an error.
    """
    set_determinism(cfg.seed)
    texts = [e.model_text for e in train_examples]
    tokenizer, model = load_backbone(cfg.backbone, cfg.dropout, train_texts=texts)
    train_data = encode(train_examples, tokenizer, cfg.max_length)
    val_data = encode(val_examples, tokenizer, cfg.max_length) if val_examples else None
    for sample_id in train_data.flagged:
        logger.warning("%s: entity region does not fit max_length, window re-centered", sample_id)

    optimizer = torch.optim.AdamW(model.parameters(), lr=cfg.learning_rate)
    shuffle_rng = random.Random(cfg.seed)
    n = len(train_examples)
    step_losses: list[float] = []
    epoch_losses: list[float] = []
    val_losses: list[float] = []
    for epoch in range(cfg.epochs):
        model.train()
        order = list(range(n))
        shuffle_rng.shuffle(order)
        epoch_total = 0.0
        for batch in _batches(n, cfg.train_batch, order):
            optimizer.zero_grad()
            out = model(
                input_ids=train_data.input_ids[batch],
                attention_mask=train_data.attention_mask[batch],
                labels=train_data.labels[batch],
            )
            out.loss.backward()
            optimizer.step()
            loss_value = out.loss.detach().item()
            step_losses.append(loss_value)
            epoch_total += loss_value * len(batch)
        epoch_losses.append(epoch_total / n)
        if val_data is not None:
            val_losses.append(_mean_loss(model, val_data, cfg.eval_batch))
        logger.info(
            "epoch %d: train loss %.4f%s",
            epoch + 1,
            epoch_losses[-1],
            f", val loss {val_losses[-1]:.4f}" if val_data is not None else "",
        )
        if epoch and epoch_losses[-1] > epoch_losses[-2]:
            logger.warning(
                "epoch %d train loss %.4f did not improve on %.4f",
                epoch + 1, epoch_losses[-1], epoch_losses[-2],
            )

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    log = {
        "config": asdict(cfg),
        "step_losses": step_losses,
        "epoch_losses": epoch_losses,
        "val_losses": val_losses,
        "flagged": train_data.flagged,
        "n_train": len(train_examples),
        "n_val": len(val_examples),
    }
    (out_dir / "training_log.json").write_text(
        json.dumps(log, indent=2) + "\n", encoding="utf-8"
    )
    return TrainResult(out_dir, step_losses, epoch_losses, val_losses, train_data.flagged)
