"""Backbone construction: pretrained checkpoints or an offline scratch model.

``scratch-mini`` builds a small randomly initialized BERT whose vocabulary
is derived from the training texts. It exists for smoke tests and offline
environments; any checkpoint name or local path works when weights are
reachable.
"""

from __future__ import annotations

import tempfile
from pathlib import Path

from transformers import (
    AutoModelForSequenceClassification,
    AutoTokenizer,
    BasicTokenizer,
    BertConfig,
    BertForSequenceClassification,
    BertTokenizer,
)

from .labels import ID2LABEL, LABEL2ID, LABELS

SCRATCH_BACKBONE = "scratch-mini"
SPECIAL_TOKENS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]")


def build_scratch_vocab(texts: list[str]) -> list[str]:
    """Whole-word vocabulary over basic-tokenized training texts."""
    basic = BasicTokenizer(do_lower_case=True)
    seen = set()
    for text in texts:
        seen.update(basic.tokenize(text))
    seen.update(("$", "#"))
    return list(SPECIAL_TOKENS) + sorted(seen)


def build_scratch(texts: list[str], dropout: float):
    vocab = build_scratch_vocab(texts)
    with tempfile.TemporaryDirectory() as tmp:
        vocab_file = Path(tmp) / "vocab.txt"
        vocab_file.write_text("\n".join(vocab) + "\n", encoding="utf-8")
        tokenizer = BertTokenizer(str(vocab_file), do_lower_case=True)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=64,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=128,
        max_position_embeddings=512,
        hidden_dropout_prob=dropout,
        attention_probs_dropout_prob=dropout,
        num_labels=len(LABELS),
        label2id=LABEL2ID,
        id2label=ID2LABEL,
    )
    return tokenizer, BertForSequenceClassification(config)


def load_backbone(backbone: str, dropout: float, train_texts: list[str] | None = None):
    """Return (tokenizer, model) for a backbone name or checkpoint path."""
    if backbone == SCRATCH_BACKBONE:
        if not train_texts:
            raise ValueError("scratch-mini needs training texts to build its vocabulary")
        return build_scratch(train_texts, dropout)
    tokenizer = AutoTokenizer.from_pretrained(backbone)
    model = AutoModelForSequenceClassification.from_pretrained(
        backbone,
        num_labels=len(LABELS),
        label2id=LABEL2ID,
        id2label=ID2LABEL,
        hidden_dropout_prob=dropout,
        attention_probs_dropout_prob=dropout,
    )
    return tokenizer, model


def load_checkpoint(model_dir: Path):
    """Reload a saved (tokenizer, model) pair from a training run."""
    tokenizer = AutoTokenizer.from_pretrained(str(model_dir))
    model = AutoModelForSequenceClassification.from_pretrained(str(model_dir))
    return tokenizer, model
