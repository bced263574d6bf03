"""Command-line entry point: train and predict over dataset exports."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .data import read_export
from .predict import predict, write_predictions
from .training import TrainConfig, train


def _cmd_train(args) -> int:
    cfg = TrainConfig(
        backbone=args.backbone,
        train_batch=args.train_batch,
        eval_batch=args.eval_batch,
        max_length=args.max_length,
        learning_rate=args.learning_rate,
        epochs=args.epochs,
        dropout=args.dropout,
        seed=args.seed,
    )
    train_examples = read_export(Path(args.train))
    val_examples = read_export(Path(args.val)) if args.val else []
    result = train(train_examples, val_examples, cfg, Path(args.out))
    print(f"saved checkpoint to {result.model_dir}")
    print("epoch losses: " + ", ".join(f"{v:.4f}" for v in result.epoch_losses))
    if result.flagged:
        print(f"{len(result.flagged)} samples re-centered around their entities")
    return 0


def _cmd_predict(args) -> int:
    examples = read_export(Path(args.infile))
    pairs = predict(
        Path(args.model), examples, max_length=args.max_length, batch_size=args.batch
    )
    write_predictions(pairs, Path(args.out))
    print(f"wrote {len(pairs)} predictions to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reltrainer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    defaults = TrainConfig()
    p = sub.add_parser("train", help="fine-tune a relation classifier")
    p.add_argument("--train", required=True, help="training dataset export (.jsonl)")
    p.add_argument("--val", help="validation dataset export (.jsonl)")
    p.add_argument("--out", required=True, help="checkpoint output directory")
    p.add_argument("--backbone", default=defaults.backbone,
                   help="checkpoint name/path, or scratch-mini for an offline model")
    p.add_argument("--train-batch", type=int, default=defaults.train_batch)
    p.add_argument("--eval-batch", type=int, default=defaults.eval_batch)
    p.add_argument("--max-length", type=int, default=defaults.max_length)
    p.add_argument("--learning-rate", type=float, default=defaults.learning_rate)
    p.add_argument("--epochs", type=int, default=defaults.epochs)
    p.add_argument("--dropout", type=float, default=defaults.dropout)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="write predictions for a dataset export")
    p.add_argument("--model", required=True, help="checkpoint directory")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-length", type=int, default=defaults.max_length)
    p.add_argument("--batch", type=int, default=defaults.eval_batch)
    p.set_defaults(func=_cmd_predict)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
