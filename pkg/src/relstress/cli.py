"""Command-line entry point.

Subcommands: validate, extract, split, perturb ocr, perturb ner, stats,
score, matrix. The matrix command drives the full pipeline from a flat
key=value config file (validate, clean, extract, split, perturb every
configured variant, stats, optional prediction-grid scoring) and writes a
manifest hashing every produced file. Exit codes: 0 success, 1 usage,
2 validation failure, 3 pipeline failure.
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .brat import parse_document
from .errors import PipelineError, RelstressError
from .io import (
    load_corpus_dir,
    read_dataset,
    read_predictions,
    sha256_file,
    write_dataset,
    write_jsonl,
)
from .metrics import confusion_render, render_grid, report_table, score
from .ner import NerNoiseConfig, perturb_ner
from .ocr import OcrNoiseConfig, perturb_ocr
from .samples import clean_corpus, dataset_stats, extract_samples
from .splitting import SplitSpec, stratified_split, to_fraction

DEFAULT_OCR_WERS = (Fraction(1, 20), Fraction(1, 10), Fraction(1, 4), Fraction(1, 2))
DEFAULT_NER_FRACTIONS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


@dataclass
class ExperimentConfig:
    corpus_dir: Path
    output_dir: Path
    seed: int
    test_fraction: Fraction = Fraction(1, 4)
    k_folds: int = 5
    ocr_wers: tuple[Fraction, ...] = DEFAULT_OCR_WERS
    ner_fractions: tuple[Fraction, ...] = DEFAULT_NER_FRACTIONS
    predictions_dir: Path | None = None

    def to_dict(self) -> dict:
        # output_dir is intentionally absent: the manifest lives inside it,
        # and recording it would make otherwise-identical runs differ.
        return {
            "corpus_dir": str(self.corpus_dir),
            "seed": self.seed,
            "test_fraction": str(self.test_fraction),
            "k_folds": self.k_folds,
            "ocr_wers": [str(w) for w in self.ocr_wers],
            "ner_fractions": [str(f) for f in self.ner_fractions],
            "predictions_dir": str(self.predictions_dir) if self.predictions_dir else None,
        }


def parse_config_file(path: Path) -> dict[str, str]:
    """Flat ``key = value`` lines; '#' starts a comment."""
    values: dict[str, str] = {}
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PipelineError("config", f"{path}:{line_no}: expected 'key = value'")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _fraction_list(text: str) -> tuple[Fraction, ...]:
    return tuple(to_fraction(part.strip()) for part in text.split(",") if part.strip())


def pct_tag(value: Fraction) -> str:
    hundred = value * 100
    return str(int(hundred)) if hundred.denominator == 1 else f"{float(hundred):g}"


# ----------------------------------------------------------------- pipeline


def _validate_corpus(corpus_dir: Path) -> dict:
    """Per-file problem report; never aborts on the first issue."""
    snippets = load_corpus_dir(corpus_dir)
    entries = []
    n_errors = 0
    for snip in snippets:
        issues = []
        if snip.text_content is None:
            issues.append({"severity": "error", "message": "orphan annotation file"})
        else:
            try:
                doc = parse_document(snip.text_content, snip.ann_content or "", snip.stem)
            except RelstressError as err:
                issues.append({"severity": "error", "message": f"{type(err).__name__}: {err}"})
            else:
                issues.extend({"severity": "warning", "message": w} for w in doc.warnings)
                if snip.ann_content is None:
                    issues.append({"severity": "warning", "message": "no annotation file"})
        n_errors += sum(1 for i in issues if i["severity"] == "error")
        if issues:
            entries.append({"stem": snip.stem, "issues": issues})
    return {"files_checked": len(snippets), "errors": n_errors, "entries": entries}


def run_pipeline(cfg: ExperimentConfig) -> dict:
    """Produce the full artifact tree; idempotent under a fixed config.

    Everything is built in a staging directory that replaces output_dir only
    on success, so a failed run leaves no partial outputs behind.
    """
    out_dir = Path(cfg.output_dir)
    staging = out_dir.parent / (out_dir.name + ".staging")
    if staging.exists():
        shutil.rmtree(staging)
    staging.mkdir(parents=True)
    try:
        manifest = _run_stages(cfg, staging)
    except Exception:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    if out_dir.exists():
        shutil.rmtree(out_dir)
    staging.rename(out_dir)
    return manifest


def _run_stages(cfg: ExperimentConfig, out: Path) -> dict:
    snippets = load_corpus_dir(cfg.corpus_dir)
    if not snippets:
        raise PipelineError("load", f"no .txt/.ann pairs under {cfg.corpus_dir}")

    documents, cleaning = clean_corpus(snippets)
    (out / "cleaning_report.json").write_text(
        json.dumps(
            {
                "retained": len(documents),
                "removed": [{"stem": s, "reason": r} for s, r in cleaning.removed],
                "warnings": cleaning.warnings,
            },
            ensure_ascii=False,
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )

    original = extract_samples(documents, name="original")
    write_dataset(original, out / "original.jsonl", seed=cfg.seed)

    spec = SplitSpec(seed=cfg.seed, test_fraction=cfg.test_fraction, k_folds=cfg.k_folds)
    split = stratified_split(original, spec)
    write_dataset(split.train, out / "train.jsonl", seed=cfg.seed)
    write_dataset(split.test, out / "test.jsonl", seed=cfg.seed)
    for tr, val in split.folds:
        write_dataset(tr, out / f"{tr.name}.jsonl", seed=cfg.seed)
        write_dataset(val, out / f"{val.name}.jsonl", seed=cfg.seed)
    _write_split_manifest(split, spec, out / "split_manifest.json")

    datasets = {"original": original, "train": split.train, "test": split.test}
    for wer in cfg.ocr_wers:
        for base_name in ("train", "test"):
            tag = f"ocr{pct_tag(wer)}"
            noisy, edits = perturb_ocr(datasets[base_name], OcrNoiseConfig(wer, cfg.seed))
            noisy.name = f"{base_name}.{tag}"
            write_dataset(noisy, out / f"{noisy.name}.jsonl", seed=cfg.seed)
            write_jsonl(
                (
                    {"sample_id": s.sample_id, "edits": [e.__dict__ for e in sample_edits]}
                    for s, sample_edits in zip(noisy.samples, edits)
                ),
                out / f"{noisy.name}.edits.jsonl",
            )
            datasets[noisy.name] = noisy
    for fraction in cfg.ner_fractions:
        for base_name in ("train", "test"):
            tag = f"ner{pct_tag(fraction)}"
            noisy, mutations = perturb_ner(
                datasets[base_name], NerNoiseConfig(fraction, cfg.seed)
            )
            noisy.name = f"{base_name}.{tag}"
            write_dataset(noisy, out / f"{noisy.name}.jsonl", seed=cfg.seed)
            write_jsonl((m.__dict__ for m in mutations), out / f"{noisy.name}.mutations.jsonl")
            datasets[noisy.name] = noisy

    stats = {name: dataset_stats(ds) for name, ds in sorted(datasets.items())}
    (out / "stats.json").write_text(
        json.dumps(stats, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )

    if cfg.predictions_dir is not None:
        _score_grid(cfg, datasets, out)

    manifest = {
        "seed": cfg.seed,
        "config": cfg.to_dict(),
        "files": {},
    }
    for path in sorted(out.rglob("*")):
        if path.is_file():
            manifest["files"][str(path.relative_to(out))] = sha256_file(path)
    (out / "manifest.json").write_text(
        json.dumps(manifest, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    return manifest


def _write_split_manifest(split, spec: SplitSpec, path: Path) -> None:
    def counts(dataset):
        table: dict[str, int] = {}
        for s in dataset.samples:
            table[s.label.value] = table.get(s.label.value, 0) + 1
        return dict(sorted(table.items()))

    manifest = {
        "seed": spec.seed,
        "test_fraction": str(spec.test_fraction),
        "k_folds": spec.k_folds,
        "counts": {
            "train": counts(split.train),
            "test": counts(split.test),
            **{val.name: counts(val) for _, val in split.folds},
        },
        "sizes": {
            "train": len(split.train.samples),
            "test": len(split.test.samples),
        },
    }
    path.write_text(
        json.dumps(manifest, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def _grid_tags(cfg: ExperimentConfig) -> list[str]:
    return (
        ["clean"]
        + [f"ocr{pct_tag(w)}" for w in cfg.ocr_wers]
        + [f"ner{pct_tag(f)}" for f in cfg.ner_fractions]
    )


def _score_grid(cfg: ExperimentConfig, datasets: dict, out: Path) -> None:
    """Score {train_tag}__{test_tag}.jsonl prediction files into a grid."""
    tags = _grid_tags(cfg)
    cells: dict[tuple[str, str], float | None] = {}
    reports = {}
    for train_tag in tags:
        for test_tag in tags:
            pred_path = Path(cfg.predictions_dir) / f"{train_tag}__{test_tag}.jsonl"
            if not pred_path.exists():
                cells[(train_tag, test_tag)] = None
                continue
            gold_name = "test" if test_tag == "clean" else f"test.{test_tag}"
            preds = read_predictions(pred_path, source_tag=f"{train_tag}__{test_tag}")
            report = score(datasets[gold_name], preds)
            cells[(train_tag, test_tag)] = report.macro_f1
            reports[f"{train_tag}__{test_tag}"] = report.to_dict()
    (out / "grid.txt").write_text(render_grid(cells, tags, tags) + "\n", encoding="utf-8")
    (out / "grid.json").write_text(
        json.dumps(
            {
                "train_tags": tags,
                "test_tags": tags,
                "macro_f1": {f"{tr}__{te}": v for (tr, te), v in sorted(cells.items())},
                "reports": reports,
            },
            ensure_ascii=False,
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )


# ---------------------------------------------------------------- commands


def _cmd_validate(args) -> int:
    report = _validate_corpus(Path(args.corpus))
    if args.json:
        Path(args.json).write_text(
            json.dumps(report, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
    for entry in report["entries"]:
        for issue in entry["issues"]:
            print(f"{entry['stem']}: [{issue['severity']}] {issue['message']}")
    print(f"checked {report['files_checked']} snippets, {report['errors']} errors")
    return 2 if report["errors"] else 0


def _cmd_extract(args) -> int:
    snippets = load_corpus_dir(Path(args.corpus))
    if not snippets:
        raise PipelineError("extract", f"no .txt/.ann pairs under {args.corpus}")
    documents, cleaning = clean_corpus(snippets)
    dataset = extract_samples(documents, name=args.name)
    write_dataset(dataset, Path(args.out))
    if args.report:
        Path(args.report).write_text(
            json.dumps(
                {
                    "retained": len(documents),
                    "removed": [{"stem": s, "reason": r} for s, r in cleaning.removed],
                    "warnings": cleaning.warnings + dataset.warnings,
                },
                ensure_ascii=False,
                indent=2,
            )
            + "\n",
            encoding="utf-8",
        )
    for stem, reason in cleaning.removed:
        print(f"removed {stem}: {reason}")
    print(f"retained {len(documents)} documents, extracted {len(dataset.samples)} samples")
    return 0


def _cmd_split(args) -> int:
    dataset = read_dataset(Path(args.infile))
    spec = SplitSpec(
        seed=args.seed,
        test_fraction=to_fraction(args.test_fraction),
        k_folds=args.k_folds,
    )
    split = stratified_split(dataset, spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_dataset(split.train, out_dir / "train.jsonl", seed=args.seed)
    write_dataset(split.test, out_dir / "test.jsonl", seed=args.seed)
    for tr, val in split.folds:
        write_dataset(tr, out_dir / f"{tr.name}.jsonl", seed=args.seed)
        write_dataset(val, out_dir / f"{val.name}.jsonl", seed=args.seed)
    _write_split_manifest(split, spec, out_dir / "split_manifest.json")
    print(f"train {len(split.train.samples)}, test {len(split.test.samples)}")
    return 0


def _cmd_perturb_ocr(args) -> int:
    dataset = read_dataset(Path(args.infile))
    noisy, edits = perturb_ocr(dataset, OcrNoiseConfig(to_fraction(args.wer), args.seed))
    write_dataset(noisy, Path(args.out), seed=args.seed)
    if args.log:
        write_jsonl(
            (
                {"sample_id": s.sample_id, "edits": [e.__dict__ for e in sample_edits]}
                for s, sample_edits in zip(noisy.samples, edits)
            ),
            Path(args.log),
        )
    for warning in noisy.warnings:
        print(f"warning: {warning}")
    print(f"perturbed {len(noisy.samples)} samples at wer {args.wer}")
    return 0


def _cmd_perturb_ner(args) -> int:
    dataset = read_dataset(Path(args.infile))
    noisy, mutations = perturb_ner(
        dataset, NerNoiseConfig(to_fraction(args.fraction), args.seed)
    )
    write_dataset(noisy, Path(args.out), seed=args.seed)
    if args.log:
        write_jsonl((m.__dict__ for m in mutations), Path(args.log))
    for warning in noisy.warnings:
        print(f"warning: {warning}")
    print(f"mutated {len(mutations)} of {len(noisy.samples)} samples")
    return 0


def _cmd_stats(args) -> int:
    dataset = read_dataset(Path(args.infile))
    stats = dataset_stats(dataset)
    if args.json:
        Path(args.json).write_text(
            json.dumps(stats, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    print(f"dataset {dataset.name}: {len(dataset.samples)} samples")
    for label, row in stats.items():
        print(f"  {label:<22} {row['count']:>8} {row['proportion']:>8.4f}")
    return 0


def _cmd_score(args) -> int:
    gold = read_dataset(Path(args.gold))
    preds = read_predictions(Path(args.preds), source_tag=args.tag)
    report = score(gold, preds)
    print(report_table(report))
    print()
    print(confusion_render(report, normalize=args.normalize))
    if args.out:
        Path(args.out).write_text(
            json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8",
        )
    return 0


def _cmd_matrix(args) -> int:
    values: dict[str, str] = {}
    if args.config:
        values = parse_config_file(Path(args.config))
    overrides = {
        "corpus_dir": args.corpus,
        "output_dir": args.out_dir,
        "seed": args.seed,
        "test_fraction": args.test_fraction,
        "k_folds": args.k_folds,
        "ocr_wers": args.ocr_wers,
        "ner_fractions": args.ner_fractions,
        "predictions_dir": args.predictions_dir,
    }
    for key, value in overrides.items():
        if value is not None:
            values[key] = str(value)
    for required in ("corpus_dir", "output_dir", "seed"):
        if required not in values:
            raise PipelineError("config", f"missing required setting {required!r}")
    cfg = ExperimentConfig(
        corpus_dir=Path(values["corpus_dir"]),
        output_dir=Path(values["output_dir"]),
        seed=int(values["seed"]),
        test_fraction=to_fraction(values.get("test_fraction", "0.25")),
        k_folds=int(values.get("k_folds", "5")),
        ocr_wers=_fraction_list(values["ocr_wers"]) if "ocr_wers" in values else DEFAULT_OCR_WERS,
        ner_fractions=(
            _fraction_list(values["ner_fractions"])
            if "ner_fractions" in values
            else DEFAULT_NER_FRACTIONS
        ),
        predictions_dir=Path(values["predictions_dir"]) if values.get("predictions_dir") else None,
    )
    manifest = run_pipeline(cfg)
    print(f"wrote {len(manifest['files'])} files to {cfg.output_dir}")
    grid_path = Path(cfg.output_dir) / "grid.txt"
    if grid_path.exists():
        print(grid_path.read_text(encoding="utf-8"))
    return 0


# ------------------------------------------------------------------ parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relstress", description=__doc__)
    parser.add_argument("--version", action="version", version=f"relstress {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="report parse problems per corpus file")
    p.add_argument("corpus", help="directory of .txt/.ann pairs")
    p.add_argument("--json", help="write the report to this path")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("extract", help="clean a corpus and extract relation samples")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="output dataset .jsonl")
    p.add_argument("--name", default="original")
    p.add_argument("--report", help="write the cleaning report to this path")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("split", help="stratified holdout plus k-fold assignment")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--test-fraction", default="0.25")
    p.add_argument("--k-folds", type=int, default=5)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("perturb", help="generate a noisy dataset variant")
    perturb_sub = p.add_subparsers(dest="noise", required=True, parser_class=_Parser)

    p_ocr = perturb_sub.add_parser("ocr", help="keyboard-typo and swap noise")
    p_ocr.add_argument("--wer", required=True, help="word error rate in (0, 1]")
    p_ocr.add_argument("--seed", type=int, required=True)
    p_ocr.add_argument("--in", dest="infile", required=True)
    p_ocr.add_argument("--out", required=True)
    p_ocr.add_argument("--log", help="write the per-sample edit log here")
    p_ocr.set_defaults(func=_cmd_perturb_ocr)

    p_ner = perturb_sub.add_parser("ner", help="span-boundary noise")
    p_ner.add_argument("--fraction", required=True, help="fraction of samples in (0, 1]")
    p_ner.add_argument("--seed", type=int, required=True)
    p_ner.add_argument("--in", dest="infile", required=True)
    p_ner.add_argument("--out", required=True)
    p_ner.add_argument("--log", help="write the mutation log here")
    p_ner.set_defaults(func=_cmd_perturb_ner)

    p = sub.add_parser("stats", help="per-label counts and proportions")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--json", help="write stats to this path")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("score", help="score a predictions file against gold")
    p.add_argument("--gold", required=True)
    p.add_argument("--preds", required=True)
    p.add_argument("--tag", default="")
    p.add_argument("--normalize", action="store_true", help="row-normalize the confusion matrix")
    p.add_argument("--out", help="write the report as JSON")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("matrix", help="run the full pipeline from a config file")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--corpus", dest="corpus")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--seed", type=int)
    p.add_argument("--test-fraction", dest="test_fraction")
    p.add_argument("--k-folds", dest="k_folds", type=int)
    p.add_argument("--ocr-wers", dest="ocr_wers", help="comma-separated WER grid")
    p.add_argument("--ner-fractions", dest="ner_fractions", help="comma-separated fraction grid")
    p.add_argument("--predictions-dir", dest="predictions_dir")
    p.set_defaults(func=_cmd_matrix)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PipelineError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except RelstressError as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
