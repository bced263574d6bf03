"""File formats: dataset JSONL exports, prediction files, corpus loading.

Dataset export: one JSON object per line with the fields sample_id, doc_id,
text, marked_text, e1_start, e1_end, e2_start, e2_end, label, e1_role,
noise_tag; UTF-8 with LF line endings. A sidecar ``<name>.meta`` records
provenance, seed, and counts. Prediction files carry one
{"sample_id", "label"} object per line.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from pathlib import Path
from typing import Iterable

from .brat import coerce_label
from .errors import RelstressError
from .samples import ANAPHOR, ANTECEDENT, Dataset, RawSnippet, Sample, render_marked_text
from .metrics import PredictionSet

DATASET_FIELDS = (
    "sample_id",
    "doc_id",
    "text",
    "marked_text",
    "e1_start",
    "e1_end",
    "e2_start",
    "e2_end",
    "label",
    "e1_role",
    "noise_tag",
)


def read_text_file(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def load_corpus_dir(corpus_dir: Path) -> list[RawSnippet]:
    """Collect .txt/.ann pairs; a snippet is any stem with either file."""
    corpus_dir = Path(corpus_dir)
    stems: dict[str, dict[str, Path]] = {}
    for path in corpus_dir.iterdir():
        if path.suffix in (".txt", ".ann") and path.is_file():
            stems.setdefault(path.stem, {})[path.suffix] = path
    snippets = []
    for stem in sorted(stems):
        files = stems[stem]
        snippets.append(
            RawSnippet(
                stem=stem,
                text_content=read_text_file(files[".txt"]) if ".txt" in files else None,
                ann_content=read_text_file(files[".ann"]) if ".ann" in files else None,
            )
        )
    return snippets


def sample_to_record(sample: Sample) -> dict:
    return {
        "sample_id": sample.sample_id,
        "doc_id": sample.doc_id,
        "text": sample.text,
        "marked_text": render_marked_text(sample),
        "e1_start": sample.e1_span[0],
        "e1_end": sample.e1_span[1],
        "e2_start": sample.e2_span[0],
        "e2_end": sample.e2_span[1],
        "label": sample.label.value,
        "e1_role": sample.e1_role,
        "noise_tag": sample.noise_tag,
    }


def record_to_sample(record: dict, verify: bool = True) -> Sample:
    e1_role = record["e1_role"]
    sample = Sample(
        sample_id=record["sample_id"],
        doc_id=record["doc_id"],
        text=record["text"],
        e1_span=(record["e1_start"], record["e1_end"]),
        e2_span=(record["e2_start"], record["e2_end"]),
        label=coerce_label(record["label"]),
        e1_role=e1_role,
        e2_role=ANTECEDENT if e1_role == ANAPHOR else ANAPHOR,
        noise_tag=record.get("noise_tag", ""),
    )
    if verify and record.get("marked_text") not in (None, render_marked_text(sample)):
        raise RelstressError(
            f"{sample.sample_id}: marked_text does not match spans and text"
        )
    return sample


def write_dataset(dataset: Dataset, path: Path, seed: int | None = None) -> None:
    """Write JSONL plus the ``<stem>.meta`` sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for sample in dataset.samples:
            fh.write(json.dumps(sample_to_record(sample), ensure_ascii=False))
            fh.write("\n")
    labels: dict[str, int] = {}
    for sample in dataset.samples:
        labels[sample.label.value] = labels.get(sample.label.value, 0) + 1
    meta = {
        "name": dataset.name,
        "provenance": dataset.provenance,
        "seed": seed,
        "n_samples": len(dataset.samples),
        "labels": dict(sorted(labels.items())),
    }
    path.with_suffix(".meta").write_text(
        json.dumps(meta, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def read_dataset(path: Path, verify: bool = True) -> Dataset:
    path = Path(path)
    samples = []
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                samples.append(record_to_sample(json.loads(line), verify=verify))
    name = path.stem
    provenance = "clean"
    meta_path = path.with_suffix(".meta")
    if meta_path.exists():
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        name = meta.get("name", name)
        provenance = meta.get("provenance", provenance)
    dataset = Dataset(name=name, samples=samples, provenance=provenance)
    dataset.check_unique_ids()
    return dataset


def write_predictions(preds: PredictionSet, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for sample_id, label in preds.entries.items():
            fh.write(json.dumps({"sample_id": sample_id, "label": label.value}))
            fh.write("\n")


def read_predictions(path: Path, source_tag: str = "") -> PredictionSet:
    pairs = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                record = json.loads(line)
                pairs.append((record["sample_id"], record["label"]))
    return PredictionSet.from_pairs(pairs, source_tag=source_tag or Path(path).stem)


def write_jsonl(records: Iterable[dict], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            if dataclasses.is_dataclass(record):
                record = dataclasses.asdict(record)
            fh.write(json.dumps(record, ensure_ascii=False))
            fh.write("\n")


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def tree_hashes(root: Path) -> dict[str, str]:
    """Relative path -> sha256 for every file under root."""
    root = Path(root)
    return {
        str(p.relative_to(root)).replace("\\", "/"): sha256_file(p)
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }
