"""Round trip with the separately packaged trainer, over wire formats only.

The trainer is a different distribution; this test talks to it purely
through its CLI and the shared JSONL formats, and skips when it is not
installed.
"""

import importlib.util
import json
import subprocess
import sys

import pytest

from relstress.cli import main

pytestmark = pytest.mark.skipif(
    importlib.util.find_spec("reltrainer") is None,
    reason="reltrainer distribution not installed",
)


def trainer(args):
    return subprocess.run(
        [sys.executable, "-m", "reltrainer.cli", *args],
        capture_output=True,
        text=True,
        timeout=300,
    )


def test_train_predict_score_round_trip(synthetic_dir, tmp_path, capsys):
    out_dir = tmp_path / "artifacts"
    assert main([
        "matrix", "--corpus", str(synthetic_dir), "--out-dir", str(out_dir),
        "--seed", "42", "--ocr-wers", "0.25", "--ner-fractions", "0.5",
    ]) == 0

    model_dir = tmp_path / "model"
    completed = trainer([
        "train", "--train", str(out_dir / "fold1.train.jsonl"),
        "--out", str(model_dir), "--backbone", "scratch-mini",
        "--epochs", "1", "--max-length", "96", "--seed", "5",
    ])
    assert completed.returncode == 0, completed.stderr

    preds_path = tmp_path / "preds.jsonl"
    completed = trainer([
        "predict", "--model", str(model_dir), "--in", str(out_dir / "test.jsonl"),
        "--out", str(preds_path), "--max-length", "96",
    ])
    assert completed.returncode == 0, completed.stderr

    report_path = tmp_path / "report.json"
    assert main([
        "score", "--gold", str(out_dir / "test.jsonl"),
        "--preds", str(preds_path), "--out", str(report_path),
    ]) == 0
    report = json.loads(report_path.read_text())
    assert report["n"] == 55
    assert 0.0 <= report["macro_f1"] <= 1.0
