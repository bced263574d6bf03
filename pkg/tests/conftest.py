import sys
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"
sys.path.insert(0, str(DATA_DIR))

from relstress.io import load_corpus_dir  # noqa: E402
from relstress.samples import clean_corpus, extract_samples  # noqa: E402


@pytest.fixture(scope="session")
def reference_pair() -> tuple[str, str]:
    stem = DATA_DIR / "reference_snippet" / "prep_example_02"
    return (
        stem.with_suffix(".txt").read_text(encoding="utf-8"),
        stem.with_suffix(".ann").read_text(encoding="utf-8"),
    )


@pytest.fixture(scope="session")
def reference_dir() -> Path:
    return DATA_DIR / "reference_snippet"


@pytest.fixture(scope="session")
def synthetic_dir() -> Path:
    return DATA_DIR / "synthetic"


@pytest.fixture(scope="session")
def synthetic_dataset(synthetic_dir):
    documents, _ = clean_corpus(load_corpus_dir(synthetic_dir))
    return extract_samples(documents)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for status in ("passed", "failed"):
        for report in terminalreporter.stats.get(status, []):
            if "test_acceptance.py" in report.nodeid:
                name = report.nodeid.split("::")[-1]
                lines.append((name, status.upper()))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{'PASS' if status == 'PASSED' else 'FAIL'}  {name}")
