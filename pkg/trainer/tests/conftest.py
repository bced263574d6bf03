import json
import random

import pytest

KEYWORDS = {
    "CONTAINED": "charged",
    "COREFERENCE": "obtained",
    "REACTION_ASSOCIATED": "mixed",
    "TRANSFORMED": "stirred",
    "WORK_UP": "washed",
}
NOUNS = ["mixture", "residue", "solution", "filtrate", "suspension", "solid", "oil"]


def make_records(n, seed=0):
    """Toy records in the dataset-export wire format, one keyword per label."""
    rng = random.Random(seed)
    labels = sorted(KEYWORDS)
    records = []
    for i in range(n):
        label = labels[i % len(labels)]
        first = f"the {rng.choice(NOUNS)}"
        second = f"the {rng.choice(NOUNS)}"
        head = f"{first} was {KEYWORDS[label]} with "
        text = head + second + " overnight"
        e1 = (0, len(first))
        e2 = (len(head), len(head) + len(second))
        marked = (
            f"<e1> {first} </e1> was {KEYWORDS[label]} with <e2> {second} </e2> overnight"
        )
        records.append(
            {
                "sample_id": f"toy:R{i}",
                "doc_id": "toy",
                "text": text,
                "marked_text": marked,
                "e1_start": e1[0],
                "e1_end": e1[1],
                "e2_start": e2[0],
                "e2_end": e2[1],
                "label": label,
                "e1_role": "anaphor",
                "noise_tag": "",
            }
        )
    return records


def write_export(records, path):
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False))
            fh.write("\n")


@pytest.fixture
def toy_export(tmp_path):
    path = tmp_path / "toy.jsonl"
    write_export(make_records(50), path)
    return path


@pytest.fixture
def toy_val_export(tmp_path):
    path = tmp_path / "toy_val.jsonl"
    write_export(make_records(10, seed=1), path)
    return path
