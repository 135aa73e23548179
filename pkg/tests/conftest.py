import json

import numpy as np
import pytest

from core.embeddings import EmbeddingTable
from core.frameaxis import build_axes
from core.lexicon import parse_lexicon
from modules.campaigns.repository import CampaignRecord

# one coordinate per frame: care, fairness, loyalty; the fourth is moral noise
TOY_VECTORS = {
    "harm": [-1.0, 0.0, 0.0, 0.0],
    "care": [1.0, 0.0, 0.0, 0.0],
    "cheat": [0.0, -1.0, 0.0, 0.0],
    "fair": [0.0, 1.0, 0.0, 0.0],
    "betray": [0.0, 0.0, -1.0, 0.0],
    "loyal": [0.0, 0.0, 1.0, 0.0],
    "help": [1.0, 0.0, 0.0, 1.0],
    "dog": [0.0, 0.0, 0.0, 1.0],
}

TOY_SEEDS = """\
# toy seed pools
[care.vice]
harm
[care.virtue]
care
[fairness.vice]
cheat
[fairness.virtue]
fair
[loyalty.vice]
betray
[loyalty.virtue]
loyal
"""

TOY_VALENCE = "# token\tvalence\nlove\t3.2\nhelp\t1.7\nsad\t-2.1\n"


@pytest.fixture
def toy_table():
    return EmbeddingTable.from_mapping(TOY_VECTORS, source_path="toy")


@pytest.fixture
def toy_lexicon():
    return parse_lexicon(TOY_SEEDS, source="toy")


@pytest.fixture
def toy_axes(toy_lexicon, toy_table):
    return build_axes(toy_lexicon, toy_table)


@pytest.fixture
def toy_valence():
    return {"love": 3.2, "help": 1.7, "sad": -2.1}


@pytest.fixture
def embedding_file(tmp_path):
    path = tmp_path / "vectors.txt"
    lines = [f"{token} {' '.join(str(x) for x in vector)}" for token, vector in TOY_VECTORS.items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def lexicon_file(tmp_path):
    path = tmp_path / "seeds.txt"
    path.write_text(TOY_SEEDS, encoding="utf-8")
    return path


@pytest.fixture
def valence_file(tmp_path):
    path = tmp_path / "valence.tsv"
    path.write_text(TOY_VALENCE, encoding="utf-8")
    return path


@pytest.fixture
def write_jsonl(tmp_path):
    def _write(rows, name="campaigns.jsonl"):
        path = tmp_path / name
        with path.open("w", encoding="utf-8") as handle:
            for row in rows:
                handle.write((row if isinstance(row, str) else json.dumps(row)) + "\n")
        return path

    return _write


@pytest.fixture
def make_record():
    counter = {"n": 0}

    def _make(**overrides):
        counter["n"] += 1
        values = {
            "campaign_id": f"c{counter['n']:03d}",
            "category": "Animals",
            "raw_category": "Animals",
            "appeal_text": "help dog",
            "goal_amount": 500.0,
            "photo_count": 0,
            "donations": (),
            "comments": (),
        }
        values.update(overrides)
        if "raw_category" not in overrides:
            values["raw_category"] = values["category"]
        values["donations"] = tuple(values["donations"])
        values["comments"] = tuple(values["comments"])
        return CampaignRecord(**values)

    return _make


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
