"""Synthetic corpora with planted effects, for recovery checks and CLI runs."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from core.config import CATEGORIES, FRAMES
from core.embeddings import EmbeddingTable, write_embeddings
from core.frameaxis import build_axes
from core.lexicon import POLES, SeedLexicon, serialize_lexicon, validate_lexicon
from core.stats import INTERCEPT
from modules.campaigns.repository import CampaignRecord
from modules.campaigns.services import build_feature_row, score_text
from modules.models.services import MODEL_OUTCOMES, design_row, design_columns

logger = logging.getLogger(__name__)

DIMENSION = 24
SEEDS_PER_POLE = 6
NOISE_SD = 0.5
AXIS_SHRINK = 0.35
NEUTRAL_WORDS = 500
SEED_RATE = 1.0
DONATION_AMOUNT = 25.0
FILLER = "word"
SENTIMENT_WORDS = {"positive": "good", "negative": "bad", "neutral": None}
SYNTH_VALENCE = {"good": 1.9, "bad": -2.5}

# planted Model 1 coefficients
TRUE_COEFFICIENTS = {
    INTERCEPT: 0.6,
    "Emergency": 0.95,
    "Medical": 0.7,
    "Memorial": 1.2,
    "Care": 2.1,
    "Fairness": 0.45,
    "Loyalty": -1.15,
    "Emergency x Care": -3.4,
    "Medical x Care": -0.4,
    "Memorial x Care": -1.0,
    "Emergency x Fairness": -8.3,
    "Medical x Fairness": -1.6,
    "Memorial x Fairness": -3.7,
    "Emergency x Loyalty": 9.25,
    "Medical x Loyalty": 4.3,
    "Memorial x Loyalty": 3.0,
    "Positive": 0.0,
    "Neutral": -0.1,
    "log_length": 0.05,
    "log_photos": 0.03,
    "log_goal": 0.28,
}


@dataclass
class SyntheticCorpus:
    table: EmbeddingTable
    lexicon: SeedLexicon
    valence: dict[str, float]
    records: list[CampaignRecord]
    coefficients: dict[str, float]
    seed: int


def seed_word(frame: str, pole: str, index: int) -> str:
    return f"{frame}{pole}{index}"


def neutral_word(index: int) -> str:
    return f"w{index:04d}"


def _build_vocabulary(rng: np.random.Generator) -> dict[str, np.ndarray]:
    entries = {}
    # each frame owns one coordinate; seeds sit near its two ends
    for axis, frame in enumerate(FRAMES):
        for pole in POLES:
            sign = 1.0 if pole == "virtue" else -1.0
            for index in range(SEEDS_PER_POLE):
                vector = rng.normal(0.0, 0.05, DIMENSION)
                vector[axis] += sign
                entries[seed_word(frame, pole, index)] = vector
    for index in range(NEUTRAL_WORDS):
        vector = rng.normal(0.0, 1.0, DIMENSION)
        vector[: len(FRAMES)] *= AXIS_SHRINK
        entries[neutral_word(index)] = vector
    return entries


def _seed_draws(rng: np.random.Generator) -> list[str]:
    words = []
    for frame in FRAMES:
        for pole in POLES:
            for _ in range(int(rng.poisson(SEED_RATE))):
                words.append(seed_word(frame, pole, int(rng.integers(0, SEEDS_PER_POLE))))
    return words


def _neutral_draws(rng: np.random.Generator, low: int, high: int) -> list[str]:
    return [neutral_word(int(j)) for j in rng.integers(0, NEUTRAL_WORDS, size=int(rng.integers(low, high)))]


def _appeal_text(rng: np.random.Generator, seeds: list[str], sentiment: str) -> str:
    words = seeds + _neutral_draws(rng, 20, 60)
    words += [FILLER] * int(rng.integers(5, 250))
    if SENTIMENT_WORDS[sentiment]:
        words.append(SENTIMENT_WORDS[sentiment])
    rng.shuffle(words)
    return " ".join(words)


def _comments(rng: np.random.Generator, seeds: list[str]) -> tuple[str, ...]:
    comments = []
    for _ in range(int(rng.integers(0, 6))):
        words = _neutral_draws(rng, 1, 4) + ["thanks"] * int(rng.integers(0, 12))
        # comments echo the appeal's moral language about half the time
        if seeds and rng.random() < 0.5:
            words.append(seeds[int(rng.integers(0, len(seeds)))])
        comments.append(" ".join(words))
    return tuple(comments)


def generate_corpus(n_campaigns: int = 2000, seed: int = 0) -> SyntheticCorpus:
    if n_campaigns < len(design_columns()) + 1:
        raise ValueError("too few campaigns for the full design")
    rng = np.random.default_rng(seed)
    entries = _build_vocabulary(rng)
    table = EmbeddingTable.from_mapping(entries, source_path=f"synthetic:{seed}")
    lexicon = validate_lexicon(
        {
            frame: tuple(
                [seed_word(frame, pole, i) for i in range(SEEDS_PER_POLE)] for pole in POLES
            )
            for frame in FRAMES
        },
        source=f"synthetic:{seed}",
    )
    axes = build_axes(lexicon, table)
    beta = np.array([TRUE_COEFFICIENTS[name] for name in design_columns()])
    sentiments = tuple(SENTIMENT_WORDS)

    records = []
    for i in range(n_campaigns):
        category = CATEGORIES[int(rng.integers(0, len(CATEGORIES)))]
        raw_category = "Financial Emergency" if category == "Emergency" and rng.random() < 0.3 else category
        sentiment = sentiments[int(rng.integers(0, len(sentiments)))]
        seeds = _seed_draws(rng)
        text = _appeal_text(rng, seeds, sentiment)
        base = CampaignRecord(
            campaign_id=f"s{seed}-{i:05d}",
            category=category,
            raw_category=raw_category,
            appeal_text=text,
            goal_amount=float(np.round(np.exp(rng.normal(8.5, 1.0)), 2)),
            photo_count=int(rng.integers(0, 12)),
        )
        row = build_feature_row(base, score_text(axes, table, text), SYNTH_VALENCE, (0.05, -0.05))
        outcome = float(np.dot(design_row(row, True), beta) + rng.normal(0.0, NOISE_SD))
        # log1p of the observed count equals the outcome up to count rounding
        n_donations = int(round(np.expm1(max(outcome, 0.0))))
        amounts = tuple(np.round(DONATION_AMOUNT * np.exp(rng.normal(0.0, 0.4, n_donations)), 2).tolist())
        records.append(
            CampaignRecord(
                campaign_id=base.campaign_id,
                category=category,
                raw_category=raw_category,
                appeal_text=text,
                goal_amount=base.goal_amount,
                photo_count=base.photo_count,
                donations=amounts,
                comments=_comments(rng, seeds),
            )
        )
    logger.info("[synthetic] %d campaigns generated with seed %d", n_campaigns, seed)
    return SyntheticCorpus(
        table=table,
        lexicon=lexicon,
        valence=dict(SYNTH_VALENCE),
        records=records,
        coefficients=dict(TRUE_COEFFICIENTS),
        seed=seed,
    )


def record_payload(record: CampaignRecord) -> dict:
    return {
        "campaign_id": record.campaign_id,
        "category": record.raw_category,
        "appeal_text": record.appeal_text,
        "goal_amount": record.goal_amount,
        "photo_count": record.photo_count,
        "donations": list(record.donations),
        "comments": list(record.comments),
    }


def write_corpus(corpus: SyntheticCorpus, output_dir) -> dict[str, Path]:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "embeddings": out / "embeddings.txt",
        "lexicon": out / "seeds.txt",
        "valence": out / "valence.tsv",
        "dataset": out / "campaigns.jsonl",
        "truth": out / "true_coefficients.tsv",
    }
    write_embeddings(corpus.table, paths["embeddings"])
    paths["lexicon"].write_text(serialize_lexicon(corpus.lexicon), encoding="utf-8")
    valence_lines = ["# token\tvalence"] + [f"{token}\t{value}" for token, value in sorted(corpus.valence.items())]
    paths["valence"].write_text("\n".join(valence_lines) + "\n", encoding="utf-8")
    with paths["dataset"].open("w", encoding="utf-8") as handle:
        for record in corpus.records:
            handle.write(json.dumps(record_payload(record), sort_keys=True) + "\n")
    truth = pd.DataFrame(
        {
            "term": list(corpus.coefficients),
            "model": MODEL_OUTCOMES[1][0],
            "coef": list(corpus.coefficients.values()),
        }
    )
    truth.to_csv(paths["truth"], sep="\t", index=False, float_format="%.6f")
    return paths
