from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from core.config import CATEGORIES, FRAMES
from core.embeddings import EmbeddingTable, load_embeddings
from core.errors import IngestError
from core.frameaxis import MoralAxisSet, build_axes, score_document
from core.lexicon import load_lexicon
from core.outputs import write_table
from core.stats import describe, log1p_transform, spearman, spearman_p
from core.textprep import (
    NEGATIVE_THRESHOLD,
    POSITIVE_THRESHOLD,
    classify_sentiment,
    count_whitespace_tokens,
    load_valence_lexicon,
    tokenize_for_scoring,
)
from .repository import CampaignRecord, IngestResult, ingest, load_mapping

logger = logging.getLogger(__name__)

SENTIMENTS = ("positive", "neutral", "negative")
SCORE_COLUMNS = ("campaign_id", "care", "fairness", "loyalty", "matched_tokens", "total_tokens")

DESCRIPTIVE_VARIABLES = (
    ("n_donations", "Number of donations"),
    ("avg_amount", "Average donation amount per donor"),
    ("n_comments", "Number of comments"),
    ("care", "Care score"),
    ("fairness", "Fairness score"),
    ("loyalty", "Loyalty score"),
    ("appeal_length", "Campaign appeal length"),
    ("photo_count", "Number of photos"),
    ("goal_amount", "Fundraising goal"),
)


@dataclass(frozen=True)
class FeatureRow:
    campaign_id: str
    category: str
    care: float
    fairness: float
    loyalty: float
    sentiment: str
    compound: float
    log_length: float
    log_photos: float
    log_goal: float
    log_n_donations: float
    log_avg_amount: float | None
    log_n_comments: float
    n_donations: int
    avg_amount: float | None
    n_comments: int
    appeal_length: int
    photo_count: int
    goal_amount: float

    def score(self, frame: str) -> float:
        return getattr(self, frame)


@dataclass
class FeatureBuild:
    rows: list[FeatureRow] = field(default_factory=list)
    dropped: list[tuple[str, str]] = field(default_factory=list)


def score_text(axes: MoralAxisSet, table: EmbeddingTable, text: str):
    return score_document(axes, table, tokenize_for_scoring(text))


def build_feature_row(
    record: CampaignRecord,
    scores: dict,
    valence: dict,
    thresholds: tuple[float, float],
) -> FeatureRow:
    sentiment = classify_sentiment(
        record.appeal_text, valence, record.sentiment_compound, thresholds=thresholds
    )
    length = count_whitespace_tokens(record.appeal_text)
    average = record.average_donation
    return FeatureRow(
        campaign_id=record.campaign_id,
        category=record.category,
        care=scores["care"].value,
        fairness=scores["fairness"].value,
        loyalty=scores["loyalty"].value,
        sentiment=sentiment.label,
        compound=sentiment.compound,
        log_length=log1p_transform(length),
        log_photos=log1p_transform(record.photo_count),
        log_goal=log1p_transform(record.goal_amount),
        log_n_donations=log1p_transform(len(record.donations)),
        log_avg_amount=None if average is None else log1p_transform(average),
        log_n_comments=log1p_transform(len(record.comments)),
        n_donations=len(record.donations),
        avg_amount=average,
        n_comments=len(record.comments),
        appeal_length=length,
        photo_count=record.photo_count,
        goal_amount=record.goal_amount,
    )


def build_features(
    records,
    axes: MoralAxisSet,
    table: EmbeddingTable,
    valence: dict,
    thresholds: tuple[float, float] = (POSITIVE_THRESHOLD, NEGATIVE_THRESHOLD),
) -> FeatureBuild:
    build = FeatureBuild()
    for record in records:
        scores = score_text(axes, table, record.appeal_text)
        if not all(scores[frame].defined for frame in FRAMES):
            build.dropped.append((record.campaign_id, "undefined moral scores"))
            continue
        build.rows.append(build_feature_row(record, scores, valence, thresholds))
    if build.dropped:
        logger.warning("[campaigns] %d campaigns dropped: undefined moral scores", len(build.dropped))
    return build


def score_frame(records, axes: MoralAxisSet, table: EmbeddingTable) -> pd.DataFrame:
    rows = []
    for record in sorted(records, key=lambda item: item.campaign_id):
        scores = score_text(axes, table, record.appeal_text)
        rows.append(_score_row(record.campaign_id, scores))
    return pd.DataFrame(rows, columns=list(SCORE_COLUMNS))


def comment_score_frame(records, axes: MoralAxisSet, table: EmbeddingTable) -> pd.DataFrame:
    rows = []
    for record in sorted(records, key=lambda item: item.campaign_id):
        for position, comment in enumerate(record.comments, start=1):
            scores = score_text(axes, table, comment)
            rows.append({**_score_row(record.campaign_id, scores), "comment_index": position})
    columns = ["campaign_id", "comment_index", *SCORE_COLUMNS[1:]]
    return pd.DataFrame(rows, columns=columns)


def _score_row(campaign_id: str, scores: dict) -> dict:
    first = scores[FRAMES[0]]
    return {
        "campaign_id": campaign_id,
        **{frame: scores[frame].value for frame in FRAMES},
        "matched_tokens": first.matched_token_count,
        "total_tokens": first.total_token_count,
    }


def descriptives(rows) -> pd.DataFrame:
    rows = list(rows)
    if not rows:
        raise ValueError("descriptives need at least one feature row")
    records = []
    for category in CATEGORIES:
        members = [row for row in rows if row.category == category]
        if not members:
            continue
        for key, label in DESCRIPTIVE_VARIABLES:
            values = [getattr(row, key) for row in members if getattr(row, key) is not None]
            if not values:
                records.append({"variable": key, "label": label, "category": category,
                                "mean": None, "sd": None, "n": 0})
                continue
            stats = describe(values)
            records.append(
                {
                    "variable": key,
                    "label": label,
                    "category": category,
                    "mean": stats.mean,
                    "sd": stats.sd,
                    "n": stats.n,
                }
            )
    return pd.DataFrame(records, columns=["variable", "label", "category", "mean", "sd", "n"])


def descriptives_wide(table: pd.DataFrame) -> pd.DataFrame:
    """Pivot descriptives to one row per variable with ``mean (sd)`` cells."""

    def _cell(row):
        if pd.isna(row["mean"]):
            return "NA"
        sd = "NA" if pd.isna(row["sd"]) else f"{row['sd']:.2f}"
        return f"{row['mean']:.2f} ({sd})"

    frame = table.assign(cell=table.apply(_cell, axis=1))
    wide = frame.pivot(index="label", columns="category", values="cell")
    order = [label for _, label in DESCRIPTIVE_VARIABLES if label in wide.index]
    columns = [category for category in CATEGORIES if category in wide.columns]
    return wide.loc[order, columns].fillna("NA")


def total_raised_check(records) -> dict:
    records = list(records)
    totals = [record.total_raised for record in records]
    counts = [len(record.donations) for record in records]
    rho = spearman(totals, counts)
    return {"rho": rho, "p_value": spearman_p(rho, len(records)), "n": len(records)}


def dataset_summary(ingest: IngestResult, rows=None) -> pd.DataFrame:
    records = ingest.records
    n = len(records)
    entries = [("campaigns", "all", float(n)), ("rejected_lines", "all", float(len(ingest.rejects)))]
    raw_counts = Counter(" ".join(record.raw_category.split()).title() for record in records)
    for raw, count in sorted(raw_counts.items()):
        entries.append(("raw_category_share", raw, count / n))
    merged = Counter(record.category for record in records)
    for category in CATEGORIES:
        entries.append(("category_share", category, merged.get(category, 0) / n))
    entries.append(("donation_transactions", "all", float(sum(len(r.donations) for r in records))))
    entries.append(("comments", "all", float(sum(len(r.comments) for r in records))))
    reached = sum(1 for record in records if record.total_raised >= record.goal_amount)
    entries.append(("goal_reached_share", "all", reached / n))
    if rows:
        sentiments = Counter(row.sentiment for row in rows)
        for label in SENTIMENTS:
            entries.append(("sentiment_share", label, sentiments.get(label, 0) / len(rows)))
    return pd.DataFrame(entries, columns=["statistic", "level", "value"])


@dataclass
class AnalysisInputs:
    table: EmbeddingTable
    axes: MoralAxisSet
    valence: dict
    ingest: IngestResult
    features: FeatureBuild | None = None

    @property
    def records(self) -> list[CampaignRecord]:
        return self.ingest.records


def load_inputs(config, manifest=None, *, features: bool = True) -> AnalysisInputs:
    """Load every input a command needs, recording hashes and drop counts on ``manifest``."""
    table = load_embeddings(config.embedding_path, expected_dim=config.expected_dim)
    axes = build_axes(load_lexicon(config.lexicon_path), table)
    valence = load_valence_lexicon(config.sentiment_lexicon_path)
    mapping = load_mapping(config.mapping_path)
    try:
        result = ingest(config.dataset_path, mapping, sentiment_column=config.sentiment_column)
    except IngestError as exc:
        path = write_table(rejects_frame(exc.rejects), Path(config.output_dir) / "rejects.tsv")
        logger.error("[campaigns] %d rejected lines written to %s", len(exc.rejects), path)
        if manifest is not None:
            manifest.add_output(path)
        raise
    inputs = AnalysisInputs(table=table, axes=axes, valence=valence, ingest=result)
    if features:
        inputs.features = build_features(
            result.records, axes, table, valence, config.sentiment_thresholds()
        )
    if manifest is not None:
        for path in (
            config.embedding_path,
            config.lexicon_path,
            config.sentiment_lexicon_path,
            config.dataset_path,
            config.mapping_path,
        ):
            manifest.add_input(path)
        manifest.count("lines_read", result.lines_read)
        manifest.count("records", len(result.records))
        manifest.count("rejected", len(result.rejects))
        manifest.count("embedding_duplicates", table.duplicate_count)
        for axis in axes:
            vice, virtue = axis.resolved_counts
            manifest.count(f"seeds_{axis.frame}_vice", vice)
            manifest.count(f"seeds_{axis.frame}_virtue", virtue)
        if inputs.features is not None:
            manifest.count("dropped_undefined_scores", len(inputs.features.dropped))
    return inputs


def rejects_frame(rejects) -> pd.DataFrame:
    rows = [(reject.line_no, reject.campaign_id, reject.reason) for reject in rejects]
    return pd.DataFrame(rows, columns=["line_no", "campaign_id", "reason"])
