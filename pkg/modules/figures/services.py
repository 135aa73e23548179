from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from core.config import FRAMES
from core.embeddings import EmbeddingTable
from core.errors import EmptyDataError, InsufficientDataError, NumericalError
from core.frameaxis import GROUPS, MoralAxisSet, split_groups
from core.stats import mean_ci95, welch_t_test
from core.textprep import count_whitespace_tokens
from modules.campaigns.services import score_text

logger = logging.getLogger(__name__)

GROUP_COLUMNS = ["frame", "group", "mean", "ci_lower", "ci_upper", "n"]
CURVE_COLUMNS = ["position", "mean", "ci_lower", "ci_upper", "n"]
EXCERPT_LENGTH = 160


@dataclass
class GroupedValues:
    """Per-campaign values keyed by the appeal's score group."""

    frame: str
    values: dict[str, list[float]] = field(default_factory=lambda: {g: [] for g in GROUPS})
    campaign_ids: dict[str, list[str]] = field(default_factory=lambda: {g: [] for g in GROUPS})
    split_size: int = 0


def _in_category(record, category_filter) -> bool:
    return category_filter is None or record.category == category_filter


def _appeal_groups(records, axes: MoralAxisSet, table: EmbeddingTable, frame: str, category_filter):
    if frame not in FRAMES:
        raise ValueError(f"unknown frame: {frame}")
    selected = sorted(
        (record for record in records if _in_category(record, category_filter)),
        key=lambda record: record.campaign_id,
    )
    appeal_scores = [score_text(axes, table, record.appeal_text)[frame].value for record in selected]
    groups = split_groups(appeal_scores)
    return [(record, group) for record, group in zip(selected, groups) if group is not None]


def _group_per_campaign(assigned, frame: str, per_comment) -> GroupedValues:
    grouped = GroupedValues(frame=frame, split_size=len(assigned))
    for record, group in assigned:
        values = [value for value in (per_comment(comment) for comment in record.comments) if value is not None]
        if not values:
            continue
        grouped.values[group].append(float(np.mean(values)))
        grouped.campaign_ids[group].append(record.campaign_id)
    return grouped


def comment_alignment(
    records,
    axes: MoralAxisSet,
    table: EmbeddingTable,
    frame: str = "care",
    category_filter: str | None = "Emergency",
) -> GroupedValues:
    assigned = _appeal_groups(records, axes, table, frame, category_filter)
    return _group_per_campaign(
        assigned,
        frame,
        lambda comment: score_text(axes, table, comment)[frame].value,
    )


def comment_length_by_group(
    records,
    axes: MoralAxisSet,
    table: EmbeddingTable,
    frame: str = "care",
    category_filter: str | None = "Emergency",
) -> GroupedValues:
    assigned = _appeal_groups(records, axes, table, frame, category_filter)
    return _group_per_campaign(assigned, frame, count_whitespace_tokens)


def _interval_row(values) -> dict:
    if not values:
        return {"mean": None, "ci_lower": None, "ci_upper": None, "n": 0}
    if len(values) == 1:
        return {"mean": float(values[0]), "ci_lower": None, "ci_upper": None, "n": 1}
    interval = mean_ci95(values)
    return {"mean": interval.mean, "ci_lower": interval.lower, "ci_upper": interval.upper, "n": interval.n}


def group_table(grouped: GroupedValues) -> pd.DataFrame:
    rows = []
    for group in GROUPS:
        values = grouped.values[group]
        if not values:
            logger.warning("[figures] %s group '%s' has no campaigns with comments", grouped.frame, group)
        rows.append({"frame": grouped.frame, "group": group, **_interval_row(values)})
    return pd.DataFrame(rows, columns=GROUP_COLUMNS)


def group_difference(grouped: GroupedValues, low: str = "low", high: str = "high") -> dict:
    """Welch test of the high group against the low group; NA when undefined."""
    row = {"frame": grouped.frame, "contrast": f"{high}-{low}", "diff": None, "t": None, "df": None, "p_value": None}
    try:
        diff, t, df, p = welch_t_test(grouped.values[high], grouped.values[low])
    except (InsufficientDataError, NumericalError) as exc:
        logger.info("[figures] group difference undefined: %s", exc)
        return row
    row.update(diff=diff, t=t, df=df, p_value=p)
    return row


def empty_position_curve(max_position: int) -> pd.DataFrame:
    rows = [{"position": position, **_interval_row([])} for position in range(1, max_position + 1)]
    return pd.DataFrame(rows, columns=CURVE_COLUMNS)


def donation_position_curve(records, min_donations: int = 100, max_position: int | None = None) -> pd.DataFrame:
    if min_donations < 1:
        raise ValueError("min_donations must be at least 1")
    max_position = max_position or min_donations
    qualifying = sorted(
        (record for record in records if len(record.donations) >= min_donations),
        key=lambda record: record.campaign_id,
    )
    if not qualifying:
        raise EmptyDataError("no qualifying campaigns")
    logger.info(
        "[figures] %d campaigns with at least %d donations", len(qualifying), min_donations
    )
    rows = []
    for position in range(1, max_position + 1):
        amounts = [record.donations[position - 1] for record in qualifying if len(record.donations) >= position]
        rows.append({"position": position, **_interval_row(amounts)})
    return pd.DataFrame(rows, columns=CURVE_COLUMNS)


def _excerpt(text: str) -> str:
    flat = " ".join((text or "").split())
    if len(flat) <= EXCERPT_LENGTH:
        return flat
    return flat[: EXCERPT_LENGTH - 3].rstrip() + "..."


def exemplars(records, rows, k: int = 5) -> pd.DataFrame:
    """The ``k`` most vice- and virtue-aligned appeals for every frame."""
    if k < 1:
        raise ValueError("k must be at least 1")
    texts = {record.campaign_id: record.appeal_text for record in records}
    entries = []
    for frame in FRAMES:
        ordered = sorted(rows, key=lambda row: (row.score(frame), row.campaign_id))
        picks = {
            "vice": ordered[:k],
            "virtue": sorted(rows, key=lambda row: (-row.score(frame), row.campaign_id))[:k],
        }
        for pole, chosen in picks.items():
            for rank, row in enumerate(chosen, start=1):
                entries.append(
                    {
                        "frame": frame,
                        "pole": pole,
                        "rank": rank,
                        "campaign_id": row.campaign_id,
                        "category": row.category,
                        "score": row.score(frame),
                        "excerpt": _excerpt(texts.get(row.campaign_id, "")),
                    }
                )
    return pd.DataFrame(
        entries, columns=["frame", "pole", "rank", "campaign_id", "category", "score", "excerpt"]
    )

