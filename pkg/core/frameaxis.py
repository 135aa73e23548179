"""Moral axes from seed centroids and per-document bias scores."""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .config import FRAMES
from .embeddings import EmbeddingTable, lookup
from .errors import AxisError, InsufficientDataError
from .lexicon import SeedLexicon, resolve_coverage

logger = logging.getLogger(__name__)

GROUPS = ("low", "medium", "high")


@dataclass(frozen=True)
class MoralAxis:
    frame: str
    direction: np.ndarray
    vice_centroid: np.ndarray
    virtue_centroid: np.ndarray
    resolved_counts: tuple[int, int]

    def scaled(self, factor: float) -> "MoralAxis":
        return MoralAxis(
            frame=self.frame,
            direction=self.direction * factor,
            vice_centroid=self.vice_centroid,
            virtue_centroid=self.virtue_centroid,
            resolved_counts=self.resolved_counts,
        )


@dataclass(frozen=True)
class MoralAxisSet:
    axes: dict[str, MoralAxis]
    lexicon_source: str = ""
    embedding_source: str = ""

    def __getitem__(self, frame: str) -> MoralAxis:
        return self.axes[frame]

    def __iter__(self):
        return (self.axes[frame] for frame in FRAMES)


@dataclass(frozen=True)
class BiasScore:
    frame: str
    value: float | None
    matched_token_count: int
    total_token_count: int

    @property
    def defined(self) -> bool:
        return self.value is not None


def _centroid(table: EmbeddingTable, tokens) -> np.ndarray:
    rows = [table.index[token] for token in sorted(tokens)]
    return table.vectors[rows].mean(axis=0)


def build_axes(lexicon: SeedLexicon, table: EmbeddingTable) -> MoralAxisSet:
    coverage = resolve_coverage(lexicon, table)
    axes = {}
    for frame in FRAMES:
        vice = coverage.resolved(frame, "vice")
        virtue = coverage.resolved(frame, "virtue")
        vice_centroid = _centroid(table, vice)
        virtue_centroid = _centroid(table, virtue)
        # positive cosine with direction means virtue-aligned
        direction = virtue_centroid - vice_centroid
        if float(np.linalg.norm(direction)) == 0.0:
            raise AxisError(f"{frame} axis has zero norm: vice and virtue centroids coincide")
        axes[frame] = MoralAxis(
            frame=frame,
            direction=direction,
            vice_centroid=vice_centroid,
            virtue_centroid=virtue_centroid,
            resolved_counts=(len(vice), len(virtue)),
        )
        logger.debug("[frameaxis] %s axis from %d vice / %d virtue seeds", frame, len(vice), len(virtue))
    return MoralAxisSet(axes=axes, lexicon_source=lexicon.source, embedding_source=table.source_path)


def score_document(axes: MoralAxisSet, table: EmbeddingTable, tokens) -> dict[str, BiasScore]:
    counts = Counter(tokens)
    total = sum(counts.values())
    matched = []
    weights = []
    for token in sorted(counts):
        vector = lookup(table, token)
        if vector is None:
            continue
        norm = float(np.linalg.norm(vector))
        if norm == 0.0:
            continue
        matched.append(vector / norm)
        weights.append(counts[token])

    matched_total = int(sum(weights))
    scores = {}
    for axis in axes:
        if not matched:
            value = None
        else:
            unit_direction = axis.direction / float(np.linalg.norm(axis.direction))
            cosines = np.clip(np.vstack(matched) @ unit_direction, -1.0, 1.0)
            value = float(np.dot(weights, cosines)) / matched_total
            value = min(1.0, max(-1.0, value))
        scores[axis.frame] = BiasScore(
            frame=axis.frame,
            value=value,
            matched_token_count=matched_total,
            total_token_count=total,
        )
    return scores


def split_groups(scores) -> list[str | None]:
    """Assign low/medium/high by mean +/- one sample standard deviation.

    Undefined (None/NaN) entries keep a None assignment.
    """
    values = [None if s is None or (isinstance(s, float) and math.isnan(s)) else float(s) for s in scores]
    defined = np.array([v for v in values if v is not None], dtype=np.float64)
    if defined.size < 2:
        raise InsufficientDataError("group split needs at least 2 defined scores")
    mean = float(defined.mean())
    sd = float(defined.std(ddof=1))
    if sd == 0.0:
        logger.warning("[frameaxis] zero variance in scores; every document assigned to medium")
    groups = []
    for value in values:
        if value is None:
            groups.append(None)
        elif value < mean - sd:
            groups.append("low")
        elif value > mean + sd:
            groups.append("high")
        else:
            groups.append("medium")
    return groups
