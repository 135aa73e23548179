from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path

from .config import BUNDLED_VALENCE
from .errors import InputError

logger = logging.getLogger(__name__)

ALPHA = 15.0
POSITIVE_THRESHOLD = 0.05
NEGATIVE_THRESHOLD = -0.05

_NON_ALNUM_RE = re.compile(r"[\W_]+")


@dataclass(frozen=True)
class SentimentLabel:
    label: str
    compound: float


def tokenize_for_scoring(text: str) -> list[str]:
    # \w alone would keep underscores
    return [token for token in _NON_ALNUM_RE.split((text or "").lower()) if token]


def count_whitespace_tokens(text: str) -> int:
    return len((text or "").split())


def load_valence_lexicon(path=None) -> dict[str, float]:
    path = Path(path) if path else BUNDLED_VALENCE
    lexicon: dict[str, float] = {}
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"unreadable valence lexicon {path}: {exc}") from exc
    for line_no, line in enumerate(lines, start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise InputError(f"{path}:{line_no}: expected 'token<TAB>valence'")
        try:
            valence = float(parts[1])
        except ValueError as exc:
            raise InputError(f"{path}:{line_no}: non-numeric valence {parts[1]!r}") from exc
        if not -4.0 <= valence <= 4.0 or math.isnan(valence):
            raise InputError(f"{path}:{line_no}: valence {valence} outside [-4, 4]")
        lexicon.setdefault(parts[0].strip().lower(), valence)
    logger.debug("[textprep] %d valence entries loaded from %s", len(lexicon), path)
    return lexicon


def compound_score(valence_sum: float, alpha: float = ALPHA) -> float:
    if valence_sum == 0:
        return 0.0
    return max(-1.0, min(1.0, valence_sum / math.sqrt(valence_sum * valence_sum + alpha)))


def label_for(
    compound: float,
    pos_threshold: float = POSITIVE_THRESHOLD,
    neg_threshold: float = NEGATIVE_THRESHOLD,
) -> str:
    if compound >= pos_threshold:
        return "positive"
    if compound <= neg_threshold:
        return "negative"
    return "neutral"


def classify_sentiment(
    text: str,
    lexicon: dict[str, float],
    overrides: float | None = None,
    *,
    thresholds: tuple[float, float] = (POSITIVE_THRESHOLD, NEGATIVE_THRESHOLD),
) -> SentimentLabel:
    if overrides is not None:
        compound = float(overrides)
    else:
        total = sum(lexicon.get(token, 0.0) for token in tokenize_for_scoring(text))
        compound = compound_score(total)
    return SentimentLabel(label=label_for(compound, *thresholds), compound=compound)
