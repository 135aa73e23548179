from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from core.errors import IngestError, InputError, UnknownCategoryError
from .maps import (
    COMMENT_TEXT_KEYS,
    DONATION_AMOUNT_KEYS,
    OPTIONAL_DEFAULTS,
    REQUIRED_FIELDS,
    build_campaign_payload,
    build_field_map,
    normalize_category,
)

logger = logging.getLogger(__name__)

MAX_REJECT_SHARE = 0.5


@dataclass(frozen=True)
class CampaignRecord:
    campaign_id: str
    category: str
    raw_category: str
    appeal_text: str
    goal_amount: float
    photo_count: int
    donations: tuple[float, ...] = ()
    comments: tuple[str, ...] = ()
    sentiment_compound: float | None = None

    @property
    def total_raised(self) -> float:
        return float(sum(self.donations))

    @property
    def average_donation(self) -> float | None:
        if not self.donations:
            return None
        return self.total_raised / len(self.donations)


@dataclass(frozen=True)
class Reject:
    line_no: int
    campaign_id: str
    reason: str


@dataclass
class IngestResult:
    records: list[CampaignRecord] = field(default_factory=list)
    rejects: list[Reject] = field(default_factory=list)
    lines_read: int = 0

    def summary(self) -> dict:
        return {
            "lines_read": self.lines_read,
            "records": len(self.records),
            "rejected": len(self.rejects),
        }


class RecordError(ValueError):
    pass


def load_mapping(path) -> dict:
    if not path:
        return {}
    path = Path(path)
    try:
        return tomllib.loads(path.read_text(encoding="utf-8"))
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise InputError(f"unreadable mapping file {path}: {exc}") from exc


def _as_float(value, name):
    if isinstance(value, bool):
        raise RecordError(f"invalid {name}: {value!r}")
    try:
        number = float(value)
    except (TypeError, ValueError) as exc:
        raise RecordError(f"invalid {name}: {value!r}") from exc
    if not math.isfinite(number):
        raise RecordError(f"invalid {name}: {value!r}")
    return number


def _photo_count(value) -> int:
    if isinstance(value, list):
        return len(value)
    number = _as_float(value, "photo_count")
    if number < 0 or number != int(number):
        raise RecordError(f"invalid photo_count: {value!r}")
    return int(number)


def _donations(value) -> tuple[float, ...]:
    if not isinstance(value, list):
        raise RecordError("donations must be a list")
    amounts = []
    for item in value:
        if isinstance(item, dict):
            item = next((item[key] for key in DONATION_AMOUNT_KEYS if key in item), None)
        amount = _as_float(item, "donation amount")
        if amount <= 0:
            raise RecordError(f"non-positive donation amount: {amount}")
        amounts.append(amount)
    return tuple(amounts)


def _comments(value) -> tuple[str, ...]:
    if not isinstance(value, list):
        raise RecordError("comments must be a list")
    texts = []
    for item in value:
        if isinstance(item, dict):
            item = next((item[key] for key in COMMENT_TEXT_KEYS if key in item), "")
        texts.append("" if item is None else str(item))
    return tuple(texts)


class CampaignRepository:
    def __init__(self, path, mapping: dict | None = None, *, sentiment_column: str | None = None):
        self.path = Path(path)
        self.mapping = mapping or {}
        try:
            self.field_map = build_field_map(self.mapping)
        except KeyError as exc:
            raise InputError(f"invalid mapping file: {exc.args[0]}") from exc
        if sentiment_column:
            self.field_map["sentiment_compound"] = (sentiment_column,)
        self.category_aliases = self.mapping.get("categories") or {}

    def build_record(self, raw: dict) -> CampaignRecord:
        if not isinstance(raw, dict):
            raise RecordError("line is not a JSON object")
        payload = build_campaign_payload(raw, self.field_map)
        for name in REQUIRED_FIELDS:
            if payload.get(name) in (None, ""):
                raise RecordError(f"missing field: {name}")
        for name, default in OPTIONAL_DEFAULTS.items():
            if payload.get(name) is None:
                payload[name] = default

        try:
            category = normalize_category(payload["category"], self.category_aliases)
        except UnknownCategoryError as exc:
            raise RecordError(str(exc)) from exc
        goal = _as_float(payload["goal_amount"], "goal_amount")
        if goal <= 0:
            raise RecordError(f"non-positive goal_amount: {goal}")
        compound = payload.get("sentiment_compound")
        if compound is not None:
            compound = _as_float(compound, "sentiment_compound")
            if not -1.0 <= compound <= 1.0:
                raise RecordError(f"sentiment_compound outside [-1, 1]: {compound}")
        return CampaignRecord(
            campaign_id=str(payload["campaign_id"]),
            category=category,
            raw_category=str(payload["category"]),
            appeal_text=str(payload["appeal_text"]),
            goal_amount=goal,
            photo_count=_photo_count(payload["photo_count"]),
            donations=_donations(payload["donations"]),
            comments=_comments(payload["comments"]),
            sentiment_compound=compound,
        )

    def load(self) -> IngestResult:
        result = IngestResult()
        seen: set[str] = set()
        try:
            handle = self.path.open("rb")
        except OSError as exc:
            raise InputError(f"unreadable dataset file {self.path}: {exc}") from exc
        with handle:
            for line_no, raw_line in enumerate(handle, start=1):
                if not raw_line.strip():
                    continue
                result.lines_read += 1
                campaign_id = ""
                try:
                    line = raw_line.decode("utf-8")
                    raw = json.loads(line)
                    if isinstance(raw, dict):
                        found = build_campaign_payload(raw, {"id": self.field_map["campaign_id"]})
                        campaign_id = "" if found["id"] is None else str(found["id"])
                    record = self.build_record(raw)
                    if record.campaign_id in seen:
                        raise RecordError(f"duplicate campaign_id: {record.campaign_id}")
                except UnicodeDecodeError:
                    result.rejects.append(Reject(line_no, campaign_id, "invalid UTF-8"))
                    continue
                except json.JSONDecodeError as exc:
                    result.rejects.append(Reject(line_no, campaign_id, f"invalid JSON: {exc.msg}"))
                    continue
                except RecordError as exc:
                    result.rejects.append(Reject(line_no, campaign_id, str(exc)))
                    continue
                seen.add(record.campaign_id)
                result.records.append(record)

        if result.rejects:
            logger.warning(
                "[campaigns] %d of %d lines rejected from %s",
                len(result.rejects),
                result.lines_read,
                self.path,
            )
        if not result.records:
            raise IngestError("no records ingested", rejects=result.rejects)
        if len(result.rejects) > MAX_REJECT_SHARE * result.lines_read:
            raise IngestError(
                f"{len(result.rejects)} of {result.lines_read} lines rejected; aborting",
                rejects=result.rejects,
            )
        logger.info("[campaigns] ingested %d campaigns from %s", len(result.records), self.path)
        return result


def ingest(path, mapping: dict | None = None, *, sentiment_column: str | None = None) -> IngestResult:
    return CampaignRepository(path, mapping, sentiment_column=sentiment_column).load()
