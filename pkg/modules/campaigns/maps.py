from core.config import CATEGORIES
from core.errors import UnknownCategoryError

# Canonical field -> candidate source paths, tried in order. A mapping config
# replaces the candidates of any field it names with a single dot-path.
DEFAULT_FIELD_MAP = {
    "campaign_id": ("campaign_id", "id"),
    "category": ("category",),
    "appeal_text": ("appeal_text", "appeal", "description"),
    "goal_amount": ("goal_amount", "goal"),
    "photo_count": ("photo_count", "photos"),
    "donations": ("donations",),
    "comments": ("comments",),
}

REQUIRED_FIELDS = ("campaign_id", "category", "appeal_text", "goal_amount")
OPTIONAL_DEFAULTS = {"photo_count": 0, "donations": [], "comments": []}

DONATION_AMOUNT_KEYS = ("amount", "value")
COMMENT_TEXT_KEYS = ("text", "comment", "message")

CATEGORY_ALIASES = {
    "animals": "Animals",
    "emergency": "Emergency",
    "financial emergency": "Emergency",
    "medical": "Medical",
    "memorial": "Memorial",
}


def resolve_path(payload, dot_path: str):
    value = payload
    for part in dot_path.split("."):
        if isinstance(value, dict) and part in value:
            value = value[part]
        elif isinstance(value, list) and part.isdigit() and int(part) < len(value):
            value = value[int(part)]
        else:
            return None
    return value


def build_field_map(mapping: dict | None = None) -> dict[str, tuple[str, ...]]:
    field_map = dict(DEFAULT_FIELD_MAP)
    for canonical, source in ((mapping or {}).get("fields") or {}).items():
        if canonical not in field_map and canonical != "sentiment_compound":
            raise KeyError(f"unknown canonical field in mapping: {canonical}")
        field_map[canonical] = (str(source),)
    return field_map


def build_campaign_payload(raw: dict, field_map: dict) -> dict:
    payload = {}
    for canonical, candidates in field_map.items():
        value = None
        for path in candidates:
            value = resolve_path(raw, path)
            if value is not None:
                break
        payload[canonical] = value
    return payload


def normalize_category(raw: str, extra_aliases: dict | None = None) -> str:
    text = " ".join(str(raw or "").split()).lower()
    aliases = dict(CATEGORY_ALIASES)
    for source, target in (extra_aliases or {}).items():
        aliases[" ".join(str(source).split()).lower()] = target
    category = aliases.get(text)
    if category not in CATEGORIES:
        raise UnknownCategoryError(f"unknown category: {raw!r}")
    return category
