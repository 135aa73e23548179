import os
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pydantic import BaseModel, Field, field_validator, model_validator

from .errors import InputError, UsageError

ENV_PREFIX = "MORALFRAME_"
DEFAULT_SETTINGS_FILE = "moralframe.toml"
DATA_DIR = Path(__file__).resolve().parent / "data"
BUNDLED_LEXICON = DATA_DIR / "moral_seeds.txt"
BUNDLED_VALENCE = DATA_DIR / "valence.tsv"

FRAMES = ("care", "fairness", "loyalty")
CATEGORIES = ("Animals", "Emergency", "Medical", "Memorial")

_SETTINGS_CACHE: dict[str, dict] = {}


def _settings_path(explicit=None):
    candidates = []
    if explicit:
        candidates.append(Path(explicit))
    env_path = os.environ.get(f"{ENV_PREFIX}CONFIG")
    if env_path:
        candidates.append(Path(env_path))
    candidates.append(Path(DEFAULT_SETTINGS_FILE))
    for path in candidates:
        if path.exists():
            return path
    if explicit:
        raise InputError(f"config file not found: {explicit}")
    return None


def load_settings(path=None) -> dict:
    settings_path = _settings_path(path)
    if settings_path is None:
        return {}
    key = str(settings_path.resolve())
    if key in _SETTINGS_CACHE:
        return _SETTINGS_CACHE[key]
    try:
        data = tomllib.loads(settings_path.read_text(encoding="utf-8"))
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise InputError(f"unreadable config file {settings_path}: {exc}") from exc
    _SETTINGS_CACHE[key] = data
    return data


def get_setting(key, default=None, *, settings=None):
    value = os.environ.get(f"{ENV_PREFIX}{key.upper()}")
    if value not in (None, ""):
        return value
    if settings is None:
        settings = load_settings()
    return settings.get(key, default)


def _split_list(value):
    if value in (None, ""):
        return []
    if isinstance(value, (list, tuple)):
        return [str(item).strip() for item in value if str(item).strip()]
    return [part.strip() for part in str(value).split(",") if part.strip()]


class RunConfig(BaseModel):
    embedding_path: str | None = None
    lexicon_path: str = str(BUNDLED_LEXICON)
    sentiment_lexicon_path: str = str(BUNDLED_VALENCE)
    sentiment_column: str | None = None
    dataset_path: str | None = None
    mapping_path: str | None = None
    output_dir: str = "out"
    sentiment_pos_threshold: float = 0.05
    sentiment_neg_threshold: float = -0.05
    min_donations: int = Field(100, ge=1)
    max_position: int | None = Field(None, ge=1)
    category_filter: str | None = "Emergency"
    frame: str | None = None
    model_ids: list[int] = Field(default_factory=lambda: [1, 2, 3])
    interactions: bool = True
    expected_dim: int | None = Field(None, ge=1)
    exemplar_count: int = Field(5, ge=1)
    seed: int = 0
    synth_campaigns: int = Field(2000, ge=10)

    model_config = {"populate_by_name": True, "protected_namespaces": ()}

    @field_validator("model_ids", mode="before")
    @classmethod
    def parse_model_ids(cls, value):
        ids = sorted({int(item) for item in _split_list(value)})
        if not ids or any(item not in (1, 2, 3) for item in ids):
            raise ValueError("models must be a non-empty subset of 1,2,3")
        return ids

    @field_validator("frame", mode="before")
    @classmethod
    def validate_frame(cls, value):
        if value in (None, ""):
            return None
        frame = str(value).strip().lower()
        if frame == "all":
            return None
        if frame not in FRAMES:
            raise ValueError(f"frame must be one of {', '.join(FRAMES)}")
        return frame

    @field_validator("category_filter", mode="before")
    @classmethod
    def validate_category(cls, value):
        if value in (None, ""):
            return None
        text = str(value).strip().lower()
        if text in ("all", "any"):
            return None
        for category in CATEGORIES:
            if category.lower() == text:
                return category
        raise ValueError(f"category must be one of {', '.join(CATEGORIES)}")

    @model_validator(mode="after")
    def validate_thresholds(self):
        if self.sentiment_pos_threshold <= self.sentiment_neg_threshold:
            raise ValueError("positive sentiment threshold must exceed the negative one")
        return self

    def frames(self) -> tuple[str, ...]:
        return FRAMES if self.frame is None else (self.frame,)

    def sentiment_thresholds(self):
        return self.sentiment_pos_threshold, self.sentiment_neg_threshold

    def require_paths(self, *fields):
        for name in fields:
            value = getattr(self, name)
            if not value:
                raise UsageError(f"missing required option for {name}")
            path = Path(value)
            if not path.is_file():
                raise InputError(f"input file not found: {value}")
            if not os.access(path, os.R_OK):
                raise InputError(f"input file not readable: {value}")


RUN_CONFIG_FIELDS = tuple(RunConfig.model_fields)


def load_run_config(overrides: dict, config_path=None) -> RunConfig:
    settings = load_settings(config_path)
    values = {}
    for name in RUN_CONFIG_FIELDS:
        override = overrides.get(name)
        if override is not None:
            values[name] = override
            continue
        setting = get_setting(name, settings=settings)
        if setting is not None:
            values[name] = setting
    try:
        return RunConfig(**values)
    except ValueError as exc:
        raise UsageError(f"invalid configuration: {exc}") from exc
