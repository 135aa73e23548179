"""GloVe-style text embedding tables and cosine similarity."""

from __future__ import annotations

import gzip
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatchError, EmbeddingFormatError, InputError

logger = logging.getLogger(__name__)

GZIP_MAGIC = b"\x1f\x8b"


@dataclass(frozen=True)
class EmbeddingTable:
    dimension: int
    vectors: np.ndarray
    index: dict[str, int]
    source_path: str = ""
    duplicate_count: int = 0

    def __post_init__(self):
        self.vectors.setflags(write=False)

    @property
    def token_count(self) -> int:
        return len(self.index)

    def __contains__(self, token) -> bool:
        return str(token).lower() in self.index

    def __len__(self) -> int:
        return len(self.index)

    def tokens(self):
        return list(self.index)

    @classmethod
    def from_mapping(cls, entries: dict, *, source_path: str = "") -> "EmbeddingTable":
        index: dict[str, int] = {}
        rows = []
        dimension = None
        for token, vector in entries.items():
            key = str(token).lower()
            if key in index:
                continue
            values = np.asarray(vector, dtype=np.float64)
            if dimension is None:
                dimension = values.shape[0]
            if values.shape != (dimension,):
                raise DimensionMismatchError(
                    f"vector for {key!r} has {values.shape[0]} components, expected {dimension}"
                )
            index[key] = len(rows)
            rows.append(values)
        if not rows:
            raise EmbeddingFormatError("embedding table is empty", path=source_path)
        return cls(
            dimension=int(dimension),
            vectors=np.vstack(rows),
            index=index,
            source_path=source_path,
        )


def _open_text(path: Path):
    with path.open("rb") as handle:
        magic = handle.read(2)
    if magic == GZIP_MAGIC:
        return gzip.open(path, "rt", encoding="utf-8")
    return path.open("r", encoding="utf-8")


def load_embeddings(path, expected_dim: int | None = None) -> EmbeddingTable:
    path = Path(path)
    source = str(path)
    if not path.is_file():
        raise InputError(f"embedding file not found: {source}")

    index: dict[str, int] = {}
    rows: list[np.ndarray] = []
    dimension = None
    duplicates = 0
    try:
        with _open_text(path) as handle:
            for line_no, raw_line in enumerate(handle, start=1):
                line = raw_line.rstrip()
                if not line.strip():
                    continue
                parts = line.split(" ")
                token, components = parts[0].lower(), parts[1:]
                if dimension is None:
                    dimension = len(components)
                    if dimension == 0:
                        raise EmbeddingFormatError(
                            "line has no vector components", path=source, line_no=line_no
                        )
                    if expected_dim is not None and dimension != expected_dim:
                        raise DimensionMismatchError(
                            f"dimension {dimension} does not match expected {expected_dim}",
                            path=source,
                            line_no=line_no,
                        )
                elif len(components) != dimension:
                    raise DimensionMismatchError(
                        f"line has {len(components)} components, expected {dimension}",
                        path=source,
                        line_no=line_no,
                    )
                try:
                    vector = np.array([float(value) for value in components], dtype=np.float64)
                except ValueError as exc:
                    raise EmbeddingFormatError(
                        f"non-numeric component ({exc})", path=source, line_no=line_no
                    ) from exc
                if not np.all(np.isfinite(vector)):
                    raise EmbeddingFormatError(
                        "non-finite component", path=source, line_no=line_no
                    )
                if token in index:
                    duplicates += 1
                    continue
                index[token] = len(rows)
                rows.append(vector)
    except (OSError, UnicodeDecodeError, EOFError) as exc:
        raise InputError(f"unreadable embedding file {source}: {exc}") from exc

    if not rows:
        raise EmbeddingFormatError("embedding file is empty", path=source)
    if duplicates:
        logger.warning("[embeddings] %d duplicate tokens ignored in %s", duplicates, source)
    logger.info("[embeddings] loaded %d tokens (dim %d) from %s", len(rows), dimension, source)
    return EmbeddingTable(
        dimension=int(dimension),
        vectors=np.vstack(rows),
        index=index,
        source_path=source,
        duplicate_count=duplicates,
    )


def lookup(table: EmbeddingTable, token: str):
    row = table.index.get(str(token).lower())
    if row is None:
        return None
    return table.vectors[row]


def cosine(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    norm_u = float(np.linalg.norm(u))
    norm_v = float(np.linalg.norm(v))
    if norm_u == 0.0 or norm_v == 0.0:
        raise ValueError("cosine undefined for zero-norm vector")
    value = float(np.dot(u, v)) / (norm_u * norm_v)
    return min(1.0, max(-1.0, value))


def write_embeddings(table: EmbeddingTable, path, *, precision: int = 17) -> None:
    # repr-width floats keep a reload bit-identical
    path = Path(path)
    lines = []
    for token, row in table.index.items():
        values = " ".join(
            repr(float(x)) if precision >= 17 else f"{x:.{precision}g}" for x in table.vectors[row]
        )
        lines.append(f"{token} {values}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")

