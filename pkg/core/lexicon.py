"""Vice/virtue seed pools for the care, fairness and loyalty frames."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from .config import BUNDLED_LEXICON, FRAMES
from .embeddings import EmbeddingTable
from .errors import CoverageError, InputError, LexiconError

logger = logging.getLogger(__name__)

POLES = ("vice", "virtue")
LOW_COVERAGE = 0.5

_SECTION_RE = re.compile(r"^\[\s*([A-Za-z_]+)\s*\.\s*([A-Za-z_]+)\s*\]$")


@dataclass(frozen=True)
class SeedLexicon:
    frames: dict[str, tuple[frozenset, frozenset]]
    source: str = ""

    def pole(self, frame: str, pole: str) -> frozenset:
        vice, virtue = self.frames[frame]
        return vice if pole == "vice" else virtue

    def sizes(self) -> dict[str, tuple[int, int]]:
        return {frame: (len(vice), len(virtue)) for frame, (vice, virtue) in self.frames.items()}

    def swapped(self) -> "SeedLexicon":
        return SeedLexicon(
            frames={frame: (virtue, vice) for frame, (vice, virtue) in self.frames.items()},
            source=self.source,
        )


@dataclass(frozen=True)
class PoleCoverage:
    frame: str
    pole: str
    declared: int
    resolved: frozenset

    @property
    def ratio(self) -> float:
        return len(self.resolved) / self.declared if self.declared else 0.0

    @property
    def low(self) -> bool:
        return self.ratio <= LOW_COVERAGE


@dataclass(frozen=True)
class CoverageReport:
    poles: tuple[PoleCoverage, ...]
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def resolved(self, frame: str, pole: str) -> frozenset:
        for item in self.poles:
            if item.frame == frame and item.pole == pole:
                return item.resolved
        raise KeyError((frame, pole))


def validate_lexicon(frames: dict, source: str = "") -> SeedLexicon:
    unknown = sorted(set(frames) - set(FRAMES))
    if unknown:
        raise LexiconError(f"unknown frame: {unknown[0]}", frame=unknown[0])
    checked = {}
    for frame in FRAMES:
        if frame not in frames:
            raise LexiconError(f"missing frame: {frame}", frame=frame)
        vice, virtue = (frozenset(pool) for pool in frames[frame])
        for pole, pool in (("vice", vice), ("virtue", virtue)):
            if not pool:
                raise LexiconError(f"empty pole: {frame}.{pole}", frame=frame, pole=pole)
            for token in pool:
                if not token or token != token.lower() or re.search(r"\s", token):
                    raise LexiconError(
                        f"invalid token {token!r} in {frame}.{pole}",
                        frame=frame,
                        pole=pole,
                        token=token,
                    )
        overlap = sorted(vice & virtue)
        if overlap:
            raise LexiconError(
                f"token {overlap[0]!r} appears in both poles of frame {frame!r}",
                frame=frame,
                token=overlap[0],
            )
        checked[frame] = (vice, virtue)
    return SeedLexicon(frames=checked, source=source)


def parse_lexicon(text: str, source: str = "") -> SeedLexicon:
    pools: dict[tuple[str, str], list[str]] = {}
    current = None
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        match = _SECTION_RE.match(line)
        if match:
            frame, pole = match.group(1).lower(), match.group(2).lower()
            if pole not in POLES:
                raise LexiconError(
                    f"line {line_no}: unknown pole {pole!r}", frame=frame, pole=pole
                )
            current = (frame, pole)
            pools.setdefault(current, [])
            continue
        if line.startswith("["):
            raise LexiconError(f"line {line_no}: malformed section header {line!r}")
        if current is None:
            raise LexiconError(f"line {line_no}: token {line!r} outside any section")
        frame, pole = current
        if re.search(r"\s", line):
            raise LexiconError(
                f"line {line_no}: multiword entry {line!r} in {frame}.{pole}",
                frame=frame,
                pole=pole,
                token=line,
            )
        token = line.lower()
        if token in pools[current]:
            raise LexiconError(
                f"line {line_no}: duplicate entry {token!r} in {frame}.{pole}",
                frame=frame,
                pole=pole,
                token=token,
            )
        pools[current].append(token)

    frames: dict[str, tuple[list, list]] = {}
    for (frame, pole), tokens in pools.items():
        vice, virtue = frames.setdefault(frame, ([], []))
        (vice if pole == "vice" else virtue).extend(tokens)
    return validate_lexicon(frames, source=source)


def load_lexicon(path=None) -> SeedLexicon:
    path = Path(path) if path else BUNDLED_LEXICON
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"unreadable lexicon file {path}: {exc}") from exc
    lexicon = parse_lexicon(text, source=str(path))
    logger.debug("[lexicon] pool sizes %s from %s", lexicon.sizes(), path)
    return lexicon


def serialize_lexicon(lexicon: SeedLexicon) -> str:
    lines = []
    for frame in FRAMES:
        for pole in POLES:
            lines.append(f"[{frame}.{pole}]")
            lines.extend(sorted(lexicon.pole(frame, pole)))
            lines.append("")
    return "\n".join(lines)


def resolve_coverage(lexicon: SeedLexicon, table: EmbeddingTable) -> CoverageReport:
    poles = []
    warnings = []
    for frame in FRAMES:
        for pole in POLES:
            declared = lexicon.pole(frame, pole)
            resolved = frozenset(token for token in declared if token in table.index)
            item = PoleCoverage(frame=frame, pole=pole, declared=len(declared), resolved=resolved)
            if not resolved:
                raise CoverageError(
                    f"no seed word of {frame}.{pole} has an embedding", frame=frame, pole=pole
                )
            if item.low:
                message = (
                    f"{frame}.{pole}: only {len(resolved)}/{len(declared)} seed words in vocabulary"
                )
                warnings.append(message)
                logger.warning("[lexicon] %s", message)
            poles.append(item)
    return CoverageReport(poles=tuple(poles), warnings=tuple(warnings))
