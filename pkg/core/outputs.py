import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

import pandas as pd

logger = logging.getLogger(__name__)

VERSION = "1.0.0"
FLOAT_FORMAT = "%.6f"
MISSING = "NA"


def sha256_file(path, block_size: int = 1 << 20) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        while True:
            chunk = handle.read(block_size)
            if not chunk:
                break
            digest.update(chunk)
    return digest.hexdigest()


def _atomic_write(path: Path, data) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        if isinstance(data, bytes):
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
        else:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(data)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def atomic_write_bytes(data: bytes, path) -> Path:
    return _atomic_write(Path(path), data)


def write_table(frame: pd.DataFrame, path, *, index: bool = False) -> Path:
    text = frame.to_csv(sep="\t", index=index, na_rep=MISSING, float_format=FLOAT_FORMAT)
    path = _atomic_write(Path(path), text)
    logger.debug("[outputs] wrote %s (%d rows)", path, len(frame))
    return path


def write_json(payload: dict, path) -> Path:
    text = json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n"
    return _atomic_write(Path(path), text)


class RunManifest:
    """Collects what a command read and wrote; written last, without timestamps."""

    def __init__(self, command: str, config: dict):
        self.command = command
        self.config = config
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}
        self.counts: dict[str, int] = {}

    def add_input(self, path) -> None:
        if path:
            self.inputs[str(path)] = sha256_file(path)

    def add_output(self, path) -> None:
        path = Path(path)
        self.outputs[path.name] = sha256_file(path)

    def count(self, name: str, value: int) -> None:
        self.counts[name] = int(value)

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "version": VERSION,
            "config": self.config,
            "inputs": dict(sorted(self.inputs.items())),
            "counts": dict(sorted(self.counts.items())),
            "outputs": dict(sorted(self.outputs.items())),
        }

    def write(self, output_dir) -> Path:
        path = Path(output_dir) / f"manifest_{self.command}.json"
        write_json(self.as_dict(), path)
        logger.info("[outputs] %s: %d files written to %s", self.command, len(self.outputs), output_dir)
        return path
