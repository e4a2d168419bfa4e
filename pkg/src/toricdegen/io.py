"""JSON file formats for fans, partitions, sections and polynomials."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

from .degeneration import Partition, block_divisor
from .toric import Fan, Section


class InputError(ValueError):
    """Unreadable or invalid input file; carries a path:line:col style location."""


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def content_hash(text: str | bytes) -> str:
    if isinstance(text, str):
        text = text.encode()
    return "sha256:" + hashlib.sha256(text).hexdigest()


def read_json(path: str | Path) -> tuple[Any, str]:
    """Parse a JSON file; returns ``(data, hash)``."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text), content_hash(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _wrap(path, what, fn):
    try:
        return fn()
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: malformed {what}: missing or invalid field {exc}") from None
    except ValueError as exc:
        raise InputError(f"{path}: invalid {what}: {exc}") from None


def load_fan(path) -> tuple[Fan, str]:
    data, h = read_json(path)
    return _wrap(path, "fan", lambda: Fan.from_json(data, name=Path(path).stem)), h


def load_partition(path, fan: Fan) -> tuple[Partition, str]:
    data, h = read_json(path)

    def build():
        part = Partition.from_json(data)
        part.validate(fan.nrays)
        return part

    return _wrap(path, "partition", build), h


def load_sections(path, fan: Fan, partition: Partition) -> tuple[tuple[Section, ...], str]:
    """Either ``{"coeffs": [...]}`` (one block) or ``{"sections": [{"coeffs": ...}, ...]}``."""
    data, h = read_json(path)

    def build():
        tables = data["sections"] if "sections" in data else [data]
        if len(tables) != partition.k:
            raise ValueError(f"{len(tables)} section tables for {partition.k} blocks")
        secs = tuple(
            Section.from_json(t, block_divisor(fan, b)) for t, b in zip(tables, partition.blocks)
        )
        for s in secs:
            s.validate(fan)
        return secs

    return _wrap(path, "sections", build), h


def write_json(data: Any, path: str | Path) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text)
