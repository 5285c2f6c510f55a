"""Named JSON fixtures shipped with the package."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path


def _directory(directory: str | Path | None):
    return Path(directory) if directory is not None else resources.files(__name__)


def list_fixtures(directory: str | Path | None = None) -> list[str]:
    d = _directory(directory)
    return sorted(p.name[:-5] for p in d.iterdir() if p.name.endswith(".json"))


def load_fixture(name: str, directory: str | Path | None = None) -> dict:
    path = _directory(directory) / f"{name}.json"
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(list_fixtures(directory))}") from None
    return json.loads(text)
