"""JSON Schemas for the CLI output documents.

Each ``<name>.schema.json`` file describes the document printed by the
subcommand of the same name (plus ``state`` for the on-disk state-file
format).  Schemas are shipped as package data so downstream consumers
can validate captured output.
"""

from __future__ import annotations

import json
from importlib import resources

__all__ = ["load", "names"]


def names() -> tuple[str, ...]:
    root = resources.files(__package__)
    found = sorted(
        entry.name[: -len(".schema.json")]
        for entry in root.iterdir()
        if entry.name.endswith(".schema.json")
    )
    return tuple(found)


def load(name: str) -> dict:
    path = resources.files(__package__).joinpath(f"{name}.schema.json")
    return json.loads(path.read_text(encoding="utf-8"))
