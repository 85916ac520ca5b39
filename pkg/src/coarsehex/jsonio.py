"""Canonical JSON output and schema-checked input."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .errors import InvalidInputError


def dumps(obj: Any, pretty: bool = False) -> str:
    """Sorted keys, fixed separators, trailing newline; byte-stable for equal input."""
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2) + "\n"
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


@lru_cache(maxsize=None)
def schema(name: str) -> dict:
    text = resources.files("coarsehex.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def _registry():
    from referencing import Registry, Resource

    names = ["cover", "cellset", "certificate", "entourage", "abstract_cover"]
    return Registry().with_resources(
        (f"{n}.schema.json", Resource.from_contents(schema(n))) for n in names
    )


def validate(obj: Any, name: str) -> None:
    validator = jsonschema.Draft202012Validator(schema(name), registry=_registry())
    error = jsonschema.exceptions.best_match(validator.iter_errors(obj))
    if error is not None:
        where = "/".join(str(p) for p in error.absolute_path) or "<root>"
        raise InvalidInputError(f"{name} schema violation at {where}: {error.message}")


def load(path: str | Path, name: str | None = None) -> Any:
    """Parse a JSON file, reporting syntax errors with line and column."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(
            f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}"
        ) from exc
    if name is not None:
        validate(obj, name)
    return obj
