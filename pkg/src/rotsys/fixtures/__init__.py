"""Bundled input data: rotation tables, a current graph, its log, and
index-3 seed rows, each pinned by a checksum in manifest.json."""

from __future__ import annotations

import hashlib
import json
from importlib import resources

from ..core import FixtureMissingError, RotationSystem, parse_rot
from ..currents import CurrentGraph, parse_cur, parse_log_file, parse_seed_file

_DATA = resources.files(__name__) / "data"


def _read(name: str) -> str:
    path = _DATA / name
    try:
        return path.read_text()
    except FileNotFoundError:
        raise FixtureMissingError(f"fixture {name!r} is not bundled") from None


def manifest() -> dict:
    return json.loads(_read("manifest.json"))


def sha256(name: str) -> str:
    return hashlib.sha256(_read(name).encode()).hexdigest()


def verify_manifest() -> dict:
    """name -> bool: stored checksum matches the file."""
    return {name: entry["sha256"] == sha256(name)
            for name, entry in manifest()["fixtures"].items()}


def load_text(name: str) -> str:
    entry = manifest()["fixtures"].get(name)
    text = _read(name)
    if entry is None or hashlib.sha256(text.encode()).hexdigest() != entry["sha256"]:
        raise FixtureMissingError(f"fixture {name!r} fails its checksum")
    return text


def load_rot(name: str) -> RotationSystem:
    return parse_rot(load_text(name))


def load_cur(name: str) -> CurrentGraph:
    return parse_cur(load_text(name))


def load_log(name: str):
    return parse_log_file(load_text(name))


def load_seed(name: str):
    return parse_seed_file(load_text(name))
