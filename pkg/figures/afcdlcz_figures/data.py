"""Readers for the preset CSV bundles and report JSON files."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

__all__ = ["RenderError", "load_csv", "load_report"]


class RenderError(ValueError):
    """Raised when an input file is missing or has an unexpected schema."""


def load_csv(csv_dir, filename: str, required: list[str]) -> dict[str, np.ndarray]:
    """Parse one of the documented CSVs into named float columns.

    Comment headers are collected under the ``"meta"`` key.  A missing file
    or a missing column is a hard error before any image is produced.
    """
    path = Path(csv_dir) / filename
    if not path.exists():
        raise RenderError(f"missing input CSV: {path}")
    meta: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list[float]] = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                meta[key.strip()] = value.strip()
            continue
        if header is None:
            header = [c.strip() for c in line.split(",")]
            continue
        parts = line.split(",")
        if len(parts) != len(header):
            raise RenderError(f"{path}:{lineno}: expected {len(header)} columns, got {len(parts)}")
        try:
            rows.append([float(x) for x in parts])
        except ValueError as exc:
            raise RenderError(f"{path}:{lineno}: non-numeric cell") from exc
    if header is None:
        raise RenderError(f"{path}: no header row")
    missing = [c for c in required if c not in header]
    if missing:
        raise RenderError(f"{path}: missing required columns {missing}; have {header}")
    table = np.asarray(rows, dtype=float).reshape(len(rows), len(header))
    data: dict[str, np.ndarray] = {c: table[:, i] for i, c in enumerate(header)}
    data["meta"] = meta
    return data


def load_report(csv_dir, preset: str) -> dict:
    path = Path(csv_dir) / f"{preset}_report.json"
    if not path.exists():
        raise RenderError(f"missing report JSON: {path}")
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise RenderError(f"{path}: invalid JSON") from exc
    if "report" not in payload:
        raise RenderError(f"{path}: missing 'report' section")
    return payload["report"]
