"""Trace rendering: per-step ASCII grids or plot-ready CSV."""

from __future__ import annotations

import csv
import io
import json
import logging
from pathlib import Path

from .errors import ConfigError
from .grid import Fixation, GridSpec, fov_origin

log = logging.getLogger(__name__)

CSV_FIELDS = ["t", "action_k", "action_l", "evidence_nonzero", "entropy_total", "coverage", "latency_us"]


def load_trace(path: str | Path) -> tuple[dict | None, list[dict], int]:
    """Read an NDJSON trace; corrupt lines are skipped and counted."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"trace file not found: {path}")
    header = None
    records = []
    skipped = 0
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            if not isinstance(rec, dict):
                raise ValueError("not an object")
        except ValueError as exc:
            log.warning("skipping corrupt trace line %d: %s", lineno, exc)
            skipped += 1
            continue
        if rec.get("type") == "header":
            header = rec
        else:
            records.append(rec)
    return header, records, skipped


def _grid_from_header(header: dict | None, fallback: GridSpec | None) -> GridSpec:
    if header is not None and "grid" in header:
        g = header["grid"]
        return GridSpec(g["k"], g["l"], g["w"], g["h"])
    if fallback is not None:
        return fallback
    raise ConfigError("trace has no header; pass the grid explicitly (--grid KxL/WxH)")


def _glyph(q: float | None, in_fov: bool) -> str:
    if q is None:
        return "+" if in_fov else " "
    if q > 0.9:
        return "X" if in_fov else "#"
    if q < 0.1:
        return "o" if in_fov else "."
    return "+" if in_fov else "?"


def _belief_at(record: dict, k: int, l: int) -> float | None:
    belief = record.get("belief")
    if belief is None:
        return None
    return belief[k][l]


def render_ascii(header: dict | None, records: list[dict], fallback_grid: GridSpec | None = None) -> str:
    """One block per step: the belief grid with the FOV marked, plus the
    camera's W x H view panel (outside-grid cells drawn as 'x')."""
    grid = _grid_from_header(header, fallback_grid)
    out = io.StringIO()
    for rec in records:
        fk, fl = rec.get("fixation", rec["action"])
        ak, al = rec["action"]
        fixation = Fixation(fk, fl)
        k0, l0 = fov_origin(grid, fixation)
        out.write(
            f"t={rec['t']} fix=({fk},{fl}) act=({ak},{al}) "
            f"H={rec['entropy_total']:.3f} cov={rec['coverage']:.3f} "
            f"ev={rec['evidence_nonzero']}\n"
        )
        for l in range(grid.l):
            row = []
            for k in range(grid.k):
                in_fov = k0 <= k < k0 + grid.w and l0 <= l < l0 + grid.h
                row.append(_glyph(_belief_at(rec, k, l), in_fov))
            out.write("".join(row) + "\n")
        out.write("view:\n")
        for h in range(grid.h):
            row = []
            for w in range(grid.w):
                bk, bl = k0 + w, l0 + h
                if not grid.contains(bk, bl):
                    row.append("x")
                else:
                    row.append(_glyph(_belief_at(rec, bk, bl), False))
            out.write("".join(row) + "\n")
        out.write("\n")
    return out.getvalue()


def render_csv(records: list[dict]) -> str:
    """Per-step metrics, one row per step."""
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(CSV_FIELDS)
    for rec in records:
        writer.writerow(
            [
                rec["t"],
                rec["action"][0],
                rec["action"][1],
                rec["evidence_nonzero"],
                rec["entropy_total"],
                rec["coverage"],
                rec["latency_us"],
            ]
        )
    return out.getvalue()
