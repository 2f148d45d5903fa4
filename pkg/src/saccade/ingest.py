"""Detector output -> observation frames, plus the NDJSON wire protocol.

Frame messages flow detector -> planner, action messages planner -> actuator,
one JSON object per line, UTF-8, floats in decimal:

    {"type":"frame","t":3,"fixation":[4,1],"detections":[
        {"bbox":[0.1,0.2,0.3,0.4],"confidence":0.93,"class":"person"}]}
    {"type":"action","t":3,"fixation":[7,1]}

Bounding boxes are (x, y, width, height) normalised to the unit image square;
the image is partitioned into W x H uniform tiles matching the FOV cells.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ProtocolError
from .grid import Fixation, GridSpec
from .model import ObservationFrame, empty_frame


@dataclass(frozen=True)
class Detection:
    """One detector output box in normalised image coordinates."""

    bbox: tuple[float, float, float, float]  # x, y, width, height
    confidence: float
    class_name: str


@dataclass(frozen=True)
class IngestConfig:
    """How detections are filtered and assigned to FOV tiles."""

    target_classes: frozenset[str] = frozenset({"person"})
    assignment: str = "center"  # or "overlap"
    overlap_threshold: float = 0.2
    confidence_floor: float = 0.25

    def __post_init__(self):
        if self.assignment not in ("center", "overlap"):
            raise ValueError(f"unknown assignment mode {self.assignment!r}")
        if not (0.0 <= self.overlap_threshold <= 1.0):
            raise ValueError(f"overlap_threshold outside [0, 1]: {self.overlap_threshold}")
        if not (0.0 <= self.confidence_floor <= 1.0):
            raise ValueError(f"confidence_floor outside [0, 1]: {self.confidence_floor}")


def _clamped_box(det: Detection) -> tuple[float, float, float, float] | None:
    """Clamp a bbox into the unit square; None if malformed or degenerate."""
    x, y, w, h = det.bbox
    if not all(math.isfinite(v) for v in (x, y, w, h)):
        return None
    if w <= 0.0 or h <= 0.0:
        return None
    x0, y0 = max(x, 0.0), max(y, 0.0)
    x1, y1 = min(x + w, 1.0), min(y + h, 1.0)
    if x1 <= x0 or y1 <= y0:
        return None
    return x0, y0, x1 - x0, y1 - y0


def _center_tile(box, grid: GridSpec) -> tuple[int, int]:
    x, y, w, h = box
    cx, cy = x + w / 2.0, y + h / 2.0
    return min(int(cx * grid.w), grid.w - 1), min(int(cy * grid.h), grid.h - 1)


def _overlap_tiles(box, grid: GridSpec, threshold: float):
    x, y, w, h = box
    area = w * h
    for tw in range(grid.w):
        for th in range(grid.h):
            ix = min(x + w, (tw + 1) / grid.w) - max(x, tw / grid.w)
            iy = min(y + h, (th + 1) / grid.h) - max(y, th / grid.h)
            if ix > 0.0 and iy > 0.0 and ix * iy >= threshold * area:
                yield tw, th


def detections_to_frame(
    dets: list[Detection],
    fixation: Fixation,
    t: int,
    cfg: IngestConfig,
    grid: GridSpec,
) -> ObservationFrame:
    """Build the soft-evidence frame for one image.

    Each surviving detection assigns its confidence to tiles (its centre tile,
    or every tile it overlaps enough); a tile's evidence is the max assigned
    confidence, 0 if none. Non-target classes and below-floor confidences are
    dropped silently; malformed boxes are dropped and counted in `skipped`.
    """
    frame = empty_frame(grid, fixation, t)
    evidence = frame.evidence
    skipped = 0
    for det in dets:
        if det.class_name not in cfg.target_classes:
            continue
        if not (math.isfinite(det.confidence) and 0.0 <= det.confidence <= 1.0):
            skipped += 1
            continue
        if det.confidence < cfg.confidence_floor:
            continue
        box = _clamped_box(det)
        if box is None:
            skipped += 1
            continue
        if cfg.assignment == "center":
            tiles = [_center_tile(box, grid)]
        else:
            tiles = list(_overlap_tiles(box, grid, cfg.overlap_threshold))
        for tw, th in tiles:
            evidence[tw, th] = max(evidence[tw, th], det.confidence)
    evidence[~frame.visible] = 0.0
    return ObservationFrame(
        t=t, fixation=fixation, evidence=evidence, visible=frame.visible, skipped=skipped
    )


# --- wire protocol -----------------------------------------------------------

def _decode_line(line: bytes | str) -> dict:
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ProtocolError(f"not UTF-8: {exc}", line)
    try:
        msg = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"bad JSON: {exc}", line)
    if not isinstance(msg, dict):
        raise ProtocolError("message is not a JSON object", line)
    return msg


def _parse_fixation(msg: dict, line) -> Fixation:
    fx = msg.get("fixation")
    if (
        not isinstance(fx, list)
        or len(fx) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in fx)
    ):
        raise ProtocolError(f"bad fixation field: {fx!r}", line)
    return Fixation(fx[0], fx[1])


def _parse_t(msg: dict, line) -> int:
    t = msg.get("t")
    if not isinstance(t, int) or isinstance(t, bool) or t < 0:
        raise ProtocolError(f"bad timestep field: {t!r}", line)
    return t


def parse_frame_message(line: bytes | str) -> tuple[list[Detection], Fixation, int]:
    """Parse one frame line; raises ProtocolError (recoverable) on bad input."""
    msg = _decode_line(line)
    if msg.get("type") != "frame":
        raise ProtocolError(f"expected type 'frame', got {msg.get('type')!r}", line)
    t = _parse_t(msg, line)
    fixation = _parse_fixation(msg, line)
    raw = msg.get("detections")
    if not isinstance(raw, list):
        raise ProtocolError("detections must be a list", line)
    dets = []
    for d in raw:
        if not isinstance(d, dict):
            raise ProtocolError("detection entries must be objects", line)
        bbox = d.get("bbox")
        conf = d.get("confidence")
        cls = d.get("class")
        if (
            not isinstance(bbox, list)
            or len(bbox) != 4
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in bbox)
        ):
            raise ProtocolError(f"bad bbox: {bbox!r}", line)
        if not isinstance(conf, (int, float)) or isinstance(conf, bool):
            raise ProtocolError(f"bad confidence: {conf!r}", line)
        if not isinstance(cls, str):
            raise ProtocolError(f"bad class: {cls!r}", line)
        dets.append(Detection(bbox=tuple(float(v) for v in bbox), confidence=float(conf), class_name=cls))
    return dets, fixation, t


def encode_frame_message(t: int, fixation: Fixation, dets: list[Detection]) -> bytes:
    payload = {
        "type": "frame",
        "t": t,
        "fixation": [fixation.k, fixation.l],
        "detections": [
            {"bbox": list(d.bbox), "confidence": d.confidence, "class": d.class_name}
            for d in dets
        ],
    }
    return (json.dumps(payload, separators=(",", ":")) + "\n").encode("utf-8")


def parse_action_message(line: bytes | str) -> tuple[Fixation, int]:
    msg = _decode_line(line)
    if msg.get("type") != "action":
        raise ProtocolError(f"expected type 'action', got {msg.get('type')!r}", line)
    return _parse_fixation(msg, line), _parse_t(msg, line)


def encode_action_message(t: int, p: Fixation) -> bytes:
    payload = {"type": "action", "t": t, "fixation": [p.k, p.l]}
    return (json.dumps(payload, separators=(",", ":")) + "\n").encode("utf-8")
