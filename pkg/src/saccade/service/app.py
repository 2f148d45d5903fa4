"""HTTP face of the planner: sessions, one-shot simulation, bench and render.

Each session is an independent planner loop; posting a frame advances it and
returns the next fixation, so many cameras can share one process.
"""

from __future__ import annotations

import json
import threading
import uuid

from fastapi import FastAPI, HTTPException

from .. import bench as bench_mod
from ..errors import ConfigError, FrameRejected, ProtocolError, SaccadeError
from ..grid import Fixation
from ..ingest import Detection
from ..render import render_ascii, render_csv
from ..session import PlannerConfig, PlannerSession
from ..simulator import run_episode
from . import models as m


class _SessionStore:
    def __init__(self):
        self._lock = threading.Lock()
        self._sessions: dict[str, tuple[PlannerSession, threading.Lock]] = {}

    def create(self, session: PlannerSession) -> str:
        sid = uuid.uuid4().hex
        with self._lock:
            self._sessions[sid] = (session, threading.Lock())
        return sid

    def get(self, sid: str) -> tuple[PlannerSession, threading.Lock]:
        with self._lock:
            entry = self._sessions.get(sid)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"no such session: {sid}")
        return entry

    def drop(self, sid: str) -> bool:
        with self._lock:
            return self._sessions.pop(sid, None) is not None


def create_app() -> FastAPI:
    app = FastAPI(title="saccade planner", version="0.1.0")
    store = _SessionStore()

    @app.exception_handler(SaccadeError)
    async def _saccade_error(request, exc: SaccadeError):
        from fastapi.responses import JSONResponse

        status = 422 if isinstance(exc, (ConfigError, FrameRejected, ProtocolError)) else 500
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.get("/healthz", response_model=m.HealthResponse)
    def healthz():
        return m.HealthResponse()

    @app.post("/v1/sessions", response_model=m.CreateSessionResponse)
    def create_session(req: m.CreateSessionRequest):
        session = PlannerSession(PlannerConfig.from_scenario(req.config))
        return m.CreateSessionResponse(session_id=store.create(session))

    @app.delete("/v1/sessions/{sid}")
    def delete_session(sid: str):
        if not store.drop(sid):
            raise HTTPException(status_code=404, detail=f"no such session: {sid}")
        return {"deleted": sid}

    @app.post("/v1/sessions/{sid}/frames", response_model=m.FrameResponse)
    def post_frame(sid: str, req: m.FrameRequest):
        session, lock = store.get(sid)
        dets = [
            Detection(bbox=d.bbox, confidence=d.confidence, class_name=d.class_name)
            for d in req.detections
        ]
        with lock:
            cfg = session.cfg
            from ..ingest import detections_to_frame

            frame = detections_to_frame(dets, Fixation(*req.fixation), req.t, cfg.ingest, cfg.grid)
            action = session.handle_frame(frame)
            return m.FrameResponse(
                t=req.t,
                action=(action.k, action.l),
                entropy_total=session.entropy_total(),
                coverage=session.belief.coverage(),
                evidence_nonzero=int((frame.evidence[frame.visible] > 0).sum()),
                skipped_detections=frame.skipped,
            )

    @app.get("/v1/sessions/{sid}/belief", response_model=m.BeliefResponse)
    def get_belief(sid: str):
        session, lock = store.get(sid)
        with lock:
            b = session.belief
            return m.BeliefResponse(
                fixation=(b.fixation.k, b.fixation.l),
                q=[[float(v) for v in row] for row in b.q],
                observed=[[bool(v) for v in row] for row in b.observed_mask],
                entropy_total=session.entropy_total(),
                coverage=b.coverage(),
            )

    @app.get("/v1/sessions/{sid}/policy", response_model=m.PolicyResponse)
    def get_policy(sid: str):
        session, lock = store.get(sid)
        with lock:
            evals = session.evaluate_current()
            best = min(
                evals,
                key=lambda e: (
                    e.g,
                    e.fixation.chebyshev(session.belief.fixation),
                    e.fixation.k,
                    e.fixation.l,
                ),
            )
            return m.PolicyResponse(
                best=(best.fixation.k, best.fixation.l),
                evaluations=[
                    m.EvaluationModel(
                        fixation=(e.fixation.k, e.fixation.l),
                        info_gain=e.info_gain,
                        utility=e.utility,
                        g=e.g,
                    )
                    for e in evals
                ],
            )

    @app.post("/v1/simulate", response_model=m.SimulateResponse)
    def simulate(req: m.SimulateRequest):
        trace = run_episode(req.scenario, req.steps, timing=req.timing, snapshots=req.snapshots)
        return m.SimulateResponse(header=trace.header, records=trace.records, summary=trace.summary)

    @app.post("/v1/bench", response_model=m.BenchResponse)
    def bench(req: m.BenchRequest):
        reports = []
        for grid in bench_mod.parse_grids_arg(req.grids):
            r = bench_mod.run_bench(grid, req.reps, seed=req.seed)
            reports.append(
                m.BenchGridReport(
                    grid=f"{grid.k}x{grid.l}/{grid.w}x{grid.h}",
                    reps=r.reps,
                    min_us=r.min_us,
                    median_us=r.median_us,
                    p99_us=r.p99_us,
                    max_us=r.max_us,
                    params=r.param_counts,
                )
            )
        return m.BenchResponse(reports=reports)

    @app.post("/v1/render", response_model=m.RenderResponse)
    def render(req: m.RenderRequest):
        if req.mode not in ("ascii", "csv"):
            raise HTTPException(status_code=422, detail=f"unknown render mode {req.mode!r}")
        header = None
        records = []
        skipped = 0
        for line in req.ndjson.splitlines():
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                if not isinstance(rec, dict):
                    raise ValueError("not an object")
            except ValueError:
                skipped += 1
                continue
            if rec.get("type") == "header":
                header = rec
            else:
                records.append(rec)
        fallback = bench_mod.parse_grid_arg(req.grid) if req.grid else None
        if req.mode == "csv":
            content = render_csv(records)
        else:
            content = render_ascii(header, records, fallback_grid=fallback)
        return m.RenderResponse(content=content, skipped=skipped)

    return app


app = create_app()
