"""Command-line harness: simulate, serve, bench, render.

Exit codes: 0 ok, 2 config error, 3 runtime error. Set SACCADE_LOG to control
logging (DEBUG/INFO/WARNING/...). Commands run in-process by default; pass
--server to forward the work to a running HTTP service instead.
"""

from __future__ import annotations

import functools
import json
import logging
import os
import sys
from pathlib import Path

import click

from .bench import format_report, parse_grid_arg, parse_grids_arg, run_bench
from .errors import ConfigError, SaccadeError
from .render import load_trace, render_ascii, render_csv
from .scenario import load_scenario
from .serve import serve_stdio, serve_tcp
from .session import PlannerConfig
from .simulator import run_episode

EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _exit_codes(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        except (SaccadeError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_RUNTIME)

    return wrapper


def _post(server: str, path: str, payload: dict, timeout: float) -> dict:
    import httpx

    try:
        resp = httpx.post(f"{server}{path}", json=payload, timeout=timeout)
        resp.raise_for_status()
        return resp.json()
    except httpx.HTTPStatusError as exc:
        raise SaccadeError(f"{server}{path} responded {exc.response.status_code}: {exc.response.text}")
    except httpx.HTTPError as exc:
        raise SaccadeError(f"cannot reach {server}: {exc}")


@click.group()
def main():
    """Active-inference saccade planner."""
    level = os.environ.get("SACCADE_LOG", "WARNING").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.WARNING))


def _print_summary(summary: dict) -> None:
    cov = summary["coverage_steps"]
    det = summary["steps_to_detect"]
    err = summary["mean_tracking_error"]
    lat = summary["latency_us"]
    click.echo(f"steps:               {summary['steps']}")
    click.echo(f"final coverage:      {summary['final_coverage']}" + (f" (full after {cov} steps)" if cov else ""))
    click.echo(f"final entropy:       {summary['final_entropy']} nats")
    click.echo(f"steps to detect:     {det if det is not None else '-'}")
    click.echo(f"mean tracking error: {err if err is not None else '-'}")
    click.echo(
        f"latency us:          min={lat['min']} p50={lat['p50']} p99={lat['p99']} max={lat['max']}"
    )


@main.command()
@click.option("--scenario", "scenario_path", required=True, help="Scenario JSON path.")
@click.option("--steps", default=20, show_default=True, type=click.IntRange(min=1))
@click.option("--trace", "trace_path", default=None, help="Write the NDJSON trace here.")
@click.option("--timing/--no-timing", default=True, help="Record per-step latency (off for bitwise-comparable traces).")
@click.option("--snapshots/--no-snapshots", default=True, help="Embed belief snapshots in trace records.")
@click.option("--server", default=None, help="Run on a remote service, e.g. http://localhost:8000.")
@_exit_codes
def simulate(scenario_path, steps, trace_path, timing, snapshots, server):
    """Run a closed-loop episode against the world simulator."""
    scenario = load_scenario(scenario_path)
    if server:
        body = _post(
            server,
            "/v1/simulate",
            {
                "scenario": scenario.model_dump(),
                "steps": steps,
                "timing": timing,
                "snapshots": snapshots,
            },
            timeout=300.0,
        )
        header, records, summary = body["header"], body["records"], body["summary"]
        if trace_path:
            lines = [json.dumps(header, separators=(",", ":"))]
            lines += [json.dumps(r, separators=(",", ":")) for r in records]
            Path(trace_path).write_text("\n".join(lines) + "\n")
        _print_summary(summary)
        return
    trace = run_episode(scenario, steps, timing=timing, snapshots=snapshots)
    if trace_path:
        trace.write(trace_path)
    _print_summary(trace.summary)


@main.command()
@click.option("--transport", type=click.Choice(["stdio", "tcp", "http"]), default="stdio", show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8731, show_default=True, type=int)
@click.option("--config", "config_path", default=None, help="Planner config JSON (scenario schema; world fields ignored).")
@click.option("--latest-only", is_flag=True, help="TCP: fold backlogged frames into beliefs, act on the newest.")
@_exit_codes
def serve(transport, host, port, config_path, latest_only):
    """Serve the planner over the NDJSON wire protocol or HTTP."""
    if transport == "http":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(), host=host, port=port, log_level="warning")
        return
    if config_path is None:
        raise ConfigError("--config is required for stdio/tcp transports")
    cfg = PlannerConfig.from_scenario(load_scenario(config_path))
    if transport == "stdio":
        sys.exit(serve_stdio(cfg))
    serve_tcp(cfg, host, port, latest_only=latest_only)


@main.command()
@click.option("--grids", default="9x9/3x3,16x16/5x5", show_default=True, help="Comma-separated KxL/WxH sizes.")
@click.option("--reps", default=1000, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--server", default=None, help="Run on a remote service.")
@_exit_codes
def bench(grids, reps, seed, server):
    """Measure combined update+plan latency per grid size (1 warm-up run)."""
    if server:
        body = _post(server, "/v1/bench", {"grids": grids, "reps": reps, "seed": seed}, timeout=600.0)
        for r in body["reports"]:
            p = r["params"]
            click.echo(
                f"{r['grid']}: reps={r['reps']} min={r['min_us']:.1f}us "
                f"median={r['median_us']:.1f}us p99={r['p99_us']:.1f}us max={r['max_us']:.1f}us"
            )
            click.echo(
                f"  model tables: beliefs={p['beliefs']} preferences={p['preferences']} "
                f"sensor={p['sensor']} total={p['total']} parameters"
            )
        return
    for grid in parse_grids_arg(grids):
        click.echo(format_report(run_bench(grid, reps, seed=seed)))


@main.command()
@click.option("--trace", "trace_path", required=True, help="NDJSON trace path.")
@click.option("--mode", type=click.Choice(["ascii", "csv"]), default="ascii", show_default=True)
@click.option("--grid", "grid_arg", default=None, help="KxL/WxH fallback if the trace lacks a header.")
@click.option("--server", default=None, help="Render on a remote service.")
@_exit_codes
def render(trace_path, mode, grid_arg, server):
    """Render a trace as per-step ASCII grids or CSV metrics."""
    if server:
        path = Path(trace_path)
        if not path.exists():
            raise ConfigError(f"trace file not found: {path}")
        body = _post(
            server, "/v1/render", {"ndjson": path.read_text(), "mode": mode, "grid": grid_arg}, timeout=120.0
        )
        if body["skipped"]:
            click.echo(f"skipped {body['skipped']} corrupt lines", err=True)
        click.echo(body["content"], nl=False)
        return
    header, records, skipped = load_trace(trace_path)
    if skipped:
        click.echo(f"skipped {skipped} corrupt lines", err=True)
    fallback = parse_grid_arg(grid_arg) if grid_arg else None
    if mode == "csv":
        click.echo(render_csv(records), nl=False)
    else:
        click.echo(render_ascii(header, records, fallback_grid=fallback), nl=False)


if __name__ == "__main__":
    main()
