import json
import socket
import subprocess
import sys
import threading
import time

import pytest
from click.testing import CliRunner

from conftest import explore_scenario, track_scenario

from saccade.cli import main


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def http_server():
    import uvicorn

    from saccade.service import create_app

    config = uvicorn.Config(create_app(), host="127.0.0.1", port=0, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("uvicorn did not start")
        time.sleep(0.02)
    port = server.servers[0].sockets[0].getsockname()[1]
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(explore_scenario()))
    return path


class TestSimulate:
    def test_explore_summary_reports_coverage(self, runner, scenario_file, tmp_path):
        trace = tmp_path / "trace.ndjson"
        result = runner.invoke(
            main, ["simulate", "--scenario", str(scenario_file), "--steps", "12", "--trace", str(trace)]
        )
        assert result.exit_code == 0, result.output
        assert "full after 9 steps" in result.output
        assert trace.exists()
        assert len(trace.read_text().splitlines()) == 13  # header + 12 records

    def test_track_summary_reports_tracking_error(self, runner, tmp_path):
        path = tmp_path / "track.json"
        path.write_text(json.dumps(track_scenario()))
        result = runner.invoke(main, ["simulate", "--scenario", str(path), "--steps", "20"])
        assert result.exit_code == 0, result.output
        assert "mean tracking error" in result.output
        assert "mean tracking error: -" not in result.output

    def test_missing_scenario_exits_2_naming_path(self, runner):
        result = runner.invoke(main, ["simulate", "--scenario", "/no/such/file.json"])
        assert result.exit_code == 2
        assert "/no/such/file.json" in result.output

    def test_invalid_scenario_exits_2(self, runner, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"grid": {"k": 3, "l": 3, "w": 9, "h": 1}}))
        result = runner.invoke(main, ["simulate", "--scenario", str(path)])
        assert result.exit_code == 2


class TestBench:
    def test_reports_for_each_grid(self, runner):
        result = runner.invoke(main, ["bench", "--grids", "4x4/2x2,5x5/3x3", "--reps", "100"])
        assert result.exit_code == 0, result.output
        assert "4x4/2x2:" in result.output
        assert "5x5/3x3:" in result.output
        assert "parameters" in result.output

    def test_too_few_reps_exits_2(self, runner):
        result = runner.invoke(main, ["bench", "--grids", "4x4/2x2", "--reps", "10"])
        assert result.exit_code == 2


class TestRender:
    def test_csv_mode(self, runner, scenario_file, tmp_path):
        trace = tmp_path / "t.ndjson"
        r1 = runner.invoke(
            main, ["simulate", "--scenario", str(scenario_file), "--steps", "5", "--trace", str(trace)]
        )
        assert r1.exit_code == 0
        r2 = runner.invoke(main, ["render", "--trace", str(trace), "--mode", "csv"])
        assert r2.exit_code == 0
        assert len(r2.output.strip().splitlines()) == 6

    def test_ascii_mode(self, runner, scenario_file, tmp_path):
        trace = tmp_path / "t.ndjson"
        runner.invoke(main, ["simulate", "--scenario", str(scenario_file), "--steps", "3", "--trace", str(trace)])
        result = runner.invoke(main, ["render", "--trace", str(trace), "--mode", "ascii"])
        assert result.exit_code == 0
        assert result.output.count("view:") == 3

    def test_missing_trace_exits_2(self, runner):
        result = runner.invoke(main, ["render", "--trace", "/no/trace.ndjson"])
        assert result.exit_code == 2


class TestServeErrors:
    def test_tcp_bind_failure_exits_3(self, tmp_path):
        blocker = socket.create_server(("127.0.0.1", 0))
        port = blocker.getsockname()[1]
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps(explore_scenario()))
        try:
            proc = subprocess.run(
                [sys.executable, "-m", "saccade", "serve", "--transport", "tcp",
                 "--port", str(port), "--config", str(config)],
                capture_output=True,
                timeout=30,
            )
        finally:
            blocker.close()
        assert proc.returncode == 3
        assert b"error" in proc.stderr.lower()

    def test_missing_config_exits_2(self, runner):
        result = runner.invoke(main, ["serve", "--transport", "stdio"])
        assert result.exit_code == 2


class TestThinClient:
    def test_simulate_against_server_matches_local(self, runner, scenario_file, tmp_path, http_server):
        remote_trace = tmp_path / "remote.ndjson"
        result = runner.invoke(
            main,
            ["simulate", "--scenario", str(scenario_file), "--steps", "9",
             "--trace", str(remote_trace), "--no-timing", "--server", http_server],
        )
        assert result.exit_code == 0, result.output
        assert "full after 9 steps" in result.output

        local_trace = tmp_path / "local.ndjson"
        local = runner.invoke(
            main,
            ["simulate", "--scenario", str(scenario_file), "--steps", "9",
             "--trace", str(local_trace), "--no-timing"],
        )
        assert local.exit_code == 0
        assert remote_trace.read_bytes() == local_trace.read_bytes()

    def test_bench_against_server(self, runner, http_server):
        result = runner.invoke(
            main, ["bench", "--grids", "4x4/2x2", "--reps", "100", "--server", http_server]
        )
        assert result.exit_code == 0, result.output
        assert "4x4/2x2:" in result.output
        assert "total=22 parameters" in result.output

    def test_render_against_server(self, runner, scenario_file, tmp_path, http_server):
        trace = tmp_path / "t.ndjson"
        runner.invoke(main, ["simulate", "--scenario", str(scenario_file), "--steps", "4", "--trace", str(trace)])
        result = runner.invoke(
            main, ["render", "--trace", str(trace), "--mode", "csv", "--server", http_server]
        )
        assert result.exit_code == 0, result.output
        assert len(result.output.strip().splitlines()) == 5

    def test_unreachable_server_exits_3(self, runner):
        result = runner.invoke(
            main, ["bench", "--grids", "4x4/2x2", "--reps", "100", "--server", "http://127.0.0.1:9"]
        )
        assert result.exit_code == 3
        assert "cannot reach" in result.output
