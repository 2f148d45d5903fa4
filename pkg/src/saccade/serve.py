"""Wire-protocol servers: frame messages in, action messages out.

stdio mode answers strictly one action per frame in order, which makes piping
a recorded frame stream through the process reproduce in-process planning
exactly. TCP mode serves one independent planner session per connection; with
latest_only a lagging client still gets every frame folded into the beliefs
but only the newest frame triggers an action.
"""

from __future__ import annotations

import logging
import queue
import socketserver
import sys
import threading
from typing import BinaryIO, Callable, Iterable

from .errors import ProtocolError
from .ingest import detections_to_frame, encode_action_message, parse_frame_message
from .session import PlannerConfig, PlannerSession

log = logging.getLogger(__name__)


def answer_lines(
    cfg: PlannerConfig, lines: Iterable[bytes], write: Callable[[bytes], None]
) -> int:
    """Run one session over an ordered line stream; returns frames answered.

    Malformed lines are logged and skipped; the stream continues.
    """
    session = PlannerSession(cfg)
    answered = 0
    for line in lines:
        if not line.strip():
            continue
        try:
            dets, fixation, t = parse_frame_message(line)
        except ProtocolError as exc:
            log.warning("dropping malformed frame line: %s", exc)
            continue
        action = session.handle_detections(dets, fixation, t)
        write(encode_action_message(t, action))
        answered += 1
    return answered


def serve_stdio(cfg: PlannerConfig, stdin: BinaryIO | None = None, stdout: BinaryIO | None = None) -> int:
    """Serve over stdin/stdout until EOF; returns 0 on clean shutdown."""
    stdin = stdin if stdin is not None else sys.stdin.buffer
    stdout = stdout if stdout is not None else sys.stdout.buffer

    def write(data: bytes) -> None:
        stdout.write(data)
        stdout.flush()

    answered = answer_lines(cfg, stdin, write)
    log.info("stdio stream closed after %d frames", answered)
    return 0


class _LatestOnlyWorker:
    """Reader thread + bounded queue: absorb every frame, act on the newest."""

    def __init__(self, session: PlannerSession, write: Callable[[bytes], None], maxsize: int = 256):
        self.session = session
        self.write = write
        self.frames: queue.Queue = queue.Queue(maxsize=maxsize)

    def feed(self, lines: Iterable[bytes]) -> None:
        for line in lines:
            if not line.strip():
                continue
            try:
                self.frames.put(parse_frame_message(line))
            except ProtocolError as exc:
                log.warning("dropping malformed frame line: %s", exc)
        self.frames.put(None)

    def run(self) -> None:
        while True:
            item = self.frames.get()
            if item is None:
                return
            batch = [item]
            while True:
                try:
                    nxt = self.frames.get_nowait()
                except queue.Empty:
                    break
                if nxt is None:
                    self._answer(batch)
                    return
                batch.append(nxt)
            self._answer(batch)

    def _answer(self, batch) -> None:
        cfg = self.session.cfg
        for dets, fixation, t in batch[:-1]:
            self.session.update_only(detections_to_frame(dets, fixation, t, cfg.ingest, cfg.grid))
        dets, fixation, t = batch[-1]
        action = self.session.handle_detections(dets, fixation, t)
        self.write(encode_action_message(t, action))


class PlannerTCPServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address, cfg: PlannerConfig, latest_only: bool = False):
        self.cfg = cfg
        self.latest_only = latest_only
        super().__init__(address, _PlannerHandler)


class _PlannerHandler(socketserver.StreamRequestHandler):
    def handle(self):
        server: PlannerTCPServer = self.server  # type: ignore[assignment]
        write_lock = threading.Lock()

        def write(data: bytes) -> None:
            with write_lock:
                self.wfile.write(data)
                self.wfile.flush()

        try:
            if server.latest_only:
                worker = _LatestOnlyWorker(PlannerSession(server.cfg), write)
                plan_thread = threading.Thread(target=worker.run, daemon=True)
                plan_thread.start()
                worker.feed(self.rfile)
                plan_thread.join()
            else:
                answer_lines(server.cfg, self.rfile, write)
        except (BrokenPipeError, ConnectionResetError):
            log.info("client disconnected")


def serve_tcp(cfg: PlannerConfig, host: str, port: int, latest_only: bool = False) -> None:
    """Bind and serve until interrupted; raises OSError if the bind fails."""
    with PlannerTCPServer((host, port), cfg, latest_only=latest_only) as server:
        log.info("planner listening on %s:%d", host, server.server_address[1])
        server.serve_forever()
