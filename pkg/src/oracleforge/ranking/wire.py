"""Client for external scorers speaking the v1 line protocol.

One JSON object per line.  Requests carry {"id", "v": 1, "task",
"prefix", "signature", "docstring"} plus "candidate" for assertion
scoring; responses carry {"id", "score"} or {"id", "error"}.  Responses
may arrive out of order and are matched by id.  Unknown fields on either
side are ignored.
"""
from __future__ import annotations

import itertools
import json
import math
import shlex
import socket
import subprocess
import threading
from dataclasses import dataclass
from typing import Any, IO

from ..errors import ScorerUnavailable
from ..oracles import render_assertion
from ..testlang import render_prefix

PROTOCOL_VERSION = 1


def check_score(value: Any) -> float:
    """Validate a protocol score: a number in [0, 1], NaN rejected."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScorerUnavailable(f"protocol error: score is not a number: {value!r}")
    score = float(value)
    if math.isnan(score) or score < 0.0 or score > 1.0:
        raise ScorerUnavailable(f"protocol error: score out of range: {score!r}")
    return score


@dataclass(frozen=True)
class ScoreRequest:
    task: str  # "exception" | "assertion"
    prefix: str
    signature: str
    docstring: str
    candidate: str | None = None

    def to_frame(self, request_id: int) -> dict[str, Any]:
        frame: dict[str, Any] = {
            "id": request_id,
            "v": PROTOCOL_VERSION,
            "task": self.task,
            "prefix": self.prefix,
            "signature": self.signature,
            "docstring": self.docstring,
        }
        if self.task == "assertion":
            frame["candidate"] = self.candidate or ""
        return frame


class _Pending:
    __slots__ = ("event", "score", "error")

    def __init__(self) -> None:
        self.event = threading.Event()
        self.score: float | None = None
        self.error: str | None = None


class ExternalScorer:
    """Line-protocol client over a spawned subprocess or a TCP endpoint.

    Endpoint descriptors: "cmd:<command line>" or "tcp:<host>:<port>".
    Up to max_in_flight requests may be outstanding at once; a reader
    thread matches responses to waiters by id.
    """

    def __init__(self, endpoint: str, timeout: float = 10.0, max_in_flight: int = 8):
        if timeout <= 0:
            raise ValueError("timeout must be positive")
        if max_in_flight < 1:
            raise ValueError("max_in_flight must be at least 1")
        self.endpoint = endpoint
        self.timeout = timeout
        self._ids = itertools.count(1)
        self._slots = threading.Semaphore(max_in_flight)
        self._write_lock = threading.Lock()
        self._pending_lock = threading.Lock()
        self._pending: dict[int, _Pending] = {}
        self._closed = False
        self._process: subprocess.Popen[str] | None = None
        self._sock: socket.socket | None = None
        self._reader_error: str | None = None

        if endpoint.startswith("cmd:"):
            command = shlex.split(endpoint[4:])
            if not command:
                raise ScorerUnavailable("empty scorer command")
            try:
                self._process = subprocess.Popen(
                    command,
                    stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE,
                    stderr=subprocess.DEVNULL,
                    text=True,
                )
            except OSError as exc:
                raise ScorerUnavailable(f"cannot start scorer: {exc}") from exc
            self._writer: IO[str] = self._process.stdin  # type: ignore[assignment]
            reader: IO[str] = self._process.stdout  # type: ignore[assignment]
        elif endpoint.startswith("tcp:"):
            rest = endpoint[4:]
            host, sep, port_text = rest.rpartition(":")
            if not sep or not host:
                raise ScorerUnavailable(f"bad tcp endpoint: {endpoint}")
            try:
                self._sock = socket.create_connection((host, int(port_text)), timeout=timeout)
            except (OSError, ValueError) as exc:
                raise ScorerUnavailable(f"cannot connect to scorer: {exc}") from exc
            stream = self._sock.makefile("rw", encoding="utf-8", newline="\n")
            self._writer = stream
            reader = stream
        else:
            raise ScorerUnavailable(f"unknown scorer endpoint: {endpoint}")

        self._reader_thread = threading.Thread(
            target=self._read_loop, args=(reader,), daemon=True
        )
        self._reader_thread.start()

    # --- scorer interface ---

    def score_exception(self, prefix, context) -> float:
        return self.request(
            ScoreRequest(
                "exception", render_prefix(prefix), context.signature, context.docstring
            )
        )

    def score_assertion(self, prefix, context, entry) -> float:
        return self.request(
            ScoreRequest(
                "assertion",
                render_prefix(prefix),
                context.signature,
                context.docstring,
                render_assertion(entry.form),
            )
        )

    def request(self, req: ScoreRequest) -> float:
        if self._closed:
            raise ScorerUnavailable("scorer connection closed")
        if not self._slots.acquire(timeout=self.timeout):
            raise ScorerUnavailable("scorer saturated: no free request slot")
        try:
            request_id = next(self._ids)
            pending = _Pending()
            with self._pending_lock:
                self._pending[request_id] = pending
            line = json.dumps(req.to_frame(request_id)) + "\n"
            try:
                with self._write_lock:
                    self._writer.write(line)
                    self._writer.flush()
            except (OSError, ValueError) as exc:
                raise ScorerUnavailable(f"scorer write failed: {exc}") from exc
            if not pending.event.wait(self.timeout):
                raise ScorerUnavailable(
                    f"scorer timeout after {self.timeout}s (request {request_id})"
                )
            if pending.error is not None:
                raise ScorerUnavailable(pending.error)
            assert pending.score is not None
            return pending.score
        finally:
            with self._pending_lock:
                self._pending.pop(request_id, None)
            self._slots.release()

    # --- response plumbing ---

    def _read_loop(self, reader: IO[str]) -> None:
        try:
            for line in reader:
                line = line.strip()
                if not line:
                    continue
                self._dispatch(line)
        except (OSError, ValueError):
            pass
        self._fail_all("scorer stream ended")

    def _dispatch(self, line: str) -> None:
        try:
            frame = json.loads(line)
        except json.JSONDecodeError:
            return  # not a frame; ignore noise on the stream
        if not isinstance(frame, dict):
            return
        frame_id = frame.get("id")
        if not isinstance(frame_id, int):
            return
        with self._pending_lock:
            pending = self._pending.get(frame_id)
        if pending is None:
            return
        if "error" in frame:
            pending.error = f"scorer error: {frame['error']}"
        else:
            try:
                pending.score = check_score(frame.get("score"))
            except ScorerUnavailable as exc:
                pending.error = str(exc)
        pending.event.set()

    def _fail_all(self, message: str) -> None:
        with self._pending_lock:
            waiting = list(self._pending.values())
        for pending in waiting:
            if not pending.event.is_set():
                pending.error = message
                pending.event.set()

    def close(self) -> None:
        self._closed = True
        if self._process is not None:
            try:
                if self._process.stdin:
                    self._process.stdin.close()
                self._process.terminate()
                self._process.wait(timeout=5)
            except (OSError, subprocess.TimeoutExpired):
                self._process.kill()
        if self._sock is not None:
            # shutdown wakes a reader blocked in recv; close alone waits out
            # the socket timeout because the stream wrapper pins the fd
            try:
                self._sock.shutdown(socket.SHUT_RDWR)
            except OSError:
                pass
            try:
                self._sock.close()
            except OSError:
                pass

    def __enter__(self) -> "ExternalScorer":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
