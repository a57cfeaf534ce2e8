"""Client for the scorer bridge: a worker process speaking newline-delimited
JSON over stdio (or a TCP socket) that serves neural duration prediction and
reference-free QE scoring.

Wire format: one UTF-8 JSON object per LF-terminated line.
Request:  {"op": "duration"|"qe"|"capabilities", "id": <int>, "payload": {...}}
Response: {"id": <int>, "ok": true, "result": {...}}
       or {"id": <int>, "ok": false, "error": {"code": ..., "message": ...}}

Responses may arrive out of order; the client correlates by id.
"""

from __future__ import annotations

import json
import os
import shlex
import socket
import subprocess
import threading
from dataclasses import dataclass

from .errors import TransportError
from .metrics import DurationEstimate
from .text import count_tokens

ERROR_CODES = ("UNSUPPORTED_LANGUAGE", "EMPTY_TEXT", "MODEL_ERROR", "BAD_REQUEST")

ENV_BRIDGE_ADDRESS = "ISOCHRONO_BRIDGE"


@dataclass(frozen=True)
class BridgeItemError:
    """Per-item failure inside an otherwise successful batch."""

    index: int
    code: str
    message: str


class BridgeError(TransportError):
    """A single request was answered with ok=false."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


class ScorerBridge:
    """Synchronous bridge client. One instance serializes access to one
    connection; open several instances for parallel batches."""

    def __init__(self, read_line, write_line, close, peer: str):
        self._read_line = read_line
        self._write_line = write_line
        self._close = close
        self._peer = peer
        self._lock = threading.Lock()
        self._next_id = 1
        self._pending: dict[int, dict] = {}

    # -- construction -----------------------------------------------------

    @classmethod
    def spawn(cls, command: str | list[str]) -> "ScorerBridge":
        """Start a worker subprocess and talk to it over stdio."""
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        try:
            proc = subprocess.Popen(
                argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                text=True, encoding="utf-8", bufsize=1,
            )
        except OSError as exc:
            raise TransportError(f"cannot start bridge worker {argv!r}: {exc}") from exc

        def read_line():
            line = proc.stdout.readline()
            if line == "":
                raise TransportError(f"bridge worker {argv[0]!r} closed its output")
            return line

        def write_line(line):
            try:
                proc.stdin.write(line + "\n")
                proc.stdin.flush()
            except (BrokenPipeError, OSError) as exc:
                raise TransportError(f"bridge worker {argv[0]!r} is gone: {exc}") from exc

        def close():
            if proc.stdin:
                try:
                    proc.stdin.close()
                except OSError:
                    pass
            proc.terminate()
            proc.wait(timeout=10)

        bridge = cls(read_line, write_line, close, peer=argv[0])
        bridge._proc = proc
        return bridge

    @classmethod
    def connect_tcp(cls, address: str) -> "ScorerBridge":
        """Connect to a remote worker at host:port."""
        host, _, port = address.rpartition(":")
        try:
            sock = socket.create_connection((host, int(port)), timeout=30)
        except (OSError, ValueError) as exc:
            raise TransportError(f"cannot connect to bridge at {address!r}: {exc}") from exc
        reader = sock.makefile("r", encoding="utf-8", newline="\n")

        def read_line():
            line = reader.readline()
            if line == "":
                raise TransportError(f"bridge at {address!r} closed the connection")
            return line

        def write_line(line):
            try:
                sock.sendall((line + "\n").encode("utf-8"))
            except OSError as exc:
                raise TransportError(f"bridge at {address!r} is gone: {exc}") from exc

        def close():
            reader.close()
            sock.close()

        return cls(read_line, write_line, close, peer=address)

    @classmethod
    def open(cls, spec: str) -> "ScorerBridge":
        """Open a bridge from a command or host:port; the ISOCHRONO_BRIDGE
        environment variable overrides ``spec`` when set."""
        spec = os.environ.get(ENV_BRIDGE_ADDRESS, spec)
        host, _, port = spec.rpartition(":")
        if host and port.isdigit():
            return cls.connect_tcp(spec)
        return cls.spawn(spec)

    # -- protocol ----------------------------------------------------------

    def close(self):
        self._close()

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()

    def _send(self, op: str, payload: dict) -> int:
        req_id = self._next_id
        self._next_id += 1
        self._write_line(json.dumps({"op": op, "id": req_id, "payload": payload},
                                    ensure_ascii=False))
        return req_id

    def _receive(self, req_id: int) -> dict:
        while req_id not in self._pending:
            line = self._read_line()
            try:
                msg = json.loads(line)
            except json.JSONDecodeError as exc:
                raise TransportError(f"bridge {self._peer!r} sent invalid JSON: {line!r}") from exc
            if "id" not in msg:
                raise TransportError(f"bridge {self._peer!r} sent a response without id")
            self._pending[msg["id"]] = msg
        return self._pending.pop(req_id)

    def request(self, op: str, payload: dict | None = None) -> dict:
        """Send one request and wait for its (possibly out-of-order) response."""
        with self._lock:
            req_id = self._send(op, payload or {})
            msg = self._receive(req_id)
        if msg.get("ok"):
            return msg.get("result", {})
        err = msg.get("error") or {}
        raise BridgeError(err.get("code", "MODEL_ERROR"), err.get("message", "unknown error"))

    def request_batch(self, ops: list[tuple[str, dict]]) -> list[dict]:
        """Pipeline several requests; returns raw response messages in input
        order regardless of arrival order."""
        with self._lock:
            ids = [self._send(op, payload) for op, payload in ops]
            return [self._receive(i) for i in ids]

    # -- convenience -------------------------------------------------------

    def capabilities(self) -> dict:
        return self.request("capabilities")

    def duration(self, text: str, language: str) -> float:
        return float(self.request("duration", {"text": text, "language": language})["seconds"])

    def qe(self, source_text: str, translated_text: str,
           source_language: str, target_language: str) -> float:
        return float(self.request("qe", {
            "source_text": source_text,
            "translated_text": translated_text,
            "source_language": source_language,
            "target_language": target_language,
        })["score"])


def bridge_predict(bridge: ScorerBridge,
                   texts: list[tuple[str, str]]) -> list[DurationEstimate | BridgeItemError]:
    """Batch duration prediction. Order-preserving; a failing item becomes a
    BridgeItemError entry while the rest of the batch proceeds."""
    if not texts:
        raise ValueError("texts must be nonempty")
    responses = bridge.request_batch(
        [("duration", {"text": t, "language": lang}) for t, lang in texts]
    )
    results: list[DurationEstimate | BridgeItemError] = []
    for i, ((text, _), msg) in enumerate(zip(texts, responses)):
        if msg.get("ok"):
            results.append(DurationEstimate(
                seconds=float(msg["result"]["seconds"]),
                predictor_id=f"bridge:{bridge._peer}",
                text_units=count_tokens(text),
            ))
        else:
            err = msg.get("error") or {}
            results.append(BridgeItemError(
                index=i,
                code=err.get("code", "MODEL_ERROR"),
                message=err.get("message", "unknown error"),
            ))
    return results


class BridgeDurationPredictor:
    """DurationPredictor adapter over a ScorerBridge connection."""

    def __init__(self, bridge: ScorerBridge):
        self._bridge = bridge
        caps = bridge.capabilities()
        self._languages = set(caps.get("languages", []))

    def predict(self, text: str, language: str) -> DurationEstimate:
        seconds = self._bridge.duration(text, language)
        return DurationEstimate(
            seconds=seconds,
            predictor_id=f"bridge:{self._bridge._peer}",
            text_units=count_tokens(text),
        )

    def id(self) -> str:
        return f"bridge:{self._bridge._peer}"

    def supported_languages(self) -> set[str]:
        return set(self._languages)


class BridgeQEProvider:
    """QE provider adapter over a ScorerBridge connection."""

    def __init__(self, bridge: ScorerBridge):
        self._bridge = bridge

    def score(self, source_text: str, translated_text: str,
              source_language: str, target_language: str) -> float:
        return self._bridge.qe(source_text, translated_text,
                               source_language, target_language)
