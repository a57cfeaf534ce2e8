"""Wire-level conformance suite for scorer bridge workers.

Runs identically against the in-tree mock worker and any external worker
(e.g. the Node implementation under bridge/), so every worker honors the same
line discipline, correlation rules and error codes.
"""

import json
import subprocess
import sys
from pathlib import Path

import pytest

NODE_WORKER = Path(__file__).parent.parent / "bridge" / "dist" / "worker.js"

WORKERS = [
    pytest.param([sys.executable, "-m", "isochrono.testing"], id="mock"),
    pytest.param(["node", str(NODE_WORKER)], id="node",
                 marks=pytest.mark.skipif(not NODE_WORKER.exists(),
                                          reason="node worker not built")),
]


class RawWorker:
    def __init__(self, argv):
        self.proc = subprocess.Popen(argv, stdin=subprocess.PIPE,
                                     stdout=subprocess.PIPE, text=True,
                                     encoding="utf-8", bufsize=1)

    def send(self, obj) -> None:
        self.proc.stdin.write(json.dumps(obj, ensure_ascii=False) + "\n")
        self.proc.stdin.flush()

    def send_raw(self, line: str) -> None:
        self.proc.stdin.write(line + "\n")
        self.proc.stdin.flush()

    def recv(self) -> dict:
        line = self.proc.stdout.readline()
        assert line.endswith("\n"), f"response not LF-terminated: {line!r}"
        return json.loads(line)

    def close(self):
        self.proc.stdin.close()
        self.proc.terminate()
        self.proc.wait(timeout=10)


@pytest.fixture(params=WORKERS)
def worker(request):
    w = RawWorker(request.param)
    yield w
    w.close()


def duration_req(req_id, text, language="en"):
    return {"op": "duration", "id": req_id,
            "payload": {"text": text, "language": language}}


def qe_req(req_id, source, translated, src="en", tgt="en"):
    return {"op": "qe", "id": req_id,
            "payload": {"source_text": source, "translated_text": translated,
                        "source_language": src, "target_language": tgt}}


class TestProtocolConformance:
    def test_capabilities(self, worker):
        worker.send({"op": "capabilities", "id": 1})
        msg = worker.recv()
        assert msg["id"] == 1 and msg["ok"] is True
        assert set(msg["result"]["languages"]) >= {"en", "de", "es", "ru", "zh"}
        assert msg["result"]["qe"] is True

    def test_duration_ok(self, worker):
        worker.send(duration_req(7, "hello there world"))
        msg = worker.recv()
        assert msg["id"] == 7 and msg["ok"] is True
        assert msg["result"]["seconds"] > 0
        assert "error" not in msg or not msg.get("error")

    def test_empty_text_error(self, worker):
        worker.send(duration_req(2, "   "))
        msg = worker.recv()
        assert msg["id"] == 2 and msg["ok"] is False
        assert msg["error"]["code"] == "EMPTY_TEXT"
        assert msg["error"]["message"]
        assert "result" not in msg or not msg.get("result")

    def test_unsupported_language(self, worker):
        worker.send(duration_req(3, "bonjour", language="fr"))
        msg = worker.recv()
        assert msg["ok"] is False
        assert msg["error"]["code"] == "UNSUPPORTED_LANGUAGE"

    def test_bad_request_unknown_op(self, worker):
        worker.send({"op": "synthesize", "id": 4})
        msg = worker.recv()
        assert msg["ok"] is False and msg["error"]["code"] == "BAD_REQUEST"

    def test_bad_request_invalid_json_line(self, worker):
        worker.send_raw("{this is not json")
        msg = worker.recv()
        assert msg["ok"] is False and msg["error"]["code"] == "BAD_REQUEST"

    def test_every_request_answered_exactly_once(self, worker):
        ids = list(range(10, 30))
        for i in ids:
            worker.send(duration_req(i, f"text number {i}"))
        seen = [worker.recv()["id"] for _ in ids]
        assert sorted(seen) == ids

    def test_qe_ok(self, worker):
        worker.send(qe_req(5, "the cat sat", "the cat sat"))
        msg = worker.recv()
        assert msg["ok"] is True
        assert isinstance(msg["result"]["score"], (int, float))

    def test_utf8_text(self, worker):
        worker.send(duration_req(6, "你好，世界上的朋友们", language="zh"))
        msg = worker.recv()
        assert msg["ok"] is True and msg["result"]["seconds"] > 0

    def test_duration_deterministic(self, worker):
        worker.send(duration_req(8, "repeatable input text"))
        first = worker.recv()["result"]["seconds"]
        worker.send(duration_req(9, "repeatable input text"))
        assert worker.recv()["result"]["seconds"] == first

    def test_self_concatenation_increases_duration(self, worker):
        text = "a reasonably long test sentence"
        worker.send(duration_req(11, text))
        short = worker.recv()["result"]["seconds"]
        worker.send(duration_req(12, text + " " + text))
        assert worker.recv()["result"]["seconds"] > short

    def test_identity_scores_above_unrelated(self, worker):
        worker.send(qe_req(13, "the quick brown fox", "the quick brown fox"))
        same = worker.recv()["result"]["score"]
        worker.send(qe_req(14, "the quick brown fox", "quarterly fiscal report"))
        other = worker.recv()["result"]["score"]
        assert same > other
