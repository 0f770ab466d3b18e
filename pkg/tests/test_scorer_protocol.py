"""External scorer client: framing, matching, failure handling."""
import json
import math
import pathlib
import socket
import socketserver
import sys
import threading
from concurrent.futures import ThreadPoolExecutor

import pytest

from oracleforge.candidates import GlobalConstantTable, create_candidate_templates
from oracleforge.datasets import strip_implementation
from oracleforge.errors import ScorerUnavailable
from oracleforge.oracles import strip_oracles
from oracleforge.ranking import ExternalScorer
from oracleforge.ranking.wire import ScoreRequest, check_score
from oracleforge.testlang import parse_test_method

STUB = pathlib.Path(__file__).parent / "stub_scorer.py"


def stub_endpoint(mode):
    return f"cmd:{sys.executable} {STUB} {mode}"


def prefix_of(source):
    return strip_oracles(parse_test_method("public void t() { " + source + " }")).prefix


CTX = strip_implementation("public int itemCount()", "counts", class_name="Widget")
PREFIX = prefix_of("Widget w = new Widget(); int int0 = w.itemCount();")


BOOL_PREFIX = prefix_of("Gate g = new Gate(); boolean bool0 = g.isOpen();")


def first_entry():
    cs = create_candidate_templates(GlobalConstantTable(8), 8, BOOL_PREFIX)
    return cs.entries[0]


class TestCheckScore:
    @pytest.mark.parametrize("value,expected", [(0, 0.0), (1, 1.0), (0.5, 0.5)])
    def test_accepts_numbers(self, value, expected):
        assert check_score(value) == expected

    @pytest.mark.parametrize("value", [True, False, "0.5", None, [0.5], {}])
    def test_rejects_non_numbers(self, value):
        with pytest.raises(ScorerUnavailable, match="not a number"):
            check_score(value)

    @pytest.mark.parametrize("value", [-0.0001, 1.0001, math.nan])
    def test_rejects_out_of_range(self, value):
        with pytest.raises(ScorerUnavailable, match="out of range"):
            check_score(value)

    def test_infinity_rejected(self):
        with pytest.raises(ScorerUnavailable):
            check_score(math.inf)


class TestFrameShape:
    def test_exception_frame(self):
        frame = ScoreRequest("exception", "int a = 1;", "public int f()", "doc").to_frame(7)
        assert frame == {
            "id": 7,
            "v": 1,
            "task": "exception",
            "prefix": "int a = 1;",
            "signature": "public int f()",
            "docstring": "doc",
        }

    def test_assertion_frame_carries_candidate(self):
        frame = ScoreRequest(
            "assertion", "p", "s", "d", "assertEquals(0, int0)"
        ).to_frame(1)
        assert frame["candidate"] == "assertEquals(0, int0)"

    def test_assertion_frame_without_candidate_sends_empty(self):
        assert ScoreRequest("assertion", "p", "s", "d").to_frame(1)["candidate"] == ""

    def test_frames_are_single_json_lines(self):
        text = json.dumps(ScoreRequest("exception", "a\nb", "s", "d").to_frame(1))
        assert "\n" not in text


class TestSubprocessScorer:
    def test_scores_round_trip(self):
        with ExternalScorer(stub_endpoint("echo"), timeout=10) as scorer:
            assert scorer.score_exception(PREFIX, CTX) == 0.25
            assert scorer.score_assertion(PREFIX, CTX, first_entry()) == 0.75

    def test_unknown_response_fields_ignored(self):
        # echo mode sends a "debug" field alongside the score
        with ExternalScorer(stub_endpoint("echo"), timeout=10) as scorer:
            assert scorer.score_exception(PREFIX, CTX) == 0.25

    def test_out_of_order_responses_match_by_id(self):
        with ExternalScorer(stub_endpoint("reverse-pair"), timeout=10) as scorer:
            with ThreadPoolExecutor(2) as pool:
                exc_future = pool.submit(scorer.score_exception, PREFIX, CTX)
                asrt_future = pool.submit(
                    scorer.score_assertion, PREFIX, CTX, first_entry()
                )
                assert exc_future.result(timeout=10) == 0.11
                assert asrt_future.result(timeout=10) == 0.22

    def test_error_frame_raises(self):
        with ExternalScorer(stub_endpoint("error"), timeout=10) as scorer:
            with pytest.raises(ScorerUnavailable, match="scorer error: boom"):
                scorer.score_exception(PREFIX, CTX)

    def test_out_of_range_score_raises(self):
        with ExternalScorer(stub_endpoint("bad-score"), timeout=10) as scorer:
            with pytest.raises(ScorerUnavailable, match="out of range"):
                scorer.score_exception(PREFIX, CTX)

    def test_non_numeric_score_raises(self):
        with ExternalScorer(stub_endpoint("string-score"), timeout=10) as scorer:
            with pytest.raises(ScorerUnavailable, match="not a number"):
                scorer.score_exception(PREFIX, CTX)

    def test_bool_score_raises(self):
        with ExternalScorer(stub_endpoint("bool-score"), timeout=10) as scorer:
            with pytest.raises(ScorerUnavailable, match="not a number"):
                scorer.score_exception(PREFIX, CTX)

    def test_noise_on_stream_skipped(self):
        with ExternalScorer(stub_endpoint("noise"), timeout=10) as scorer:
            assert scorer.score_exception(PREFIX, CTX) == 0.5

    def test_timeout(self):
        with ExternalScorer(stub_endpoint("silent"), timeout=0.3) as scorer:
            with pytest.raises(ScorerUnavailable, match="timeout"):
                scorer.score_exception(PREFIX, CTX)

    def test_stream_end_fails_pending(self):
        with ExternalScorer(stub_endpoint("die"), timeout=10) as scorer:
            with pytest.raises(ScorerUnavailable, match="stream ended"):
                scorer.score_exception(PREFIX, CTX)

    def test_request_after_close_rejected(self):
        scorer = ExternalScorer(stub_endpoint("echo"), timeout=10)
        scorer.close()
        with pytest.raises(ScorerUnavailable, match="closed"):
            scorer.score_exception(PREFIX, CTX)

    def test_close_reaps_subprocess(self):
        scorer = ExternalScorer(stub_endpoint("echo"), timeout=10)
        scorer.score_exception(PREFIX, CTX)
        scorer.close()
        assert scorer._process is not None
        assert scorer._process.poll() is not None


class _EchoHandler(socketserver.StreamRequestHandler):
    def handle(self):
        for raw in self.rfile:
            line = raw.decode("utf-8").strip()
            if not line:
                continue
            frame = json.loads(line)
            score = 0.25 if frame.get("task") == "exception" else 0.75
            reply = json.dumps({"id": frame["id"], "score": score}) + "\n"
            self.wfile.write(reply.encode("utf-8"))
            self.wfile.flush()


class _ScorerServer(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True


@pytest.fixture()
def tcp_scorer_port():
    server = _ScorerServer(("127.0.0.1", 0), _EchoHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield server.server_address[1]
    finally:
        server.shutdown()
        server.server_close()


class TestTcpScorer:
    def test_scores_over_tcp(self, tcp_scorer_port):
        with ExternalScorer(f"tcp:127.0.0.1:{tcp_scorer_port}", timeout=10) as scorer:
            assert scorer.score_exception(PREFIX, CTX) == 0.25
            assert scorer.score_assertion(PREFIX, CTX, first_entry()) == 0.75

    def test_connection_refused(self):
        probe = socket.socket()
        probe.bind(("127.0.0.1", 0))
        free_port = probe.getsockname()[1]
        probe.close()
        with pytest.raises(ScorerUnavailable, match="cannot connect"):
            ExternalScorer(f"tcp:127.0.0.1:{free_port}", timeout=2)

    def test_malformed_tcp_endpoint(self):
        with pytest.raises(ScorerUnavailable, match="bad tcp endpoint"):
            ExternalScorer("tcp:9999")


class TestEndpointValidation:
    def test_unknown_scheme(self):
        with pytest.raises(ScorerUnavailable, match="unknown scorer endpoint"):
            ExternalScorer("http://scorer")

    def test_empty_command(self):
        with pytest.raises(ScorerUnavailable, match="empty scorer command"):
            ExternalScorer("cmd:   ")

    def test_missing_binary(self):
        with pytest.raises(ScorerUnavailable, match="cannot start"):
            ExternalScorer("cmd:/no/such/binary-anywhere")

    def test_bad_timeout(self):
        with pytest.raises(ValueError):
            ExternalScorer(stub_endpoint("echo"), timeout=0)

    def test_bad_max_in_flight(self):
        with pytest.raises(ValueError):
            ExternalScorer(stub_endpoint("echo"), max_in_flight=0)
