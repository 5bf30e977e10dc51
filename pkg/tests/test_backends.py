import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from bookqa.backends import (BackendConfig, BagOfStemsEmbedder,
                             HttpAnswerBackend, HttpEmbedder,
                             LexicalMockBackend, SpanAnswer, check_health,
                             lexical_mock_answer)
from bookqa.errors import (BackendTimeout, DimensionMismatch, EmptyContext,
                           HttpError, SchemaError, SpanOutOfBounds)


class TestLexicalMock:
    def test_partial_overlap_score(self):
        context = "Layers between the input layer and output layers."
        got = lexical_mock_answer("What is a hidden layer?", context)
        # only "layer" of {hidden, layer} matches: score 1/2
        assert got.score == pytest.approx(0.5)
        assert got.text == "Layers between the input layer and output layers"
        assert context[got.start:got.end] == got.text
        assert got.model_id == "lexical-mock"

    def test_full_overlap_wins_with_score_one(self):
        context = "Nothing relevant here. Sugar affects the insulin response."
        got = lexical_mock_answer("How does sugar affect insulin?", context)
        assert got.text == "Sugar affects the insulin response"
        assert got.score == pytest.approx(1.0)

    def test_no_overlap_returns_first_sentence_zero(self):
        got = lexical_mock_answer("What about quasars?", "Alpha beta. Gamma delta.")
        assert got.text == "Alpha beta"
        assert got.score == 0.0

    def test_tie_goes_to_earliest(self):
        context = "Sugar is here. Sugar is there."
        got = lexical_mock_answer("sugar?", context)
        assert got.start == 0

    def test_empty_context_rejected(self):
        with pytest.raises(EmptyContext):
            lexical_mock_answer("q", "")

    def test_pure_function(self):
        args = ("What is the sugar effect?",
                "Sugar raises insulin. Insulin stores fat.")
        assert lexical_mock_answer(*args) == lexical_mock_answer(*args)

    def test_adding_full_match_sentence_makes_it_win(self):
        base = "Totally unrelated filler. Another filler sentence."
        question = "Why does strength training build muscle?"
        augmented = base + " Strength training builds muscle by overload."
        got = lexical_mock_answer(question, augmented)
        assert got.text == "Strength training builds muscle by overload"
        assert got.score == pytest.approx(1.0)

    def test_backend_wrapper_delay_and_determinism(self):
        fast = LexicalMockBackend()
        slow = LexicalMockBackend(delay_s=0.0)
        q, ctx = "sugar?", "Sugar is sweet. Fat is not."
        assert fast.answer(q, ctx) == slow.answer(q, ctx)


class _ShimHandler(BaseHTTPRequestHandler):
    """Canned-response HTTP server for client tests."""

    responses = {}

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length) or b"{}")
        status, payload = self.responses.get(self.path, (404, {"error": "nope"}))
        if callable(payload):
            payload = payload(body)
        data = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def do_GET(self):
        self.do_POST()

    def log_message(self, *args):
        pass


@pytest.fixture()
def shim_server():
    server = HTTPServer(("127.0.0.1", 0), _ShimHandler)
    thread = threading.Thread(target=lambda: server.serve_forever(poll_interval=0.05),
                              daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}", _ShimHandler
    server.shutdown()


class TestHttpAnswer:
    def test_protocol_echo(self, shim_server):
        url, handler = shim_server
        handler.responses = {"/v1/answer": (200, {
            "answer": "x", "score": 0.9, "start": 5, "end": 6, "model_id": "m"})}
        backend = HttpAnswerBackend(BackendConfig(endpoint=url))
        got = backend.answer("q?", "abcd x")
        assert got == SpanAnswer("x", 0.9, 5, 6, "m")

    def test_non_2xx(self, shim_server):
        url, handler = shim_server
        handler.responses = {"/v1/answer": (500, {"error": "exploded"})}
        backend = HttpAnswerBackend(BackendConfig(endpoint=url))
        with pytest.raises(HttpError) as exc_info:
            backend.answer("q?", "abcd x")
        assert exc_info.value.status == 500

    def test_span_out_of_bounds(self, shim_server):
        url, handler = shim_server
        handler.responses = {"/v1/answer": (200, {
            "answer": "x", "score": 0.5, "start": 5, "end": 99, "model_id": "m"})}
        backend = HttpAnswerBackend(BackendConfig(endpoint=url))
        with pytest.raises(SpanOutOfBounds):
            backend.answer("q?", "abcd x")

    def test_text_offset_mismatch(self, shim_server):
        url, handler = shim_server
        handler.responses = {"/v1/answer": (200, {
            "answer": "zz", "score": 0.5, "start": 0, "end": 2, "model_id": "m"})}
        backend = HttpAnswerBackend(BackendConfig(endpoint=url))
        with pytest.raises(SpanOutOfBounds):
            backend.answer("q?", "abcd x")

    def test_missing_field(self, shim_server):
        url, handler = shim_server
        handler.responses = {"/v1/answer": (200, {"answer": "x", "score": 0.5})}
        backend = HttpAnswerBackend(BackendConfig(endpoint=url))
        with pytest.raises(SchemaError):
            backend.answer("q?", "abcd x")

    def test_score_clamped_with_warning(self, shim_server, caplog):
        url, handler = shim_server
        handler.responses = {"/v1/answer": (200, {
            "answer": "x", "score": 3.7, "start": 5, "end": 6, "model_id": "m"})}
        backend = HttpAnswerBackend(BackendConfig(endpoint=url))
        with caplog.at_level("WARNING"):
            got = backend.answer("q?", "abcd x")
        assert got.score == 1.0
        assert any("clamping" in r.message for r in caplog.records)

    def test_oversized_context_rejected_client_side(self, shim_server):
        url, _ = shim_server
        backend = HttpAnswerBackend(BackendConfig(endpoint=url, max_context_chars=8))
        with pytest.raises(ValueError):
            backend.answer("q?", "x" * 9)

    def test_timeout(self):
        # unroutable address per RFC 5737
        backend = HttpAnswerBackend(BackendConfig(endpoint="http://192.0.2.1:9",
                                                  timeout_s=0.2))
        with pytest.raises((BackendTimeout, HttpError)):
            backend.answer("q?", "abcd x")

    def test_no_retry_by_default(self, shim_server):
        url, handler = shim_server
        hits = []

        def payload(body):
            hits.append(body)
            return {"error": "exploded"}

        handler.responses = {"/v1/answer": (500, payload)}
        backend = HttpAnswerBackend(BackendConfig(endpoint=url))
        with pytest.raises(HttpError):
            backend.answer("q?", "abcd x")
        assert len(hits) == 1


class TestBagOfStemsEmbedder:
    def test_determinism(self):
        provider = BagOfStemsEmbedder()
        v1, v2 = provider.embed(["x", "x"])
        assert v1 == v2

    def test_dimension(self):
        provider = BagOfStemsEmbedder()
        assert all(len(v) == 256 for v in provider.embed(["a", "b c", ""]))

    def test_stems_share_components(self):
        provider = BagOfStemsEmbedder()
        v1, v2 = provider.embed(["losses", "loss"])
        assert v1 == v2


class TestHttpEmbed:
    def test_echo(self, shim_server):
        url, handler = shim_server
        handler.responses = {"/v1/embed": (200, {"embeddings": [[1.0, 0.0]]})}
        provider = HttpEmbedder(BackendConfig(endpoint=url))
        assert provider.embed(["one"]) == [[1.0, 0.0]]

    def test_ragged_rejected(self, shim_server):
        url, handler = shim_server
        handler.responses = {"/v1/embed": (200, {"embeddings": [[1.0], [1.0, 2.0]]})}
        provider = HttpEmbedder(BackendConfig(endpoint=url))
        with pytest.raises(DimensionMismatch):
            provider.embed(["a", "b"])

    def test_single_request_per_batch(self, shim_server):
        url, handler = shim_server
        calls = []

        def payload(body):
            calls.append(body)
            return {"embeddings": [[1.0]] * len(body["texts"])}

        handler.responses = {"/v1/embed": (200, payload)}
        provider = HttpEmbedder(BackendConfig(endpoint=url))
        provider.embed(["a", "b", "c"])
        assert len(calls) == 1
        assert calls[0] == {"texts": ["a", "b", "c"]}

    def test_count_mismatch_rejected(self, shim_server):
        url, handler = shim_server
        handler.responses = {"/v1/embed": (200, {"embeddings": [[1.0]]})}
        provider = HttpEmbedder(BackendConfig(endpoint=url))
        with pytest.raises(SchemaError):
            provider.embed(["a", "b"])


class TestHealth:
    def test_healthz(self, shim_server):
        url, handler = shim_server
        handler.responses = {"/healthz": (200, {"status": "ok", "model_id": "m"})}
        assert check_health(url) == {"status": "ok", "model_id": "m"}


class TestSpanAnswerInvariants:
    def test_empty_text_requires_zero_score(self):
        with pytest.raises(SpanOutOfBounds):
            SpanAnswer("", 0.5, 0, 0, "m").validate("ctx")

    def test_valid_span(self):
        ctx = "hello world"
        SpanAnswer("world", 0.3, 6, 11, "m").validate(ctx)
