"""Shared fixtures: a tiny programmable HTTP server for remote-provider tests
and builders for parsed German sentence fixtures."""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from claimnet.ingest import EntitySpan, SentenceAnnotation, Token

SYNTHETIC_DIR = Path(__file__).parent / "data" / "synthetic"


@pytest.fixture
def fake_http_server():
    """Start a local HTTP server answering POSTs from a canned route map.

    Usage: url = fake_http_server({"/embed": {...}}, fail_first=2)
    The first ``fail_first`` requests return HTTP 500.
    """
    servers = []

    def _start(routes: dict, fail_first: int = 0) -> str:
        state = {"remaining_failures": fail_first}

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                self.rfile.read(int(self.headers.get("Content-Length", 0)))
                if state["remaining_failures"] > 0:
                    state["remaining_failures"] -= 1
                    self.send_response(500)
                    self.end_headers()
                    return
                body = routes.get(self.path)
                if body is None:
                    self.send_response(404)
                    self.end_headers()
                    return
                payload = json.dumps(body).encode("utf-8")
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(payload)))
                self.end_headers()
                self.wfile.write(payload)

            def log_message(self, *args):
                pass

        server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        servers.append(server)
        return f"http://127.0.0.1:{server.server_port}"

    yield _start
    for server in servers:
        server.shutdown()
        server.server_close()


# ---------------------------------------------------------------------------
# Parsed sentence fixtures
# ---------------------------------------------------------------------------


def make_sentence(index, rows, entities=(), char_span=(0, 0)):
    """rows: (surface, lemma, upos, head, deprel); entities: (first, last, label)."""
    tokens = [
        Token(index=i, surface=r[0], lemma=r[1], upos=r[2], head=r[3], deprel=r[4])
        for i, r in enumerate(rows, start=1)
    ]
    spans = [
        EntitySpan(
            first=f,
            last=l,
            label=label,
            surface=" ".join(t.surface for t in tokens[f - 1 : l]),
        )
        for f, l, label in entities
    ]
    return SentenceAnnotation(index=index, char_span=char_span, tokens=tokens, entities=spans)


@pytest.fixture
def inside_sentence():
    """'Merkel fordert den Ausstieg.' with PER subject of a cue verb."""
    return make_sentence(
        0,
        [
            ("Merkel", "Merkel", "PROPN", 2, "nsubj"),
            ("fordert", "fordern", "VERB", 0, "root"),
            ("den", "der", "DET", 4, "det"),
            ("Ausstieg", "Ausstieg", "NOUN", 2, "obj"),
            (".", ".", "PUNCT", 2, "punct"),
        ],
        entities=[(1, 1, "PER")],
    )


@pytest.fixture
def outside_sentence():
    """'Er sagte, das sei nötig.' with pronoun subject of a cue verb."""
    return make_sentence(
        0,
        [
            ("Er", "er", "PRON", 2, "nsubj"),
            ("sagte", "sagen", "VERB", 0, "root"),
            (",", ",", "PUNCT", 2, "punct"),
            ("das", "der", "PRON", 6, "nsubj"),
            ("sei", "sein", "AUX", 6, "cop"),
            ("nötig", "nötig", "ADJ", 2, "ccomp"),
            (".", ".", "PUNCT", 2, "punct"),
        ],
    )


@pytest.fixture
def plain_sentence():
    """'Das Kraftwerk läuft weiter.' with neither pattern."""
    return make_sentence(
        0,
        [
            ("Das", "der", "DET", 2, "det"),
            ("Kraftwerk", "Kraftwerk", "NOUN", 3, "nsubj"),
            ("läuft", "laufen", "VERB", 0, "root"),
            ("weiter", "weiter", "ADV", 3, "advmod"),
            (".", ".", "PUNCT", 3, "punct"),
        ],
    )


@pytest.fixture
def coordinated_sentence():
    """'Merkel und Röttgen fordern den Ausstieg.' -> two coordinated subjects."""
    return make_sentence(
        0,
        [
            ("Merkel", "Merkel", "PROPN", 4, "nsubj"),
            ("und", "und", "CCONJ", 3, "cc"),
            ("Röttgen", "Röttgen", "PROPN", 1, "conj"),
            ("fordern", "fordern", "VERB", 0, "root"),
            ("den", "der", "DET", 6, "det"),
            ("Ausstieg", "Ausstieg", "NOUN", 4, "obj"),
            (".", ".", "PUNCT", 4, "punct"),
        ],
        entities=[(1, 1, "PER"), (3, 3, "PER")],
    )
