"""Claim-sentence scoring: logistic head over sentence embeddings, plus mock
and remote scorer variants, candidate thresholding, and implicit article
selection (documents are relevant iff they contain at least one candidate).
"""

from __future__ import annotations

import datetime as dt
import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import requests

from .errors import ConfigError, ContractError, InputError, TransportError

_WORD_RE = re.compile(r"\w+", re.UNICODE)

# Stems of verbs that typically carry a political claim (demand, plead,
# warn, announce, say, ...). Used only by the offline mock scorer.
CUE_STEMS = (
    "forder",
    "verlang",
    "plädier",
    "kritisier",
    "warn",
    "kündig",
    "woll",
    "will",
    "sag",
    "beton",
    "erklär",
)

MOCK_CLAIM_SCORE = 0.9
MOCK_NONCLAIM_SCORE = 0.02


@dataclass
class ClaimScore:
    doc_id: str
    sentence_index: int
    score: float
    text: str | None = None  # carried along when known


@dataclass
class ClaimCandidate:
    doc_id: str
    sentence_index: int
    score: float
    text: str | None = None


@dataclass
class ClaimDetectorConfig:
    threshold: float = 0.1
    scorer: str = "mock"  # "mock" | "linear_head" | "remote"
    head_path: str | Path | None = None
    endpoint: str | None = None
    retries: int = 3
    timeout: float = 30.0

    def validate(self) -> None:
        if not (0.0 <= self.threshold <= 1.0):
            raise ConfigError("claim threshold must be in [0, 1]")
        if self.scorer not in ("mock", "linear_head", "remote"):
            raise ConfigError(f"unknown claim scorer: {self.scorer!r}")
        if self.scorer == "remote" and not self.endpoint:
            raise ConfigError("remote claim scorer requires an endpoint")
        if self.scorer == "linear_head" and not self.head_path:
            raise ConfigError("linear_head scorer requires head_path")


@dataclass
class LinearHead:
    weights: np.ndarray
    bias: float

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if not (np.all(np.isfinite(self.weights)) and math.isfinite(self.bias)):
            raise InputError("head parameters must be finite")


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def score_sentence(embedding, head: LinearHead) -> float:
    """logistic(w . e + b) in [0, 1]."""
    e = np.asarray(embedding, dtype=np.float64)
    if e.shape != head.weights.shape:
        raise ContractError(f"embedding dim {e.shape} != head dim {head.weights.shape}")
    return _sigmoid(float(np.dot(head.weights, e)) + head.bias)


# ---------------------------------------------------------------------------
# Training: logistic regression by full-batch gradient descent, zero init.
# Deterministic: no RNG, fixed iteration order.
# ---------------------------------------------------------------------------


def _as_matrix(labeled) -> tuple[np.ndarray, np.ndarray]:
    if len(labeled) == 0:
        raise InputError("training set is empty")
    X = np.asarray([np.asarray(e, dtype=np.float64) for e, _ in labeled])
    y = np.asarray([float(label) for _, label in labeled])
    if not set(np.unique(y)) == {0.0, 1.0}:
        raise InputError("training set must contain both labels 0 and 1")
    return X, y


def cross_entropy(head: LinearHead, X: np.ndarray, y: np.ndarray) -> float:
    """Mean cross-entropy via the softplus form: mean(softplus(z) - y*z)."""
    z = X @ head.weights + head.bias
    softplus = np.where(z > 0, z + np.log1p(np.exp(-z)), np.log1p(np.exp(z)))
    return float(np.mean(softplus - y * z))


def cross_entropy_grad(head: LinearHead, X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
    """Analytic gradient of :func:`cross_entropy` w.r.t. (weights, bias)."""
    z = X @ head.weights + head.bias
    p = np.where(z >= 0, 1.0 / (1.0 + np.exp(-z)), np.exp(z) / (1.0 + np.exp(z)))
    resid = p - y
    return (X.T @ resid) / len(y), float(np.mean(resid))


def train_head(labeled, epochs: int = 500, learning_rate: float = 1.0) -> LinearHead:
    """Fit a logistic head on (embedding, label) pairs.

    Requires at least one example of each label. Zero initialization and a
    fixed iteration order make the result reproducible.
    """
    X, y = _as_matrix(labeled)
    head = LinearHead(weights=np.zeros(X.shape[1]), bias=0.0)
    for _ in range(epochs):
        gw, gb = cross_entropy_grad(head, X, y)
        head.weights = head.weights - learning_rate * gw
        head.bias = head.bias - learning_rate * gb
    return head


def save_head(head: LinearHead, path: str | Path, trained_on: int = 0) -> None:
    payload = {
        "dim": int(head.weights.size),
        "weights": [float(w) for w in head.weights],
        "bias": float(head.bias),
        "trained_on": trained_on,
        "created_at": dt.datetime.now(dt.timezone.utc).isoformat(),
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_head(path: str | Path) -> LinearHead:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    weights = np.asarray(payload["weights"], dtype=np.float64)
    if weights.size != payload["dim"]:
        raise InputError(f"{path}: weight count != declared dim")
    return LinearHead(weights=weights, bias=float(payload["bias"]))


# ---------------------------------------------------------------------------
# Candidate selection
# ---------------------------------------------------------------------------


def filter_candidates(scores: list[ClaimScore], threshold: float) -> list[ClaimCandidate]:
    """Keep scores >= threshold (inclusive, to favour recall); order preserved."""
    return [
        ClaimCandidate(s.doc_id, s.sentence_index, s.score, s.text)
        for s in scores
        if s.score >= threshold
    ]


def implicit_article_selection(candidates: list[ClaimCandidate]) -> set[str]:
    """Documents containing at least one candidate."""
    return {c.doc_id for c in candidates}


# ---------------------------------------------------------------------------
# Scorers
# ---------------------------------------------------------------------------


class MockClaimScorer:
    """Deterministic text heuristic: a sentence scores high iff it contains a
    token starting with a claim-verb stem."""

    def score_texts(self, texts: list[str]) -> list[float]:
        out = []
        for text in texts:
            toks = _WORD_RE.findall(text.lower())
            hit = any(tok.startswith(stem) for tok in toks for stem in CUE_STEMS)
            out.append(MOCK_CLAIM_SCORE if hit else MOCK_NONCLAIM_SCORE)
        return out


class LinearHeadScorer:
    def __init__(self, embedder, head: LinearHead):
        self.embedder = embedder
        self.head = head

    def score_texts(self, texts: list[str]) -> list[float]:
        return [score_sentence(e, self.head) for e in self.embedder.embed(texts)]


class RemoteClaimScorer:
    def __init__(self, endpoint: str, retries: int = 3, timeout: float = 30.0):
        self.endpoint = endpoint
        self.retries = retries
        self.timeout = timeout

    def score_texts(self, texts: list[str]) -> list[float]:
        import time

        last = None
        for attempt in range(self.retries):
            try:
                resp = requests.post(self.endpoint, json={"texts": texts}, timeout=self.timeout)
                if resp.status_code >= 500:
                    raise requests.RequestException(f"server error {resp.status_code}")
                if resp.status_code != 200:
                    raise ContractError(f"claim endpoint returned {resp.status_code}")
                scores = resp.json().get("scores")
                if not isinstance(scores, list) or len(scores) != len(texts):
                    raise ContractError("claim response score count != request text count")
                if any(not (0.0 <= s <= 1.0) for s in scores):
                    raise ContractError("claim score outside [0, 1]")
                return [float(s) for s in scores]
            except requests.RequestException as exc:
                last = exc
                if attempt + 1 < self.retries:
                    time.sleep(0.2 * 2**attempt)
        raise TransportError(f"claim endpoint unreachable after {self.retries} attempts: {last}")


def make_claim_scorer(cfg: ClaimDetectorConfig, embedder=None):
    cfg.validate()
    if cfg.scorer == "mock":
        return MockClaimScorer()
    if cfg.scorer == "remote":
        return RemoteClaimScorer(cfg.endpoint, cfg.retries, cfg.timeout)
    if embedder is None:
        raise ConfigError("linear_head scorer requires an embedder")
    return LinearHeadScorer(embedder, load_head(cfg.head_path))
