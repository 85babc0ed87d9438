"""Actor-position detection: the claim sentence is scored as NLI premise
against the category phrase and against a negated variant of it; whichever
hypothesis is more entailed decides the polarity (+1 support, -1 opposition).
"""

from __future__ import annotations

import logging
import re
import time
from dataclasses import dataclass, field

import requests

from .categorize import Codebook
from .errors import ConfigError, ContractError, InputError, TransportError

logger = logging.getLogger(__name__)

_WORD_RE = re.compile(r"\w+", re.UNICODE)

NEGATION_WORDS = frozenset({"gegen", "nicht"})
NEGATION_PREFIXES = ("kein",)
NEGATION_BIGRAM = ("warnt", "vor")

_STOPWORDS = frozenset(
    """der die das den dem des ein eine einen einem einer eines und oder für
    von mit auf aus in im am an zu zur zum bei nach über unter vor ist sind
    sei war noch mehr alle aller allen dass sich es er sie wir ich""".split()
)


@dataclass
class NliScores:
    entailment: float
    neutral: float
    contradiction: float

    def validate(self) -> None:
        triple = (self.entailment, self.neutral, self.contradiction)
        if any(not (0.0 <= v <= 1.0) for v in triple):
            raise ContractError(f"NLI scores outside [0, 1]: {triple}")
        if abs(sum(triple) - 1.0) > 1e-6:
            raise ContractError(f"NLI scores do not sum to 1: {triple}")


@dataclass(frozen=True)
class HypothesisPair:
    positive: str
    negative: str

    def __post_init__(self):
        if self.positive == self.negative:
            raise ConfigError("positive and negative hypotheses must differ")


@dataclass
class StanceConfig:
    negation_template: str = "warnt vor {phrase}"
    overrides: dict[int, str] = field(default_factory=dict)
    scorer: str = "mock"  # "mock" | "remote"
    tie_polarity: int = 1
    endpoint: str | None = None
    retries: int = 3
    timeout: float = 30.0

    def validate(self) -> None:
        for template in [self.negation_template, *self.overrides.values()]:
            if template.count("{phrase}") != 1:
                raise ConfigError(
                    f"negation template must contain '{{phrase}}' exactly once: {template!r}"
                )
        if self.tie_polarity not in (1, -1):
            raise ConfigError("tie_polarity must be +1 or -1")
        if self.scorer not in ("mock", "remote"):
            raise ConfigError(f"unknown stance scorer: {self.scorer!r}")
        if self.scorer == "remote" and not self.endpoint:
            raise ConfigError("remote stance scorer requires an endpoint")


def build_hypotheses(code: int, codebook: Codebook, cfg: StanceConfig) -> HypothesisPair:
    """Positive hypothesis = category label; negative = negation template."""
    cfg.validate()
    if not codebook.knows(code):
        raise InputError(f"unknown category code {code}")
    if codebook.is_excluded(code):
        raise InputError(f"category code {code} is excluded")
    label = codebook.label(code)
    template = cfg.overrides.get(code, cfg.negation_template)
    return HypothesisPair(positive=label, negative=template.format(phrase=label))


# ---------------------------------------------------------------------------
# Mock NLI: entailment tracks content-token overlap, penalized when exactly
# one side carries a negation marker. Deterministic, offline.
# ---------------------------------------------------------------------------


def _tokens(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


def _has_negation(tokens: list[str]) -> bool:
    for i in range(len(tokens) - 1):
        if (tokens[i], tokens[i + 1]) == NEGATION_BIGRAM:
            return True
    return any(
        tok in NEGATION_WORDS or tok.startswith(NEGATION_PREFIXES) for tok in tokens
    )


def _content(tokens: list[str]) -> set[str]:
    content = set()
    skip_next = False
    for i, tok in enumerate(tokens):
        if skip_next:
            skip_next = False
            continue
        if i + 1 < len(tokens) and (tok, tokens[i + 1]) == NEGATION_BIGRAM:
            skip_next = True
            continue
        if tok in NEGATION_WORDS or tok.startswith(NEGATION_PREFIXES):
            continue
        if tok in _STOPWORDS:
            continue
        content.add(tok)
    return content


def mock_nli(premise: str, hypothesis: str) -> NliScores:
    """Deterministic offline NLI stand-in; scores always sum to exactly 1."""
    if not premise or not hypothesis:
        raise InputError("premise and hypothesis must be non-empty")
    if premise == hypothesis:
        return NliScores(entailment=0.95, neutral=0.0, contradiction=0.05)
    p_toks, h_toks = _tokens(premise), _tokens(hypothesis)
    p_content, h_content = _content(p_toks), _content(h_toks)
    coverage = len(h_content & p_content) / len(h_content) if h_content else 0.0
    mismatch = _has_negation(p_toks) != _has_negation(h_toks)
    entailment = 0.05 + 0.90 * coverage * (0.3 if mismatch else 1.0)
    contradiction = 0.05 + (0.50 * coverage if mismatch else 0.0)
    # clamp away the ~1e-16 float residue so the triple stays in [0, 1]
    neutral = max(0.0, 1.0 - entailment - contradiction)
    return NliScores(entailment=entailment, neutral=neutral, contradiction=contradiction)


class MockNliScorer:
    model_id = "mock-overlap-nli"

    def score(self, premise: str, hypothesis: str) -> NliScores:
        return mock_nli(premise, hypothesis)


class RemoteNliScorer:
    """Client for the model server's NLI endpoint."""

    model_id = "remote-nli"

    def __init__(
        self,
        endpoint: str,
        model: str | None = None,
        retries: int = 3,
        timeout: float = 30.0,
    ):
        self.endpoint = endpoint
        self.model = model
        self.retries = retries
        self.timeout = timeout

    def score_pairs(self, pairs: list[tuple[str, str]]) -> list[NliScores]:
        payload = {
            "pairs": [{"premise": p, "hypothesis": h} for p, h in pairs],
            "model": self.model,
        }
        last = None
        for attempt in range(self.retries):
            try:
                resp = requests.post(self.endpoint, json=payload, timeout=self.timeout)
                if resp.status_code >= 500:
                    raise requests.RequestException(f"server error {resp.status_code}")
                if resp.status_code != 200:
                    raise ContractError(f"NLI endpoint returned {resp.status_code}")
                raw = resp.json().get("scores")
                if not isinstance(raw, list) or len(raw) != len(pairs):
                    raise ContractError("NLI response score count != request pair count")
                return [
                    NliScores(
                        entailment=float(s["entailment"]),
                        neutral=float(s["neutral"]),
                        contradiction=float(s["contradiction"]),
                    )
                    for s in raw
                ]
            except requests.RequestException as exc:
                last = exc
                if attempt + 1 < self.retries:
                    time.sleep(0.2 * 2**attempt)
        raise TransportError(f"NLI endpoint unreachable after {self.retries} attempts: {last}")

    def score(self, premise: str, hypothesis: str) -> NliScores:
        return self.score_pairs([(premise, hypothesis)])[0]


def make_nli_scorer(cfg: StanceConfig):
    cfg.validate()
    if cfg.scorer == "mock":
        return MockNliScorer()
    return RemoteNliScorer(cfg.endpoint, retries=cfg.retries, timeout=cfg.timeout)


def classify_stance(
    sentence: str, pair: HypothesisPair, scorer, tie_polarity: int = 1
) -> tuple[int, float]:
    """Return (polarity, margin) where margin = entailment(positive) -
    entailment(negative). Only the ordering of the two entailment scores
    matters; exact ties fall back to tie_polarity and are logged."""
    pos_scores = scorer.score(sentence, pair.positive)
    neg_scores = scorer.score(sentence, pair.negative)
    pos_scores.validate()
    neg_scores.validate()
    margin = pos_scores.entailment - neg_scores.entailment
    if margin > 0:
        return 1, margin
    if margin < 0:
        return -1, margin
    logger.info("stance tie for sentence %r; defaulting to %+d", sentence[:60], tie_polarity)
    return tie_polarity, 0.0
