"""Model backends.

Two families: ``hash`` backends are dependency-free deterministic stand-ins
(trigram-hash embeddings, token-overlap NLI, cue-verb claim scores) meant for
CI and offline development; ``real`` backends wrap pre-trained
sentence-transformer and NLI models. Loading a real backend can fail when the
libraries or weights are unavailable -- the registry records the failure and
the server reports 503 until a backend is ready.
"""

from __future__ import annotations

import hashlib
import math
import re

DEFAULT_EMBED_MODEL = "paraphrase-multilingual-mpnet-base-v2"
DEFAULT_NLI_MODEL = "MoritzLaurer/mDeBERTa-v3-base-mnli-xnli"
HASH_DIM = 768

_WORD_RE = re.compile(r"\w+", re.UNICODE)


class BackendUnavailable(RuntimeError):
    """A backend's libraries or weights could not be loaded."""


# ---------------------------------------------------------------------------
# Hash backends (deterministic, offline)
# ---------------------------------------------------------------------------


class HashEmbedBackend:
    """Signed character-trigram hashing into a fixed-dimension unit vector."""

    def __init__(self, dim: int = HASH_DIM):
        self.dim = dim
        self.model_id = f"hash-trigram-{dim}"

    def encode(self, texts: list[str]) -> list[list[float]]:
        return [self._one(t) for t in texts]

    def _one(self, text: str) -> list[float]:
        s = text.lower()
        grams = [s[i : i + 3] for i in range(len(s) - 2)] if len(s) >= 3 else [s]
        vec = [0.0] * self.dim
        for gram in grams:
            digest = hashlib.md5(gram.encode("utf-8")).digest()
            bucket = int.from_bytes(digest[:8], "little") % self.dim
            vec[bucket] += 1.0 if digest[8] % 2 == 0 else -1.0
        norm = math.sqrt(sum(x * x for x in vec))
        if norm == 0.0:
            digest = hashlib.md5(s.encode("utf-8")).digest()
            vec[int.from_bytes(digest[:8], "little") % self.dim] = 1.0
            norm = 1.0
        return [x / norm for x in vec]


_NEGATION_WORDS = {"gegen", "nicht"}
_STOPWORDS = {
    "der", "die", "das", "den", "dem", "des", "ein", "eine", "einen", "einem",
    "einer", "und", "oder", "für", "von", "mit", "auf", "aus", "in", "im",
    "an", "zu", "bei", "ist", "sind", "sei", "alle", "einer",
}


def _tokens(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


def _negated(tokens: list[str]) -> bool:
    for i in range(len(tokens) - 1):
        if tokens[i] == "warnt" and tokens[i + 1] == "vor":
            return True
    return any(t in _NEGATION_WORDS or t.startswith("kein") for t in tokens)


class HashNliBackend:
    """Entailment tracks hypothesis-token coverage; a one-sided negation
    marker both damps entailment and boosts contradiction."""

    model_id = "hash-overlap-nli"

    def score_pairs(self, pairs: list[tuple[str, str]]) -> list[tuple[float, float, float]]:
        return [self._one(p, h) for p, h in pairs]

    def _one(self, premise: str, hypothesis: str) -> tuple[float, float, float]:
        p_toks, h_toks = _tokens(premise), _tokens(hypothesis)
        p_content = {t for t in p_toks if t not in _STOPWORDS and not _negated([t])}
        h_content = {t for t in h_toks if t not in _STOPWORDS and not _negated([t])}
        coverage = len(h_content & p_content) / len(h_content) if h_content else 0.0
        mismatch = _negated(p_toks) != _negated(h_toks)
        entailment = 0.06 + 0.88 * coverage * (0.3 if mismatch else 1.0)
        if mismatch:
            entailment = max(0.01, entailment - 0.04)
        contradiction = 0.05 + (0.5 * coverage if mismatch else 0.0)
        neutral = max(0.0, 1.0 - entailment - contradiction)
        total = entailment + neutral + contradiction
        return entailment / total, neutral / total, contradiction / total


_CUE_STEMS = ("forder", "verlang", "plädier", "kritisier", "warn", "kündig",
              "woll", "will", "sag", "beton", "erklär")


class CueClaimBackend:
    """Claim likelihood from the presence of claim-verb stems."""

    model_id = "hash-cue-claims"

    def score(self, texts: list[str]) -> list[float]:
        out = []
        for text in texts:
            toks = _tokens(text)
            hit = any(t.startswith(stem) for t in toks for stem in _CUE_STEMS)
            out.append(0.9 if hit else 0.02)
        return out


# ---------------------------------------------------------------------------
# Real backends (optional heavy dependencies)
# ---------------------------------------------------------------------------


class SbertEmbedBackend:
    def __init__(self, model_name: str = DEFAULT_EMBED_MODEL):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise BackendUnavailable(f"sentence-transformers not installed: {exc}") from exc
        try:
            self._model = SentenceTransformer(model_name)
        except Exception as exc:  # weights unavailable, offline, etc.
            raise BackendUnavailable(f"could not load {model_name!r}: {exc}") from exc
        self.model_id = model_name
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def encode(self, texts: list[str]) -> list[list[float]]:
        vectors = self._model.encode(texts, convert_to_numpy=True, show_progress_bar=False)
        return [[float(x) for x in row] for row in vectors]


class TransformersNliBackend:
    _LABEL_MAP = {"entailment": 0, "neutral": 1, "contradiction": 2}

    def __init__(self, model_name: str = DEFAULT_NLI_MODEL):
        try:
            import torch  # noqa: F401
            from transformers import AutoModelForSequenceClassification, AutoTokenizer
        except ImportError as exc:
            raise BackendUnavailable(f"transformers/torch not installed: {exc}") from exc
        try:
            self._tokenizer = AutoTokenizer.from_pretrained(model_name)
            self._model = AutoModelForSequenceClassification.from_pretrained(model_name)
            self._model.eval()
        except Exception as exc:
            raise BackendUnavailable(f"could not load {model_name!r}: {exc}") from exc
        self.model_id = model_name

    def score_pairs(self, pairs: list[tuple[str, str]]) -> list[tuple[float, float, float]]:
        import torch

        label_order = self._label_order()
        out = []
        with torch.no_grad():
            for premise, hypothesis in pairs:
                inputs = self._tokenizer(premise, hypothesis, truncation=True,
                                         return_tensors="pt")
                probs = torch.softmax(self._model(**inputs).logits[0], dim=-1).tolist()
                triple = [0.0, 0.0, 0.0]
                for idx, value in enumerate(probs):
                    triple[label_order[idx]] = float(value)
                total = sum(triple)
                out.append(tuple(v / total for v in triple))
        return out

    def _label_order(self) -> dict[int, int]:
        id2label = getattr(self._model.config, "id2label", {})
        order = {}
        for idx, label in id2label.items():
            order[int(idx)] = self._LABEL_MAP.get(str(label).lower(), 1)
        return order or {0: 0, 1: 1, 2: 2}
