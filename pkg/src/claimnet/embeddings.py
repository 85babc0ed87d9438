"""Sentence embeddings behind a pluggable provider, with cosine math and a
persistent write-through cache.

Two providers exist: a deterministic offline mock (signed character-trigram
hashing) and a remote HTTP service speaking the model-server wire contract.
Vectors handed out by :class:`Embedder` are float32 -- the precision the cache
records store -- so cached and uncached runs are bit-identical.
"""

from __future__ import annotations

import hashlib
import struct
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import requests

from .errors import ConfigError, ContractError, InputError, TransportError

DEFAULT_DIM = 768
DEFAULT_MODEL_ID = "paraphrase-multilingual-mpnet-base-v2"
MOCK_MODEL_ID = "mock-trigram"


class UndefinedSimilarityError(InputError):
    """Cosine similarity is undefined for a zero vector."""


@dataclass
class EmbeddingConfig:
    provider: str = "mock"  # "mock" | "remote"
    model_id: str = DEFAULT_MODEL_ID
    dim: int = DEFAULT_DIM
    endpoint: str | None = None  # required iff provider == "remote"
    cache_path: str | Path | None = None
    batch_size: int = 64
    retries: int = 3
    timeout: float = 30.0

    def validate(self) -> None:
        if self.provider not in ("mock", "remote"):
            raise ConfigError(f"unknown embedding provider: {self.provider!r}")
        if self.dim <= 0:
            raise ConfigError("embedding dim must be positive")
        if self.provider == "remote" and not self.endpoint:
            raise ConfigError("remote embedding provider requires an endpoint")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")


def cosine(u, v) -> float:
    """Cosine similarity dot(u,v)/(|u|*|v|), computed in float64."""
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.shape != b.shape:
        raise InputError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise UndefinedSimilarityError("cosine undefined for zero vector")
    return float(np.dot(a, b) / (na * nb))


def _trigrams(text: str) -> list[str]:
    s = text.lower()
    if len(s) < 3:
        return [s]
    return [s[i : i + 3] for i in range(len(s) - 2)]


def mock_embed(text: str, dim: int = DEFAULT_DIM) -> np.ndarray:
    """Deterministic offline embedding: signed hashing of character trigrams.

    Lexically similar texts land geometrically close, which is enough to make
    similarity-based components behave meaningfully in tests. The result is a
    unit-norm float64 vector, identical across runs and platforms (hashing
    uses md5, not the randomized builtin hash).
    """
    if dim <= 0:
        raise InputError("dim must be positive")
    if len(text) == 0:
        raise InputError("cannot embed empty text")
    vec = np.zeros(dim, dtype=np.float64)
    for gram in _trigrams(text):
        digest = hashlib.md5(gram.encode("utf-8")).digest()
        bucket = int.from_bytes(digest[:8], "little") % dim
        sign = 1.0 if digest[8] % 2 == 0 else -1.0
        vec[bucket] += sign
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:  # signs cancelled exactly; fall back to a one-hot
        digest = hashlib.md5(text.lower().encode("utf-8")).digest()
        vec[int.from_bytes(digest[:8], "little") % dim] = 1.0
        norm = 1.0
    return vec / norm


# ---------------------------------------------------------------------------
# Cache: append-only record file of
#   (u16 model-id length, model-id utf-8, 32-byte sha256 of the text,
#    u32 dim, dim little-endian float32)
# A corrupt trailing record is truncated on open; earlier records survive.
# ---------------------------------------------------------------------------

_HASH_LEN = 32


def _text_hash(text: str) -> bytes:
    return hashlib.sha256(text.encode("utf-8")).digest()


class EmbeddingCache:
    """File-backed embedding cache keyed by (model_id, text hash).

    Writes are serialized by an in-process lock and appended as a single
    write() call each; reads of loaded entries are lock-free.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: dict[tuple[str, bytes], np.ndarray] = {}
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.touch()
            return
        data = self.path.read_bytes()
        pos = 0
        good = 0
        while pos < len(data):
            start = pos
            if pos + 2 > len(data):
                break
            (mlen,) = struct.unpack_from("<H", data, pos)
            pos += 2
            if pos + mlen + _HASH_LEN + 4 > len(data):
                pos = start
                break
            model_id = data[pos : pos + mlen].decode("utf-8")
            pos += mlen
            digest = data[pos : pos + _HASH_LEN]
            pos += _HASH_LEN
            (dim,) = struct.unpack_from("<I", data, pos)
            pos += 4
            if pos + 4 * dim > len(data):
                pos = start
                break
            vec = np.frombuffer(data, dtype="<f4", count=dim, offset=pos).copy()
            pos += 4 * dim
            self._entries[(model_id, digest)] = vec
            good = pos
        if pos != len(data) or good != len(data):
            with open(self.path, "r+b") as fh:  # drop the corrupt tail
                fh.truncate(good)

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, model_id: str, text: str) -> np.ndarray | None:
        vec = self._entries.get((model_id, _text_hash(text)))
        return None if vec is None else vec.copy()

    def put(self, model_id: str, text: str, vec: np.ndarray) -> None:
        digest = _text_hash(text)
        key = (model_id, digest)
        with self._lock:
            if key in self._entries:
                return
            stored = np.ascontiguousarray(vec, dtype="<f4")
            mid = model_id.encode("utf-8")
            record = (
                struct.pack("<H", len(mid))
                + mid
                + digest
                + struct.pack("<I", stored.size)
                + stored.tobytes()
            )
            with open(self.path, "ab") as fh:
                fh.write(record)
            self._entries[key] = stored


# ---------------------------------------------------------------------------
# Providers
# ---------------------------------------------------------------------------


class MockProvider:
    model_id = MOCK_MODEL_ID

    def __init__(self, dim: int):
        self.dim = dim

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        return [mock_embed(t, self.dim) for t in texts]


class RemoteProvider:
    """Client for the model server's embedding endpoint.

    Batches are chunk-split to the configured size; transport failures are
    retried with exponential backoff and never silently skipped.
    """

    def __init__(
        self,
        endpoint: str,
        model_id: str,
        batch_size: int = 64,
        retries: int = 3,
        timeout: float = 30.0,
    ):
        self.endpoint = endpoint
        self.model_id = model_id
        self.batch_size = batch_size
        self.retries = retries
        self.timeout = timeout

    def _post(self, payload: dict) -> dict:
        last: Exception | None = None
        for attempt in range(self.retries):
            try:
                resp = requests.post(self.endpoint, json=payload, timeout=self.timeout)
                if resp.status_code >= 500:
                    raise requests.RequestException(f"server error {resp.status_code}")
                if resp.status_code != 200:
                    raise ContractError(
                        f"embedding endpoint returned {resp.status_code}: {resp.text[:200]}"
                    )
                return resp.json()
            except requests.RequestException as exc:
                last = exc
                if attempt + 1 < self.retries:
                    time.sleep(0.2 * 2**attempt)
        raise TransportError(f"embedding endpoint unreachable after {self.retries} attempts: {last}")

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        out: list[np.ndarray] = []
        for i in range(0, len(texts), self.batch_size):
            chunk = texts[i : i + self.batch_size]
            body = self._post({"texts": chunk, "model": self.model_id})
            vectors = body.get("vectors")
            if not isinstance(vectors, list) or len(vectors) != len(chunk):
                raise ContractError("embedding response vector count != request text count")
            dim = body.get("dim")
            for v in vectors:
                if dim is not None and len(v) != dim:
                    raise ContractError("embedding response vector length != advertised dim")
                out.append(np.asarray(v, dtype=np.float64))
        return out


def _make_provider(cfg: EmbeddingConfig):
    if cfg.provider == "mock":
        return MockProvider(cfg.dim)
    return RemoteProvider(
        cfg.endpoint, cfg.model_id, cfg.batch_size, cfg.retries, cfg.timeout
    )


@dataclass
class Embedder:
    """Provider plus optional cache; the embedding entry point for pipelines."""

    cfg: EmbeddingConfig
    _provider: object = field(init=False, repr=False)
    _cache: EmbeddingCache | None = field(init=False, repr=False)

    def __post_init__(self):
        self.cfg.validate()
        self._provider = _make_provider(self.cfg)
        self._cache = (
            EmbeddingCache(self.cfg.cache_path) if self.cfg.cache_path else None
        )

    @property
    def model_id(self) -> str:
        return self._provider.model_id

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        """Embed texts in order; cache consulted first, misses written through.

        Returns float32 vectors of cfg.dim. Provider output of any other
        dimensionality is a contract error.
        """
        for t in texts:
            if not isinstance(t, str) or len(t) == 0:
                raise InputError("texts must be non-empty strings")
        results: list[np.ndarray | None] = [None] * len(texts)
        misses: list[int] = []
        for i, t in enumerate(texts):
            if self._cache is not None:
                hit = self._cache.get(self.model_id, t)
                if hit is not None:
                    results[i] = hit
                    continue
            misses.append(i)
        if misses:
            fresh = self._provider.embed_batch([texts[i] for i in misses])
            for i, raw in zip(misses, fresh):
                vec = np.asarray(raw, dtype=np.float32)
                if vec.ndim != 1 or vec.size != self.cfg.dim:
                    raise ContractError(
                        f"provider returned dim {vec.size}, configured {self.cfg.dim}"
                    )
                if not np.all(np.isfinite(vec)):
                    raise ContractError("provider returned non-finite values")
                if self._cache is not None:
                    self._cache.put(self.model_id, texts[i], vec)
                results[i] = vec
        return [r for r in results]  # type: ignore[misc]


def embed(texts: list[str], cfg: EmbeddingConfig) -> list[np.ndarray]:
    """One-shot convenience wrapper around :class:`Embedder`."""
    return Embedder(cfg).embed(texts)
