"""FastAPI application exposing /embed, /nli, /claim-score, and /health.

Contract: response array lengths always equal request array lengths; the
embedding dimension is constant per model per process; NLI score triples sum
to 1 within 1e-6. Bad requests (empty batch, over the batch limit, malformed
body) return 400; endpoints return 503 until their backend is loaded.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .backends import (
    DEFAULT_EMBED_MODEL,
    DEFAULT_NLI_MODEL,
    BackendUnavailable,
    CueClaimBackend,
    HashEmbedBackend,
    HashNliBackend,
    SbertEmbedBackend,
    TransformersNliBackend,
)

logger = logging.getLogger(__name__)

DEFAULT_BATCH_LIMIT = 64


@dataclass
class ServerConfig:
    backend: str = "hash"  # "hash" | "real"
    embed_model: str = DEFAULT_EMBED_MODEL
    nli_model: str = DEFAULT_NLI_MODEL
    batch_limit: int = DEFAULT_BATCH_LIMIT

    @classmethod
    def from_env(cls) -> "ServerConfig":
        return cls(
            backend=os.environ.get("MODEL_SERVER_BACKEND", "hash"),
            embed_model=os.environ.get("MODEL_SERVER_EMBED_MODEL", DEFAULT_EMBED_MODEL),
            nli_model=os.environ.get("MODEL_SERVER_NLI_MODEL", DEFAULT_NLI_MODEL),
            batch_limit=int(os.environ.get("MODEL_SERVER_BATCH_LIMIT", DEFAULT_BATCH_LIMIT)),
        )


@dataclass
class ModelRegistry:
    """Holds loaded backends; empty until load() succeeds."""

    embedder: object | None = None
    nli: object | None = None
    claims: object | None = None
    errors: list[str] = field(default_factory=list)

    def load(self, cfg: ServerConfig) -> None:
        if cfg.backend == "hash":
            self.embedder = HashEmbedBackend()
            self.nli = HashNliBackend()
            self.claims = CueClaimBackend()
            return
        for attr, loader in (
            ("embedder", lambda: SbertEmbedBackend(cfg.embed_model)),
            ("nli", lambda: TransformersNliBackend(cfg.nli_model)),
        ):
            try:
                setattr(self, attr, loader())
            except BackendUnavailable as exc:
                logger.warning("backend %s unavailable: %s", attr, exc)
                self.errors.append(str(exc))
        self.claims = CueClaimBackend()

    @property
    def ready(self) -> bool:
        return self.embedder is not None and self.nli is not None

    def model_ids(self) -> list[str]:
        return [
            b.model_id
            for b in (self.embedder, self.nli, self.claims)
            if b is not None
        ]


class EmbedRequest(BaseModel):
    texts: list[str]
    model: str | None = None


class NliPair(BaseModel):
    premise: str
    hypothesis: str


class NliRequest(BaseModel):
    pairs: list[NliPair]
    model: str | None = None


class ClaimScoreRequest(BaseModel):
    texts: list[str]


def _bad_request(detail: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": detail})


def _unavailable(detail: str) -> JSONResponse:
    return JSONResponse(status_code=503, content={"detail": detail})


def create_app(cfg: ServerConfig | None = None, registry: ModelRegistry | None = None) -> FastAPI:
    """Build the application; pass an unloaded registry to model the loading
    state, or none to load backends eagerly from the config."""
    cfg = cfg or ServerConfig.from_env()
    if registry is None:
        registry = ModelRegistry()
        registry.load(cfg)
    app = FastAPI(title="claimnet-model-server")
    app.state.registry = registry
    app.state.cfg = cfg

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return _bad_request(f"malformed request body: {exc.errors()[:1]}")

    @app.get("/health")
    def health():
        if not registry.ready:
            return _unavailable("models not loaded" + (f": {registry.errors}" if registry.errors else ""))
        dim = getattr(registry.embedder, "dim", None)
        return {"status": "ok", "models": registry.model_ids(), "dim": dim}

    @app.post("/embed")
    def embed(req: EmbedRequest):
        if registry.embedder is None:
            return _unavailable("embedding model not loaded")
        if not req.texts:
            return _bad_request("texts must be non-empty")
        if len(req.texts) > cfg.batch_limit:
            return _bad_request(f"batch of {len(req.texts)} exceeds limit {cfg.batch_limit}")
        if any(not t for t in req.texts):
            return _bad_request("texts must not contain empty strings")
        vectors = registry.embedder.encode(req.texts)
        return {
            "model_id": registry.embedder.model_id,
            "dim": registry.embedder.dim,
            "vectors": vectors,
        }

    @app.post("/nli")
    def nli(req: NliRequest):
        if registry.nli is None:
            return _unavailable("NLI model not loaded")
        if not req.pairs:
            return _bad_request("pairs must be non-empty")
        if len(req.pairs) > cfg.batch_limit:
            return _bad_request(f"batch of {len(req.pairs)} exceeds limit {cfg.batch_limit}")
        if any(not p.premise or not p.hypothesis for p in req.pairs):
            return _bad_request("premise and hypothesis must be non-empty")
        triples = registry.nli.score_pairs([(p.premise, p.hypothesis) for p in req.pairs])
        return {
            "model_id": registry.nli.model_id,
            "scores": [
                {"entailment": e, "neutral": n, "contradiction": c} for e, n, c in triples
            ],
        }

    @app.post("/claim-score")
    def claim_score(req: ClaimScoreRequest):
        if registry.claims is None:
            return _unavailable("claim model not loaded")
        if not req.texts:
            return _bad_request("texts must be non-empty")
        if len(req.texts) > cfg.batch_limit:
            return _bad_request(f"batch of {len(req.texts)} exceeds limit {cfg.batch_limit}")
        return {"model_id": registry.claims.model_id, "scores": registry.claims.score(req.texts)}

    return app
