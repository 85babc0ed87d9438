"""HTTP sidecar serving sentence embeddings, NLI entailment scores, and
claim-likelihood scores over a JSON API."""

__version__ = "0.1.0"

from .app import ModelRegistry, ServerConfig, create_app  # noqa: F401
