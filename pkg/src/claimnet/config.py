"""Pipeline configuration: a single JSON file wiring all stages.

Relative paths resolve against the config file's directory. The resolved
config is hashed (sha256 over canonical JSON) to stamp stage outputs and to
detect when a rerun can be skipped; output_dir and the embedding cache path
are excluded from the hash because they change where results land, not what
they are. A model-server base URL can be injected via the environment
variable ``CLAIMNET_MODEL_SERVER`` for CI.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .categorize import DEFAULT_EXCLUDED_CODES, CategorizerConfig
from .claims import ClaimDetectorConfig
from .dyads import DedupPolicy
from .embeddings import EmbeddingConfig
from .errors import ConfigError
from .network import CoreConfig
from .stance import StanceConfig

ENV_MODEL_SERVER = "CLAIMNET_MODEL_SERVER"

DEFAULT_QUERY = (
    "(Atom* OR AKW* OR Kernenergie*) "
    "AND (ausst* OR stilll* OR abschalt* OR Laufzeit*) "
    "NOT (waffe* OR bombe)"
)


@dataclass
class ReviewBands:
    """Confidence bands [low, high]; a dyad whose confidence falls inside any
    band is queued for human review."""

    claim_score: tuple[float, float] = (0.1, 0.3)
    similarity: tuple[float, float] = (0.5, 0.65)
    stance_margin: tuple[float, float] = (0.0, 0.1)

    def validate(self) -> None:
        for name, (lo, hi) in (
            ("claim_score", self.claim_score),
            ("similarity", self.similarity),
            ("stance_margin", self.stance_margin),
        ):
            if lo > hi:
                raise ConfigError(f"review band {name}: low {lo} above high {hi}")


@dataclass
class PipelineConfig:
    corpus: Path | None = None
    conllu_dir: Path | None = None
    gold: Path | None = None
    gold_sentences: Path | None = None  # optional CSV enabling confusion eval
    query: str = DEFAULT_QUERY
    query_fields: tuple[str, ...] = ("title", "text")
    section_exclude: tuple[str, ...] = ("lokal",)
    codebook: Path | None = None  # None -> packaged default
    excluded_codes: tuple[int, ...] = tuple(sorted(DEFAULT_EXCLUDED_CODES))
    seeds: Path | None = None
    verb_cues: Path | None = None  # None -> packaged default
    periods: Path | None = None  # None -> packaged default
    output_dir: Path = Path("out")
    embedding: EmbeddingConfig = field(default_factory=EmbeddingConfig)
    claims: ClaimDetectorConfig = field(default_factory=ClaimDetectorConfig)
    categorizer: CategorizerConfig = field(default_factory=CategorizerConfig)
    stance: StanceConfig = field(default_factory=StanceConfig)
    core: CoreConfig = field(default_factory=CoreConfig)
    dedup: DedupPolicy = field(default_factory=DedupPolicy)
    review: ReviewBands = field(default_factory=ReviewBands)

    # ------------------------------------------------------------------
    def validate(self, need_gold: bool = False) -> None:
        if self.corpus is None:
            raise ConfigError("config is missing 'corpus'")
        if self.conllu_dir is None:
            raise ConfigError("config is missing 'conllu_dir'")
        if self.seeds is None:
            raise ConfigError("config is missing 'seeds'")
        for name in ("corpus", "conllu_dir", "gold", "gold_sentences", "codebook",
                     "seeds", "verb_cues", "periods"):
            value = getattr(self, name)
            if value is not None and not Path(value).exists():
                raise ConfigError(f"{name} path does not exist: {value}")
        if need_gold and self.gold is None:
            raise ConfigError("evaluation requested but config has no 'gold' path")
        if not self.query_fields or any(f not in ("title", "text") for f in self.query_fields):
            raise ConfigError("query_fields must be a non-empty subset of {'title', 'text'}")
        self.embedding.validate()
        self.claims.validate()
        self.categorizer.validate()
        self.stance.validate()
        self.core.validate()
        self.review.validate()
        if self.dedup.scope not in ("date", "article"):
            raise ConfigError(f"unknown dedup scope: {self.dedup.scope!r}")

    # ------------------------------------------------------------------
    def semantic_dict(self) -> dict:
        """Everything that determines results (excludes output destinations)."""
        data = _to_jsonable(self)
        data.pop("output_dir", None)
        data["embedding"].pop("cache_path", None)
        return data

    def config_hash(self) -> str:
        canonical = json.dumps(self.semantic_dict(), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def _to_jsonable(obj):
    if dataclasses.is_dataclass(obj):
        return {f.name: _to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _to_jsonable(v) for k, v in obj.items()}
    return obj


def _path(value, base: Path) -> Path | None:
    if value is None:
        return None
    p = Path(value)
    return p if p.is_absolute() else (base / p)


def load_raw_config(path: str | Path) -> tuple[dict, Path]:
    """Read the raw JSON config and the directory its paths resolve against."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg})") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    return raw, path.parent


def load_config(path: str | Path) -> PipelineConfig:
    """Read a JSON config file and resolve relative paths against it."""
    raw, base = load_raw_config(path)
    return config_from_dict(raw, base=base)


def set_override(raw: dict, assignment: str) -> None:
    """Apply one ``dotted.key=value`` override onto the raw config dict.

    The value is parsed as JSON when possible (numbers, booleans, lists,
    null), otherwise taken as a string; intermediate objects are created on
    demand, so any config field is reachable.
    """
    if "=" not in assignment:
        raise ConfigError(f"override must look like key=value: {assignment!r}")
    dotted, text = assignment.split("=", 1)
    keys = [k for k in dotted.strip().split(".") if k]
    if not keys:
        raise ConfigError(f"override has an empty key: {assignment!r}")
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    node = raw
    for key in keys[:-1]:
        child = node.get(key)
        if child is None:
            child = node[key] = {}
        elif not isinstance(child, dict):
            raise ConfigError(f"cannot descend into non-object config key {key!r}")
        node = child
    node[keys[-1]] = value


def config_from_dict(raw: dict, base: Path | None = None) -> PipelineConfig:
    base = base or Path.cwd()
    known = {
        "corpus", "conllu_dir", "gold", "gold_sentences", "query", "query_fields",
        "section_exclude", "codebook", "excluded_codes", "seeds", "verb_cues",
        "periods", "output_dir", "embedding", "claims", "categorizer", "stance",
        "core", "dedup", "review",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    cfg = PipelineConfig()
    for name in ("corpus", "conllu_dir", "gold", "gold_sentences", "codebook",
                 "seeds", "verb_cues", "periods"):
        if name in raw:
            setattr(cfg, name, _path(raw[name], base))
    if "output_dir" in raw:
        cfg.output_dir = _path(raw["output_dir"], base)
    if "query" in raw:
        cfg.query = raw["query"]
    if "query_fields" in raw:
        cfg.query_fields = tuple(raw["query_fields"])
    if "section_exclude" in raw:
        cfg.section_exclude = tuple(raw["section_exclude"])
    if "excluded_codes" in raw:
        cfg.excluded_codes = tuple(int(c) for c in raw["excluded_codes"])

    emb = dict(raw.get("embedding", {}))
    if "cache_path" in emb and emb["cache_path"] is not None:
        emb["cache_path"] = _path(emb["cache_path"], base)
    cfg.embedding = _build(EmbeddingConfig, emb, "embedding")
    clm = dict(raw.get("claims", {}))
    if "head_path" in clm and clm["head_path"] is not None:
        clm["head_path"] = _path(clm["head_path"], base)
    cfg.claims = _build(ClaimDetectorConfig, clm, "claims")
    cfg.categorizer = _build(CategorizerConfig, raw.get("categorizer", {}), "categorizer")
    stance_raw = dict(raw.get("stance", {}))
    if "overrides" in stance_raw:
        stance_raw["overrides"] = {int(k): v for k, v in stance_raw["overrides"].items()}
    cfg.stance = _build(StanceConfig, stance_raw, "stance")
    cfg.core = _build(CoreConfig, raw.get("core", {}), "core")
    cfg.dedup = _build(DedupPolicy, raw.get("dedup", {}), "dedup")
    review_raw = {k: tuple(v) for k, v in raw.get("review", {}).items()}
    cfg.review = _build(ReviewBands, review_raw, "review")

    _apply_env_override(cfg)
    return cfg


def _build(cls, raw: dict, section: str):
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(raw) - names
    if unknown:
        raise ConfigError(f"unknown keys in config section '{section}': {sorted(unknown)}")
    return cls(**raw)


def _apply_env_override(cfg: PipelineConfig) -> None:
    base = os.environ.get(ENV_MODEL_SERVER)
    if not base:
        return
    base = base.rstrip("/")
    cfg.embedding.endpoint = f"{base}/embed"
    cfg.claims.endpoint = f"{base}/claim-score"
    cfg.stance.endpoint = f"{base}/nli"
