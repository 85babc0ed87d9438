"""Few-shot claim categorization: every candidate is compared against
per-category seed-sentence embeddings by cosine similarity and assigned the
most similar category, or none when the pooled similarity falls below the
relevance threshold tau.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .embeddings import cosine
from .errors import ConfigError, InputError

logger = logging.getLogger(__name__)

DEFAULT_EXCLUDED_CODES = frozenset({400, 999})


@dataclass(frozen=True)
class Codebook:
    """Category codes with labels; excluded codes are listed but never assigned."""

    labels: dict[int, str]
    excluded: frozenset[int] = DEFAULT_EXCLUDED_CODES

    def __post_init__(self):
        missing = self.excluded - set(self.labels)
        if missing:
            raise ConfigError(f"excluded codes not present in codebook: {sorted(missing)}")

    def knows(self, code: int) -> bool:
        return code in self.labels

    def is_excluded(self, code: int) -> bool:
        return code in self.excluded

    def assignable_codes(self) -> list[int]:
        return sorted(c for c in self.labels if c not in self.excluded)

    def label(self, code: int) -> str:
        return self.labels[code]


def load_codebook(
    path: str | Path, excluded_codes=DEFAULT_EXCLUDED_CODES
) -> Codebook:
    """Read a TSV codebook (code <tab> label), UTF-8."""
    labels: dict[int, str] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh, delimiter="\t"), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise InputError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
            try:
                code = int(row[0])
            except ValueError:
                raise InputError(f"{path}:{lineno}: non-integer code {row[0]!r}") from None
            if code in labels:
                raise InputError(f"{path}:{lineno}: duplicate code {code}")
            labels[code] = row[1]
    return Codebook(labels=labels, excluded=frozenset(excluded_codes))


def default_codebook() -> Codebook:
    """The codebook shipped with the package."""
    with resources.as_file(resources.files("claimnet") / "data" / "codebook.tsv") as p:
        return load_codebook(p)


@dataclass
class SeedSet:
    """Per-category seed sentences with their embeddings."""

    by_code: dict[int, list[tuple[str, object]]] = field(default_factory=dict)

    def codes(self) -> list[int]:
        return sorted(self.by_code)

    def is_empty(self) -> bool:
        return not any(self.by_code.values())


@dataclass
class CategoryAssignment:
    code: int
    similarity: float
    doc_id: str | None = None
    sentence_index: int | None = None


@dataclass
class CategorizerConfig:
    tau: float = 0.5
    pooling: str = "max"  # "max" | "mean"

    def validate(self) -> None:
        if not (-1.0 <= self.tau <= 1.0):
            raise ConfigError("tau must be in [-1, 1]")
        if self.pooling not in ("max", "mean"):
            raise ConfigError(f"unknown pooling mode: {self.pooling!r}")


def _pool(similarities: list[float], pooling: str) -> float:
    if pooling == "max":
        return max(similarities)
    return sum(similarities) / len(similarities)


def categorize(
    candidate_embedding, seeds: SeedSet, cfg: CategorizerConfig | None = None
) -> CategoryAssignment | None:
    """Assign the argmax category by pooled seed similarity, or none below tau.

    Argmax ties break deterministically toward the lowest code (and are
    logged); the threshold only converts assignments to none, never changes
    which category wins.
    """
    cfg = cfg or CategorizerConfig()
    cfg.validate()
    if seeds.is_empty():
        raise InputError("cannot categorize with an empty seed set")
    best_code: int | None = None
    best_sim = float("-inf")
    tied = False
    for code in sorted(seeds.by_code):
        entries = seeds.by_code[code]
        if not entries:
            continue
        pooled = _pool([cosine(candidate_embedding, vec) for _, vec in entries], cfg.pooling)
        if pooled > best_sim:
            best_code, best_sim, tied = code, pooled, False
        elif pooled == best_sim:
            tied = True
    if tied:
        logger.info("categorize: similarity tie resolved toward code %s", best_code)
    if best_sim < cfg.tau:
        return None
    return CategoryAssignment(code=best_code, similarity=best_sim)


def suggest_seeds(
    category_label: str,
    sentences: list[tuple[str, object]],
    k: int,
    embed_fn,
) -> list[tuple[str, float]]:
    """Rank corpus sentences by similarity to the embedded category label.

    Returns the top-k (text, similarity) pairs, ties resolved by corpus order.
    """
    if k < 1:
        raise InputError("k must be >= 1")
    label_vec = embed_fn([category_label])[0]
    scored = [(text, cosine(label_vec, vec)) for text, vec in sentences]
    ranked = sorted(enumerate(scored), key=lambda iv: (-iv[1][1], iv[0]))
    return [pair for _, pair in ranked[:k]]


def load_seed_file(path: str | Path, codebook: Codebook, embed_fn) -> SeedSet:
    """Read seeds from a TSV (code <tab> seed_text) and embed them.

    Seeds for unknown or excluded codes are errors, as is a non-excluded
    category left without any seed.
    """
    rows: list[tuple[int, str]] = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh, delimiter="\t"), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise InputError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
            try:
                code = int(row[0])
            except ValueError:
                raise InputError(f"{path}:{lineno}: non-integer code {row[0]!r}") from None
            if not codebook.knows(code):
                raise InputError(f"{path}:{lineno}: seed for unknown code {code}")
            if codebook.is_excluded(code):
                raise InputError(f"{path}:{lineno}: seed for excluded code {code}")
            rows.append((code, row[1]))
    vectors = embed_fn([text for _, text in rows]) if rows else []
    by_code: dict[int, list[tuple[str, object]]] = {c: [] for c in codebook.assignable_codes()}
    for (code, text), vec in zip(rows, vectors):
        by_code[code].append((text, vec))
    uncovered = [c for c, entries in by_code.items() if not entries]
    if uncovered:
        raise InputError(f"{path}: no seeds for non-excluded codes {uncovered}")
    return SeedSet(by_code=by_code)
