"""Stage-wise pipeline execution.

Stages run in a fixed order, each reading its predecessor's serialized output
from the output directory and writing its own:

    ingest   -> articles.jsonl
    detect   -> candidates.jsonl
    extract  -> links.jsonl, ambiguities.tsv
    classify -> assignments.jsonl
    stance   -> stances.jsonl, dyads.jsonl, conflicts.jsonl
    network  -> network_p<i>_core<n>.graphml per period
    eval     -> report.json, report_table.csv, weekly_counts*.csv, confusion.csv

Every stage writes a ``<stage>.meta.json`` sidecar carrying the config hash
and its counters; a stage whose outputs exist under the current config hash
is skipped unless forced. Outputs contain no timestamps, so identical configs
produce byte-identical dyad and network files.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .actors import (
    build_attested_index,
    default_cue_lexicon,
    detect_case,
    extract_links,
    load_cue_file,
    resolve_actor,
)
from .categorize import (
    CategoryAssignment,
    Codebook,
    categorize,
    default_codebook,
    load_codebook,
    load_seed_file,
)
from .claims import ClaimCandidate, ClaimScore, filter_candidates, implicit_article_selection, make_claim_scorer
from .config import PipelineConfig
from .dyads import StanceResult, assemble, dedup_with_conflicts
from .embeddings import Embedder
from .errors import ConfigError, InputError, MissingStageInput
from .evaluate import (
    compare_period,
    confusion,
    macro_precision,
    stance_report,
    weekly_counts,
)
from .ingest import (
    Document,
    EntitySpan,
    SentenceAnnotation,
    Token,
    exclude_sections,
    keyword_filter,
    load_conllu,
    load_corpus,
    load_gold,
    parse_query,
)
from .network import build, concept_core, default_periods, export, export_filename, load_periods
from .stance import build_hypotheses, classify_stance, make_nli_scorer

logger = logging.getLogger(__name__)

STAGES = ("ingest", "detect", "extract", "classify", "stance", "network", "eval")


@dataclass
class OutputPaths:
    out: Path

    @property
    def articles(self) -> Path:
        return self.out / "articles.jsonl"

    @property
    def candidates(self) -> Path:
        return self.out / "candidates.jsonl"

    @property
    def links(self) -> Path:
        return self.out / "links.jsonl"

    @property
    def ambiguities(self) -> Path:
        return self.out / "ambiguities.tsv"

    @property
    def assignments(self) -> Path:
        return self.out / "assignments.jsonl"

    @property
    def stances(self) -> Path:
        return self.out / "stances.jsonl"

    @property
    def dyads(self) -> Path:
        return self.out / "dyads.jsonl"

    @property
    def conflicts(self) -> Path:
        return self.out / "conflicts.jsonl"

    @property
    def report(self) -> Path:
        return self.out / "report.json"

    def meta(self, stage: str) -> Path:
        return self.out / f"{stage}.meta.json"


_STAGE_OUTPUTS = {
    "ingest": ("articles",),
    "detect": ("candidates",),
    "extract": ("links",),
    "classify": ("assignments",),
    "stance": ("stances", "dyads"),
    "network": (),  # period files, checked separately
    "eval": ("report",),
}

_STAGE_INPUTS = {
    "ingest": (),
    "detect": ("articles",),
    "extract": ("articles", "candidates"),
    "classify": ("articles", "candidates", "links"),
    "stance": ("articles", "links", "assignments"),
    "network": ("dyads",),
    "eval": ("articles", "dyads",),
}


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _doc_to_dict(doc: Document) -> dict:
    return {
        "id": doc.id,
        "date": doc.date.isoformat(),
        "newspaper": doc.newspaper,
        "section": doc.section,
        "title": doc.title,
        "text": doc.text,
        "sentences": [
            {
                "index": s.index,
                "char_span": list(s.char_span),
                "tokens": [
                    [t.index, t.surface, t.lemma, t.upos, t.head, t.deprel] for t in s.tokens
                ],
                "entities": [[e.first, e.last, e.label, e.surface] for e in s.entities],
            }
            for s in doc.sentences
        ],
    }


def _doc_from_dict(rec: dict) -> Document:
    doc = Document(
        id=rec["id"],
        date=dt.date.fromisoformat(rec["date"]),
        newspaper=rec["newspaper"],
        section=rec["section"],
        title=rec["title"],
        text=rec["text"],
    )
    for s in rec["sentences"]:
        doc.sentences.append(
            SentenceAnnotation(
                index=s["index"],
                char_span=tuple(s["char_span"]),
                tokens=[Token(*row) for row in s["tokens"]],
                entities=[EntitySpan(*row) for row in s["entities"]],
            )
        )
    return doc


def _write_jsonl(path: Path, records) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def _read_jsonl(path: Path) -> list[dict]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(json.loads(line))
    return out


def load_articles(path: Path) -> list[Document]:
    return [_doc_from_dict(rec) for rec in _read_jsonl(path)]


def load_dyad_records(path: Path) -> list[dict]:
    return _read_jsonl(path)


@dataclass(frozen=True)
class DyadRecord:
    """Dyad view over a serialized record, for network building and eval."""

    actor: str
    code: int
    polarity: int
    date: dt.date
    doc_id: str
    sentence_index: int
    similarity: float
    claim_score: float
    stance_margin: float

    @classmethod
    def from_dict(cls, rec: dict) -> "DyadRecord":
        return cls(
            actor=rec["actor"],
            code=int(rec["code"]),
            polarity=int(rec["polarity"]),
            date=dt.date.fromisoformat(rec["date"]),
            doc_id=rec["doc_id"],
            sentence_index=int(rec["sentence_index"]),
            similarity=float(rec["similarity"]),
            claim_score=float(rec["claim_score"]),
            stance_margin=float(rec["stance_margin"]),
        )


def load_dyads(path: Path) -> list[DyadRecord]:
    return [DyadRecord.from_dict(rec) for rec in _read_jsonl(path)]


# ---------------------------------------------------------------------------
# Shared resources
# ---------------------------------------------------------------------------


@dataclass
class Resources:
    cfg: PipelineConfig
    paths: OutputPaths
    codebook: Codebook
    periods: list
    config_hash: str

    @classmethod
    def prepare(cls, cfg: PipelineConfig) -> "Resources":
        codebook = (
            load_codebook(cfg.codebook, frozenset(cfg.excluded_codes))
            if cfg.codebook
            else default_codebook()
        )
        periods = load_periods(cfg.periods) if cfg.periods else default_periods()
        return cls(
            cfg=cfg,
            paths=OutputPaths(Path(cfg.output_dir)),
            codebook=codebook,
            periods=periods,
            config_hash=cfg.config_hash(),
        )

    def embedder(self) -> Embedder:
        return Embedder(self.cfg.embedding)

    def lexicon(self):
        return load_cue_file(self.cfg.verb_cues) if self.cfg.verb_cues else default_cue_lexicon()

    def write_meta(self, stage: str, counters: dict) -> None:
        payload = {
            "stage": stage,
            "config_hash": self.config_hash,
            "version": __version__,
            "counters": counters,
        }
        self.paths.meta(stage).write_text(
            json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )

    def meta_matches(self, stage: str) -> bool:
        meta_path = self.paths.meta(stage)
        if not meta_path.exists():
            return False
        try:
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            return False
        return meta.get("config_hash") == self.config_hash

    def network_files(self) -> list[Path]:
        return [self.paths.out / export_filename(p, "graphml") for p in self.periods]


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------


def stage_ingest(res: Resources) -> dict:
    cfg = res.cfg
    docs = load_corpus(cfg.corpus)
    query = parse_query(cfg.query)
    matched = keyword_filter(docs, query, cfg.query_fields)
    retained = exclude_sections(matched, list(cfg.section_exclude))
    conllu_dir = Path(cfg.conllu_dir)
    for doc in retained:
        conllu = conllu_dir / f"{doc.id}.conllu"
        if not conllu.exists():
            raise InputError(f"missing annotation file for document {doc.id!r}: {conllu}")
        doc.sentences = load_conllu(conllu, doc)
    _write_jsonl(res.paths.articles, (_doc_to_dict(d) for d in retained))
    return {
        "documents": len(docs),
        "keyword_matched": len(matched),
        "retained": len(retained),
        "sentences": sum(len(d.sentences) for d in retained),
    }


def stage_detect(res: Resources) -> dict:
    cfg = res.cfg
    docs = load_articles(res.paths.articles)
    embedder = res.embedder() if cfg.claims.scorer == "linear_head" else None
    scorer = make_claim_scorer(cfg.claims, embedder)
    scores: list[ClaimScore] = []
    for doc in docs:
        texts = [doc.sentence_text(s.index) for s in doc.sentences]
        if not texts:
            continue
        for s, value in zip(doc.sentences, scorer.score_texts(texts)):
            scores.append(ClaimScore(doc.id, s.index, value, texts[s.index]))
    candidates = filter_candidates(scores, cfg.claims.threshold)
    _write_jsonl(
        res.paths.candidates,
        (
            {
                "doc_id": c.doc_id,
                "sentence_index": c.sentence_index,
                "score": c.score,
                "text": c.text,
            }
            for c in candidates
        ),
    )
    return {
        "sentences_scored": len(scores),
        "candidates": len(candidates),
        "articles_selected": len(implicit_article_selection(candidates)),
        "threshold": cfg.claims.threshold,
    }


def stage_extract(res: Resources) -> dict:
    docs = {d.id: d for d in load_articles(res.paths.articles)}
    lexicon = res.lexicon()
    candidate_recs = _read_jsonl(res.paths.candidates)
    attested = build_attested_index(docs.values())

    by_sentence: dict[tuple[str, int], ClaimCandidate] = {}
    for rec in candidate_recs:
        cand = ClaimCandidate(rec["doc_id"], rec["sentence_index"], rec["score"], rec["text"])
        by_sentence[(cand.doc_id, cand.sentence_index)] = cand

    link_rows = []
    ambiguity_rows = []
    cases = {"inside": 0, "outside": 0, "none": 0}
    for (doc_id, sent_idx), cand in sorted(by_sentence.items()):
        doc = docs.get(doc_id)
        if doc is None:
            raise InputError(f"candidate references unknown document {doc_id!r}")
        sentence = doc.sentences[sent_idx]
        cases[detect_case(sentence, lexicon)] += 1
        for link in extract_links(sentence, [cand], lexicon):
            normalized, alternatives = resolve_actor(link.actor.surface, attested)
            if alternatives:
                ambiguity_rows.append(
                    [link.actor.surface, normalized, "|".join(alternatives), doc_id, sent_idx]
                )
            link_rows.append(
                {
                    "doc_id": doc_id,
                    "sentence_index": sent_idx,
                    "actor_surface": link.actor.surface,
                    "actor_normalized": normalized,
                    "entity_type": link.actor.entity_type,
                    "token_range": list(link.actor.token_range),
                    "cue_verb_lemma": link.cue_verb_lemma,
                    "claim_score": cand.score,
                }
            )
    _write_jsonl(res.paths.links, link_rows)
    with open(res.paths.ambiguities, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(["surface", "chosen", "alternatives", "doc_id", "sentence_index"])
        writer.writerows(ambiguity_rows)
    linked_sentences = {(r["doc_id"], r["sentence_index"]) for r in link_rows}
    return {
        "candidates": len(by_sentence),
        "links": len(link_rows),
        "linked_sentences": len(linked_sentences),
        "candidates_without_actor": len(by_sentence) - len(linked_sentences),
        "cases": cases,
        "ambiguities": len(ambiguity_rows),
    }


def stage_classify(res: Resources) -> dict:
    cfg = res.cfg
    embedder = res.embedder()
    seeds = load_seed_file(cfg.seeds, res.codebook, embedder.embed)
    candidate_recs = {(r["doc_id"], r["sentence_index"]): r for r in _read_jsonl(res.paths.candidates)}
    link_recs = _read_jsonl(res.paths.links)
    linked = sorted({(r["doc_id"], r["sentence_index"]) for r in link_recs})

    rows = []
    below_tau = 0
    texts = [candidate_recs[key]["text"] for key in linked]
    vectors = embedder.embed(texts) if texts else []
    for key, vec in zip(linked, vectors):
        assignment = categorize(vec, seeds, cfg.categorizer)
        if assignment is None:
            below_tau += 1
            continue
        rows.append(
            {
                "doc_id": key[0],
                "sentence_index": key[1],
                "code": assignment.code,
                "similarity": assignment.similarity,
            }
        )
    _write_jsonl(res.paths.assignments, rows)
    return {
        "linked_sentences": len(linked),
        "assignments": len(rows),
        "below_tau": below_tau,
        "tau": cfg.categorizer.tau,
        "pooling": cfg.categorizer.pooling,
    }


def stage_stance(res: Resources) -> dict:
    cfg = res.cfg
    docs = {d.id: d for d in load_articles(res.paths.articles)}
    scorer = make_nli_scorer(cfg.stance)
    assignments = _read_jsonl(res.paths.assignments)
    link_recs = _read_jsonl(res.paths.links)

    stance_rows = []
    stance_results = []
    ties = 0
    for rec in assignments:
        doc = docs[rec["doc_id"]]
        sentence = doc.sentence_text(rec["sentence_index"])
        pair = build_hypotheses(rec["code"], res.codebook, cfg.stance)
        polarity, margin = classify_stance(sentence, pair, scorer, cfg.stance.tie_polarity)
        if margin == 0.0:
            ties += 1
        stance_rows.append(
            {
                "doc_id": rec["doc_id"],
                "sentence_index": rec["sentence_index"],
                "code": rec["code"],
                "polarity": polarity,
                "margin": margin,
            }
        )
        stance_results.append(
            StanceResult(rec["doc_id"], rec["sentence_index"], polarity, margin)
        )
    _write_jsonl(res.paths.stances, stance_rows)

    # assemble + dedup
    from .actors import ActorClaimLink, ActorMention

    links = [
        ActorClaimLink(
            actor=ActorMention(
                surface=r["actor_surface"],
                normalized=r["actor_normalized"],
                entity_type=r["entity_type"],
                doc_id=r["doc_id"],
                sentence_index=r["sentence_index"],
                token_range=tuple(r["token_range"]),
            ),
            candidate=ClaimCandidate(
                r["doc_id"], r["sentence_index"], r["claim_score"], None
            ),
            cue_verb_lemma=r["cue_verb_lemma"],
        )
        for r in link_recs
    ]
    assignment_objs = [
        CategoryAssignment(
            code=r["code"],
            similarity=r["similarity"],
            doc_id=r["doc_id"],
            sentence_index=r["sentence_index"],
        )
        for r in assignments
    ]
    doc_dates = {doc_id: d.date for doc_id, d in docs.items()}
    all_dyads = assemble(links, assignment_objs, stance_results, doc_dates)
    kept, conflicts = dedup_with_conflicts(all_dyads, res.cfg.dedup)
    kept = sorted(kept, key=lambda d: (d.date, d.doc_id, d.sentence_index))
    _write_jsonl(
        res.paths.dyads,
        (
            {
                "actor": d.actor,
                "code": d.code,
                "polarity": d.polarity,
                "date": d.date.isoformat(),
                "doc_id": d.doc_id,
                "sentence_index": d.sentence_index,
                "similarity": d.similarity,
                "claim_score": d.claim_score,
                "stance_margin": d.stance_margin,
            }
            for d in kept
        ),
    )
    _write_jsonl(
        res.paths.conflicts,
        (
            {
                "kept": {"actor": a.actor, "code": a.code, "polarity": a.polarity,
                         "date": a.date.isoformat(), "doc_id": a.doc_id,
                         "sentence_index": a.sentence_index},
                "dropped": {"actor": b.actor, "code": b.code, "polarity": b.polarity,
                            "date": b.date.isoformat(), "doc_id": b.doc_id,
                            "sentence_index": b.sentence_index},
            }
            for a, b in conflicts
        ),
    )
    return {
        "assignments": len(assignments),
        "stance_ties": ties,
        "dyads_before_dedup": len(all_dyads),
        "dyads": len(kept),
        "polarity_conflicts": len(conflicts),
        "dedup_scope": res.cfg.dedup.scope,
    }


def stage_network(res: Resources) -> dict:
    dyads = load_dyads(res.paths.dyads)
    written = []
    for period in res.periods:
        net = build(dyads, period)
        net.config_hash = res.config_hash
        core = concept_core(net, period.core_n, res.cfg.core)
        path = res.paths.out / export_filename(period, "graphml")
        export(core, "graphml", path)
        written.append(path.name)
    return {
        "periods": len(res.periods),
        "files": written,
        "degree_mode": res.cfg.core.degree_mode,
    }


def stage_eval(res: Resources) -> dict:
    cfg = res.cfg
    if cfg.gold is None:
        raise ConfigError("evaluation requested but config has no 'gold' path")
    pred = load_dyads(res.paths.dyads)
    gold = load_gold(cfg.gold, res.codebook)

    period_reports = [
        compare_period(pred, gold, period, cfg.core) for period in res.periods
    ]
    weekly_pred = weekly_counts(pred)
    weekly_gold = weekly_counts(gold)

    # stance accuracy over dyads matched on (actor, code, date)
    gold_by_key = {(g.actor, g.code, g.date): g.polarity for g in gold}
    paired = [
        (d.polarity, gold_by_key[(d.actor, d.code, d.date)])
        for d in pred
        if (d.actor, d.code, d.date) in gold_by_key
    ]
    stance = stance_report([p for p, _ in paired], [g for _, g in paired]) if paired else None

    confusion_summary = None
    if cfg.gold_sentences is not None:
        confusion_summary = _confusion_eval(res)

    report = {
        "config_hash": res.config_hash,
        "periods": [
            {
                "index": r.period.index,
                "core_n": r.period.core_n,
                "start": r.period.start.isoformat(),
                "end": r.period.end.isoformat(),
                **{
                    partition: {
                        "precision": m.precision,
                        "recall": m.recall,
                        "f1": m.f1,
                        "tp": m.tp,
                        "fp": m.fp,
                        "fn": m.fn,
                        "precision_defined": m.precision_defined,
                        "recall_defined": m.recall_defined,
                    }
                    for partition, m in (
                        ("actors", r.actors),
                        ("claims", r.claims),
                        ("dyads", r.dyads),
                    )
                },
            }
            for r in period_reports
        ],
        "weekly_predicted": [{"iso_week": w, "count": c} for w, c in weekly_pred],
        "weekly_gold": [{"iso_week": w, "count": c} for w, c in weekly_gold],
        "stance": None
        if stance is None
        else {
            "matched_dyads": len(paired),
            "tp": stance.tp,
            "tn": stance.tn,
            "fp": stance.fp,
            "fn": stance.fn,
            "accuracy": stance.accuracy,
        },
        "confusion": confusion_summary,
    }
    res.paths.report.write_text(
        json.dumps(report, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )

    with open(res.paths.out / "report_table.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["period", "partition", "f1", "precision", "recall"])
        for r in period_reports:
            for partition, m in (("actors", r.actors), ("claims", r.claims), ("dyads", r.dyads)):
                writer.writerow(
                    [r.period.index, partition, f"{m.f1:.4f}", f"{m.precision:.4f}", f"{m.recall:.4f}"]
                )
    _write_week_csv(res.paths.out / "weekly_counts.csv", weekly_pred)
    _write_week_csv(res.paths.out / "weekly_counts_gold.csv", weekly_gold)
    return {
        "gold_dyads": len(gold),
        "predicted_dyads": len(pred),
        "stance_matched": len(paired),
        "confusion": None if confusion_summary is None else confusion_summary["total"],
    }


def _write_week_csv(path: Path, rows: list[tuple[str, int]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iso_week", "count"])
        writer.writerows(rows)


def _confusion_eval(res: Resources) -> dict:
    """Classification-only evaluation: categorize sentences known to carry
    gold claims and compare against the annotated codes."""
    cfg = res.cfg
    docs = {d.id: d for d in load_articles(res.paths.articles)}
    embedder = res.embedder()
    seeds = load_seed_file(cfg.seeds, res.codebook, embedder.embed)

    gold_codes: list[int] = []
    texts: list[str] = []
    skipped = 0
    with open(cfg.gold_sentences, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"article_id", "sentence_index", "category_code"}
        if reader.fieldnames is None or not required.issubset(set(reader.fieldnames)):
            raise InputError(f"gold sentences file must have columns {sorted(required)}")
        for row in reader:
            doc = docs.get(row["article_id"])
            if doc is None:
                skipped += 1
                continue
            gold_codes.append(int(row["category_code"]))
            texts.append(doc.sentence_text(int(row["sentence_index"])))
    pred_codes: list[int | None] = []
    for vec in embedder.embed(texts) if texts else []:
        assignment = categorize(vec, seeds, cfg.categorizer)
        pred_codes.append(None if assignment is None else assignment.code)
    matrix = confusion(gold_codes, pred_codes, res.codebook.assignable_codes())
    with open(res.paths.out / "confusion.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerows(matrix.to_rows())
    return {
        "total": matrix.total(),
        "skipped_outside_corpus": skipped,
        "macro_precision": macro_precision(matrix) if matrix.total() else None,
        "never_predicted": list(matrix.never_predicted()),
    }


_STAGE_FUNCS = {
    "ingest": stage_ingest,
    "detect": stage_detect,
    "extract": stage_extract,
    "classify": stage_classify,
    "stance": stage_stance,
    "network": stage_network,
    "eval": stage_eval,
}


def _outputs_present(res: Resources, stage: str) -> bool:
    for attr in _STAGE_OUTPUTS[stage]:
        if not getattr(res.paths, attr).exists():
            return False
    if stage == "network":
        return all(p.exists() for p in res.network_files())
    return True


def _check_inputs(res: Resources, stage: str, produced: set[str]) -> None:
    missing = []
    for attr in _STAGE_INPUTS[stage]:
        if attr in produced:
            continue
        if not getattr(res.paths, attr).exists():
            missing.append(getattr(res.paths, attr).name)
    if missing:
        raise MissingStageInput(stage, missing)


def run(cfg: PipelineConfig, stages: tuple[str, ...] | None = None, force: bool = False) -> dict:
    """Run the requested stages in pipeline order; returns per-stage counters.

    A stage whose outputs already exist under the current config hash is
    skipped unless ``force`` is set. A requested stage whose predecessor
    outputs are absent raises :class:`MissingStageInput`.
    """
    requested = tuple(stages) if stages else STAGES
    unknown = [s for s in requested if s not in STAGES]
    if unknown:
        raise ConfigError(f"unknown stage(s): {unknown}")
    ordered = [s for s in STAGES if s in requested]
    cfg.validate(need_gold="eval" in ordered)

    res = Resources.prepare(cfg)
    res.paths.out.mkdir(parents=True, exist_ok=True)
    results: dict[str, dict] = {}
    produced: set[str] = set()
    for stage in ordered:
        _check_inputs(res, stage, produced)
        if not force and _outputs_present(res, stage) and res.meta_matches(stage):
            logger.info("stage %s: outputs up to date, skipping", stage)
            results[stage] = {"skipped": True}
        else:
            logger.info("stage %s: running", stage)
            counters = _STAGE_FUNCS[stage](res)
            res.write_meta(stage, counters)
            results[stage] = counters
        produced.update(_STAGE_OUTPUTS[stage])
        if stage == "network":
            produced.add("networks")
    return results


# ---------------------------------------------------------------------------
# Review queue
# ---------------------------------------------------------------------------


def export_review_queue(cfg: PipelineConfig, output: Path | None = None) -> Path:
    """Write a TSV of low-confidence dyads, weakest confidence first.

    A dyad is queued when its claim score, categorization similarity, or
    absolute stance margin falls inside the corresponding review band. Rows
    sort ascending by the smallest triggering value, then by provenance.
    """
    res = Resources.prepare(cfg)
    if not res.paths.dyads.exists() or not res.paths.articles.exists():
        raise MissingStageInput("review-queue", ["dyads.jsonl or articles.jsonl"])
    docs = {d.id: d for d in load_articles(res.paths.articles)}
    bands = cfg.review
    rows = []
    for d in load_dyads(res.paths.dyads):
        triggers = []
        if bands.claim_score[0] <= d.claim_score <= bands.claim_score[1]:
            triggers.append(("claim_score", d.claim_score))
        if bands.similarity[0] <= d.similarity <= bands.similarity[1]:
            triggers.append(("similarity", d.similarity))
        if bands.stance_margin[0] <= abs(d.stance_margin) <= bands.stance_margin[1]:
            triggers.append(("stance_margin", abs(d.stance_margin)))
        if not triggers:
            continue
        weakest = min(value for _, value in triggers)
        trigger_names = ",".join(name for name, _ in sorted(triggers, key=lambda t: t[1]))
        sentence = docs[d.doc_id].sentence_text(d.sentence_index) if d.doc_id in docs else ""
        rows.append((weakest, d.doc_id, d.sentence_index, trigger_names, d, sentence))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    output = output or (res.paths.out / "review_queue.tsv")
    with open(output, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(
            ["weakest", "trigger", "actor", "code", "polarity", "date", "doc_id",
             "sentence_index", "claim_score", "similarity", "stance_margin", "sentence"]
        )
        for weakest, doc_id, sent_idx, trigger_names, d, sentence in rows:
            writer.writerow(
                [f"{weakest:.6f}", trigger_names, d.actor, d.code, d.polarity,
                 d.date.isoformat(), doc_id, sent_idx, f"{d.claim_score:.6f}",
                 f"{d.similarity:.6f}", f"{d.stance_margin:.6f}", sentence]
            )
    return output


def export_networks(cfg: PipelineConfig, fmt: str, out_dir: Path | None = None) -> list[Path]:
    """Export per-period core networks from existing dyad output."""
    res = Resources.prepare(cfg)
    if not res.paths.dyads.exists():
        raise MissingStageInput("export", [res.paths.dyads.name])
    dyads = load_dyads(res.paths.dyads)
    out_dir = Path(out_dir) if out_dir else res.paths.out
    written = []
    for period in res.periods:
        net = build(dyads, period)
        net.config_hash = res.config_hash
        core = concept_core(net, period.core_n, cfg.core)
        written.append(export(core, fmt, out_dir / export_filename(period, fmt)))
    return written
