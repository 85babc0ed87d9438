"""Dyad assembly and per-date deduplication.

A dyad joins an actor link, a category assignment, and a stance result for
one sentence. Repeats of the same (actor, code) on the same date carry no new
information, so only the first occurrence in (date, doc, sentence) order is
kept; opposite-polarity repeats under one key are logged as conflicts rather
than merged.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from typing import Mapping

from .actors import ActorClaimLink
from .categorize import CategoryAssignment
from .errors import InputError


@dataclass(frozen=True)
class Dyad:
    actor: str  # normalized name
    code: int
    polarity: int  # +1 or -1
    date: dt.date
    doc_id: str
    sentence_index: int
    similarity: float
    claim_score: float
    stance_margin: float


@dataclass(frozen=True)
class DedupPolicy:
    scope: str = "date"  # "date": key (actor, code, date); "article": (actor, code, doc)

    def key(self, d: Dyad):
        if self.scope == "article":
            return (d.actor, d.code, d.doc_id)
        return (d.actor, d.code, d.date)


@dataclass(frozen=True)
class StanceResult:
    doc_id: str
    sentence_index: int
    polarity: int
    margin: float


def assemble(
    links: list[ActorClaimLink],
    assignments: list[CategoryAssignment],
    stances: list[StanceResult],
    doc_dates: Mapping[str, dt.date],
) -> list[Dyad]:
    """Join links, assignments, and stances on (doc_id, sentence_index).

    Sentences lacking any of the three parts produce no dyad; a sentence with
    two contradictory assignments is an upstream error.
    """
    by_sentence: dict[tuple[str, int], CategoryAssignment] = {}
    for a in assignments:
        key = (a.doc_id, a.sentence_index)
        if key in by_sentence and by_sentence[key].code != a.code:
            raise InputError(f"contradictory category assignments for sentence {key}")
        by_sentence[key] = a
    stance_by_sentence = {(s.doc_id, s.sentence_index): s for s in stances}

    dyads: list[Dyad] = []
    for link in links:
        key = (link.candidate.doc_id, link.candidate.sentence_index)
        assignment = by_sentence.get(key)
        stance = stance_by_sentence.get(key)
        if assignment is None or stance is None:
            continue
        dyads.append(
            Dyad(
                actor=link.actor.normalized,
                code=assignment.code,
                polarity=stance.polarity,
                date=doc_dates[link.candidate.doc_id],
                doc_id=link.candidate.doc_id,
                sentence_index=link.candidate.sentence_index,
                similarity=assignment.similarity,
                claim_score=link.candidate.score,
                stance_margin=stance.margin,
            )
        )
    return dyads


def dedup_with_conflicts(
    dyads: list[Dyad], policy: DedupPolicy | None = None
) -> tuple[list[Dyad], list[tuple[Dyad, Dyad]]]:
    """Keep the first dyad per key in (date, doc, sentence) order.

    Returns (kept, conflicts) where conflicts pairs each kept dyad with a
    dropped opposite-polarity repeat.
    """
    policy = policy or DedupPolicy()
    ordered = sorted(dyads, key=lambda d: (d.date, d.doc_id, d.sentence_index))
    kept: dict[object, Dyad] = {}
    out: list[Dyad] = []
    conflicts: list[tuple[Dyad, Dyad]] = []
    for d in ordered:
        key = policy.key(d)
        first = kept.get(key)
        if first is None:
            kept[key] = d
            out.append(d)
        elif d.polarity != first.polarity:
            conflicts.append((first, d))
    return out, conflicts


def dedup(dyads: list[Dyad], policy: DedupPolicy | None = None) -> list[Dyad]:
    """At most one dyad per (actor, code, date); first occurrence wins."""
    return dedup_with_conflicts(dyads, policy)[0]
