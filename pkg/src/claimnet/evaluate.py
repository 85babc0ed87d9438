"""Evaluation against gold annotations: per-period precision/recall/F1 over
core networks (actors, claims, dyads), weekly dyad counts, category confusion
with macro precision, and binary stance accuracy.

Dyad matching is polarity-agnostic and position-agnostic: a dyad counts as
found if the same (actor, code) pair appears in the period's core network,
regardless of the sentence or article it came from. Empty denominators report
0 together with an explicit undefined flag instead of NaN.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InputError
from .network import CoreConfig, PeriodSpec, build, concept_core


@dataclass(frozen=True)
class SetMetrics:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    precision_defined: bool = True
    recall_defined: bool = True


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def prf(pred: set, gold: set) -> SetMetrics:
    """Set-overlap precision, recall, and F1."""
    tp = len(pred & gold)
    fp = len(pred - gold)
    fn = len(gold - pred)
    p_defined = tp + fp > 0
    r_defined = tp + fn > 0
    precision = tp / (tp + fp) if p_defined else 0.0
    recall = tp / (tp + fn) if r_defined else 0.0
    return SetMetrics(
        precision=precision,
        recall=recall,
        f1=f1_score(precision, recall),
        tp=tp,
        fp=fp,
        fn=fn,
        precision_defined=p_defined,
        recall_defined=r_defined,
    )


@dataclass(frozen=True)
class PeriodReport:
    period: PeriodSpec
    actors: SetMetrics
    claims: SetMetrics
    dyads: SetMetrics


def compare_period(
    pred_dyads: Iterable,
    gold_dyads: Iterable,
    period: PeriodSpec,
    cfg: CoreConfig | None = None,
) -> PeriodReport:
    """Build both period networks, apply the concept core at the period's
    level, and compare actor sets, concept sets, and (actor, code) dyad pairs
    (polarity ignored)."""
    cfg = cfg or CoreConfig()
    pred_net = concept_core(build(pred_dyads, period), period.core_n, cfg)
    gold_net = concept_core(build(gold_dyads, period), period.core_n, cfg)
    return PeriodReport(
        period=period,
        actors=prf(set(pred_net.actors), set(gold_net.actors)),
        claims=prf(set(pred_net.concepts), set(gold_net.concepts)),
        dyads=prf(pred_net.dyad_pairs(), gold_net.dyad_pairs()),
    )


# ---------------------------------------------------------------------------
# Weekly counts
# ---------------------------------------------------------------------------


def _iso_week_key(date: dt.date) -> str:
    iso = date.isocalendar()
    return f"{iso[0]}-W{iso[1]:02d}"


def weekly_counts(dyads: Iterable) -> list[tuple[str, int]]:
    """Dyads per ISO week; weeks without dyads inside the covered date range
    are included with count 0."""
    dates = [d.date for d in dyads]
    if not dates:
        return []
    counts: dict[str, int] = {}
    for date in dates:
        key = _iso_week_key(date)
        counts[key] = counts.get(key, 0) + 1
    first = min(dates)
    last = max(dates)
    monday = first - dt.timedelta(days=first.isoweekday() - 1)
    out: list[tuple[str, int]] = []
    while monday <= last:
        key = _iso_week_key(monday)
        out.append((key, counts.get(key, 0)))
        monday += dt.timedelta(days=7)
    return out


# ---------------------------------------------------------------------------
# Category confusion (classification-only mode: predictions are made on
# sentences known to carry gold claims, so detection errors are excluded)
# ---------------------------------------------------------------------------

NONE_LABEL = "none"


@dataclass
class ConfusionMatrix:
    """Square matrix over category codes plus a 'none' column for below-tau
    abstentions. Rows are gold codes, columns predictions; row sums equal the
    gold count per category."""

    codes: tuple[int, ...]
    counts: dict[tuple[int, object], int] = field(default_factory=dict)

    def add(self, gold_code: int, pred_code: int | None) -> None:
        pred: object = pred_code if pred_code is not None else NONE_LABEL
        self.counts[(gold_code, pred)] = self.counts.get((gold_code, pred), 0) + 1

    def cell(self, gold_code: int, pred: object) -> int:
        return self.counts.get((gold_code, pred), 0)

    def row_sum(self, gold_code: int) -> int:
        return sum(v for (g, _), v in self.counts.items() if g == gold_code)

    def col_sum(self, pred: object) -> int:
        return sum(v for (_, p), v in self.counts.items() if p == pred)

    def total(self) -> int:
        return sum(self.counts.values())

    def never_predicted(self) -> tuple[int, ...]:
        return tuple(c for c in self.codes if self.col_sum(c) == 0)

    def to_rows(self) -> list[list]:
        header = ["gold\\pred", *self.codes, NONE_LABEL]
        rows: list[list] = [header]
        for g in self.codes:
            rows.append([g, *(self.cell(g, c) for c in self.codes), self.cell(g, NONE_LABEL)])
        return rows


def confusion(
    gold_codes: Sequence[int],
    pred_codes: Sequence[int | None],
    codes: Sequence[int] | None = None,
) -> ConfusionMatrix:
    """Build a confusion matrix from aligned gold/predicted code sequences;
    None predictions land in the 'none' column."""
    if len(gold_codes) != len(pred_codes):
        raise InputError(
            f"gold/prediction length mismatch: {len(gold_codes)} vs {len(pred_codes)}"
        )
    if codes is None:
        universe = set(gold_codes) | {c for c in pred_codes if c is not None}
        codes = sorted(universe)
    matrix = ConfusionMatrix(codes=tuple(codes))
    for g, p in zip(gold_codes, pred_codes):
        matrix.add(g, p)
    return matrix


def macro_precision(matrix: ConfusionMatrix) -> float:
    """Unweighted mean precision over predicted categories.

    Categories never predicted are excluded from the mean (exposed via
    ``matrix.never_predicted()``); the 'none' column is an abstention, not a
    category, and does not enter the mean.
    """
    if matrix.total() == 0:
        raise InputError("confusion matrix is empty")
    precisions = []
    for code in matrix.codes:
        predicted = matrix.col_sum(code)
        if predicted == 0:
            continue
        precisions.append(matrix.cell(code, code) / predicted)
    if not precisions:
        return 0.0
    return sum(precisions) / len(precisions)


# ---------------------------------------------------------------------------
# Stance accuracy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StanceReport:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / (self.tp + self.tn + self.fp + self.fn)


def stance_report(preds: Sequence[int], gold: Sequence[int]) -> StanceReport:
    """Binary stance counts with support (+1) as the positive class."""
    if len(preds) != len(gold):
        raise InputError(f"prediction/gold length mismatch: {len(preds)} vs {len(gold)}")
    if not preds:
        raise InputError("cannot compute stance accuracy on empty input")
    tp = tn = fp = fn = 0
    for p, g in zip(preds, gold):
        if p not in (1, -1) or g not in (1, -1):
            raise InputError(f"polarities must be +1 or -1, got {p!r}/{g!r}")
        if p == 1 and g == 1:
            tp += 1
        elif p == -1 and g == -1:
            tn += 1
        elif p == 1 and g == -1:
            fp += 1
        else:
            fn += 1
    return StanceReport(tp=tp, tn=tn, fp=fp, fn=fn)
