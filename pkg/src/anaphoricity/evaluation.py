"""Recall/precision/F1 scoring, globally per class and per mention type.

Percentages are rounded half-up to two decimals for reporting; the raw
fractions stay available for programmatic comparison.  Cells with an empty
denominator report 0 (the 0/0 -> 0 convention).
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

import numpy as np

from .corpus import Anaphoricity, Mention, MentionType

__all__ = [
    "TYPE_BUCKETS",
    "ClassScore",
    "EvalReport",
    "as_pct",
    "bucket_of_type",
    "format_report",
    "report_tsv",
    "score",
    "score_buckets",
    "score_by_type",
    "type_bucket",
]

CLASS_NAMES = ("non-anaphoric", "anaphoric")
TYPE_BUCKETS = ("proper-names", "common-nouns", "pronouns", "other")

_BUCKET_OF_TYPE = {
    MentionType.PROPER: "proper-names",
    MentionType.NOMINAL_DEFINITE: "common-nouns",
    MentionType.NOMINAL_INDEFINITE: "common-nouns",
    MentionType.PRONOUN: "pronouns",
    MentionType.LIST: "other",
    MentionType.OTHER: "other",
}


def as_pct(fraction: float) -> float:
    """Percentage with two decimals, rounded half-up."""
    return float(
        (Decimal(fraction) * 100).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)
    )


@dataclass(frozen=True)
class ClassScore:
    tp: int
    fp: int
    fn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    @property
    def precision_pct(self) -> float:
        return as_pct(self.precision)

    @property
    def recall_pct(self) -> float:
        return as_pct(self.recall)

    @property
    def f1_pct(self) -> float:
        return as_pct(self.f1)


@dataclass
class EvalReport:
    """Global two-class scores plus the anaphoric-class per-type breakdown."""

    per_class: dict[str, ClassScore]
    by_type: dict[str, ClassScore]


def _to_int_labels(labels: Iterable) -> np.ndarray:
    return np.array([int(v) for v in labels], dtype=np.int64)


def score(gold: Sequence, predicted: Sequence) -> dict[str, ClassScore]:
    """Per-class recall/precision/F1 over aligned binary label sequences."""
    g = _to_int_labels(gold)
    p = _to_int_labels(predicted)
    if len(g) != len(p):
        raise ValueError(f"length mismatch: {len(g)} gold vs {len(p)} predicted labels")
    out: dict[str, ClassScore] = {}
    for cls_value, cls_name in enumerate(CLASS_NAMES):
        tp = int(np.sum((g == cls_value) & (p == cls_value)))
        fp = int(np.sum((g != cls_value) & (p == cls_value)))
        fn = int(np.sum((g == cls_value) & (p != cls_value)))
        out[cls_name] = ClassScore(tp, fp, fn)
    return out


def type_bucket(mention: Mention) -> str:
    return _BUCKET_OF_TYPE[mention.mention_type]


def bucket_of_type(mention_type: MentionType) -> str:
    return _BUCKET_OF_TYPE[mention_type]


def score_buckets(
    gold: Sequence, predicted: Sequence, buckets: Sequence[str]
) -> EvalReport:
    """Global scores plus anaphoric-class counts within each named bucket."""
    g = _to_int_labels(gold)
    p = _to_int_labels(predicted)
    if not len(g) == len(p) == len(buckets):
        raise ValueError(
            f"length mismatch: {len(g)} gold, {len(p)} predicted, {len(buckets)} buckets"
        )
    unknown = set(buckets) - set(TYPE_BUCKETS)
    if unknown:
        raise ValueError(f"unknown type buckets: {sorted(unknown)}")
    by_type: dict[str, ClassScore] = {}
    for bucket in TYPE_BUCKETS:
        idx = [i for i, b in enumerate(buckets) if b == bucket]
        tp = sum(1 for i in idx if g[i] == 1 and p[i] == 1)
        fp = sum(1 for i in idx if g[i] == 0 and p[i] == 1)
        fn = sum(1 for i in idx if g[i] == 1 and p[i] == 0)
        by_type[bucket] = ClassScore(tp, fp, fn)
    return EvalReport(per_class=score(g, p), by_type=by_type)


def score_by_type(
    mentions: Sequence[Mention], predicted: Sequence
) -> EvalReport:
    """Global scores plus anaphoric-class counts within each type bucket
    (buckets are taken from the gold-side mention types)."""
    return score_buckets(
        [int(m.gold_label) for m in mentions],
        predicted,
        [type_bucket(m) for m in mentions],
    )


# ---------------------------------------------------------------------------
# Report rendering
# ---------------------------------------------------------------------------

_ROW_LABELS = {
    "non-anaphoric": "Non-Anaphoric",
    "anaphoric": "Anaphoric",
    "proper-names": "Proper names",
    "common-nouns": "Common nouns",
    "pronouns": "Pronouns",
    "other": "Other",
}


def _table(title: str, rows: dict[str, ClassScore]) -> list[str]:
    lines = [title, f"  {'':<16}{'R':>8}{'P':>8}{'F1':>8}"]
    for key, cell in rows.items():
        lines.append(
            f"  {_ROW_LABELS[key]:<16}"
            f"{cell.recall_pct:>8.2f}{cell.precision_pct:>8.2f}{cell.f1_pct:>8.2f}"
        )
    return lines


def format_report(report: EvalReport) -> str:
    lines = _table("Overall", report.per_class)
    lines.append("")
    lines.extend(_table("Anaphoric mentions by type", report.by_type))
    return "\n".join(lines) + "\n"


def report_tsv(report: EvalReport) -> str:
    """Machine-readable rows: name, tp, fp, fn, R, P, F1."""
    lines = ["\t".join(["name", "tp", "fp", "fn", "recall", "precision", "f1"])]
    for name, cell in list(report.per_class.items()) + list(report.by_type.items()):
        lines.append(
            "\t".join(
                [
                    name,
                    str(cell.tp),
                    str(cell.fp),
                    str(cell.fn),
                    f"{cell.recall_pct:.2f}",
                    f"{cell.precision_pct:.2f}",
                    f"{cell.f1_pct:.2f}",
                ]
            )
        )
    return "\n".join(lines) + "\n"
