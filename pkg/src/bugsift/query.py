"""Boosted query construction from bug reports.

Each bug report field (title, description, joined comments) is
preprocessed separately; a term's query weight is the weighted sum of
its per-field frequencies. All per-bug queries can be aggregated into a
single grand query that acts as the "average bug report".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from pathlib import Path

from .preprocess import FilterLists, preprocess_text

GRAND = "__GRAND__"


class QueryError(Exception):
    pass


@dataclass(frozen=True)
class BugReport:
    bug_id: str
    title: str
    description: str
    comments: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.title and not self.description:
            raise QueryError(f"bug {self.bug_id}: title and description both empty")


@dataclass(frozen=True)
class BoostWeights:
    alpha: float = 3.0  # title
    beta: float = 1.0   # description
    gamma: float = 2.0  # comments

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ValueError("boost weights must be non-negative")
        if self.alpha == self.beta == self.gamma == 0:
            raise ValueError("boost weights must not all be zero")


@dataclass(frozen=True)
class BoostedQuery:
    weights: dict[str, float]
    origin: str

    def __post_init__(self):
        if any(w <= 0 for w in self.weights.values()):
            raise QueryError(f"query {self.origin}: non-positive term weight")


class GrandMode(str, Enum):
    MEAN = "mean"
    SUM = "sum"


def _term_counts(text: str, lists: FilterLists) -> dict[str, int]:
    counts: dict[str, int] = {}
    for t in preprocess_text(text, lists, is_code=False):
        counts[t] = counts.get(t, 0) + 1
    return counts


def field_term_counts(report: BugReport, lists: FilterLists) -> tuple[dict[str, int], ...]:
    """Per-field term frequencies (title, description, comments joined)."""
    return (
        _term_counts(report.title, lists),
        _term_counts(report.description, lists),
        _term_counts("\n".join(report.comments), lists),
    )


def boost_from_counts(bug_id: str, counts: tuple[dict[str, int], ...],
                      w: BoostWeights) -> BoostedQuery:
    weights: dict[str, float] = {}
    for factor, field_counts in zip((w.alpha, w.beta, w.gamma), counts):
        if factor == 0:
            continue
        for term, count in field_counts.items():
            weights[term] = weights.get(term, 0.0) + factor * count
    if not weights:
        raise QueryError(f"empty query for bug {bug_id}")
    return BoostedQuery(weights=weights, origin=bug_id)


def boost(report: BugReport, w: BoostWeights, lists: FilterLists) -> BoostedQuery:
    """Build the weighted term bag for one bug report."""
    return boost_from_counts(report.bug_id, field_term_counts(report, lists), w)


def grand_query(queries: list[BoostedQuery], mode: GrandMode = GrandMode.MEAN) -> BoostedQuery:
    """Aggregate per-bug queries into the grand query."""
    if not queries:
        raise QueryError("cannot aggregate an empty query list")
    if any(q.origin == GRAND for q in queries):
        raise QueryError("grand query cannot aggregate another grand query")
    sums: dict[str, float] = {}
    for q in queries:
        for term, weight in q.weights.items():
            sums[term] = sums.get(term, 0.0) + weight
    if mode is GrandMode.MEAN:
        denom = len(queries)
        sums = {t: s / denom for t, s in sums.items()}
    return BoostedQuery(weights=sums, origin=GRAND)


def sweep_weights(range_lo: float, range_hi: float, step: float) -> list[BoostWeights]:
    """Cartesian product of an arithmetic weight sequence over (alpha, beta, gamma)."""
    if step <= 0:
        raise ValueError("step must be positive")
    if range_lo > range_hi:
        raise ValueError("range_lo must not exceed range_hi")
    lo, hi, inc = (Fraction(str(x)) for x in (range_lo, range_hi, step))
    count = int((hi - lo) / inc) + 1  # integer stepping, no float drift
    values = [float(lo + i * inc) for i in range(count)]
    return [BoostWeights(a, b, g) for a, b, g in product(values, repeat=3)]


def load_bug_reports(path: str | Path) -> list[BugReport]:
    """Load line-delimited JSON bug reports (id, title, description, comments)."""
    reports = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise QueryError(f"{path}: malformed record at line {lineno}: {exc}") from exc
            if "id" not in rec:
                raise QueryError(f"{path}: record at line {lineno} missing 'id'")
            if rec["id"] in seen:
                raise QueryError(f"{path}: duplicate bug id: {rec['id']}")
            seen.add(rec["id"])
            reports.append(BugReport(
                bug_id=str(rec["id"]),
                title=rec.get("title", ""),
                description=rec.get("description", ""),
                comments=tuple(rec.get("comments", ())),
            ))
    return reports
