"""Ranked-list evaluation: MRR, MAP, Top-N, and significance statistics.

MAP uses the fixed gold-set size as the per-bug denominator, so gold
methods never retrieved (including ones absent from the corpus) depress
the score. Bugs with no surviving results contribute 0 to both means.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from .sifter import RankedList

TOP_N_DEFAULT = (1, 5, 10, 20)

# pooled sample size up to which the rank-sum p-value is computed by
# exact enumeration instead of the normal approximation
_EXACT_LIMIT = 14


class EvalError(Exception):
    pass


def load_gold_set(path: str | Path) -> dict[str, set[str]]:
    """Load line-delimited JSON gold sets: {"bug_id": ..., "methods": [...]}."""
    gold: dict[str, set[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise EvalError(f"{path}: malformed record at line {lineno}: {exc}") from exc
            bug_id = str(rec.get("bug_id", ""))
            methods = rec.get("methods", [])
            if not bug_id or not methods:
                raise EvalError(f"{path}: line {lineno}: gold record needs bug_id and non-empty methods")
            if bug_id in gold:
                raise EvalError(f"{path}: duplicate gold bug id: {bug_id}")
            gold[bug_id] = set(methods)
    return gold


def average_precision(ranked: RankedList, relevant: set[str]) -> float:
    """Mean of precision-at-r over relevant ranks, over the full gold size."""
    if not relevant:
        raise EvalError("relevant set must be non-empty")
    hits = 0
    precision_sum = 0.0
    for r, entry in enumerate(ranked.entries, start=1):
        if entry.method_id in relevant:
            hits += 1
            precision_sum += hits / r
    return precision_sum / len(relevant)


def reciprocal_rank(ranked: RankedList, relevant: set[str]) -> float:
    if not relevant:
        raise EvalError("relevant set must be non-empty")
    rank = first_hit_rank(ranked, relevant)
    return 0.0 if rank is None else 1.0 / rank


def first_hit_rank(ranked: RankedList, relevant: set[str]) -> int | None:
    for r, entry in enumerate(ranked.entries, start=1):
        if entry.method_id in relevant:
            return r
    return None


@dataclass(frozen=True)
class PerBugResult:
    reciprocal_rank: float
    average_precision: float
    first_hit_rank: int | None


@dataclass(frozen=True)
class EvalReport:
    per_bug: dict[str, PerBugResult]
    mrr: float
    map: float
    top_n: dict[int, int]
    bugs_evaluated: int

    def top_n_fraction(self, n: int) -> float:
        return self.top_n[n] / self.bugs_evaluated if self.bugs_evaluated else 0.0


def evaluate(results: dict[str, RankedList], gold: dict[str, set[str]],
             ns: tuple[int, ...] = TOP_N_DEFAULT) -> EvalReport:
    """Score ranked lists against the gold set over all gold bugs.

    Gold bugs without a result list count as total misses; a result for
    a bug absent from the gold set is an error.
    """
    unknown = sorted(set(results) - set(gold))
    if unknown:
        raise EvalError(f"result for bug id(s) not in gold set: {', '.join(unknown)}")
    per_bug: dict[str, PerBugResult] = {}
    empty = RankedList(bug_id="", entries=())
    for bug_id in sorted(gold):
        ranked = results.get(bug_id, empty)
        per_bug[bug_id] = PerBugResult(
            reciprocal_rank=reciprocal_rank(ranked, gold[bug_id]),
            average_precision=average_precision(ranked, gold[bug_id]),
            first_hit_rank=first_hit_rank(ranked, gold[bug_id]),
        )
    count = len(gold)
    mrr = sum(p.reciprocal_rank for p in per_bug.values()) / count if count else 0.0
    map_ = sum(p.average_precision for p in per_bug.values()) / count if count else 0.0
    top_n = {
        n: sum(1 for p in per_bug.values() if p.first_hit_rank is not None and p.first_hit_rank <= n)
        for n in ns
    }
    return EvalReport(per_bug=per_bug, mrr=mrr, map=map_, top_n=top_n, bugs_evaluated=count)


def _midranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mid = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mid
        i = j + 1
    return ranks


def wilcoxon_rank_sum(a: list[float], b: list[float]) -> float:
    """Two-sided rank-sum p-value.

    Exact enumeration over rank assignments for small pooled samples;
    normal approximation with tie correction and continuity correction
    otherwise. Identical samples give p = 1.0 by convention.
    """
    n, m = len(a), len(b)
    if n < 1 or m < 1:
        raise EvalError("both samples must be non-empty")
    pooled = list(a) + list(b)
    if len(set(pooled)) == 1:
        return 1.0
    ranks = _midranks(pooled)
    w = sum(ranks[:n])
    mu = n * (n + m + 1) / 2
    dev = abs(w - mu)
    if n + m <= _EXACT_LIMIT:
        total = 0
        extreme = 0
        for combo in combinations(range(n + m), n):
            total += 1
            if abs(sum(ranks[i] for i in combo) - mu) >= dev - 1e-9:
                extreme += 1
        return extreme / total
    # tie correction over pooled rank groups
    tie_sum = 0
    seen: dict[float, int] = {}
    for v in pooled:
        seen[v] = seen.get(v, 0) + 1
    for t in seen.values():
        tie_sum += t ** 3 - t
    total_n = n + m
    var = n * m / 12 * ((total_n + 1) - tie_sum / (total_n * (total_n - 1)))
    if var <= 0:
        return 1.0
    z = max(dev - 0.5, 0.0) / math.sqrt(var)
    return min(1.0, math.erfc(z / math.sqrt(2)))


_DELTA_BANDS = ((0.147, "negligible"), (0.33, "small"), (0.474, "medium"))


def cliffs_delta(a: list[float], b: list[float]) -> float:
    """Cliff's delta in [-1, 1]: P(a > b) - P(a < b) over all pairs."""
    if not a or not b:
        raise EvalError("both samples must be non-empty")
    greater = sum(1 for x in a for y in b if x > y)
    less = sum(1 for x in a for y in b if x < y)
    return (greater - less) / (len(a) * len(b))


def effect_size_label(delta: float) -> str:
    """Magnitude band for a Cliff's delta value."""
    mag = abs(delta)
    for threshold, label in _DELTA_BANDS:
        if mag < threshold:
            return label
    return "large"


def format_report_table(report: EvalReport, label: str = "") -> str:
    """Human-readable six-column table plus derived Top-N percentages."""
    ns = sorted(report.top_n)
    header = ["MRR", "MAP"] + [f"Top{n}" for n in ns]
    row = [f"{report.mrr:.3f}", f"{report.map:.3f}"] + [str(report.top_n[n]) for n in ns]
    pct = ["", ""] + [f"{100 * report.top_n_fraction(n):.1f}%" for n in ns]
    widths = [max(len(h), len(r), len(p)) for h, r, p in zip(header, row, pct)]
    lines = []
    if label:
        lines.append(label)
    lines.append("  ".join(h.rjust(w) for h, w in zip(header, widths)))
    lines.append("  ".join(r.rjust(w) for r, w in zip(row, widths)))
    lines.append("  ".join(p.rjust(w) for p, w in zip(pct, widths)) + "  (share of bugs)")
    lines.append(f"bugs evaluated: {report.bugs_evaluated}")
    return "\n".join(lines)


def report_to_dict(report: EvalReport) -> dict:
    return {
        "mrr": report.mrr,
        "map": report.map,
        "top_n": {str(n): c for n, c in sorted(report.top_n.items())},
        "top_n_fraction": {
            str(n): report.top_n_fraction(n) for n in sorted(report.top_n)
        },
        "bugs_evaluated": report.bugs_evaluated,
        "per_bug": {
            bug: {
                "reciprocal_rank": p.reciprocal_rank,
                "average_precision": p.average_precision,
                "first_hit_rank": p.first_hit_rank,
            }
            for bug, p in sorted(report.per_bug.items())
        },
    }
