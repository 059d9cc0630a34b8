"""Local-vs-global score sifting and final ranking.

A method's local score (against one bug's query) is compared with its
global score (against the grand query). FILTER keeps only methods whose
local score beats the global one; DIFF re-ranks by the local-global
difference; OFF keeps the plain ranking. Zero-local-score methods never
survive in any mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path


class SiftMode(str, Enum):
    FILTER = "filter"
    DIFF = "diff"
    OFF = "off"


@dataclass(frozen=True)
class RankedEntry:
    method_id: str
    rank_score: float
    local_score: float


@dataclass(frozen=True)
class RankedList:
    bug_id: str
    entries: tuple[RankedEntry, ...]

    def method_ids(self) -> list[str]:
        return [e.method_id for e in self.entries]


def sift(bug_id: str, local_scores: list[tuple[str, float]],
         global_scores: dict[str, float], mode: SiftMode = SiftMode.FILTER) -> RankedList:
    """Produce the final ranked list for one bug.

    local_scores are raw (method_id, score) pairs for the bug's boosted
    query; global_scores maps method_id to its grand-query score, with
    missing methods treated as 0.
    """
    entries = []
    for method_id, local in local_scores:
        if local <= 0.0:
            continue
        glob = global_scores.get(method_id, 0.0)
        if mode is SiftMode.FILTER:
            if local > glob:
                entries.append(RankedEntry(method_id, local, local))
        elif mode is SiftMode.DIFF:
            entries.append(RankedEntry(method_id, local - glob, local))
        else:
            entries.append(RankedEntry(method_id, local, local))
    entries.sort(key=lambda e: (-e.rank_score, e.method_id))
    return RankedList(bug_id=bug_id, entries=tuple(entries))


def truncate_top_fraction(ranked: RankedList, fraction: float) -> RankedList:
    """Keep the top ceil(fraction * size) entries."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    keep = math.ceil(fraction * len(ranked.entries))
    return RankedList(bug_id=ranked.bug_id, entries=ranked.entries[:keep])


def write_results(results: dict[str, RankedList], path: str | Path) -> None:
    """Tab-separated results: bug_id, rank, method_id, rank_score, local_score."""
    with open(path, "w", encoding="utf-8") as fh:
        for bug_id in sorted(results):
            for rank, e in enumerate(results[bug_id].entries, start=1):
                fh.write(f"{bug_id}\t{rank}\t{e.method_id}\t{e.rank_score!r}\t{e.local_score!r}\n")


def read_results(path: str | Path) -> dict[str, RankedList]:
    per_bug: dict[str, list[RankedEntry]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 5:
                raise ValueError(f"{path}: bad results row at line {lineno}")
            bug_id, _, method_id, rank_score, local_score = parts
            per_bug.setdefault(bug_id, []).append(
                RankedEntry(method_id, float(rank_score), float(local_score))
            )
    return {b: RankedList(bug_id=b, entries=tuple(v)) for b, v in per_bug.items()}
