"""Pipeline configuration, named presets, and the end-to-end run.

Presets:
  boostnsift    weights (3,1,2), sift FILTER, grand MEAN, k=1.2, b=0.75
  boostnsift10  boostnsift plus top-10% truncation
  bns_qb        boosting only (sift OFF)
  bns_cs        sifting only (uniform weights)
  plain_bm25    uniform weights, sift OFF
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

from .corpus import Corpus
from .index import Bm25Params, Index, build_index, score
from .preprocess import FilterLists
from .query import (BoostWeights, BugReport, GrandMode, QueryError, boost,
                    grand_query)
from .sifter import RankedList, SiftMode, sift, truncate_top_fraction


@dataclass(frozen=True)
class PipelineConfig:
    boost_weights: BoostWeights = BoostWeights(3.0, 1.0, 2.0)
    sift_mode: SiftMode = SiftMode.FILTER
    grand_mode: GrandMode = GrandMode.MEAN
    bm25: Bm25Params = Bm25Params(1.2, 0.75)
    truncate_fraction: float | None = None

    def to_dict(self) -> dict:
        return {
            "alpha": self.boost_weights.alpha,
            "beta": self.boost_weights.beta,
            "gamma": self.boost_weights.gamma,
            "sift_mode": self.sift_mode.value,
            "grand_mode": self.grand_mode.value,
            "k": self.bm25.k,
            "b": self.bm25.b,
            "truncate_fraction": self.truncate_fraction,
        }


_PRESETS = {
    "boostnsift": PipelineConfig(),
    "boostnsift10": PipelineConfig(truncate_fraction=0.10),
    "bns_qb": PipelineConfig(sift_mode=SiftMode.OFF),
    "bns_cs": PipelineConfig(boost_weights=BoostWeights(1.0, 1.0, 1.0)),
    "plain_bm25": PipelineConfig(
        boost_weights=BoostWeights(1.0, 1.0, 1.0), sift_mode=SiftMode.OFF
    ),
}


def preset(name: str) -> PipelineConfig:
    try:
        return _PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; choose from {', '.join(sorted(_PRESETS))}"
        ) from None


def preset_names() -> list[str]:
    return sorted(_PRESETS)


def apply_overrides(config: PipelineConfig, overrides: dict) -> PipelineConfig:
    """Override individual config fields from a flat key-value mapping."""
    w = config.boost_weights
    if {"alpha", "beta", "gamma"} & overrides.keys():
        w = BoostWeights(
            float(overrides.get("alpha", w.alpha)),
            float(overrides.get("beta", w.beta)),
            float(overrides.get("gamma", w.gamma)),
        )
    bm = config.bm25
    if {"k", "b"} & overrides.keys():
        bm = Bm25Params(float(overrides.get("k", bm.k)), float(overrides.get("b", bm.b)))
    cfg = replace(config, boost_weights=w, bm25=bm)
    if "sift_mode" in overrides:
        cfg = replace(cfg, sift_mode=SiftMode(str(overrides["sift_mode"]).lower()))
    if "grand_mode" in overrides:
        cfg = replace(cfg, grand_mode=GrandMode(str(overrides["grand_mode"]).lower()))
    if "truncate_fraction" in overrides:
        value = overrides["truncate_fraction"]
        cfg = replace(cfg, truncate_fraction=None if value is None else float(value))
    return cfg


@dataclass
class RunResult:
    results: dict[str, RankedList]
    skipped_bugs: list[str]
    timings_ms: dict[str, float]
    index: Index


def run_pipeline(corpus: Corpus, reports: list[BugReport], config: PipelineConfig,
                 lists: FilterLists, index: Index | None = None) -> RunResult:
    """Index, boost, score, and sift every bug report against the corpus.

    Bug reports that preprocess to an empty query are skipped and named
    in skipped_bugs; the run continues.
    """
    timings: dict[str, float] = {}

    t0 = time.perf_counter()
    if index is None:
        index = build_index(corpus, lists)
    timings["index"] = (time.perf_counter() - t0) * 1000

    t0 = time.perf_counter()
    queries = []
    skipped = []
    for report in reports:
        try:
            queries.append(boost(report, config.boost_weights, lists))
        except QueryError:
            skipped.append(report.bug_id)
    grand = grand_query(queries, config.grand_mode) if queries else None
    timings["query"] = (time.perf_counter() - t0) * 1000

    t0 = time.perf_counter()
    results: dict[str, RankedList] = {}
    if grand is not None:
        global_scores = dict(score(grand, index, config.bm25))
        for q in queries:
            local = score(q, index, config.bm25)
            ranked = sift(q.origin, local, global_scores, config.sift_mode)
            if config.truncate_fraction is not None:
                ranked = truncate_top_fraction(ranked, config.truncate_fraction)
            results[q.origin] = ranked
    timings["sift"] = (time.perf_counter() - t0) * 1000

    return RunResult(results=results, skipped_bugs=skipped, timings_ms=timings, index=index)
