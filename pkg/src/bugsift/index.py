"""Inverted index and saturating-TF ranking over a method corpus.

Scoring model: score(m) = sum over query terms of
w(t) * idf(t) * (k+1)*tf / (k*(1 - b + b*len/avg_len) + tf)
with idf(t) = ln(1 + (N - n + 0.5)/(n + 0.5)), which is non-negative.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .corpus import Corpus
from .preprocess import FilterLists, preprocess_text
from .query import BoostedQuery

INDEX_FORMAT_VERSION = 1


class IndexError_(Exception):
    pass


@dataclass(frozen=True)
class Bm25Params:
    k: float = 1.2
    b: float = 0.75

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"k must be >= 0, got {self.k}")
        if not 0 <= self.b <= 1:
            raise ValueError(f"b must be in [0, 1], got {self.b}")


def tf_component(ti: int, doc_len: int, params: Bm25Params, avg_len: float) -> float:
    """Saturating term-frequency factor; 0 for an absent term."""
    if avg_len <= 0:
        raise IndexError_(f"avg_len must be positive, got {avg_len}")
    if ti == 0:
        return 0.0
    return ((params.k + 1) * ti) / (
        params.k * (1.0 - params.b + params.b * doc_len / avg_len) + ti
    )


@dataclass
class Index:
    postings: dict[str, list[tuple[int, int]]]  # term -> [(ordinal, tf)], sorted
    doc_lengths: list[int]
    avg_len: float
    doc_ids: list[str]  # ordinal -> method_id
    source_label: str = ""
    _ord_of: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._ord_of:
            self._ord_of = {mid: i for i, mid in enumerate(self.doc_ids)}

    @property
    def doc_count(self) -> int:
        return len(self.doc_ids)

    def doc_freq(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def idf(self, term: str) -> float:
        n = self.doc_freq(term)
        N = self.doc_count
        return math.log(1.0 + (N - n + 0.5) / (n + 0.5))

    def vocabulary_size(self) -> int:
        return len(self.postings)


def build_index(corpus: Corpus, lists: FilterLists, source_label: str = "") -> Index:
    if not corpus.documents:
        raise IndexError_("cannot index an empty corpus")
    postings: dict[str, list[tuple[int, int]]] = {}
    doc_lengths: list[int] = []
    doc_ids: list[str] = []
    for ordinal, doc in enumerate(corpus.documents):
        text = "\n".join([doc.body_text, doc.comments, *doc.literals])
        terms = preprocess_text(text, lists, is_code=True)
        doc_lengths.append(len(terms))
        doc_ids.append(doc.method_id)
        counts: dict[str, int] = {}
        for t in terms:
            counts[t] = counts.get(t, 0) + 1
        for t, c in counts.items():
            postings.setdefault(t, []).append((ordinal, c))
    avg_len = sum(doc_lengths) / len(doc_lengths)
    return Index(
        postings=postings,
        doc_lengths=doc_lengths,
        avg_len=avg_len,
        doc_ids=doc_ids,
        source_label=source_label or corpus.source_label,
    )


def score(query: BoostedQuery, index: Index, params: Bm25Params) -> list[tuple[str, float]]:
    """Rank documents for a weighted query.

    Returns (method_id, score) pairs with score > 0, sorted by
    descending score, ties broken by ascending method_id.
    """
    if index.avg_len <= 0:
        # every document tokenized to nothing; nothing can match
        return []
    acc: dict[int, float] = {}
    for term, weight in query.weights.items():
        plist = index.postings.get(term)
        if not plist:
            continue
        idf = index.idf(term)
        for ordinal, tf in plist:
            part = weight * idf * tf_component(tf, index.doc_lengths[ordinal], params, index.avg_len)
            acc[ordinal] = acc.get(ordinal, 0.0) + part
    ranked = [(index.doc_ids[o], s) for o, s in acc.items() if s > 0.0]
    ranked.sort(key=lambda pair: (-pair[1], pair[0]))
    return ranked


def save_index(index: Index, path) -> None:
    """Persist as a cache; rebuilding from the corpus is authoritative."""
    payload = {
        "format_version": INDEX_FORMAT_VERSION,
        "source_label": index.source_label,
        "doc_ids": index.doc_ids,
        "doc_lengths": index.doc_lengths,
        "avg_len": index.avg_len,
        "postings": {t: p for t, p in sorted(index.postings.items())},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False)


def load_index(path) -> Index:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    version = payload.get("format_version")
    if version != INDEX_FORMAT_VERSION:
        raise IndexError_(f"unsupported index format version: {version}")
    return Index(
        postings={t: [tuple(p) for p in plist] for t, plist in payload["postings"].items()},
        doc_lengths=payload["doc_lengths"],
        avg_len=payload["avg_len"],
        doc_ids=payload["doc_ids"],
        source_label=payload.get("source_label", ""),
    )
