"""Text normalization shared by code and bug-report inputs.

Pipeline: tokenize on non-alphanumeric boundaries, split identifiers
(code only, originals retained), lowercase, drop stop words and (for
code) language keywords, drop single-character terms, Porter-stem.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import porter

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+")

# camelCase humps, acronym runs, lowercase runs, digit runs
_SPLIT_RE = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]+(?![a-z])|[A-Z][a-z]*|[a-z]+|[0-9]+")

MIN_TERM_LEN = 2


@dataclass(frozen=True)
class FilterLists:
    stop_words: frozenset[str]
    language_keywords: frozenset[str]


def _read_terms(text: str) -> frozenset[str]:
    terms = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            terms.add(line)
    return frozenset(terms)


def load_term_file(path: str | Path) -> frozenset[str]:
    """Load a one-term-per-line list; '#' starts a comment."""
    return _read_terms(Path(path).read_text(encoding="utf-8"))


def default_filter_lists() -> FilterLists:
    data = resources.files("bugsift.data")
    return FilterLists(
        stop_words=_read_terms(data.joinpath("stopwords.txt").read_text(encoding="utf-8")),
        language_keywords=_read_terms(data.joinpath("java_keywords.txt").read_text(encoding="utf-8")),
    )


def split_identifier(identifier: str) -> list[str]:
    """Split an identifier at camelCase, underscore and digit boundaries.

    The original identifier is always the first element; identifiers
    with no split points yield just themselves.
    """
    if not identifier:
        raise ValueError("empty identifier")
    parts = _SPLIT_RE.findall(identifier)
    if parts == [identifier]:
        return [identifier]
    return [identifier] + parts


def stem(term: str) -> str:
    """Porter stem of a lowercase term."""
    return porter.stem(term)


def preprocess_text(raw: str, lists: FilterLists, is_code: bool = False) -> list[str]:
    """Normalize raw text into an ordered list of lowercase stemmed terms."""
    terms: list[str] = []
    for token in _TOKEN_RE.findall(raw):
        candidates = split_identifier(token) if is_code else [token]
        for cand in candidates:
            cand = cand.lower()
            if len(cand) < MIN_TERM_LEN:
                continue
            if cand in lists.stop_words:
                continue
            if is_code and cand in lists.language_keywords:
                continue
            stemmed = porter.stem(cand)
            if len(stemmed) < MIN_TERM_LEN or stemmed in lists.stop_words:
                continue
            if is_code and stemmed in lists.language_keywords:
                continue
            terms.append(stemmed)
    return terms
