import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bugsift.corpus import extract_methods
from bugsift.evaluation import load_gold_set
from bugsift.preprocess import default_filter_lists
from bugsift.query import load_bug_reports

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def lists():
    return default_filter_lists()


@pytest.fixture(scope="session")
def toy_source_dir():
    return FIXTURES / "cardgame"


@pytest.fixture(scope="session")
def toy_corpus(toy_source_dir):
    return extract_methods(toy_source_dir, source_label="cardgame")


@pytest.fixture(scope="session")
def toy_bugs():
    return load_bug_reports(FIXTURES / "bugs.jsonl")


@pytest.fixture(scope="session")
def toy_gold():
    return load_gold_set(FIXTURES / "gold.jsonl")
