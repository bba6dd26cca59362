from pathlib import Path

import numpy as np
import pytest

from impsum import ilp
from impsum.corpus import fixture_corpus_path, load_corpus
from impsum.text import corpus_sentences, default_stopwords

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def stopwords():
    return default_stopwords()


@pytest.fixture(scope="session")
def table1_corpus():
    return load_corpus(DATA / "table1.jsonl")


@pytest.fixture(scope="session")
def table1_sentences(table1_corpus):
    return corpus_sentences(table1_corpus.responses)


@pytest.fixture(scope="session")
def fixture_corpus():
    return load_corpus(fixture_corpus_path())


def random_problem(rng, z_mode, max_m=14, max_n=30, binary=None):
    """Random selection problem in the ranges used by the oracle suites."""
    m = int(rng.integers(1, max_m + 1))
    n = int(rng.integers(1, max_n + 1))
    if binary is None:
        binary = z_mode == ilp.BINARY
    if binary:
        a = (rng.random((n, m)) < 0.25).astype(float)
    else:
        a = np.where(rng.random((n, m)) < 0.3, rng.random((n, m)), 0.0)
    return ilp.SelectionProblem(
        matrix=a,
        weights=rng.integers(1, 6, n),
        lengths=rng.integers(3, 13, m),
        word_budget=int(rng.integers(10, 31)),
        z_mode=z_mode,
    )
