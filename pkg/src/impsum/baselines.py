"""SumBasic, LexRank and the ILP without imputation."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import ilp
from .text import Concept, Sentence, StopwordList, default_stopwords

MAX_POWER_ITERATIONS = 10_000


class PowerIterationError(RuntimeError):
    pass


@dataclass(frozen=True)
class BaselineConfig:
    word_budget: int = 30
    lexrank_similarity_threshold: float = 0.1
    lexrank_damping: float = 0.85
    lexrank_epsilon: float = 1e-6

    def __post_init__(self):
        if not 0 < self.lexrank_damping < 1:
            raise ValueError("damping must be in (0, 1)")
        if self.lexrank_similarity_threshold < 0 or self.lexrank_epsilon <= 0:
            raise ValueError("thresholds must be non-negative")
        if self.word_budget < 0:
            raise ValueError("word budget must be >= 0")


def _plain_summary(sentences: Sequence[Sentence], chosen: Sequence[int]) -> ilp.Summary:
    chosen = tuple(sorted(chosen))
    words = sum(sentences[j].word_count for j in chosen)
    return ilp.Summary(chosen, np.zeros(0), 0.0, words, exact=False)


def sumbasic(sentences: Sequence[Sentence], word_budget: int,
             stopwords: Optional[StopwordList] = None) -> ilp.Summary:
    """SumBasic with probability squaring.

    Word probabilities are unigram frequencies of the non-stopword tokens.
    Each round takes the most probable word (ties: first occurrence), picks
    the unselected sentence containing it that fits the remaining budget and
    has the highest mean word probability (ties: lower index), then squares
    the probabilities of the chosen sentence's words. When no sentence with
    the top word fits, the next word is tried.
    """
    stopwords = stopwords or default_stopwords()
    content = [[t for t in s.tokens if t not in stopwords] for s in sentences]
    counts = Counter(t for toks in content for t in toks)
    total = sum(counts.values())
    if not total:
        return _plain_summary(sentences, [])
    first_seen = {}
    for toks in content:
        for t in toks:
            first_seen.setdefault(t, len(first_seen))
    prob = {t: c / total for t, c in counts.items()}

    chosen: list[int] = []
    used = 0
    while True:
        words = sorted(prob, key=lambda t: (-prob[t], first_seen[t]))
        pick = None
        for word in words:
            candidates = [
                j for j, toks in enumerate(content)
                if j not in chosen and word in toks and used + sentences[j].word_count <= word_budget
            ]
            if candidates:
                pick = max(candidates, key=lambda j: (np.mean([prob[t] for t in content[j]]), -j))
                break
        if pick is None:
            break
        chosen.append(pick)
        used += sentences[pick].word_count
        for t in set(content[pick]):
            prob[t] = prob[t] ** 2
    return _plain_summary(sentences, chosen)


def _tfidf_vectors(sentences: Sequence[Sentence]) -> np.ndarray:
    vocab = sorted({t for s in sentences for t in s.tokens})
    index = {t: k for k, t in enumerate(vocab)}
    m = len(sentences)
    tf = np.zeros((m, len(vocab)))
    for j, s in enumerate(sentences):
        for t, c in Counter(s.tokens).items():
            tf[j, index[t]] = c
    df = (tf > 0).sum(axis=0)
    idf = np.log(m / df)
    return tf * idf


def lexrank_scores(sentences: Sequence[Sentence], config: BaselineConfig = BaselineConfig()) -> np.ndarray:
    """Damped eigenvector centrality over the thresholded cosine graph.

    Edges join distinct sentences whose tf-idf cosine is positive and at
    least the threshold. A sentence with no edges spreads its mass uniformly.
    """
    m = len(sentences)
    if m == 0:
        raise ValueError("no sentences")
    vec = _tfidf_vectors(sentences)
    norms = np.linalg.norm(vec, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = vec / safe[:, None]
    sim = unit @ unit.T
    adj = ((sim >= config.lexrank_similarity_threshold) & (sim > 0)).astype(float)
    np.fill_diagonal(adj, 0.0)
    degree = adj.sum(axis=1)
    transition = np.where(degree[:, None] > 0, adj / np.where(degree > 0, degree, 1.0)[:, None], 1.0 / m)

    d = config.lexrank_damping
    p = np.full(m, 1.0 / m)
    for _ in range(MAX_POWER_ITERATIONS):
        nxt = (1 - d) / m + d * (transition.T @ p)
        if np.abs(nxt - p).sum() < config.lexrank_epsilon:
            return nxt / nxt.sum()
        p = nxt
    raise PowerIterationError(f"power iteration did not converge in {MAX_POWER_ITERATIONS} steps")


def lexrank(sentences: Sequence[Sentence], config: BaselineConfig = BaselineConfig()) -> ilp.Summary:
    scores = lexrank_scores(sentences, config)
    order = sorted(range(len(sentences)), key=lambda j: (-scores[j], j))
    chosen, used = [], 0
    for j in order:
        if used + sentences[j].word_count <= config.word_budget:
            chosen.append(j)
            used += sentences[j].word_count
    return _plain_summary(sentences, chosen)


def document_problem(sentences: Sequence[Sentence], concepts: Sequence[Concept], matrix: np.ndarray,
                     word_budget: int, z_mode: str) -> ilp.SelectionProblem:
    return ilp.SelectionProblem(
        matrix=matrix,
        weights=[c.weight for c in concepts],
        lengths=[s.word_count for s in sentences],
        word_budget=word_budget,
        z_mode=z_mode,
    )


def binary_matrix(sentences: Sequence[Sentence], concepts: Sequence[Concept]) -> np.ndarray:
    index = {c.bigram: k for k, c in enumerate(concepts)}
    a = np.zeros((len(concepts), len(sentences)))
    for j, s in enumerate(sentences):
        for bigram in s.bigrams():
            k = index.get(bigram)
            if k is not None:
                a[k, j] = 1.0
    return a


def ilp_baseline(sentences: Sequence[Sentence], concepts: Sequence[Concept], word_budget: int) -> ilp.Summary:
    """Exact ILP on the binary matrix of this document's sentences."""
    if not concepts:
        return _plain_summary(sentences, [])
    problem = document_problem(sentences, concepts, binary_matrix(sentences, concepts), word_budget, ilp.BINARY)
    return ilp.solve_exact(problem)
