"""Binary concept-by-sentence co-occurrence matrix and its observed set."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .text import Concept, Sentence


@dataclass
class CooccurrenceMatrix:
    """N x M matrix with values in [0, 1] plus the boolean mask of observed cells.

    ``observed`` defaults to the nonzero cells, which is how a freshly built
    matrix defines its observed set: the zeros are the missing values that
    imputation fills in.
    """

    values: np.ndarray
    observed: Optional[np.ndarray] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or 0 in self.values.shape:
            raise ValueError(f"expected a non-empty 2-d matrix, got shape {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("matrix has non-finite entries")
        if self.values.min() < 0 or self.values.max() > 1:
            raise ValueError("matrix values must lie in [0, 1]")
        if self.observed is None:
            self.observed = self.values != 0
        else:
            self.observed = np.asarray(self.observed, dtype=bool)
            if self.observed.shape != self.values.shape:
                raise ValueError("observed mask shape differs from the matrix")

    @property
    def n_concepts(self) -> int:
        return self.values.shape[0]

    @property
    def n_sentences(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def omega(self) -> list[tuple[int, int]]:
        return [tuple(p) for p in np.argwhere(self.observed).tolist()]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "CooccurrenceMatrix":
        ix = np.ix_(list(rows), list(cols))
        return CooccurrenceMatrix(self.values[ix], self.observed[ix])


def build_matrix(sentences: Sequence[Sentence], concepts: Sequence[Concept]) -> CooccurrenceMatrix:
    """A[i, j] = 1 iff concept i occurs as an adjacent pair in sentence j.

    Bigrams of a sentence that are not in ``concepts`` (stopword pairs) are
    ignored.
    """
    if not sentences or not concepts:
        raise ValueError("need at least one sentence and one concept")
    if [s.sentence_id for s in sentences] != list(range(len(sentences))):
        raise ValueError("sentence ids must be contiguous from 0")
    if [c.concept_id for c in concepts] != list(range(len(concepts))):
        raise ValueError("concept ids must be contiguous from 0")
    index = {c.bigram: c.concept_id for c in concepts}
    values = np.zeros((len(concepts), len(sentences)))
    for j, sentence in enumerate(sentences):
        for bigram in sentence.bigrams():
            i = index.get(bigram)
            if i is not None:
                values[i, j] = 1.0
    return CooccurrenceMatrix(values)


def density(matrix) -> float:
    values = matrix.values if hasattr(matrix, "values") else np.asarray(matrix)
    return float(np.count_nonzero(values) / values.size)


def associations_above(matrix, threshold: float) -> list[tuple[int, int, float]]:
    """Unobserved cells with value >= ``threshold``.

    ``matrix`` is anything with ``values`` and ``observed`` arrays (a
    CooccurrenceMatrix or an ImputedMatrix). Returns (sentence, concept,
    value) triples, highest value first.
    """
    if not 0 <= threshold <= 1:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    values = np.asarray(matrix.values)
    hits = np.argwhere((values >= threshold) & ~np.asarray(matrix.observed))
    out = [(int(j), int(i), float(values[i, j])) for i, j in hits]
    out.sort(key=lambda t: (-t[2], t[0], t[1]))
    return out


def write_matrix(values: np.ndarray, path) -> None:
    """Dump as "N M" followed by one row per line, 6 significant digits."""
    values = np.asarray(values)
    lines = [f"{values.shape[0]} {values.shape[1]}"]
    lines.extend(" ".join(f"{x:.6g}" for x in row) for row in values)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_matrix(path) -> np.ndarray:
    lines = Path(path).read_text(encoding="utf-8").split("\n")
    n, m = (int(x) for x in lines[0].split())
    rows = [[float(x) for x in line.split()] for line in lines[1 : n + 1]]
    values = np.array(rows, dtype=float).reshape(n, m)
    return values
