"""ROUGE-N and ROUGE-SU4 with clipped counts, single reference."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

METRICS = ("rouge-1", "rouge-2", "rouge-su4")
SKIP_DISTANCE = 4


@dataclass(frozen=True)
class RougeScore:
    recall: float
    precision: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "RougeScore":
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        return cls(recall, precision, f1)


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def skip_bigrams(tokens: Sequence[str], max_distance: int = SKIP_DISTANCE) -> Counter:
    """Ordered pairs (t_a, t_b) with 0 < b - a <= max_distance."""
    units: Counter = Counter()
    for a in range(len(tokens)):
        for b in range(a + 1, min(a + max_distance, len(tokens) - 1) + 1):
            units[(tokens[a], tokens[b])] += 1
    return units


def su4_units(tokens: Sequence[str]) -> Counter:
    units = skip_bigrams(tokens)
    units.update(ngrams(tokens, 1))
    return units


def _score(system: Counter, reference: Counter) -> RougeScore:
    overlap = sum((system & reference).values())
    n_sys = sum(system.values())
    n_ref = sum(reference.values())
    recall = overlap / n_ref if n_ref else 0.0
    precision = overlap / n_sys if n_sys else 0.0
    return RougeScore.from_pr(precision, recall)


def rouge_n(system: Sequence[str], reference: Sequence[str], n: int) -> RougeScore:
    if n < 1:
        raise ValueError("n must be >= 1")
    return _score(ngrams(system, n), ngrams(reference, n))


def rouge_su4(system: Sequence[str], reference: Sequence[str]) -> RougeScore:
    return _score(su4_units(system), su4_units(reference))


def score_all(system: Sequence[str], reference: Sequence[str]) -> dict[str, RougeScore]:
    return {
        "rouge-1": rouge_n(system, reference, 1),
        "rouge-2": rouge_n(system, reference, 2),
        "rouge-su4": rouge_su4(system, reference),
    }


def macro_average(scores: Sequence[RougeScore]) -> RougeScore:
    """Average R, P and F separately, so F need not equal 2PR/(P+R)."""
    if not scores:
        raise ValueError("nothing to average")
    arr = np.array([(s.recall, s.precision, s.f1) for s in scores])
    r, p, f = arr.mean(axis=0)
    return RougeScore(float(r), float(p), float(f))


def evaluate_corpus(pairs) -> dict[str, RougeScore]:
    """Macro-averaged scores over (system tokens, reference tokens) pairs."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("no summary pairs to evaluate")
    per_pair = [score_all(sys, ref) for sys, ref in pairs]
    return {m: macro_average([p[m] for p in per_pair]) for m in METRICS}
