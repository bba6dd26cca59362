"""Concept-coverage sentence selection.

The problem is::

    max  sum_i w_i z_i
    s.t. sum_j A_ij y_j >= z_i,   A_ij y_j <= z_i,   sum_j l_j y_j <= L

with y binary. For a fixed selection the best z is ``min(1, sum_j A_ij y_j)``
(for a binary A this is the indicator "some selected sentence carries
concept i"), so every solver here works on the set function
``f(S) = sum_i w_i min(1, sum_{j in S} A_ij)``. It is monotone and
submodular, which gives the branch-and-bound bound used by ``solve_exact``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

BINARY = "binary"
CONTINUOUS = "continuous"
MAX_BRUTE_FORCE_SENTENCES = 20
DEFAULT_NODE_LIMIT = 10**7


class BudgetError(ValueError):
    pass


@dataclass
class SelectionProblem:
    matrix: np.ndarray
    weights: np.ndarray
    lengths: np.ndarray
    word_budget: int
    z_mode: str = CONTINUOUS

    def __post_init__(self):
        self.matrix = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        self.lengths = np.asarray(self.lengths, dtype=int).reshape(-1)
        n, m = self.matrix.shape
        if self.weights.shape != (n,):
            raise ValueError(f"{len(self.weights)} weights for {n} concepts")
        if self.lengths.shape != (m,):
            raise ValueError(f"{len(self.lengths)} lengths for {m} sentences")
        if (self.weights < 0).any():
            raise ValueError("weights must be non-negative")
        if (self.lengths < 1).any():
            raise ValueError("sentence lengths must be >= 1")
        if self.word_budget < 0:
            raise ValueError("word budget must be >= 0")
        if self.matrix.size and (self.matrix.min() < 0 or self.matrix.max() > 1):
            raise ValueError("matrix values must lie in [0, 1]")
        if self.z_mode not in (BINARY, CONTINUOUS):
            raise ValueError(f"unknown z_mode {self.z_mode!r}")
        if self.z_mode == BINARY and not np.isin(self.matrix, (0.0, 1.0)).all():
            raise ValueError("binary z_mode needs a 0/1 matrix")

    @property
    def n_concepts(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_sentences(self) -> int:
        return self.matrix.shape[1]

    def to_json(self) -> str:
        return json.dumps(
            {
                "matrix": self.matrix.tolist(),
                "weights": self.weights.tolist(),
                "lengths": self.lengths.tolist(),
                "budget": int(self.word_budget),
                "z_mode": self.z_mode,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "SelectionProblem":
        d = json.loads(text)
        return cls(np.array(d["matrix"], dtype=float).reshape(len(d["weights"]), len(d["lengths"])),
                   d["weights"], d["lengths"], d["budget"], d["z_mode"])


@dataclass
class Summary:
    selected: tuple
    concept_values: np.ndarray
    objective_value: float
    total_words: int
    exact: bool = False
    nodes: int = 0

    def check_feasible(self, problem: SelectionProblem, atol: float = 1e-9) -> None:
        """Raise AssertionError unless the budget and the z constraints hold."""
        sel = list(self.selected)
        assert self.total_words == int(problem.lengths[sel].sum())
        assert self.total_words <= problem.word_budget
        z = np.asarray(self.concept_values)
        a = problem.matrix[:, sel]
        assert np.all(a.sum(axis=1) >= z - atol), "coverage upper bound violated"
        assert np.all(a <= z[:, None] + atol) if sel else True, "selected concept not counted"
        assert np.all((z >= -atol) & (z <= 1 + atol))
        assert abs(float(problem.weights @ z) - self.objective_value) <= atol * max(1.0, self.objective_value)


def _canonical(selected: Iterable[int]) -> tuple:
    return tuple(sorted(int(j) for j in selected))


def _coverage(problem: SelectionProblem, selected: tuple) -> np.ndarray:
    if not selected:
        return np.zeros(problem.n_concepts)
    return np.minimum(1.0, problem.matrix[:, list(selected)].sum(axis=1))


def value_of_selection(problem: SelectionProblem, selected: Iterable[int]) -> tuple[float, np.ndarray]:
    """Objective and optimal z values for a fixed sentence selection."""
    sel = _canonical(selected)
    if len(set(sel)) != len(sel):
        raise ValueError("duplicate sentence in selection")
    words = int(problem.lengths[list(sel)].sum()) if sel else 0
    if words > problem.word_budget:
        raise BudgetError(f"selection uses {words} words, budget is {problem.word_budget}")
    z = _coverage(problem, sel)
    return float(problem.weights @ z), z


def _make_summary(problem, selected, exact, nodes=0) -> Summary:
    sel = _canonical(selected)
    obj, z = value_of_selection(problem, sel)
    words = int(problem.lengths[list(sel)].sum()) if sel else 0
    return Summary(sel, z, obj, words, exact, nodes)


def _key(obj: float, words: int, sel: tuple):
    """Sort key where smaller is better: higher objective, fewer words, lexicographic."""
    return (-obj, words, sel)


def solve_brute_force(problem: SelectionProblem) -> Summary:
    m = problem.n_sentences
    if m > MAX_BRUTE_FORCE_SENTENCES:
        raise ValueError(f"{m} sentences is too many to enumerate; use solve_exact")
    best = None
    for r in range(m + 1):
        for sel in itertools.combinations(range(m), r):
            words = int(problem.lengths[list(sel)].sum()) if sel else 0
            if words > problem.word_budget:
                continue
            obj = float(problem.weights @ _coverage(problem, sel))
            key = _key(obj, words, sel)
            if best is None or key < best:
                best = key
    return _make_summary(problem, best[2], exact=True, nodes=2**m)


def solve_greedy(problem: SelectionProblem) -> Summary:
    """Best of ratio-greedy and the best single sentence.

    Ratio-greedy repeatedly adds the sentence with the largest marginal gain
    per word that still fits, and stops when nothing fits or no sentence adds
    value.
    """
    w, a, lengths = problem.weights, problem.matrix, problem.lengths
    cover = np.zeros(problem.n_concepts)
    base = 0.0
    selected: list[int] = []
    used = 0
    remaining = set(range(problem.n_sentences))
    while True:
        fits = [j for j in sorted(remaining) if used + lengths[j] <= problem.word_budget]
        if not fits:
            break
        gains = np.array([w @ np.minimum(1.0, cover + a[:, j]) - base for j in fits])
        ratios = gains / lengths[fits]
        k = int(np.argmax(ratios))
        if gains[k] <= 0:
            break
        j = fits[k]
        selected.append(j)
        remaining.discard(j)
        used += int(lengths[j])
        cover = np.minimum(1.0, cover + a[:, j])
        base = float(w @ cover)

    greedy = _make_summary(problem, selected, exact=False)
    singles = [j for j in range(problem.n_sentences) if lengths[j] <= problem.word_budget]
    if singles:
        values = [float(w @ np.minimum(1.0, a[:, j])) for j in singles]
        best_single = _make_summary(problem, [singles[int(np.argmax(values))]], exact=False)
        if _key(best_single.objective_value, best_single.total_words, best_single.selected) < _key(
            greedy.objective_value, greedy.total_words, greedy.selected
        ):
            return best_single
    return greedy


def _fractional_bound(gains: np.ndarray, lengths: np.ndarray, capacity: int) -> float:
    """Fractional knapsack value of the marginal gains within ``capacity``."""
    ok = (lengths <= capacity) & (gains > 0)
    if not ok.any():
        return 0.0
    g, l = gains[ok], lengths[ok]
    order = np.argsort(-g / l, kind="stable")
    g, l = g[order], l[order]
    cum = np.cumsum(l)
    full = cum <= capacity
    bound = float(g[full].sum())
    k = int(full.sum())
    if k < len(g):
        spare = capacity - (cum[k - 1] if k else 0)
        bound += g[k] * spare / l[k]
    return bound


def solve_exact(problem: SelectionProblem, node_limit: int = DEFAULT_NODE_LIMIT) -> Summary:
    """Optimal selection by depth-first branch and bound.

    Sentences are branched on (include first) in decreasing order of their
    standalone gain per word. At each node the marginal gains of the
    undecided sentences bound the best completion: by submodularity the gain
    of adding a set T is at most the sum of the individual gains, and the
    fractional knapsack over those gains bounds the best feasible T. Ties are
    broken exactly as in ``solve_brute_force``. If ``node_limit`` is reached
    the best selection found so far is returned with ``exact=False``.
    """
    w, a = problem.weights, problem.matrix
    lengths = problem.lengths.astype(int)
    budget = int(problem.word_budget)
    m = problem.n_sentences

    seed = solve_greedy(problem)
    best = [_key(seed.objective_value, seed.total_words, seed.selected)]

    solo = np.array([float(w @ np.minimum(1.0, a[:, j])) for j in range(m)])
    order = [j for j in sorted(range(m), key=lambda j: (-solo[j] / lengths[j], j)) if lengths[j] <= budget]
    order_arr = np.array(order, dtype=int)
    nodes = 0
    exhausted = False

    def consider(sel_list, words):
        sel = _canonical(sel_list)
        obj = float(w @ _coverage(problem, sel))
        key = _key(obj, words, sel)
        if key < best[0]:
            best[0] = key

    consider([], 0)

    # iterative DFS; each frame is (position in order, chosen, words, cover)
    stack = [(0, [], 0, np.zeros(problem.n_concepts))]
    while stack:
        pos, chosen, words, cover = stack.pop()
        nodes += 1
        if nodes > node_limit:
            exhausted = True
            break
        if pos >= len(order):
            continue
        current = float(w @ cover)
        rest = order_arr[pos:]
        capacity = budget - words
        gains = w @ np.minimum(1.0, cover[:, None] + a[:, rest]) - current
        bound = current + _fractional_bound(gains, lengths[rest], capacity)
        best_obj, best_words = -best[0][0], best[0][1]
        slack = 1e-10 * max(1.0, abs(best_obj))
        if bound < best_obj - slack:
            continue
        # a completion can at best tie, and it would have more words than the incumbent
        if bound <= best_obj + slack and words >= best_words:
            continue
        j = order[pos]
        # exclude branch pushed first so the include branch is explored first
        stack.append((pos + 1, chosen, words, cover))
        if words + lengths[j] <= budget:
            new_cover = np.minimum(1.0, cover + a[:, j])
            new_chosen = chosen + [j]
            consider(new_chosen, words + int(lengths[j]))
            stack.append((pos + 1, new_chosen, words + int(lengths[j]), new_cover))

    return _make_summary(problem, best[0][2], exact=not exhausted, nodes=nodes)


def solve(problem: SelectionProblem, method: str = "exact", **kwargs) -> Summary:
    solvers = {"exact": solve_exact, "greedy": solve_greedy, "brute": solve_brute_force}
    if method not in solvers:
        raise ValueError(f"unknown solver {method!r}")
    return solvers[method](problem, **kwargs)
