import itertools

import numpy as np
import pytest

from conftest import random_problem
from impsum import ilp
from impsum.baselines import binary_matrix
from impsum.text import extract_concepts


def problem(matrix, weights, lengths, budget, z_mode=ilp.CONTINUOUS):
    return ilp.SelectionProblem(np.array(matrix, float), weights, lengths, budget, z_mode)


def test_value_of_selection_examples():
    p = problem([[1, 0], [0, 1], [1, 0], [0, 0]], [1, 2, 5, 3], [3, 4], 10, ilp.BINARY)
    obj, z = ilp.value_of_selection(p, [])
    assert obj == 0 and not z.any()
    obj, z = ilp.value_of_selection(p, [0])
    assert obj == 1 + 5
    assert z.tolist() == [1, 0, 1, 0]
    # one selected sentence carrying concepts 1 and 3, weights 2 and 5
    p2 = problem([[1, 0], [0, 1], [1, 0], [0, 1]], [4, 2, 1, 5], [2, 2], 5, ilp.BINARY)
    assert ilp.value_of_selection(p2, [1])[0] == 7


def test_value_of_selection_saturates():
    p = problem([[0.6, 0.7]], [2.0], [1, 1], 5)
    obj, z = ilp.value_of_selection(p, [0, 1])
    assert z[0] == 1.0 and obj == 2.0


def test_value_of_selection_budget_violation():
    p = problem([[1, 1]], [1], [3, 4], 5)
    with pytest.raises(ilp.BudgetError):
        ilp.value_of_selection(p, [0, 1])


def test_problem_validation():
    with pytest.raises(ValueError):
        problem([[0.5]], [1], [1], 3, ilp.BINARY)
    with pytest.raises(ValueError):
        problem([[1]], [1, 2], [1], 3)
    with pytest.raises(ValueError):
        problem([[1]], [-1], [1], 3)
    with pytest.raises(ValueError):
        problem([[1]], [1], [0], 3)
    with pytest.raises(ValueError):
        problem([[1]], [1], [1], -1)


def test_brute_force_small_examples():
    p = problem([[1, 1]], [1], [3, 4], 0)
    s = ilp.solve_brute_force(p)
    assert s.selected == () and s.objective_value == 0
    p = problem([[1], [1]], [1, 2], [5], 5)
    s = ilp.solve_brute_force(p)
    assert s.selected == (0,) and s.objective_value == 3
    with pytest.raises(ValueError):
        ilp.solve_brute_force(problem(np.ones((1, 21)), [1], [1] * 21, 5))


def test_tie_break_prefers_fewer_words_then_lexicographic():
    # sentences 0 and 1 carry the same concept; 1 is shorter
    p = problem([[1, 1, 1]], [1], [4, 2, 2], 10, ilp.BINARY)
    for solver in (ilp.solve_brute_force, ilp.solve_exact):
        assert solver(p).selected == (1,)


def enumerate_table1(sentences, concepts, budget):
    """Independent oracle: plain-python set coverage over all 2^M subsets."""
    carried = [{c.bigram for c in concepts if c.bigram in set(zip(s.tokens, s.tokens[1:]))} for s in sentences]
    weight = {c.bigram: c.weight for c in concepts}
    best = None
    for r in range(len(sentences) + 1):
        for subset in itertools.combinations(range(len(sentences)), r):
            words = sum(sentences[j].word_count for j in subset)
            if words > budget:
                continue
            covered = set().union(*(carried[j] for j in subset)) if subset else set()
            key = (-sum(weight[b] for b in covered), words, subset)
            best = key if best is None or key < best else best
    return -best[0], best[2]


@pytest.mark.parametrize("budget", [10, 30])
def test_table1_instance_matches_enumeration(table1_sentences, stopwords, budget):
    concepts = extract_concepts(table1_sentences, stopwords)
    p = ilp.SelectionProblem(binary_matrix(table1_sentences, concepts), [c.weight for c in concepts],
                             [s.word_count for s in table1_sentences], budget, ilp.BINARY)
    value, subset = enumerate_table1(table1_sentences, concepts, budget)
    for solver in (ilp.solve_brute_force, ilp.solve_exact):
        s = solver(p)
        assert s.objective_value == value
        assert s.selected == subset
        s.check_feasible(p)


def test_exact_selects_everything_when_budget_allows():
    rng = np.random.default_rng(0)
    p = random_problem(rng, ilp.CONTINUOUS)
    p.word_budget = int(p.lengths.sum())
    s = ilp.solve_exact(p)
    obj_all, _ = ilp.value_of_selection(p, range(p.n_sentences))
    assert s.objective_value == pytest.approx(obj_all)


def test_exact_matches_brute_force_random():
    rng = np.random.default_rng(1)
    for k in range(60):
        p = random_problem(rng, ilp.BINARY if k % 2 else ilp.CONTINUOUS, max_m=10)
        e, b = ilp.solve_exact(p), ilp.solve_brute_force(p)
        assert e.exact
        assert abs(e.objective_value - b.objective_value) <= 1e-9
        assert e.selected == b.selected
        e.check_feasible(p)


def test_binary_matrix_continuous_mode_same_optimum():
    rng = np.random.default_rng(2)
    for _ in range(40):
        p = random_problem(rng, ilp.BINARY, max_m=10)
        q = ilp.SelectionProblem(p.matrix, p.weights, p.lengths, p.word_budget, ilp.CONTINUOUS)
        a, b = ilp.solve_exact(p), ilp.solve_exact(q)
        assert a.objective_value == b.objective_value and a.selected == b.selected


def test_greedy_dominated_by_exact_and_feasible():
    rng = np.random.default_rng(3)
    for _ in range(60):
        p = random_problem(rng, ilp.CONTINUOUS, max_m=10)
        g, e = ilp.solve_greedy(p), ilp.solve_exact(p)
        g.check_feasible(p)
        assert not g.exact
        assert g.objective_value <= e.objective_value + 1e-12


def test_greedy_single_feasible_sentence():
    p = problem([[1, 1]], [3], [4, 9], 5)
    assert ilp.solve_greedy(p).selected == (0,)


def test_monotonicity_and_scale_equivariance():
    rng = np.random.default_rng(4)
    for _ in range(30):
        p = random_problem(rng, ilp.CONTINUOUS, max_m=10)
        sel = list(rng.choice(p.n_sentences, size=rng.integers(0, p.n_sentences), replace=False))
        big = ilp.SelectionProblem(p.matrix, p.weights, p.lengths, 10**6, p.z_mode)
        base, _ = ilp.value_of_selection(big, sel)
        for j in set(range(p.n_sentences)) - set(sel):
            assert ilp.value_of_selection(big, sel + [j])[0] >= base
        scaled = ilp.SelectionProblem(p.matrix, 2.5 * p.weights, p.lengths, p.word_budget, p.z_mode)
        a, b = ilp.solve_exact(p), ilp.solve_exact(scaled)
        assert b.objective_value == pytest.approx(2.5 * a.objective_value, rel=1e-12)
        assert a.selected == b.selected


def test_node_limit_returns_flagged_incumbent():
    rng = np.random.default_rng(5)
    p = ilp.SelectionProblem(rng.random((30, 14)), rng.integers(1, 6, 30), rng.integers(3, 6, 14), 30)
    s = ilp.solve_exact(p, node_limit=3)
    assert not s.exact
    s.check_feasible(p)


def test_problem_json_round_trip():
    rng = np.random.default_rng(6)
    p = random_problem(rng, ilp.CONTINUOUS)
    q = ilp.SelectionProblem.from_json(p.to_json())
    assert np.array_equal(p.matrix, q.matrix) and np.array_equal(p.weights, q.weights)
    assert np.array_equal(p.lengths, q.lengths) and (p.word_budget, p.z_mode) == (q.word_budget, q.z_mode)
    assert ilp.solve_exact(p).selected == ilp.solve_exact(q).selected
