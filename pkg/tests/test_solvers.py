import itertools
import math

import numpy as np
import pytest

from gwline.core import Permutation, assignment_objective
from gwline.counterexample import CounterexampleSpec, construct_instance, f_cyc_closed_form, find_witness_epsilon
from gwline.solvers import (
    CapExceededError,
    Method,
    evaluate_baselines,
    lex_permutation_blocks,
    solve_baselines,
    solve_brute_force,
    solve_local_search,
)

from conftest import brute_values, enumerate_optima, naive_F, random_sorted


@pytest.fixture(scope="module")
def prop_instance():
    eps, _ = find_witness_epsilon(6, 1.0)
    x, y = construct_instance(CounterexampleSpec(6, 1.0, eps))
    return x, y, eps


@pytest.mark.parametrize("n,tail", [(1, 8), (4, 2), (5, 3), (6, 6)])
def test_blocks_enumerate_lexicographically(n, tail):
    rows = [tuple(r) for b in lex_permutation_blocks(n, tail=tail) for r in b]
    assert rows == list(itertools.permutations(range(n)))


def test_brute_single_point():
    res = solve_brute_force([0.3], [1.0], 1.0)
    assert res.best_value == 0.0
    assert res.maximizers == (Permutation((1,)),)
    assert res.method is Method.BRUTE


def test_brute_two_points_both_optimal():
    res = solve_brute_force([0.0, 2.0], [1.0, 1.5], 1.0)
    assert res.maximizers == (Permutation((1, 2)), Permutation((2, 1)))
    assert res.evaluations == 2


def test_brute_matches_enumeration_oracle(rng):
    for _ in range(20):
        n = int(rng.integers(2, 7))
        alpha = float(rng.choice([0.5, 1.0, 2.0]))
        x, y = random_sorted(rng, n), random_sorted(rng, n)
        vals = brute_values(x, y, alpha)
        res = solve_brute_force(x, y, alpha)
        assert res.best_value == pytest.approx(max(vals.values()), rel=1e-12)
        assert {p.mapping for p in res.maximizers} == enumerate_optima(vals)
        assert list(res.maximizers) == sorted(res.maximizers)
        assert res.evaluations == math.factorial(n)


def test_brute_on_counterexample_beats_identity(prop_instance):
    x, y, _ = prop_instance
    res = solve_brute_force(x, y, 1.0)
    assert res.evaluations == 720
    assert res.best_value > assignment_objective(x, y, Permutation.identity(6), 1.0) + 1e-6


def test_brute_chunked_path_matches_single_block(rng):
    # n = 9 crosses the tabulated-tail size, exercising prefix enumeration
    x, y = random_sorted(rng, 9), random_sorted(rng, 9)
    res = solve_brute_force(x, y, 1.0)
    for p in res.maximizers:
        assert naive_F(x, y, p.zero_based, 1.0) == pytest.approx(res.best_value, rel=1e-9)
    assert res.best_value >= max(evaluate_baselines(x, y, 1.0)) - 1e-12


def test_brute_refuses_over_cap():
    pts = np.arange(12.0)
    with pytest.raises(CapExceededError, match="local search"):
        solve_brute_force(pts, pts, 1.0)
    with pytest.raises(CapExceededError):
        solve_brute_force(pts[:5], pts[:5], 1.0, n_cap=4)


def test_local_search_two_points_exact():
    res = solve_local_search([0.0, 1.0], [0.0, 3.0], 1.0, restarts=1)
    assert res.best_value == pytest.approx(3.0)
    assert res.method is Method.LOCAL


def test_local_search_bounded_by_brute(rng):
    for _ in range(20):
        n = int(rng.integers(3, 9))
        x, y = random_sorted(rng, n), random_sorted(rng, n)
        loc = solve_local_search(x, y, 1.0, restarts=5, seed=int(rng.integers(1000)))
        exact = solve_brute_force(x, y, 1.0)
        assert loc.best_value <= exact.best_value * (1 + 1e-12)
        for p in loc.maximizers:
            assert assignment_objective(x, y, p, 1.0) == pytest.approx(loc.best_value, rel=1e-9)


def test_local_search_is_local_optimum(rng):
    x, y = random_sorted(rng, 7), random_sorted(rng, 7)
    res = solve_local_search(x, y, 1.5, restarts=3, seed=1)
    s = list(res.argmax.zero_based)
    base = naive_F(x, y, s, 1.5)
    for a, b in itertools.combinations(range(7), 2):
        t = s.copy()
        t[a], t[b] = t[b], t[a]
        assert naive_F(x, y, t, 1.5) <= base + 1e-9


def test_local_search_reaches_cyclic_value(prop_instance):
    x, y, eps = prop_instance
    res = solve_local_search(x, y, 1.0, restarts=20, seed=42)
    assert res.best_value >= f_cyc_closed_form(6, 1.0, eps) - 1e-9


def test_local_search_deterministic(rng):
    x, y = random_sorted(rng, 10), random_sorted(rng, 10)
    assert solve_local_search(x, y, 1.0, restarts=8, seed=3) == solve_local_search(x, y, 1.0, restarts=8, seed=3)


def test_local_search_rejects_zero_restarts():
    with pytest.raises(ValueError):
        solve_local_search([0, 1], [0, 1], 1.0, restarts=0)


def test_baselines_hand_values():
    f_id, f_aid = evaluate_baselines([0, 1, 3], [0, 1, 3], 1.0)
    assert f_id == pytest.approx(14.0)
    # a-id reverses y only: |0-1|*|3-1| + |0-3|*|3-0| + |1-3|*|1-0|
    assert f_aid == pytest.approx(13.0)
    res = solve_baselines([0, 1, 3], [0, 1, 3], 1.0)
    assert res.maximizers == (Permutation.identity(3),)
    assert res.method is Method.BASELINE


def test_baselines_tie_on_antisymmetric_x():
    f_id, f_aid = evaluate_baselines([-2, -0.5, 0.5, 2], [0, 0.1, 0.5, 3], 1.3)
    assert f_id == pytest.approx(f_aid, rel=1e-12)


def test_brute_dominates_baselines_and_local(rng):
    for _ in range(15):
        n = int(rng.integers(2, 9))
        x, y = random_sorted(rng, n), random_sorted(rng, n)
        exact = solve_brute_force(x, y, 1.0)
        assert exact.best_value >= max(evaluate_baselines(x, y, 1.0)) - 1e-12
        assert exact.best_value >= solve_local_search(x, y, 1.0, restarts=3, seed=0).best_value - 1e-12


def test_affine_maps_keep_maximizer_set(rng):
    for _ in range(15):
        n = int(rng.integers(3, 7))
        alpha = float(rng.choice([0.5, 1.0, 2.0]))
        x, y = random_sorted(rng, n), random_sorted(rng, n)
        a, b, c, d = rng.uniform(0.2, 5.0), rng.normal(), rng.uniform(0.2, 5.0), rng.normal()
        base = solve_brute_force(x, y, alpha)
        moved = solve_brute_force(a * x + b, c * y + d, alpha)
        assert moved.maximizers == base.maximizers
        assert moved.best_value == pytest.approx((a * c) ** alpha * base.best_value, rel=1e-9)


def test_reversal_conjugation(rng):
    for _ in range(15):
        n = int(rng.integers(3, 7))
        x, y = random_sorted(rng, n), random_sorted(rng, n)
        aid = Permutation.anti_identity(n)
        base = solve_brute_force(x, y, 1.0)
        flipped = solve_brute_force(-x[::-1], y, 1.0)
        assert flipped.best_value == pytest.approx(base.best_value, rel=1e-12)
        assert set(flipped.maximizers) == {s.compose(aid) for s in base.maximizers}
