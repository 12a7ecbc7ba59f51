"""Maximization of the assignment objective over all permutations."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (
    DimensionError,
    Permutation,
    ValidationError,
    as_cost,
    as_points,
    assignment_objective,
    cost_matrix,
)

DEFAULT_N_CAP = 11
TIE_RTOL = 1e-9
IMPROVE_ATOL = 1e-12
# permutations of the trailing block are tabulated; the leading block is enumerated
_TAIL = 8


class CapExceededError(ValidationError):
    """Brute force was asked for more points than the enumeration cap."""


class Method(str, enum.Enum):
    BRUTE = "brute"
    LOCAL = "local"
    BASELINE = "baseline"


@dataclass(frozen=True)
class SolveResult:
    best_value: float
    maximizers: tuple[Permutation, ...]
    method: Method
    evaluations: int

    def __post_init__(self):
        if not self.maximizers:
            raise ValidationError("a solve result needs at least one maximizer")

    @property
    def argmax(self) -> Permutation:
        """Lexicographically first maximizer."""
        return self.maximizers[0]


def within_tie(value: float, best: float) -> bool:
    return value >= best - TIE_RTOL * abs(best)


def _check_pair(x, y):
    x, y = as_points(x), as_points(y)
    if len(x) != len(y):
        raise DimensionError(f"x has {len(x)} points but y has {len(y)}")
    return x, y


@lru_cache(maxsize=None)
def _lex_table(m: int) -> np.ndarray:
    table = np.array(list(itertools.permutations(range(m))), dtype=np.intp)
    table.setflags(write=False)
    return table.reshape(math.factorial(m), m)


def lex_permutation_blocks(n: int, tail: int = _TAIL):
    """Yield all permutations of ``range(n)`` in lexicographic order, in blocks.

    Each block fixes a prefix of length ``n - tail`` and holds every
    arrangement of the remaining values, so concatenating the blocks gives
    the full lexicographic sequence.
    """
    tail = min(n, tail)
    table = _lex_table(tail)
    head = n - tail
    for prefix in itertools.permutations(range(n), head):
        rest = np.array(sorted(set(range(n)).difference(prefix)), dtype=np.intp)
        block = np.empty((table.shape[0], n), dtype=np.intp)
        block[:, :head] = prefix
        block[:, head:] = rest[table]
        yield block


class _PairEvaluator:
    """Vectorized F over a batch of 0-based permutations (rows)."""

    def __init__(self, x, y, cost):
        n = len(x)
        self.iu, self.ku = np.triu_indices(n, k=1)
        alpha = as_cost(cost).alpha
        xp = as_points(x).points
        self.cx_pairs = np.abs(xp[self.iu] - xp[self.ku]) ** alpha
        self.cy = cost_matrix(y, cost)

    def __call__(self, perms: np.ndarray, flat_index: np.ndarray | None = None) -> np.ndarray:
        if self.iu.size == 0:
            return np.zeros(perms.shape[0])
        if flat_index is None:
            flat_index = _flat_pair_index(perms, self.iu, self.ku)
        return self.cy.ravel()[flat_index] @ self.cx_pairs


def _flat_pair_index(perms: np.ndarray, iu: np.ndarray, ku: np.ndarray) -> np.ndarray:
    n = perms.shape[1]
    return perms[:, iu] * n + perms[:, ku]


@lru_cache(maxsize=None)
def _full_flat_index(n: int) -> np.ndarray:
    iu, ku = np.triu_indices(n, k=1)
    idx = _flat_pair_index(_lex_table(n), iu, ku)
    idx.setflags(write=False)
    return idx


def solve_brute_force(x, y, cost=1.0, n_cap: int = DEFAULT_N_CAP) -> SolveResult:
    """Exact maximum of the assignment objective by enumerating all of S_n.

    All permutations within the tie tolerance of the maximum are returned in
    lexicographic order.
    """
    x, y = _check_pair(x, y)
    n = len(x)
    if n > n_cap:
        raise CapExceededError(
            f"n={n} exceeds the brute-force cap of {n_cap} ({math.factorial(n)} permutations); "
            "use the local search solver instead"
        )
    evaluate = _PairEvaluator(x, y, cost)
    best = -math.inf
    keep: list[tuple[float, np.ndarray]] = []
    count = 0
    for block in lex_permutation_blocks(n):
        vals = evaluate(block, _full_flat_index(n) if n <= _TAIL else None)
        count += vals.size
        top = float(vals.max())
        if top > best:
            best = top
            keep = [(v, p) for v, p in keep if within_tie(v, best)]
        hits = np.flatnonzero(vals >= best - TIE_RTOL * abs(best))
        keep.extend((float(vals[i]), block[i].copy()) for i in hits)
    maximizers = tuple(Permutation.from_zero_based(p) for _, p in keep)
    return SolveResult(best, maximizers, Method.BRUTE, count)


def _climb(cx: np.ndarray, cy: np.ndarray, start: np.ndarray) -> tuple[np.ndarray, float, int]:
    """Steepest ascent over all transpositions from ``start``."""
    s = start.copy()
    n = s.size
    iu, ku = np.triu_indices(n, k=1)
    evals = 1
    while iu.size:
        m = cy[np.ix_(s, s)]
        g = cx @ m
        d = np.diag(g)
        # gain of swapping the images at positions a and b
        gain = g + g.T - d[:, None] - d[None, :] + 2.0 * cx * m
        gains = gain[iu, ku]
        evals += gains.size
        j = int(np.argmax(gains))
        if gains[j] <= IMPROVE_ATOL:
            break
        a, b = iu[j], ku[j]
        s[a], s[b] = s[b], s[a]
    value = float(np.dot(cx[iu, ku], cy[s[iu], s[ku]])) if iu.size else 0.0
    return s, value, evals


def solve_local_search(x, y, cost=1.0, restarts: int = 10, seed: int = 0) -> SolveResult:
    """Best local optimum of steepest-ascent swap search over several starts.

    Starts are id, then a-id, then uniform random permutations drawn from a
    generator seeded with ``seed``. Not guaranteed to find the global maximum.
    """
    if restarts < 1:
        raise ValidationError("restarts must be at least 1")
    x, y = _check_pair(x, y)
    n = len(x)
    cx = cost_matrix(x, cost)
    cy = cost_matrix(y, cost)
    rng = np.random.default_rng(seed)
    starts = [np.arange(n), np.arange(n)[::-1]]
    optima: dict[tuple[int, ...], float] = {}
    evaluations = 0
    for r in range(restarts):
        start = starts[r] if r < 2 else rng.permutation(n)
        s, value, evals = _climb(cx, cy, np.asarray(start, dtype=np.intp))
        evaluations += evals
        optima[tuple(int(v) for v in s)] = value
    best = max(optima.values())
    maximizers = sorted(Permutation.from_zero_based(p) for p, v in optima.items() if within_tie(v, best))
    return SolveResult(best, tuple(maximizers), Method.LOCAL, evaluations)


def evaluate_baselines(x, y, cost=1.0) -> tuple[float, float]:
    """Return ``(F_id, F_a-id)``."""
    x, y = _check_pair(x, y)
    n = len(x)
    return (
        assignment_objective(x, y, Permutation.identity(n), cost),
        assignment_objective(x, y, Permutation.anti_identity(n), cost),
    )


def solve_baselines(x, y, cost=1.0) -> SolveResult:
    """Best of id and a-id only; a lower bound, not a maximization."""
    f_id, f_aid = evaluate_baselines(x, y, cost)
    n = len(as_points(x))
    best = max(f_id, f_aid)
    cands = [(f_id, Permutation.identity(n)), (f_aid, Permutation.anti_identity(n))]
    maximizers = sorted({p for v, p in cands if within_tie(v, best)})
    return SolveResult(best, tuple(maximizers), Method.BASELINE, 2)
