"""Domain types and objective evaluation for Gromov-Monge problems on the line.

All costs are power costs ``c(s, t) = |s - t| ** alpha`` with ``alpha > 0``.
Permutations are 1-based at the API boundary (``Permutation((2, 3, 1))``
sends 1 -> 2, 2 -> 3, 3 -> 1) and 0-based internally.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

WEIGHT_SUM_TOL = 1e-12
MARGINAL_TOL = 1e-10


class ValidationError(ValueError):
    """Raised when an input violates a domain invariant."""


class DimensionError(ValidationError):
    """Raised when inputs have incompatible sizes."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CostParams:
    alpha: float = 1.0

    def __post_init__(self):
        alpha = float(self.alpha)
        if not np.isfinite(alpha) or alpha <= 0:
            raise ValidationError(f"alpha must be a finite positive real, got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)


@dataclass(frozen=True, eq=False)
class PointConfiguration:
    """Strictly increasing real coordinates."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64).reshape(-1)
        if pts.size == 0:
            raise ValidationError("a point configuration needs at least one point")
        if not np.all(np.isfinite(pts)):
            bad = int(np.flatnonzero(~np.isfinite(pts))[0]) + 1
            raise ValidationError(f"coordinate {bad} is not finite")
        steps = np.diff(pts)
        if np.any(steps <= 0):
            i = int(np.flatnonzero(steps <= 0)[0]) + 1
            kind = "duplicates" if steps[i - 1] == 0 else "is not above"
            raise ValidationError(
                f"coordinates must be strictly increasing: point {i + 1} "
                f"({pts[i]!r}) {kind} point {i} ({pts[i - 1]!r})"
            )
        object.__setattr__(self, "points", _frozen(pts))

    def __len__(self) -> int:
        return self.points.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointConfiguration):
            return NotImplemented
        return np.array_equal(self.points, other.points)

    def __hash__(self) -> int:
        return hash(self.points.tobytes())

    def __repr__(self) -> str:
        return f"PointConfiguration({self.points.tolist()!r})"

    def tolist(self) -> list[float]:
        return self.points.tolist()


@dataclass(frozen=True, order=True)
class Permutation:
    """Bijection of {1, ..., n}, given by its 1-based images."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        try:
            mapping = tuple(int(v) for v in self.mapping)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"permutation entries must be integers: {self.mapping!r}") from exc
        if any(float(a) != float(b) for a, b in zip(self.mapping, mapping)):
            raise ValidationError(f"permutation entries must be integers: {self.mapping!r}")
        n = len(mapping)
        if n == 0:
            raise ValidationError("empty permutation")
        if sorted(mapping) != list(range(1, n + 1)):
            raise ValidationError(f"{list(mapping)} is not a bijection of 1..{n}")
        object.__setattr__(self, "mapping", mapping)

    @classmethod
    def from_zero_based(cls, images: Iterable[int]) -> "Permutation":
        return cls(tuple(int(i) + 1 for i in images))

    @classmethod
    def parse(cls, text: str, sep: str = ",") -> "Permutation":
        """Parse strings such as ``"3,1,2"`` (or ``"3-1-2"`` with ``sep="-"``)."""
        parts = [p.strip() for p in text.strip().split(sep)]
        if not parts or any(not p for p in parts):
            raise ValidationError(f"cannot parse permutation {text!r}")
        try:
            return cls(tuple(int(p) for p in parts))
        except ValueError as exc:
            raise ValidationError(f"cannot parse permutation {text!r}") from exc

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def anti_identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n, 0, -1)))

    @classmethod
    def cyclic(cls, n: int) -> "Permutation":
        # i -> i + 1 for i < n, n -> 1
        return cls(tuple(range(2, n + 1)) + (1,))

    def __len__(self) -> int:
        return len(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    @property
    def zero_based(self) -> np.ndarray:
        return np.asarray(self.mapping, dtype=np.intp) - 1

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, s in enumerate(self.mapping, start=1):
            inv[s - 1] = i
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """Return ``self o other``, i.e. ``i -> self(other(i))``."""
        if len(other) != len(self):
            raise DimensionError("cannot compose permutations of different sizes")
        return Permutation(tuple(self.mapping[j - 1] for j in other.mapping))

    def to_string(self, sep: str = "-") -> str:
        return sep.join(str(v) for v in self.mapping)

    def __str__(self) -> str:
        return "(" + " ".join(str(v) for v in self.mapping) + ")"


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    support: PointConfiguration
    weights: np.ndarray

    def __post_init__(self):
        support = as_points(self.support)
        w = np.array(self.weights, dtype=np.float64).reshape(-1)
        if w.size != len(support):
            raise DimensionError(f"{w.size} weights for {len(support)} support points")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValidationError("weights must be finite and non-negative")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValidationError(f"weights sum to {w.sum()!r}, expected 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "weights", _frozen(w))

    @classmethod
    def uniform(cls, support) -> "DiscreteMeasure":
        support = as_points(support)
        n = len(support)
        return cls(support, np.full(n, 1.0 / n))

    def __len__(self) -> int:
        return len(self.support)


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """Non-negative n x m coupling matrix."""

    entries: np.ndarray

    def __post_init__(self):
        pi = np.array(self.entries, dtype=np.float64)
        if pi.ndim != 2:
            raise DimensionError("a transport plan must be a 2-d matrix")
        if np.any(pi < 0) or not np.all(np.isfinite(pi)):
            raise ValidationError("transport plan entries must be finite and non-negative")
        object.__setattr__(self, "entries", _frozen(pi))

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def check_marginals(self, p, q, tol: float = MARGINAL_TOL) -> None:
        p = np.asarray(p, dtype=np.float64)
        q = np.asarray(q, dtype=np.float64)
        if self.shape != (p.size, q.size):
            raise DimensionError(f"plan of shape {self.shape} does not match marginals ({p.size}, {q.size})")
        row_err = np.max(np.abs(self.entries.sum(axis=1) - p))
        col_err = np.max(np.abs(self.entries.sum(axis=0) - q))
        if row_err > tol or col_err > tol:
            raise ValidationError(
                f"plan marginals violated: max row error {row_err:.3g}, max column error {col_err:.3g}"
            )


PointsLike = Union[PointConfiguration, Sequence[float], np.ndarray]
PermLike = Union[Permutation, Sequence[int]]
CostLike = Union[CostParams, float]


def as_points(x: PointsLike) -> PointConfiguration:
    return x if isinstance(x, PointConfiguration) else PointConfiguration(x)


def as_permutation(sigma: PermLike) -> Permutation:
    return sigma if isinstance(sigma, Permutation) else Permutation(tuple(sigma))


def as_cost(cost: CostLike) -> CostParams:
    return cost if isinstance(cost, CostParams) else CostParams(cost)


def cost_matrix(x: PointsLike, cost: CostLike) -> np.ndarray:
    """Pairwise costs ``|x_i - x_k| ** alpha``; the diagonal is exactly 0."""
    pts = as_points(x).points
    alpha = as_cost(cost).alpha
    return np.abs(pts[:, None] - pts[None, :]) ** alpha


def _prepare(x, y, sigma, cost):
    x, y = as_points(x), as_points(y)
    sigma = as_permutation(sigma)
    cost = as_cost(cost)
    if len(x) != len(y):
        raise DimensionError(f"x has {len(x)} points but y has {len(y)}")
    if len(sigma) != len(x):
        raise DimensionError(f"permutation of size {len(sigma)} for {len(x)} points")
    return x, y, sigma, cost


def assignment_objective(x: PointsLike, y: PointsLike, sigma: PermLike, cost: CostLike = 1.0) -> float:
    """Sum over pairs i < k of ``c(x_i, x_k) * c(y_sigma(i), y_sigma(k))``."""
    x, y, sigma, cost = _prepare(x, y, sigma, cost)
    s = sigma.zero_based
    iu, ku = np.triu_indices(len(x), k=1)
    cx = np.abs(x.points[iu] - x.points[ku]) ** cost.alpha
    cy = np.abs(y.points[s[iu]] - y.points[s[ku]]) ** cost.alpha
    return float(np.dot(cx, cy))


def gm_objective(x: PointsLike, y: PointsLike, sigma: PermLike, cost: CostLike = 1.0) -> float:
    """Gromov-Monge map objective ``(1/n^2) sum_{i,k} (c(x_i,x_k) - c(y_s(i),y_s(k)))^2``."""
    x, y, sigma, cost = _prepare(x, y, sigma, cost)
    s = sigma.zero_based
    cx = cost_matrix(x, cost)
    cy = cost_matrix(y, cost)[np.ix_(s, s)]
    n = len(x)
    return float(np.sum((cx - cy) ** 2) / n**2)


def rearrangement_terms(x: PointsLike, y: PointsLike, sigma: PermLike, cost: CostLike = 1.0):
    """The sigma-free sums and the assignment objective of the expanded square.

    Returns ``(sum c^2(x_i,x_k), F_sigma, sum c^2(y_i,y_k))`` over all ordered
    pairs, so that ``n^2 * gm = first - 4 * F_sigma + last``.
    """
    x, y, sigma, cost = _prepare(x, y, sigma, cost)
    sx = float(np.sum(cost_matrix(x, cost) ** 2))
    sy = float(np.sum(cost_matrix(y, cost) ** 2))
    return sx, assignment_objective(x, y, sigma, cost), sy


def rearrangement_residual(x: PointsLike, y: PointsLike, sigma: PermLike, cost: CostLike = 1.0) -> float:
    sx, f, sy = rearrangement_terms(x, y, sigma, cost)
    n = len(as_points(x))
    return n**2 * gm_objective(x, y, sigma, cost) - (sx - 2.0 * (2.0 * f) + sy)


def gw_plan_objective(
    mu: DiscreteMeasure, nu: DiscreteMeasure, plan: TransportPlan, cost: CostLike = 1.0
) -> float:
    """Gromov-Wasserstein quadruple sum evaluated for a fixed coupling.

    Only evaluates; no minimization over couplings is attempted.
    """
    if not isinstance(plan, TransportPlan):
        plan = TransportPlan(plan)
    plan.check_marginals(mu.weights, nu.weights)
    cx = cost_matrix(mu.support, cost)
    cy = cost_matrix(nu.support, cost)
    pi = plan.entries
    total = 0.0
    for i in range(pi.shape[0]):
        if not pi[i].any():
            continue
        # diff[k, j, l] = c(x_i, x_k) - c(y_j, y_l)
        diff = cx[i][:, None, None] - cy[None, :, :]
        inner = np.einsum("kjl,kl->j", diff**2, pi)
        total += float(pi[i] @ inner)
    return total


def plan_from_permutation(sigma: PermLike, n: int | None = None) -> TransportPlan:
    """Embed a map as the plan with mass ``1/n`` on each ``(i, sigma(i))``."""
    sigma = as_permutation(sigma)
    if n is not None and n != len(sigma):
        raise DimensionError(f"permutation of size {len(sigma)} for n={n}")
    n = len(sigma)
    pi = np.zeros((n, n))
    pi[np.arange(n), sigma.zero_based] = 1.0 / n
    return TransportPlan(pi)
