"""A point family on which neither id nor a-id maximizes the assignment objective.

For ``n > 3`` and ``0 < eps < 2/(n-3)``::

    x = (-1, (3-n)eps/2, (5-n)eps/2, ..., (n-3)eps/2, 1)
    y = (-1, -1 + eps, eps, 2eps, ..., (n-2)eps)

``x`` is antisymmetric, so F_id = F_a-id. At ``eps = 0`` the cyclic shift
``i -> i+1 (mod n)`` beats id by ``(n-2) - 2**alpha``, and by continuity
it still does for small positive ``eps`` whenever ``n > 2 + 2**alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import CostParams, Permutation, PointConfiguration, ValidationError, assignment_objective
from .solvers import DEFAULT_N_CAP, TIE_RTOL, solve_brute_force, within_tie

WITNESS_K_MAX = 60
WITNESS_MIN_MARGIN = 1e-9


class SearchExhaustedError(RuntimeError):
    """No witness epsilon was found on the search grid."""

    def __init__(self, n: int, alpha: float, gap: float, k_max: int):
        self.n, self.alpha, self.gap, self.k_max = n, alpha, gap, k_max
        regime = "inside" if gap > 0 else "outside"
        super().__init__(
            f"no epsilon with f_cyc > f_id found in {k_max} halvings for n={n}, alpha={alpha:g}; "
            f"degenerate gap (n-2) - 2^alpha = {gap:.17g} ({regime} the n > 2 + 2^alpha regime)"
        )


class RegimeError(ValidationError):
    """``n <= 2 + 2**alpha``: the degenerate gap is not positive."""


def epsilon_upper(n: int) -> float:
    return 2.0 / (n - 3)


def _check_params(n, alpha, epsilon=None, allow_zero=False):
    if int(n) != n or n <= 3:
        raise ValidationError(f"n must be an integer greater than 3, got {n!r}")
    alpha = CostParams(alpha).alpha
    if epsilon is not None:
        hi = epsilon_upper(int(n))
        lo_ok = epsilon >= 0 if allow_zero else epsilon > 0
        if not (lo_ok and epsilon < hi):
            interval = f"[0, {hi:g})" if allow_zero else f"(0, {hi:g})"
            raise ValidationError(f"epsilon={epsilon!r} is outside {interval} for n={n}")
    return int(n), alpha


@dataclass(frozen=True)
class CounterexampleSpec:
    n: int
    alpha: float
    epsilon: float

    def __post_init__(self):
        n, alpha = _check_params(self.n, self.alpha, self.epsilon)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "epsilon", float(self.epsilon))

    @property
    def in_regime(self) -> bool:
        return self.n > 2 + 2**self.alpha


def construct_instance(spec: CounterexampleSpec) -> tuple[PointConfiguration, PointConfiguration]:
    n, eps = spec.n, spec.epsilon
    x = [-1.0] + [(2 * i - n - 1) / 2 * eps for i in range(2, n)] + [1.0]
    y = [-1.0, -1.0 + eps] + [(i - 2) * eps for i in range(3, n + 1)]
    return PointConfiguration(x), PointConfiguration(y)


def f_id_closed_form(n: int, alpha: float, epsilon: float) -> float:
    """F_id on the constructed instance, expanded around the three outer points 1, 2, n."""
    n, a = _check_params(n, alpha, epsilon, allow_zero=True)
    e = float(epsilon)
    ea = e**a
    inner = sum(abs(i - k) ** (2 * a) for i in range(3, n) for k in range(i + 1, n))
    t_in = e ** (2 * a) * inner
    t_i_n = ea * sum(abs((2 * i - n - 1) / 2 * e - 1) ** a * abs(i - n) ** a for i in range(3, n))
    t_1_2 = ea * abs((3 - n) / 2 * e + 1) ** a
    t_2_k = ea * sum(abs(2 - k) ** a * abs((k - 3) * e + 1) ** a for k in range(3, n))
    t_1_k = sum(abs((2 * k - n - 1) / 2 * e + 1) ** a * abs((k - 2) * e + 1) ** a for k in range(3, n))
    t_1_n = 2**a * abs((n - 2) * e + 1) ** a
    t_2_n = abs((3 - n) / 2 * e - 1) ** a * abs((n - 3) * e + 1) ** a
    return t_in + t_i_n + t_1_2 + t_2_k + t_1_k + t_1_n + t_2_n


def f_cyc_closed_form(n: int, alpha: float, epsilon: float) -> float:
    """F_cyc on the constructed instance, expanded around the outer points 1 and n."""
    n, a = _check_params(n, alpha, epsilon, allow_zero=True)
    e = float(epsilon)
    inner = sum(abs(i - k) ** (2 * a) for i in range(2, n) for k in range(i + 1, n))
    t_in = e ** (2 * a) * inner
    t_1_n = 2**a * e**a
    t_1_k = sum(abs((2 * k - n - 1) / 2 * e + 1) ** a * abs((k - 2) * e + 1) ** a for k in range(2, n))
    t_i_n = sum(abs((2 * i - n - 1) / 2 * e - 1) ** a * abs((i - 1) * e + 1) ** a for i in range(2, n))
    return t_in + t_1_n + t_1_k + t_i_n


def degenerate_gap(n: int, alpha: float) -> float:
    """``f_cyc(0) - f_id(0) = (n - 2) - 2**alpha``."""
    n, a = _check_params(n, alpha)
    return (n - 2) - 2**a


def witness_grid(n: int, k_max: int = WITNESS_K_MAX) -> list[float]:
    hi = epsilon_upper(n)
    return [hi * 2.0**-k for k in range(1, k_max + 1)]


def find_witness_epsilon(n: int, alpha: float, k_max: int = WITNESS_K_MAX) -> tuple[float, float]:
    """First epsilon on the halving grid with ``f_cyc - f_id > 1e-9``.

    Returns ``(epsilon, margin)``. The margin need not be monotone in epsilon,
    so the grid is scanned in order rather than bisected.
    """
    n, alpha = _check_params(n, alpha)
    for eps in witness_grid(n, k_max):
        margin = f_cyc_closed_form(n, alpha, eps) - f_id_closed_form(n, alpha, eps)
        if margin > WITNESS_MIN_MARGIN:
            return eps, margin
    raise SearchExhaustedError(n, alpha, degenerate_gap(n, alpha), k_max)


@dataclass(frozen=True)
class VerificationRecord:
    n: int
    alpha: float
    epsilon: float
    x: tuple[float, ...]
    y: tuple[float, ...]
    f_id: float
    f_aid: float
    f_cyc: float
    best_value: float
    maximizers: tuple[Permutation, ...]
    degenerate_gap: float

    @property
    def margin(self) -> float:
        """``f_cyc - f_id`` at the witness epsilon."""
        return self.f_cyc - self.f_id

    @property
    def baselines_tie(self) -> bool:
        return abs(self.f_id - self.f_aid) <= 1e-12 * max(abs(self.f_id), abs(self.f_aid))

    @property
    def max_exceeds_baselines(self) -> bool:
        return not within_tie(max(self.f_id, self.f_aid), self.best_value)

    @property
    def max_dominates_cyc(self) -> bool:
        return self.best_value >= self.f_cyc - TIE_RTOL * abs(self.f_cyc)

    @property
    def cyc_is_maximizer(self) -> bool:
        return Permutation.cyclic(self.n) in self.maximizers

    @property
    def holds(self) -> bool:
        return self.baselines_tie and self.max_exceeds_baselines and self.max_dominates_cyc

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": self.alpha,
            "epsilon": self.epsilon,
            "x": list(self.x),
            "y": list(self.y),
            "f_id": self.f_id,
            "f_aid": self.f_aid,
            "f_cyc": self.f_cyc,
            "margin": self.margin,
            "best_value": self.best_value,
            "maximizers": [p.to_string() for p in self.maximizers],
            "degenerate_gap": self.degenerate_gap,
            "baselines_tie": self.baselines_tie,
            "max_exceeds_baselines": self.max_exceeds_baselines,
            "max_dominates_cyc": self.max_dominates_cyc,
            "cyc_is_maximizer": self.cyc_is_maximizer,
            "holds": self.holds,
        }


def verify_proposition(
    n: int, alpha: float, epsilon: float | None = None, n_cap: int = DEFAULT_N_CAP
) -> VerificationRecord:
    """Build the instance, maximize by brute force and record the comparison.

    With ``epsilon=None`` the witness search picks epsilon; that mode requires
    ``n > 2 + 2**alpha``.
    """
    n, alpha = _check_params(n, alpha)
    gap = degenerate_gap(n, alpha)
    if epsilon is None:
        if gap <= 0:
            raise RegimeError(
                f"n={n}, alpha={alpha:g}: degenerate gap (n-2) - 2^alpha = {gap:.17g} is not positive"
            )
        epsilon, _ = find_witness_epsilon(n, alpha)
    spec = CounterexampleSpec(n, alpha, epsilon)
    x, y = construct_instance(spec)
    result = solve_brute_force(x, y, alpha, n_cap=n_cap)
    return VerificationRecord(
        n=n,
        alpha=alpha,
        epsilon=spec.epsilon,
        x=tuple(x.tolist()),
        y=tuple(y.tolist()),
        f_id=assignment_objective(x, y, Permutation.identity(n), alpha),
        f_aid=assignment_objective(x, y, Permutation.anti_identity(n), alpha),
        f_cyc=f_cyc_closed_form(n, alpha, spec.epsilon),
        best_value=result.best_value,
        maximizers=result.maximizers,
        degenerate_gap=gap,
    )
