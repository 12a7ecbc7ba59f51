"""Gromov-Monge assignment problems on the real line."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    CostParams,
    DimensionError,
    DiscreteMeasure,
    Permutation,
    PointConfiguration,
    TransportPlan,
    ValidationError,
    assignment_objective,
    gm_objective,
    gw_plan_objective,
    plan_from_permutation,
    rearrangement_residual,
)
from .solvers import (  # noqa: E402
    CapExceededError,
    SolveResult,
    evaluate_baselines,
    solve_brute_force,
    solve_local_search,
)
from .counterexample import (  # noqa: E402
    CounterexampleSpec,
    SearchExhaustedError,
    VerificationRecord,
    construct_instance,
    degenerate_gap,
    f_cyc_closed_form,
    f_id_closed_form,
    find_witness_epsilon,
    verify_proposition,
)
from .experiments import ExperimentReport, SweepRow, monte_carlo_study, sweep_epsilon  # noqa: E402

__all__ = [
    "CapExceededError",
    "CostParams",
    "CounterexampleSpec",
    "DimensionError",
    "DiscreteMeasure",
    "ExperimentReport",
    "Permutation",
    "PointConfiguration",
    "SearchExhaustedError",
    "SolveResult",
    "SweepRow",
    "TransportPlan",
    "ValidationError",
    "VerificationRecord",
    "assignment_objective",
    "construct_instance",
    "degenerate_gap",
    "evaluate_baselines",
    "f_cyc_closed_form",
    "f_id_closed_form",
    "find_witness_epsilon",
    "gm_objective",
    "gw_plan_objective",
    "monte_carlo_study",
    "plan_from_permutation",
    "rearrangement_residual",
    "solve_brute_force",
    "solve_local_search",
    "sweep_epsilon",
    "verify_proposition",
]
