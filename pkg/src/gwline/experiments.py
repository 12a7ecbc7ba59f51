"""Epsilon sweeps over the counterexample family and Monte Carlo optimality counts."""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .core import CostParams, Permutation, ValidationError
from .counterexample import (
    CounterexampleSpec,
    construct_instance,
    epsilon_upper,
    f_cyc_closed_form,
    f_id_closed_form,
)
from .solvers import DEFAULT_N_CAP, CapExceededError, solve_brute_force

SWEEP_HEADER = ("epsilon", "f_id", "f_cyc", "f_max", "argmax")


class ConfigError(ValidationError):
    pass


class Distribution(str, enum.Enum):
    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"

    @classmethod
    def parse(cls, value) -> "Distribution":
        try:
            return cls(value)
        except ValueError:
            choices = ", ".join(d.value for d in cls)
            raise ConfigError(f"unknown distribution {value!r} (choose from {choices})") from None


def fmt_float(v: float) -> str:
    return format(v, ".17g")


# --------------------------------------------------------------------------
# epsilon sweep
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    epsilon: float
    f_id: float
    f_cyc: float
    f_max: float | None = None
    argmax: Permutation | None = None
    error: str | None = None

    def csv_fields(self) -> list[str]:
        if self.error is not None:
            return [fmt_float(self.epsilon), "nan", "nan", "nan", "invalid-epsilon"]
        f_max = "" if self.f_max is None else fmt_float(self.f_max)
        argmax = "" if self.argmax is None else self.argmax.to_string("-")
        return [fmt_float(self.epsilon), fmt_float(self.f_id), fmt_float(self.f_cyc), f_max, argmax]


def default_epsilon_grid(n: int, k_min: int = 1, k_max: int = 20) -> list[float]:
    hi = epsilon_upper(n)
    return [hi * 2.0**-k for k in range(k_min, k_max + 1)]


def sweep_epsilon(
    n: int,
    alpha: float,
    grid: list[float] | None = None,
    with_brute_force: bool = False,
    n_cap: int = DEFAULT_N_CAP,
) -> list[SweepRow]:
    """Evaluate f_id and f_cyc (and optionally the exact maximum) along an epsilon grid.

    An epsilon outside ``(0, 2/(n-3))`` yields a row with ``error`` set instead
    of aborting the sweep.
    """
    alpha = CostParams(alpha).alpha
    if with_brute_force and n > n_cap:
        raise CapExceededError(f"n={n} exceeds the brute-force cap of {n_cap}")
    if grid is None:
        grid = default_epsilon_grid(n)
    rows = []
    for eps in grid:
        eps = float(eps)
        try:
            spec = CounterexampleSpec(n, alpha, eps)
        except ValidationError as exc:
            rows.append(SweepRow(eps, math.nan, math.nan, error=str(exc)))
            continue
        f_id = f_id_closed_form(n, alpha, eps)
        f_cyc = f_cyc_closed_form(n, alpha, eps)
        if with_brute_force:
            x, y = construct_instance(spec)
            res = solve_brute_force(x, y, alpha, n_cap=n_cap)
            rows.append(SweepRow(eps, f_id, f_cyc, res.best_value, res.argmax))
        else:
            rows.append(SweepRow(eps, f_id, f_cyc))
    return rows


def sweep_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow(row.csv_fields())
    return buf.getvalue()


# --------------------------------------------------------------------------
# Monte Carlo study
# --------------------------------------------------------------------------


class Outcome(str, enum.Enum):
    ID = "id"
    AID = "aid"
    OTHER = "other"
    TIE = "tie"


@dataclass(frozen=True)
class ExperimentReport:
    n: int
    alpha: float
    trials: int
    seed: int
    distribution: str
    count_id_optimal: int
    count_aid_optimal: int
    count_other_optimal: int
    count_ties: int
    fraction_id_or_aid: float

    def as_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["tool_version"] = __version__
        return d

    def to_json(self) -> str:
        return dumps_flat(self.as_dict())


def dumps_flat(obj: dict) -> str:
    """JSON for a flat mapping, floats written with 17 significant digits."""
    parts = []
    for key, value in obj.items():
        if isinstance(value, float):
            text = fmt_float(value)
            if value.is_integer() and "e" not in text:
                text += ".0"
        else:
            text = json.dumps(value)
        parts.append(f"  {json.dumps(key)}: {text}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent generator for one trial, keyed by ``(seed, trial)``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def draw_points(rng: np.random.Generator, n: int, distribution: Distribution) -> np.ndarray:
    """Sorted i.i.d. sample of size ``n``; redrawn whole if any value repeats."""
    while True:
        if distribution is Distribution.UNIFORM:
            pts = np.sort(rng.random(n))
        else:
            pts = np.sort(rng.standard_normal(n))
        if np.all(np.diff(pts) > 0):
            return pts


def classify(maximizers, n: int) -> Outcome:
    """Classify a maximizer set.

    Mixed sets holding a baseline and another permutation count as ties.
    When only baselines attain the maximum, id takes precedence over a-id.
    """
    ident, anti = Permutation.identity(n), Permutation.anti_identity(n)
    found = set(maximizers)
    baselines = found & {ident, anti}
    if baselines and found - baselines:
        return Outcome.TIE
    if not baselines:
        return Outcome.OTHER
    return Outcome.ID if ident in baselines else Outcome.AID


def run_trial(n: int, alpha: float, seed: int, trial: int, distribution: Distribution) -> Outcome:
    rng = trial_rng(seed, trial)
    x = draw_points(rng, n, distribution)
    y = draw_points(rng, n, distribution)
    return classify(solve_brute_force(x, y, alpha).maximizers, n)


def _run_trials(n, alpha, seed, distribution, trial_ids) -> dict[Outcome, int]:
    counts = dict.fromkeys(Outcome, 0)
    for t in trial_ids:
        counts[run_trial(n, alpha, seed, t, distribution)] += 1
    return counts


def monte_carlo_study(
    n: int,
    alpha: float,
    trials: int,
    seed: int,
    distribution: str | Distribution = Distribution.UNIFORM,
    workers: int = 1,
    n_cap: int = DEFAULT_N_CAP,
) -> ExperimentReport:
    """Count how often id or a-id maximizes F on random sorted point pairs.

    Each trial draws its own ``x`` and ``y`` from a stream keyed by the trial
    index, so the report does not depend on ``workers``.
    """
    distribution = Distribution.parse(distribution)
    alpha = CostParams(alpha).alpha
    if int(n) != n or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    if n > n_cap:
        raise CapExceededError(f"n={n} exceeds the brute-force cap of {n_cap}")
    if trials < 1:
        raise ValidationError("trials must be at least 1")
    if int(seed) != seed or seed < 0:
        raise ValidationError(f"seed must be a non-negative integer, got {seed!r}")
    n, seed = int(n), int(seed)

    if workers <= 1:
        counts = _run_trials(n, alpha, seed, distribution, range(trials))
    else:
        chunks = [range(i, trials, workers) for i in range(workers)]
        counts = dict.fromkeys(Outcome, 0)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_trials, n, alpha, seed, distribution, c) for c in chunks]
            for fut in futures:
                for k, v in fut.result().items():
                    counts[k] += v

    return ExperimentReport(
        n=n,
        alpha=alpha,
        trials=trials,
        seed=seed,
        distribution=distribution.value,
        count_id_optimal=counts[Outcome.ID],
        count_aid_optimal=counts[Outcome.AID],
        count_other_optimal=counts[Outcome.OTHER],
        count_ties=counts[Outcome.TIE],
        fraction_id_or_aid=(counts[Outcome.ID] + counts[Outcome.AID]) / trials,
    )


# --------------------------------------------------------------------------
# file output
# --------------------------------------------------------------------------


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` via a temporary file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
