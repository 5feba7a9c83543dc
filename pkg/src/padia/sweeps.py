"""Scaling sweeps, power-law fitting, and machine-readable emission.

A sweep walks a grid of (N, M) instances, collects the analytic quantities
for each into a SweepRecord, optionally attaches a simulated round-success
value, and fits log(t_expected) against the swept axis by ordinary least
squares.  Emission is deliberately dumb: a fixed-schema CSV (floats printed
with 17 significant digits so they round-trip losslessly) or a JSON document
with the records under ``records`` and the fit under ``fit``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, TypeVar

from .dynamics import (
    default_step_count,
    evolve,
    make_global_schedule,
    make_local_schedule,
    make_partial_schedule,
)
from .model import SearchInstance, evolution_window, initial_state, make_instance
from .spectrum import (
    BoundReport,
    SpectralPoint,
    adiabatic_success_probability,
    bound_report,
    min_gap,
    one_round_time,
    overlap_beta,
    overlap_psi,
)

__all__ = [
    "DegenerateFit",
    "FitResult",
    "SweepRecord",
    "fit_loglog",
    "make_sweep_record",
    "sweep",
    "run_parallel",
    "SWEEP_CSV_HEADER",
    "sweep_records_to_rows",
    "spectral_points_to_rows",
    "bound_reports_to_rows",
    "rows_to_csv",
]

_T = TypeVar("_T")
_R = TypeVar("_R")

DEFAULT_LOCAL_KNOTS = 20_001

SWEEP_CSV_HEADER = (
    "n,m,schedule,g_min,t_prime,p_adiabatic,t_expected,"
    "ov_psi_minus,ov_beta_plus,bounds_hold,sim_success"
)


class DegenerateFit(ValueError):
    """The abscissa carries no information (all x values equal)."""


@dataclass(frozen=True)
class FitResult:
    """Least-squares line through (log x, log y)."""

    slope: float
    intercept: float
    r_squared: float
    axis: str


@dataclass(frozen=True)
class SweepRecord:
    """One grid point of a scaling sweep.

    For the partial schedule t_prime is the nominal one-round duration
    sqrt(N)/M and p_adiabatic the analytic one-round success probability; for
    the baseline schedules one sweep of the full interval ends in the target
    ground state, so p_adiabatic is 1 and t_prime the schedule duration.
    Either way t_expected = t_prime / p_adiabatic.
    """

    n_items: int
    n_marked: int
    schedule_kind: str
    g_min: float
    t_prime: float
    p_adiabatic: float
    t_expected: float
    ov_psi_minus: float
    ov_beta_plus: float
    bounds_hold: bool
    sim_success: float | None = None


def fit_loglog(xs: Sequence[float], ys: Sequence[float], axis: str = "x") -> FitResult:
    """Ordinary least squares on (log x, log y).

    Requires equal lengths, at least three points, and strictly positive
    data.  r_squared is the squared correlation; a perfectly flat response is
    reported as 1.0.
    """
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} x values vs {len(ys)} y values")
    if len(xs) < 3:
        raise ValueError(f"need at least 3 points to fit, got {len(xs)}")
    if any(x <= 0.0 for x in xs) or any(y <= 0.0 for y in ys):
        raise ValueError("log-log fit needs strictly positive data")
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    mean_x = sum(lx) / len(lx)
    mean_y = sum(ly) / len(ly)
    sxx = sum((x - mean_x) ** 2 for x in lx)
    syy = sum((y - mean_y) ** 2 for y in ly)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(lx, ly))
    if sxx == 0.0:
        raise DegenerateFit("all x values are equal; slope is undefined")
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    r_squared = 1.0 if syy == 0.0 else (sxy * sxy) / (sxx * syy)
    return FitResult(slope=slope, intercept=intercept, r_squared=r_squared, axis=axis)


def _simulated_success(
    instance: SearchInstance,
    schedule_kind: str,
    time_multiplier: float,
    epsilon: float,
    steps: int | None,
    local_knots: int,
) -> float:
    if schedule_kind == "partial":
        schedule = make_partial_schedule(instance, time_multiplier)
    elif schedule_kind == "global_linear":
        schedule = make_global_schedule(instance, time_multiplier)
    elif schedule_kind == "local_adiabatic":
        schedule = make_local_schedule(instance, epsilon, local_knots)
    else:
        raise ValueError(f"unknown schedule kind {schedule_kind!r}")
    if steps is None:
        steps = default_step_count(schedule.total_time)
    return evolve(instance, schedule, steps, initial_state(instance)).success_probability


def make_sweep_record(
    instance: SearchInstance,
    schedule_kind: str = "partial",
    time_multiplier: float = 1.0,
    epsilon: float = 1.0,
    steps: int | None = None,
    simulate: bool = False,
    local_knots: int = DEFAULT_LOCAL_KNOTS,
) -> SweepRecord:
    """Evaluate one (N, M) grid point."""
    window = evolution_window(instance)
    g_min, _ = min_gap(instance)
    p_round = adiabatic_success_probability(instance)
    if schedule_kind == "partial":
        t_prime = one_round_time(instance)
        p_adiabatic = p_round
    elif schedule_kind == "global_linear":
        t_prime = time_multiplier / (g_min * g_min)
        p_adiabatic = 1.0
    elif schedule_kind == "local_adiabatic":
        t_prime = make_local_schedule(instance, epsilon, local_knots).total_time
        p_adiabatic = 1.0
    else:
        raise ValueError(f"unknown schedule kind {schedule_kind!r}")
    sim_success = (
        _simulated_success(instance, schedule_kind, time_multiplier, epsilon, steps, local_knots)
        if simulate
        else None
    )
    return SweepRecord(
        n_items=instance.n_items,
        n_marked=instance.n_marked,
        schedule_kind=schedule_kind,
        g_min=g_min,
        t_prime=t_prime,
        p_adiabatic=p_adiabatic,
        t_expected=t_prime / p_adiabatic,
        ov_psi_minus=overlap_psi(instance, window.s_minus, 0),
        ov_beta_plus=overlap_beta(instance, window.s_plus, 0),
        bounds_hold=bound_report(instance).all_bounds_hold,
        sim_success=sim_success,
    )


def run_parallel(
    fn: Callable[[_T], _R], items: Sequence[_T], workers: int = 1
) -> list[_R]:
    """Map over items on a bounded thread pool, preserving input order."""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def sweep(
    axis: str,
    fixed_value: int,
    grid: Sequence[int],
    schedule_kind: str = "partial",
    time_multiplier: float = 1.0,
    epsilon: float = 1.0,
    steps: int | None = None,
    simulate: bool = False,
    workers: int = 1,
    local_knots: int = DEFAULT_LOCAL_KNOTS,
) -> tuple[list[SweepRecord], FitResult]:
    """Sweep N (axis='n', fixed M) or M (axis='m', fixed N) over a grid.

    Returns records sorted by (n, m) together with the log-log fit of
    t_expected against the swept axis.
    """
    if axis not in ("n", "m"):
        raise ValueError(f"axis must be 'n' or 'm', got {axis!r}")
    if len(grid) < 5:
        raise ValueError(f"need a grid of at least 5 points, got {len(grid)}")
    if axis == "n":
        instances = [make_instance(n, fixed_value) for n in grid]
    else:
        instances = [make_instance(fixed_value, m) for m in grid]

    def job(instance: SearchInstance) -> SweepRecord:
        return make_sweep_record(
            instance,
            schedule_kind=schedule_kind,
            time_multiplier=time_multiplier,
            epsilon=epsilon,
            steps=steps,
            simulate=simulate,
            local_knots=local_knots,
        )

    records = run_parallel(job, instances, workers)
    records.sort(key=lambda r: (r.n_items, r.n_marked))
    xs = [float(r.n_items if axis == "n" else r.n_marked) for r in records]
    ys = [r.t_expected for r in records]
    fit = fit_loglog(xs, ys, axis=f"log t_expected vs log {axis}")
    return records, fit


# --- emission -----------------------------------------------------------

def format_float(value: float) -> str:
    """17 significant digits: enough for a lossless float round-trip."""
    return f"{value:.17g}"


def sweep_records_to_rows(records: Iterable[SweepRecord]) -> list[dict]:
    """Rows keyed exactly like the CSV header (and the JSON mirror)."""
    return [
        {
            "n": r.n_items,
            "m": r.n_marked,
            "schedule": r.schedule_kind,
            "g_min": r.g_min,
            "t_prime": r.t_prime,
            "p_adiabatic": r.p_adiabatic,
            "t_expected": r.t_expected,
            "ov_psi_minus": r.ov_psi_minus,
            "ov_beta_plus": r.ov_beta_plus,
            "bounds_hold": r.bounds_hold,
            "sim_success": r.sim_success,
        }
        for r in records
    ]


def spectral_points_to_rows(points: Iterable[SpectralPoint]) -> list[dict]:
    return [
        {
            "s": p.s,
            "e0": p.e0,
            "e1": p.e1,
            "gap": p.gap,
            "ov_psi_0": p.ov_psi_0,
            "ov_beta_0": p.ov_beta_0,
        }
        for p in points
    ]


def bound_reports_to_rows(reports: Iterable[tuple[int, int, BoundReport]]) -> list[dict]:
    return [
        {
            "n": n,
            "m": m,
            "ov_psi_minus": rep.ov_psi_at_s_minus,
            "ov_beta_plus": rep.ov_beta_at_s_plus,
            "p_one_round": rep.p_one_round,
            "window_factor": rep.window_factor,
            "alpha_weight": rep.alpha_weight,
            "beta_weight": rep.beta_weight,
            "end_ratio": rep.end_ratio,
            "bounds_hold": rep.all_bounds_hold,
        }
        for n, m, rep in reports
    ]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def rows_to_csv(rows: Sequence[dict]) -> str:
    """Render rows (all sharing one key order) as CSV with a header line."""
    if not rows:
        return ""
    header = list(rows[0].keys())
    lines = [",".join(header)]
    lines.extend(",".join(_cell(row[key]) for key in header) for row in rows)
    return "\n".join(lines) + "\n"
