"""Time evolution of one search round in the reduced two-level picture.

A round runs the protocol: prepare the uniform superposition, switch the
Hamiltonian instantaneously to the window start (the sudden switch leaves the
state untouched), sweep the interpolation parameter across the window, then
measure.  The marked-outcome probability of that measurement is |amp_beta|^2
of the final state.

The Schroedinger equation i dpsi/dt = H(s(t)) psi (hbar = 1, dimensionless
time) is integrated with a classical fixed-step fourth-order Runge-Kutta
scheme, so a run is reproducible bit for bit from (schedule, steps) alone.
Two baseline schedules are provided for comparison: a global linear sweep of
the full interval and a local-adiabatic sweep whose rate tracks the squared
gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import (
    STATE_NORM_TOL,
    ReducedState,
    SearchInstance,
    evolution_window,
    initial_state,
)
from .spectrum import eigenvector_components, min_gap, one_round_time

__all__ = [
    "NORM_DRIFT_LIMIT",
    "NormDriftExceeded",
    "Schedule",
    "RoundOutcome",
    "RepeatStats",
    "make_partial_schedule",
    "make_global_schedule",
    "make_local_schedule",
    "default_step_count",
    "evolve",
    "run_round",
    "draw_repeat_stats",
    "simulate_until_success",
]

# A final-state norm farther than this from 1 means the step count was too
# coarse for the requested duration.
NORM_DRIFT_LIMIT = 1e-6


class NormDriftExceeded(RuntimeError):
    """Integration lost unitarity beyond NORM_DRIFT_LIMIT; increase steps."""


@dataclass(frozen=True)
class Schedule:
    """A monotone mapping t in [0, total_time] -> s in [0, 1].

    ``sample`` must accept scalars and numpy arrays alike.
    kind is one of 'partial', 'global_linear', 'local_adiabatic'.
    """

    kind: str
    total_time: float
    sample: Callable[[float], float]


@dataclass(frozen=True)
class RoundOutcome:
    """Result of integrating one round.

    success_probability is |amp_beta|^2 of the final state, i.e. the chance a
    computational-basis measurement lands in the marked set.  ground_fidelity
    is the squared overlap with the instantaneous ground state at the end of
    the schedule.
    """

    final_state: ReducedState
    success_probability: float
    ground_fidelity: float
    norm_drift: float


@dataclass(frozen=True)
class RepeatStats:
    """Outcome of repeating rounds until the first success."""

    rounds_used: int
    total_evolution_time: float
    succeeded: bool


def make_partial_schedule(instance: SearchInstance, time_multiplier: float) -> Schedule:
    """Linear sweep of the window [s_minus, s_plus] over c * sqrt(N)/M.

    time_multiplier scales the nominal one-round duration; the adiabatic
    regime is reached as it grows.
    """
    if time_multiplier <= 0.0:
        raise ValueError(f"time_multiplier must be positive, got {time_multiplier}")
    window = evolution_window(instance)
    total_time = time_multiplier * one_round_time(instance)
    s_minus, omega = window.s_minus, window.omega

    def sample(t):
        return s_minus + omega * (t / total_time)

    return Schedule(kind="partial", total_time=total_time, sample=sample)


def make_global_schedule(instance: SearchInstance, time_multiplier: float) -> Schedule:
    """Linear sweep of the whole interval [0, 1] over c * N/M.

    The full interval has unit width, so the analogue of the one-round
    duration is 1/g_min^2 = N/M.
    """
    if time_multiplier <= 0.0:
        raise ValueError(f"time_multiplier must be positive, got {time_multiplier}")
    g_min, _ = min_gap(instance)
    total_time = time_multiplier / (g_min * g_min)

    def sample(t):
        return t / total_time

    return Schedule(kind="global_linear", total_time=total_time, sample=sample)


def make_local_schedule(instance: SearchInstance, epsilon: float, steps: int) -> Schedule:
    """Sweep of [0, 1] whose rate adapts to the gap: ds/dt = epsilon * g(s)^2.

    The mapping t -> s is tabulated on ``steps`` knots by accumulating
    dt/ds = 1/(epsilon g^2) with the trapezoid rule and inverted by linear
    interpolation; total_time is the accumulated endpoint.
    """
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if steps < 100:
        raise ValueError(f"need at least 100 tabulation knots, got {steps}")
    s_knots = np.linspace(0.0, 1.0, steps)
    u = 1.0 - 2.0 * s_knots
    g_sq = u * u + 4.0 * s_knots * (1.0 - s_knots) * instance.b
    dt_ds = 1.0 / (epsilon * g_sq)
    t_knots = np.empty_like(s_knots)
    t_knots[0] = 0.0
    np.cumsum((dt_ds[1:] + dt_ds[:-1]) * 0.5 * np.diff(s_knots), out=t_knots[1:])
    total_time = float(t_knots[-1])

    def sample(t):
        return np.interp(t, t_knots, s_knots)

    return Schedule(kind="local_adiabatic", total_time=total_time, sample=sample)


def default_step_count(total_time: float) -> int:
    """Fixed-step default: 1000 steps per unit time (the Hamiltonian norm is
    at most 1), never fewer than 1000."""
    return max(1000, math.ceil(1000.0 * total_time))


def _integrate(
    a: float,
    sqrt_ab: float,
    s_nodes: list[float],
    s_mids: list[float],
    dt: float,
    x: complex,
    y: complex,
) -> tuple[complex, complex]:
    """RK4 on i dpsi/dt = H(s(t)) psi for the 2x2 reduction.

    Uses h_bb = (1-s)a, h_aa = 1 - h_bb, h_ab = -(1-s)sqrt(ab); plain Python
    complex arithmetic keeps the per-step overhead small.
    """
    half = 0.5 * dt
    sixth = dt / 6.0
    for n in range(len(s_mids)):
        om = 1.0 - s_nodes[n]
        hbb = om * a
        haa = 1.0 - hbb
        hab = -om * sqrt_ab
        k1x = -1j * (haa * x + hab * y)
        k1y = -1j * (hab * x + hbb * y)

        om = 1.0 - s_mids[n]
        hbb = om * a
        haa = 1.0 - hbb
        hab = -om * sqrt_ab
        x2 = x + half * k1x
        y2 = y + half * k1y
        k2x = -1j * (haa * x2 + hab * y2)
        k2y = -1j * (hab * x2 + hbb * y2)
        x3 = x + half * k2x
        y3 = y + half * k2y
        k3x = -1j * (haa * x3 + hab * y3)
        k3y = -1j * (hab * x3 + hbb * y3)

        om = 1.0 - s_nodes[n + 1]
        hbb = om * a
        haa = 1.0 - hbb
        hab = -om * sqrt_ab
        x4 = x + dt * k3x
        y4 = y + dt * k3y
        k4x = -1j * (haa * x4 + hab * y4)
        k4y = -1j * (hab * x4 + hbb * y4)

        x = x + sixth * (k1x + 2.0 * (k2x + k3x) + k4x)
        y = y + sixth * (k1y + 2.0 * (k2y + k3y) + k4y)
    return x, y


def schedule_stage_values(schedule: Schedule, steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Sample s at the step endpoints and midpoints of a fixed-step run."""
    times = np.linspace(0.0, schedule.total_time, steps + 1)
    mids = times[:-1] + 0.5 * (schedule.total_time / steps)
    s_nodes = np.asarray(schedule.sample(times), dtype=float)
    s_mids = np.asarray(schedule.sample(mids), dtype=float)
    return s_nodes, s_mids


def evolve(
    instance: SearchInstance,
    schedule: Schedule,
    steps: int,
    initial: ReducedState,
) -> RoundOutcome:
    """Integrate one round of the given schedule from ``initial``.

    Raises NormDriftExceeded when the final norm strays from 1 by more than
    NORM_DRIFT_LIMIT, the signature of an insufficient step count.
    """
    if steps < 10:
        raise ValueError(f"need at least 10 steps, got {steps}")
    if abs(initial.norm() - 1.0) > STATE_NORM_TOL:
        raise ValueError("initial state must be normalized")
    s_nodes, s_mids = schedule_stage_values(schedule, steps)
    dt = schedule.total_time / steps
    x, y = _integrate(
        instance.a,
        math.sqrt(instance.a * instance.b),
        s_nodes.tolist(),
        s_mids.tolist(),
        dt,
        complex(initial.amp_alpha),
        complex(initial.amp_beta),
    )
    norm = math.sqrt(abs(x) ** 2 + abs(y) ** 2)
    drift = abs(norm - 1.0)
    if drift > NORM_DRIFT_LIMIT:
        raise NormDriftExceeded(
            f"norm drifted by {drift:.3e} after {steps} steps over duration "
            f"{schedule.total_time:g}; increase steps"
        )
    s_end = float(s_nodes[-1])
    c_alpha, c_beta = eigenvector_components(instance, s_end, 0)
    fidelity = abs(c_alpha * x + c_beta * y) ** 2
    return RoundOutcome(
        final_state=ReducedState(amp_alpha=x, amp_beta=y),
        success_probability=abs(y) ** 2,
        ground_fidelity=fidelity,
        norm_drift=drift,
    )


def run_round(
    instance: SearchInstance,
    time_multiplier: float,
    steps: int | None = None,
) -> RoundOutcome:
    """One full protocol round: uniform start, window sweep, report outcome."""
    schedule = make_partial_schedule(instance, time_multiplier)
    if steps is None:
        steps = default_step_count(schedule.total_time)
    return evolve(instance, schedule, steps, initial_state(instance))


def draw_repeat_stats(
    success_probability: float,
    round_time: float,
    seed: int,
    max_rounds: int,
) -> RepeatStats:
    """Repeat identically distributed Bernoulli rounds until the first success.

    Deterministic for a given seed.  ``succeeded`` is False only when
    max_rounds draws all fail; the evolution time of failed rounds still
    counts toward the total.
    """
    if max_rounds < 1:
        raise ValueError(f"max_rounds must be at least 1, got {max_rounds}")
    if not 0.0 <= success_probability <= 1.0:
        raise ValueError(f"success probability must lie in [0, 1], got {success_probability}")
    rng = np.random.default_rng(seed)
    for rounds in range(1, max_rounds + 1):
        if rng.random() < success_probability:
            return RepeatStats(
                rounds_used=rounds,
                total_evolution_time=rounds * round_time,
                succeeded=True,
            )
    return RepeatStats(
        rounds_used=max_rounds,
        total_evolution_time=max_rounds * round_time,
        succeeded=False,
    )


def simulate_until_success(
    instance: SearchInstance,
    time_multiplier: float,
    steps: int | None = None,
    seed: int = 0,
    max_rounds: int = 10_000,
) -> RepeatStats:
    """Simulate repeat-until-success measurement statistics.

    Rounds are identical, so the dynamics is integrated once and the round
    outcomes are then drawn as Bernoulli trials with that success
    probability.
    """
    schedule = make_partial_schedule(instance, time_multiplier)
    outcome = run_round(instance, time_multiplier, steps)
    return draw_repeat_stats(
        outcome.success_probability, schedule.total_time, seed, max_rounds
    )
