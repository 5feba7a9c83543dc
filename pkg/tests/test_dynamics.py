"""Schedules, the fixed-step propagator, and repeat-until-success draws.

Expected values for the local-adiabatic schedule come from the closed form
of the sweep-time integral,

    t_total = atan(sqrt(a/b)) / (epsilon * sqrt(a*b)),

derived by substituting u = 2s - 1 into dt/ds = 1/(eps*(b + a u^2)); a direct
fine-grid quadrature reproduces it and the tabulated schedule must match.
"""

import math

import numpy as np
import pytest

from padia.dynamics import (
    NormDriftExceeded,
    RepeatStats,
    Schedule,
    default_step_count,
    draw_repeat_stats,
    evolve,
    make_global_schedule,
    make_local_schedule,
    make_partial_schedule,
    run_round,
    simulate_until_success,
)
from padia.model import ReducedState, evolution_window, initial_state, make_instance
from padia.spectrum import eigenvector_components, overlap_beta, overlap_psi
from padia.sweeps import fit_loglog


def local_total_time_closed_form(n, m, epsilon=1.0):
    a = (n - m) / n
    b = m / n
    if a == 0.0:
        return 1.0 / epsilon
    return math.atan(math.sqrt(a / b)) / (epsilon * math.sqrt(a * b))


def ground_state(instance, s):
    c_alpha, c_beta = eigenvector_components(instance, s, 0)
    return ReducedState(complex(c_alpha), complex(c_beta))


class TestPartialSchedule:
    def test_nominal_duration_and_endpoints(self):
        sched = make_partial_schedule(make_instance(100, 1), 1.0)
        assert sched.kind == "partial"
        assert sched.total_time == pytest.approx(10.0, rel=1e-15)
        assert sched.sample(0.0) == pytest.approx(0.45, abs=1e-12)
        assert sched.sample(10.0) == pytest.approx(0.55, abs=1e-12)

    def test_small_all_marked(self):
        sched = make_partial_schedule(make_instance(4, 4), 1.0)
        assert sched.total_time == pytest.approx(0.5, rel=1e-15)
        assert sched.sample(0.0) == pytest.approx(0.25, abs=1e-12)
        assert sched.sample(0.5) == pytest.approx(0.75, abs=1e-12)

    def test_multiplier_scales_duration(self):
        sched = make_partial_schedule(make_instance(64, 1), 16.0)
        assert sched.total_time == pytest.approx(128.0, rel=1e-15)

    def test_linear_and_monotone(self):
        sched = make_partial_schedule(make_instance(64, 1), 2.0)
        ts = np.linspace(0.0, sched.total_time, 11)
        ss = sched.sample(ts)
        assert np.all(np.diff(ss) > 0.0)
        mid = sched.sample(sched.total_time / 2)
        assert mid == pytest.approx(0.5, abs=1e-12)

    def test_rejects_nonpositive_multiplier(self):
        with pytest.raises(ValueError):
            make_partial_schedule(make_instance(4, 1), 0.0)


class TestGlobalSchedule:
    def test_full_interval(self):
        sched = make_global_schedule(make_instance(16, 4), 1.0)
        assert sched.kind == "global_linear"
        assert sched.total_time == pytest.approx(4.0, rel=1e-15)  # N/M
        assert sched.sample(0.0) == 0.0
        assert sched.sample(sched.total_time) == pytest.approx(1.0, rel=1e-15)


class TestLocalSchedule:
    def test_all_marked_unit_gap(self):
        sched = make_local_schedule(make_instance(8, 8), 1.0, 1001)
        assert sched.kind == "local_adiabatic"
        assert sched.total_time == pytest.approx(1.0, rel=1e-12)
        sched2 = make_local_schedule(make_instance(8, 8), 2.0, 1001)
        assert sched2.total_time == pytest.approx(0.5, rel=1e-12)

    def test_against_closed_form(self):
        sched = make_local_schedule(make_instance(64, 1), 1.0, 20_001)
        assert sched.total_time == pytest.approx(11.655162414955429, rel=1e-8)

    def test_sqrt_m_scaling_ratio(self):
        t4 = make_local_schedule(make_instance(256, 4), 1.0, 20_001).total_time
        t1 = make_local_schedule(make_instance(256, 1), 1.0, 20_001).total_time
        assert t4 / t1 == pytest.approx(0.4820293896898684, rel=1e-8)
        assert 0.45 < t4 / t1 < 0.52

    def test_sqrt_n_growth(self):
        ns = [64, 256, 1024, 4096, 16384]
        totals = [
            make_local_schedule(make_instance(n, 1), 1.0, 20_001).total_time for n in ns
        ]
        for n, total in zip(ns, totals):
            assert total == pytest.approx(local_total_time_closed_form(n, 1), rel=1e-6)
        fit = fit_loglog(ns, totals)
        assert 0.45 < fit.slope < 0.55

    def test_monotone_sampling(self):
        sched = make_local_schedule(make_instance(64, 2), 1.0, 5001)
        ts = np.linspace(0.0, sched.total_time, 200)
        ss = sched.sample(ts)
        assert np.all(np.diff(ss) >= 0.0)
        assert ss[0] == 0.0
        assert ss[-1] == pytest.approx(1.0, abs=1e-12)

    def test_validations(self):
        with pytest.raises(ValueError):
            make_local_schedule(make_instance(4, 1), 0.0, 1000)
        with pytest.raises(ValueError):
            make_local_schedule(make_instance(4, 1), 1.0, 99)


class TestDefaultSteps:
    def test_floor_and_scaling(self):
        assert default_step_count(0.5) == 1000
        assert default_step_count(2.5) == 2500
        assert default_step_count(2048.0) == 2_048_000


class TestEvolve:
    def test_all_marked_state_is_pinned(self):
        inst = make_instance(16, 16)
        out = run_round(inst, 4.0)
        assert out.success_probability == pytest.approx(1.0, abs=1e-12)
        assert out.ground_fidelity == pytest.approx(1.0, abs=1e-12)
        assert out.norm_drift < 1e-9

    def test_frozen_schedule_preserves_eigenbasis_populations(self):
        inst = make_instance(16, 2)
        win = evolution_window(inst)
        frozen = Schedule(
            kind="partial", total_time=5.0, sample=lambda t: win.s_minus + 0.0 * t
        )
        psi0 = initial_state(inst)
        out = evolve(inst, frozen, 5000, psi0)
        assert out.norm_drift < 1e-9
        for k in (0, 1):
            c_alpha, c_beta = eigenvector_components(inst, win.s_minus, k)
            before = abs(c_alpha * psi0.amp_alpha + c_beta * psi0.amp_beta) ** 2
            after = (
                abs(
                    c_alpha * out.final_state.amp_alpha
                    + c_beta * out.final_state.amp_beta
                )
                ** 2
            )
            assert after == pytest.approx(before, abs=1e-9)

    def test_sudden_switch_leaves_state_unchanged(self):
        # Over a vanishing duration only an O(T) dynamical phase accrues.
        inst = make_instance(64, 1)
        out = run_round(inst, 1e-12, steps=10)
        psi0 = initial_state(inst)
        assert abs(out.final_state.amp_alpha - psi0.amp_alpha) < 1e-10
        assert abs(out.final_state.amp_beta - psi0.amp_beta) < 1e-10

    def test_sudden_limit_success_is_initial_overlap(self):
        inst = make_instance(64, 1)
        out = run_round(inst, 0.01)
        assert out.success_probability == pytest.approx(1.0 / 64.0, abs=5e-3)

    def test_ground_fidelity_tracks_adiabatic_prediction(self):
        # Slow sweep: the ground-state population at the end approaches the
        # population deposited there by the sudden switch.
        inst = make_instance(64, 1)
        win = evolution_window(inst)
        target = overlap_psi(inst, win.s_minus, 0)
        out64 = run_round(inst, 64.0, steps=2**16)
        assert out64.norm_drift < 1e-9
        assert out64.ground_fidelity == pytest.approx(target, abs=0.01)
        out16 = run_round(inst, 16.0)
        assert abs(out64.ground_fidelity - target) < abs(out16.ground_fidelity - target)

    def test_success_probability_stays_in_interference_band(self):
        # The measured marked-probability includes the surviving excited
        # component, so it oscillates with the duration inside a fixed band
        # around the ideal product P.
        inst = make_instance(64, 1)
        win = evolution_window(inst)
        a0 = math.sqrt(overlap_psi(inst, win.s_minus, 0))
        b0 = math.sqrt(overlap_beta(inst, win.s_plus, 0))
        a1 = math.sqrt(1.0 - a0 * a0)
        b1 = math.sqrt(1.0 - b0 * b0)
        out = run_round(inst, 64.0)
        low = (a0 * b0 - a1 * b1) ** 2 - 0.01
        high = (a0 * b0 + a1 * b1) ** 2 + 0.01
        assert low <= out.success_probability <= high

    def test_reversal_symmetry(self):
        inst = make_instance(64, 1)
        win = evolution_window(inst)
        forward = make_partial_schedule(inst, 4.0)
        steps = 32_000
        f_fwd = evolve(inst, forward, steps, ground_state(inst, win.s_minus)).ground_fidelity

        total = forward.total_time
        backward = Schedule(
            kind="partial", total_time=total, sample=lambda t: forward.sample(total - t)
        )
        f_rev = evolve(inst, backward, steps, ground_state(inst, win.s_plus)).ground_fidelity
        assert f_fwd == pytest.approx(f_rev, abs=1e-6)

    def test_norm_drift_exceeded_on_coarse_grid(self):
        inst = make_instance(64, 1)
        sched = make_partial_schedule(inst, 64.0)
        with pytest.raises(NormDriftExceeded):
            evolve(inst, sched, 10, initial_state(inst))

    def test_validations(self):
        inst = make_instance(4, 1)
        sched = make_partial_schedule(inst, 1.0)
        with pytest.raises(ValueError):
            evolve(inst, sched, 5, initial_state(inst))
        with pytest.raises(ValueError):
            evolve(inst, sched, 100, ReducedState(1.0 + 0j, 1.0 + 0j))


class TestRepeatUntilSuccess:
    def test_all_marked_first_round(self):
        stats = simulate_until_success(make_instance(9, 9), 1.0, seed=123)
        assert stats == RepeatStats(
            rounds_used=1, total_evolution_time=pytest.approx(1.0 / 3.0), succeeded=True
        )

    def test_deterministic_replay(self):
        inst = make_instance(16, 1)
        first = simulate_until_success(inst, 2.0, seed=7, max_rounds=100)
        second = simulate_until_success(inst, 2.0, seed=7, max_rounds=100)
        assert first == second

    def test_exhaustion_path(self):
        stats = draw_repeat_stats(0.0, 1.5, seed=0, max_rounds=5)
        assert stats == RepeatStats(rounds_used=5, total_evolution_time=7.5, succeeded=False)

    def test_mean_rounds_matches_geometric_expectation(self):
        p = 0.37
        n_samples = 4000
        mean = (
            sum(draw_repeat_stats(p, 1.0, seed, 10_000).rounds_used for seed in range(n_samples))
            / n_samples
        )
        assert mean == pytest.approx(1.0 / p, rel=0.05)

    def test_validations(self):
        with pytest.raises(ValueError):
            draw_repeat_stats(1.2, 1.0, 0, 10)
        with pytest.raises(ValueError):
            draw_repeat_stats(0.5, 1.0, 0, 0)
