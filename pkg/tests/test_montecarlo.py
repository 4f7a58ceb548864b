import math

import numpy as np
import pytest

from witsenhausen.core import validate_params
from witsenhausen.montecarlo import (
    RunningMoments,
    SimConfig,
    simulate_hybrid_conditional,
    simulate_linear,
    simulate_two_point,
)
from witsenhausen.skewnormal import (
    CoordParams,
    coord_mmse_at_rho,
    cov_interim_output_precoder,
    skew_cond_mean,
)
from witsenhausen.strategies import (
    LinearPolicy,
    TwoPointPolicy,
    linear_policy_for_power,
    mmse_linear,
    two_point_costs,
    two_point_min_power,
)


def within(closed, mean, stderr, k=4.0):
    return abs(mean - closed) <= k * stderr


def test_sim_config_rejects_tiny_samples():
    with pytest.raises(ValueError):
        SimConfig(n_samples=10)
    with pytest.raises(ValueError):
        SimConfig(n_samples=10_000, batch_size=0)


def test_running_moments_match_numpy():
    rng = np.random.default_rng(0)
    x = rng.normal(size=10_000)
    rm = RunningMoments()
    for chunk in np.array_split(x, 7):
        rm.add_batch(chunk)
    assert rm.mean == pytest.approx(float(np.mean(x)), abs=1e-12)
    var = rm.m2 / (rm.n - 1)
    assert var == pytest.approx(float(np.var(x, ddof=1)), rel=1e-10)


def test_deterministic_replay(params):
    cfg = SimConfig(n_samples=50_000, seed=123, batch_size=16_384)
    pol = linear_policy_for_power(0.04, params)
    a = simulate_linear(pol, params, cfg)
    b = simulate_linear(pol, params, cfg)
    assert a == b


def test_different_seeds_differ(params):
    pol = linear_policy_for_power(0.04, params)
    a = simulate_linear(pol, params, SimConfig(50_000, seed=1))
    b = simulate_linear(pol, params, SimConfig(50_000, seed=2))
    assert a.mmse_mean != b.mmse_mean


def test_stderr_scaling(params):
    pol = linear_policy_for_power(0.04, params)
    ratios = []
    for seed in range(10):
        small = simulate_linear(pol, params, SimConfig(4000, seed=seed))
        large = simulate_linear(pol, params, SimConfig(16_000, seed=seed + 100))
        ratios.append(small.mmse_stderr / large.mmse_stderr)
    mean_ratio = float(np.mean(ratios))
    assert 1.6 <= mean_ratio <= 2.4


class TestLinear:
    def test_full_cancellation(self, params):
        emp = simulate_linear(LinearPolicy(-1.0, 0.0), params, SimConfig(100_000, seed=5))
        assert within(params.Q, emp.power_mean, emp.power_stderr)
        assert emp.mmse_mean <= 4 * emp.mmse_stderr + 1e-12

    def test_no_control(self, params):
        emp = simulate_linear(LinearPolicy(0.0, 0.0), params, SimConfig(200_000, seed=6))
        Q, N = params.Q, params.N
        assert emp.power_mean == 0.0
        assert within(Q * N / (Q + N), emp.mmse_mean, emp.mmse_stderr)

    def test_study_point(self, params):
        pol = linear_policy_for_power(0.04, params)
        emp = simulate_linear(pol, params, SimConfig(1_000_000, seed=7))
        assert within(0.04, emp.power_mean, emp.power_stderr)
        assert within(mmse_linear(0.04, params), emp.mmse_mean, emp.mmse_stderr)

    def test_offset_branch(self, params):
        pol = linear_policy_for_power(2 * params.Q, params)
        emp = simulate_linear(pol, params, SimConfig(200_000, seed=8))
        assert within(2 * params.Q, emp.power_mean, emp.power_stderr)
        assert emp.mmse_mean <= 4 * emp.mmse_stderr + 1e-12


class TestTwoPoint:
    def test_zero_magnitude(self, params):
        emp = simulate_two_point(TwoPointPolicy(0.0), params, SimConfig(100_000, seed=9))
        assert within(params.Q, emp.power_mean, emp.power_stderr)
        assert emp.mmse_mean == 0.0

    def test_minimum_power(self, params):
        a = math.sqrt(2 * params.Q / math.pi)
        emp = simulate_two_point(TwoPointPolicy(a), params, SimConfig(500_000, seed=10))
        assert within(two_point_min_power(params), emp.power_mean, emp.power_stderr)

    def test_matches_quadrature(self, params):
        # magnitudes kept below ~4 noise sigmas so the squared error is not a
        # rare-event expectation at this sample size
        for seed, a in enumerate((0.05, math.sqrt(params.Q), 0.4)):
            cost = two_point_costs(TwoPointPolicy(a), params)
            emp = simulate_two_point(
                TwoPointPolicy(a), params, SimConfig(500_000, seed=20 + seed)
            )
            assert within(cost.P, emp.power_mean, emp.power_stderr)
            assert within(cost.S, emp.mmse_mean, emp.mmse_stderr)

    def test_unit_noise_regression(self):
        # the historical self-consistency point: N = 1, a = sqrt(Q)
        p = validate_params(1.0, 1.0)
        a = 1.0
        cost = two_point_costs(TwoPointPolicy(a), p)
        emp = simulate_two_point(TwoPointPolicy(a), p, SimConfig(500_000, seed=11))
        assert within(cost.S, emp.mmse_mean, emp.mmse_stderr)


class TestHybrid:
    def test_matches_closed_form(self, params):
        cp = CoordParams(0.03, -0.5, params.Q, params.N)
        emp = simulate_hybrid_conditional(cp, params, SimConfig(1_000_000, seed=12))
        assert within(cp.P, emp.power_mean, emp.power_stderr)
        assert within(coord_mmse_at_rho(cp), emp.mmse_mean, emp.mmse_stderr)

    def test_decoder_at_zero_output(self, params):
        cp = CoordParams(0.03, -0.3, params.Q, params.N)
        expected = math.sqrt(cp.T * cp.N / (cp.T + cp.N)) * math.sqrt(2 / math.pi)
        assert skew_cond_mean(0.0, cp.T, cp.N) == pytest.approx(expected, rel=1e-12)

    def test_sign_halves_agree(self, params):
        # independent re-draw; the two sign-conditioned halves are mirror images
        cp = CoordParams(0.04, -0.4, params.Q, params.N)
        rng = np.random.default_rng(77)
        n = 1_000_000
        x1 = rng.normal(scale=math.sqrt(cp.T), size=n)
        y = x1 + rng.normal(scale=math.sqrt(cp.N), size=n)
        pos = x1 >= 0.0
        err_pos = (x1[pos] - skew_cond_mean(y[pos], cp.T, cp.N)) ** 2
        err_neg = (x1[~pos] + skew_cond_mean(-y[~pos], cp.T, cp.N)) ** 2
        m1, m2 = float(np.mean(err_pos)), float(np.mean(err_neg))
        s1 = float(np.std(err_pos, ddof=1)) / math.sqrt(err_pos.size)
        s2 = float(np.std(err_neg, ddof=1)) / math.sqrt(err_neg.size)
        assert abs(m1 - m2) <= 4 * math.hypot(s1, s2)

    def test_rejects_degenerate_interim_state(self, params):
        with pytest.raises(ValueError):
            simulate_hybrid_conditional(
                CoordParams(params.Q, -1.0, params.Q, params.N),
                params,
                SimConfig(10_000, seed=1),
            )


def test_interim_output_precoder_covariance_matches_moments(params):
    # first-principles sampling of (interim state, output, precoder variable)
    cp = CoordParams(0.04, -0.4, params.Q, params.N)
    predicted = cov_interim_output_precoder(cp)
    rng = np.random.default_rng(123)
    n = 2_000_000
    Q, N, P, rho = params.Q, params.N, cp.P, cp.rho
    p_res = P * (1 - rho * rho)
    s = math.sqrt(Q) + rho * math.sqrt(P)
    x0 = rng.normal(scale=math.sqrt(Q), size=n)
    resid = rng.normal(scale=math.sqrt(p_res), size=n)
    z = rng.normal(scale=math.sqrt(N), size=n)
    x1 = (s / math.sqrt(Q)) * x0 + resid
    y = x1 + z
    w1 = resid + (p_res / (p_res + N)) * (s / math.sqrt(Q)) * x0
    samples = np.stack([x1, y, w1])
    emp = np.cov(samples)
    for i in range(3):
        for j in range(3):
            a, b = samples[i], samples[j]
            stderr = math.sqrt(
                (np.var(a) * np.var(b) + emp[i, j] ** 2) / n
            )
            assert abs(emp[i, j] - predicted[i, j]) <= 4 * stderr


def test_four_stderr_coverage_over_seeds(params):
    # the 4-stderr agreement should hold in nearly every seeded trial
    pol = linear_policy_for_power(0.04, params)
    closed_lin = mmse_linear(0.04, params)
    tp = TwoPointPolicy(0.3)
    closed_tp = two_point_costs(tp, params).S
    cp = CoordParams(0.05, -0.6, params.Q, params.N)
    closed_cp = coord_mmse_at_rho(cp)
    hits = 0
    trials = 0
    for seed in range(100):
        cfg = SimConfig(5000, seed=seed)
        for emp, closed in (
            (simulate_linear(pol, params, cfg), closed_lin),
            (simulate_two_point(tp, params, cfg), closed_tp),
            (simulate_hybrid_conditional(cp, params, cfg), closed_cp),
        ):
            trials += 1
            hits += within(closed, emp.mmse_mean, emp.mmse_stderr)
    assert hits / trials >= 0.95
