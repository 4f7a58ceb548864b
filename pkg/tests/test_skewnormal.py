import math

import numpy as np
import pytest
from scipy.integrate import trapezoid
from scipy.special import log_ndtr

from witsenhausen.core import DegenerateInput, EmptyFeasibleSet
from witsenhausen.numerics import QuadratureConfig, norm_cdf, norm_pdf
from witsenhausen.skewnormal import (
    CoordParams,
    coord_ic_margin,
    coord_mmse_at_rho,
    cov_interim_output_precoder,
    cov_state_precoder,
    dropped_odd_term,
    entropy_reduction,
    mmse_coord,
    mmse_via_conditional_density,
    sign_conditioned_entropies,
    skew_cond_mean,
    skew_cond_variance,
    _entropy_reduction_many,
)

LN2 = math.log(2.0)
LOG2_2PIE = math.log2(2.0 * math.pi * math.e)


def psi_trapezoid(alpha: float, n: int = 1_000_001) -> float:
    x = np.linspace(-12.0, 12.0, n)
    lp = log_ndtr(alpha * x)
    t = 2.0 * np.exp(lp)
    integrand = np.where(t > 0.0, t * (lp + LN2) / LN2, 0.0)
    return float(trapezoid(integrand * norm_pdf(x), x))


# ------------------------------------------------------- entropy reduction


def test_psi_zero_is_exact():
    assert entropy_reduction(0.0) == 0.0


def test_psi_even():
    for alpha in (0.5, 2.0, 5.0):
        assert entropy_reduction(-alpha) == pytest.approx(
            entropy_reduction(alpha), abs=1e-12
        )


def test_psi_matches_trapezoid_oracle():
    for alpha, frozen in [
        (0.5, 0.09831028238760285),
        (2.0, 0.5385034169849612),
        (5.0, 0.7963933255671833),
    ]:
        v = entropy_reduction(alpha)
        assert v == pytest.approx(psi_trapezoid(alpha), abs=1e-10)
        assert v == pytest.approx(frozen, abs=1e-12)


def test_psi_saturates_toward_one():
    v = entropy_reduction(1e6)
    assert 0.999 < v < 1.0
    assert entropy_reduction(math.inf) == 1.0


def test_psi_grid_shape_properties():
    grid = np.linspace(-10.0, 10.0, 201)
    vals = np.array([entropy_reduction(float(a)) for a in grid])
    assert np.all(vals >= 0.0) and np.all(vals < 1.0)
    assert np.allclose(vals, vals[::-1], atol=1e-10)
    half = vals[100:]  # alpha >= 0
    assert np.all(np.diff(half) >= -1e-12)


def test_psi_batch_matches_scalar():
    alphas = np.array([0.0, 0.5, 2.0, 5.0, 40.0])
    batch = _entropy_reduction_many(alphas, QuadratureConfig())
    for a, b in zip(alphas, batch):
        assert entropy_reduction(float(a)) == pytest.approx(float(b), abs=1e-10)


# ------------------------------------------------------------- CoordParams


def test_coord_params_interim_variance():
    cp = CoordParams(0.04, -0.5, 0.1, 0.01)
    assert cp.T == pytest.approx(0.04 + 0.1 - math.sqrt(0.004), rel=1e-14)
    assert cp.T == pytest.approx(
        (math.sqrt(0.1) - 0.5 * math.sqrt(0.04)) ** 2 + 0.04 * 0.75, rel=1e-12
    )


def test_coord_params_validation():
    with pytest.raises(ValueError):
        CoordParams(0.2, 0.0, 0.1, 0.01)  # P > Q
    with pytest.raises(ValueError):
        CoordParams(0.04, -1.5, 0.1, 0.01)
    with pytest.raises(ValueError):
        CoordParams(0.04, 0.0, 0.1, 0.0)


# ------------------------------------------------- sign-conditioned entropies


def test_entropies_zero_correlation_full_power():
    q = 0.1
    cp = CoordParams(q, 0.0, q, 0.01)
    h1, _, _ = sign_conditioned_entropies(cp)
    assert h1 == pytest.approx(0.5 * math.log2((2 * math.pi * math.e) ** 2 * q * q) - 1.0,
                               abs=1e-12)


def test_state_precoder_determinant_identity():
    rng = np.random.default_rng(11)
    for _ in range(50):
        q = float(rng.uniform(0.05, 2.0))
        p = float(rng.uniform(0.01, 1.0)) * q
        rho = float(rng.uniform(-0.95, 0.95))
        cp = CoordParams(p, rho, q, 0.01)
        det = float(np.linalg.det(cov_state_precoder(cp)))
        assert det == pytest.approx(p * q * (1 - rho * rho), rel=1e-10)


def test_entropies_degenerate_inputs():
    with pytest.raises(DegenerateInput):
        sign_conditioned_entropies(CoordParams(0.04, 1.0, 0.1, 0.01))
    with pytest.raises(DegenerateInput):
        sign_conditioned_entropies(CoordParams(0.1, -1.0, 0.1, 0.01))


def test_output_entropy_below_gaussian_bound():
    for rho in (-0.5, 0.0, 0.5):
        cp = CoordParams(0.04, rho, 0.1, 0.01)
        _, h_out, _ = sign_conditioned_entropies(cp)
        bound = 0.5 * math.log2(2 * math.pi * math.e * (cp.T + cp.N))
        assert h_out < bound  # strict for T > 0


def test_output_entropy_against_direct_integral():
    # brute-force differential entropy of the sign-conditioned output law
    cp = CoordParams(0.04, -0.4, 0.1, 0.01)
    _, h_out, _ = sign_conditioned_entropies(cp)
    T, N = cp.T, cp.N
    sy = math.sqrt(T + N)
    y = np.linspace(-14 * sy, 14 * sy, 2_000_001)
    f = (
        2.0
        / sy
        * norm_cdf(y * math.sqrt(T / (N * (T + N))))
        * norm_pdf(y / sy)
    )
    mask = f > 0
    h_num = -float(np.trapezoid(f[mask] * np.log2(f[mask]), y[mask]))
    assert h_out == pytest.approx(h_num, abs=1e-10)


def test_joint_entropy_against_direct_double_integral():
    # brute-force differential entropy of the sign-conditioned
    # (output, precoder) law; exercises the joint skewness argument
    cp = CoordParams(0.04, -0.4, 0.1, 0.01)
    _, _, h_joint = sign_conditioned_entropies(cp)
    k3 = cov_interim_output_precoder(cp)
    kyw = k3[1:, 1:]
    kx = k3[0, 1:]
    kinv = np.linalg.inv(kyw)
    cond_sd = math.sqrt(k3[0, 0] - kx @ kinv @ kx)
    det = float(np.linalg.det(kyw))

    sy, sw = math.sqrt(kyw[0, 0]), math.sqrt(kyw[1, 1])
    ys = np.linspace(-10 * sy, 10 * sy, 2500)
    ws = np.linspace(-10 * sw, 10 * sw, 2500)
    yy, ww = np.meshgrid(ys, ws, indexing="ij")
    v = np.stack([yy.ravel(), ww.ravel()])
    quad = np.sum(v * (kinv @ v), axis=0)
    gauss = np.exp(-0.5 * quad) / (2 * math.pi * math.sqrt(det))
    f = 2.0 * gauss * norm_cdf((kx @ kinv @ v) / cond_sd)
    mask = f > 1e-300
    cell = (ys[1] - ys[0]) * (ws[1] - ws[0])
    h_num = -float(np.sum(f[mask] * np.log2(f[mask]))) * cell
    assert h_joint == pytest.approx(h_num, abs=1e-8)


# --------------------------------------------------------------- IC margin


def test_ic_margin_matches_entropy_decomposition(params):
    # two independently coded routes to the same constraint margin
    for P, rho in [(0.025, -0.3), (0.03, -0.5), (0.05, 0.2), (0.09, -0.8)]:
        cp = CoordParams(P, rho, params.Q, params.N)
        h1, h2, h3 = sign_conditioned_entropies(cp)
        h_state = 0.5 * math.log2(2 * math.pi * math.e * params.Q)
        assert coord_ic_margin(cp) == pytest.approx(h1 - h3 + h2 - h_state, abs=1e-9)


def test_ic_margin_infeasible_when_noise_dominates():
    cp = CoordParams(0.05, 0.0, 0.1, 10.0)
    assert coord_ic_margin(cp) < 0.0


def test_ic_margin_feasible_below_two_point_minimum_power(params):
    pmin_two = params.Q * (1 - 2 / math.pi)
    assert 0.03 < pmin_two
    assert coord_ic_margin(CoordParams(0.03, -0.3, params.Q, params.N)) > 0.0


def test_ic_margin_endpoint_correlations(params):
    # rho = +-1 carries no residual power: margin is exactly the lost sign bit
    assert coord_ic_margin(CoordParams(0.04, 1.0, params.Q, params.N)) == pytest.approx(
        -1.0, abs=1e-12
    )
    assert coord_ic_margin(CoordParams(0.04, -1.0, params.Q, params.N)) == pytest.approx(
        -1.0, abs=1e-12
    )


# ------------------------------------------------ skew conditional moments


def test_skew_variance_at_zero_output():
    T, N = 0.09, 0.01
    sig2 = T * N / (T + N)
    assert skew_cond_variance(0.0, T, N) == pytest.approx(sig2 * (1 - 2 / math.pi),
                                                          rel=1e-12)


def test_skew_variance_limits():
    T, N = 0.09, 0.01
    sig2 = T * N / (T + N)
    assert skew_cond_variance(1e6, T, N) == pytest.approx(sig2, rel=1e-12)
    assert skew_cond_variance(-1e3 * math.sqrt(T + N), T, N) >= 0.0


def test_skew_variance_bounds_random_outputs():
    rng = np.random.default_rng(5)
    T, N = 0.12, 0.01
    sig2 = T * N / (T + N)
    y = rng.normal(scale=math.sqrt(T + N), size=1000)
    v = skew_cond_variance(y, T, N)
    assert np.all(v >= 0.0) and np.all(v <= sig2)


def test_skew_moments_against_binned_simulation():
    # truncated bivariate Gaussian, binned in the output
    rng = np.random.default_rng(99)
    T, N = 0.09, 0.01
    n = 4_000_000
    x1 = rng.normal(scale=math.sqrt(T), size=n)
    y = x1 + rng.normal(scale=math.sqrt(N), size=n)
    keep = x1 >= 0.0
    x1, y = x1[keep], y[keep]
    for y0 in (-0.15, 0.0, 0.12, 0.3):
        h = 0.004
        sel = np.abs(y - y0) < h
        count = int(sel.sum())
        assert count > 2000
        sample_var = float(np.var(x1[sel], ddof=1))
        predicted = skew_cond_variance(y0, T, N)
        stderr = sample_var * math.sqrt(2.0 / count)
        assert abs(sample_var - predicted) <= 5 * stderr + 5e-6
        sample_mean = float(np.mean(x1[sel]))
        mean_stderr = math.sqrt(sample_var / count)
        assert abs(sample_mean - skew_cond_mean(y0, T, N)) <= 5 * mean_stderr + 5e-4


def test_skew_mean_at_zero_output():
    T, N = 0.09, 0.01
    expected = math.sqrt(T * N / (T + N)) * math.sqrt(2 / math.pi)
    assert skew_cond_mean(0.0, T, N) == pytest.approx(expected, rel=1e-12)


# ------------------------------------------------------------- coord MMSE


FEASIBLE_PAIRS = [(0.025, -0.3), (0.03, -0.5), (0.05, -0.7), (0.08, -0.8), (0.1, -0.9)]


def test_closed_form_matches_conditional_variance_route(params):
    for P, rho in FEASIBLE_PAIRS:
        cp = CoordParams(P, rho, params.Q, params.N)
        assert coord_ic_margin(cp) >= 0.0  # pairs must actually be feasible
        a = coord_mmse_at_rho(cp)
        b = mmse_via_conditional_density(cp)
        assert a == pytest.approx(b, abs=1e-10)


def test_closed_form_frozen_value(params):
    cp = CoordParams(0.03, -0.3, params.Q, params.N)
    # frozen from the conditional-variance route (and a 2-D brute-force
    # integral during development, which agrees to its own grid error ~2e-8)
    assert coord_mmse_at_rho(cp) == pytest.approx(0.0070912025901810, abs=1e-12)


def test_odd_term_vanishes(params):
    for P, rho in FEASIBLE_PAIRS:
        cp = CoordParams(P, rho, params.Q, params.N)
        assert abs(dropped_odd_term(cp)) <= 1e-10


def test_mmse_bounded_by_unconditional(params):
    for P, rho in FEASIBLE_PAIRS + [(0.04, 0.6), (0.01, 0.0)]:
        cp = CoordParams(P, rho, params.Q, params.N)
        sig2 = cp.T * cp.N / (cp.T + cp.N)
        v = coord_mmse_at_rho(cp)
        assert 0.0 <= v <= sig2


def test_mmse_coord_infeasible_at_small_power(params):
    with pytest.raises(EmptyFeasibleSet):
        mmse_coord(0.005, params)


def test_mmse_coord_feasible_below_two_point_minimum(params):
    pmin_two = params.Q * (1 - 2 / math.pi)
    value, rho_star = mmse_coord(0.03, params)
    assert 0.03 < pmin_two
    assert math.isfinite(value) and value > 0.0
    assert -1.0 <= rho_star <= 1.0
    # optimum sits at the lower feasibility edge, within optimizer tolerance
    cp = CoordParams(0.03, rho_star, params.Q, params.N)
    assert coord_ic_margin(cp) >= -1e-12
    assert coord_ic_margin(CoordParams(0.03, rho_star - 1e-3, params.Q, params.N)) < 0.0


def test_mmse_coord_never_worse_than_feasible_samples(params):
    value, _ = mmse_coord(0.05, params)
    for rho in np.linspace(-1.0, 1.0, 41):
        cp = CoordParams(0.05, float(rho), params.Q, params.N)
        if coord_ic_margin(cp) >= 0.0:
            assert value <= coord_mmse_at_rho(cp) + 1e-12


def test_mmse_coord_monotone_decreasing(params):
    values = [mmse_coord(p, params)[0] for p in (0.03, 0.05, 0.07, 0.09)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_mmse_coord_frozen_study_value(params):
    value, rho_star = mmse_coord(0.03, params)
    assert value == pytest.approx(0.006523567118685, abs=1e-8)
    assert rho_star == pytest.approx(-0.55787, abs=1e-4)
