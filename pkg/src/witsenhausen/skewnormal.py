"""Skew-normal information quantities for the hybrid scheme with a sign side variable.

When the decoder additionally learns the sign of the interim state, the
conditional laws become skew normal. This module provides the entropy
reduction function Psi (the entropy deficit of a skew normal relative to its
Gaussian envelope), the three sign-conditioned entropies of the scheme, the
skew-normal conditional variance and mean, the information-constraint margin,
and the conditional MMSE of the scheme, optimized over the input correlation.

Numerical care: the skew integrands contain phi/Phi ratios whose denominator
underflows in the left tail; every such ratio is routed through the log-space
mills_ratio so no integral is silently truncated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import log_ndtr

from .core import DegenerateInput, ProblemParams
from .gaussian_info import ic_feasible
from .numerics import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    _adaptive,
    gauss_weighted_integral,
    integral_real_line,
    mills_ratio,
    minimize_1d,
    norm_cdf,
    norm_pdf,
)

__all__ = [
    "CoordParams",
    "entropy_reduction",
    "sign_conditioned_entropies",
    "coord_ic_margin",
    "skew_cond_variance",
    "skew_cond_mean",
    "coord_mmse_at_rho",
    "mmse_via_conditional_density",
    "dropped_odd_term",
    "mmse_coord",
    "cov_state_precoder",
    "cov_interim_output_precoder",
]

_LN2 = math.log(2.0)
_LOG2_2PIE = math.log2(2.0 * math.pi * math.e)

# Correlation grid scanned before golden-section refinement. The feasible set
# in rho is an interval here, but no structure theorem is assumed beyond that.
RHO_GRID = 2001


@dataclass(frozen=True)
class CoordParams:
    """Hybrid-scheme operating point: power P, input correlation rho, and (Q, N).

    T = P + Q + 2 rho sqrt(PQ) is the interim-state variance; it equals
    (sqrt(Q) + rho sqrt(P))^2 + P(1 - rho^2) and is clamped at 0 against
    rounding. Requires P <= Q.
    """

    P: float
    rho: float
    Q: float
    N: float
    T: float = field(init=False)

    def __post_init__(self) -> None:
        if self.Q <= 0.0 or self.N <= 0.0:
            raise ValueError("Q and N must be positive")
        if not 0.0 <= self.P <= self.Q:
            raise ValueError(f"P={self.P} outside [0, Q={self.Q}]")
        if not -1.0 <= self.rho <= 1.0:
            raise ValueError(f"rho={self.rho} outside [-1, 1]")
        t = self.P + self.Q + 2.0 * self.rho * math.sqrt(self.P * self.Q)
        object.__setattr__(self, "T", max(t, 0.0))


def _psi_integrand(alpha: float):
    """t log2 t with t = 2 Phi(alpha x), evaluated through the log CDF.

    t -> 0 makes t log2 t -> 0; the explicit branch avoids 0 * (-inf) = nan
    once exp(log Phi) underflows.
    """

    def f(x):
        l = log_ndtr(alpha * np.asarray(x, dtype=float))
        t = 2.0 * np.exp(l)
        return np.where(t > 0.0, t * (l + _LN2) / _LN2, 0.0)

    return f


def entropy_reduction(
    alpha: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Entropy deficit Psi(alpha) of a skew normal with skewness alpha, in bits.

    Psi(alpha) = int 2 Phi(alpha x) log2(2 Phi(alpha x)) phi(x) dx. Even in
    alpha, Psi(0) = 0, and Psi -> 1 as |alpha| -> inf.
    """
    if alpha == 0.0:
        return 0.0
    if math.isinf(alpha):
        return 1.0
    return gauss_weighted_integral(_psi_integrand(alpha), cfg)


def _entropy_reduction_many(alphas: np.ndarray, cfg: QuadratureConfig) -> np.ndarray:
    """Psi on a batch of finite skewness values, one shared adaptive quadrature."""
    alphas = np.asarray(alphas, dtype=float)
    if alphas.size == 0:
        return np.zeros(0)

    def f(x):
        x = np.asarray(x, dtype=float)
        ax = x[:, None] * alphas[None, :]
        l = log_ndtr(ax)
        t = 2.0 * np.exp(l)
        val = np.where(t > 0.0, t * (l + _LN2) / _LN2, 0.0)
        return val * norm_pdf(x)[:, None]

    R = cfg.truncation_radius
    out = np.asarray(_adaptive(f, -R, R, cfg), dtype=float)
    out[alphas == 0.0] = 0.0
    return out


def _skew_scales(cp: CoordParams) -> tuple[float, float, float]:
    """(s, residual power, skewness of the joint output/precoder pair)."""
    s = math.sqrt(cp.Q) + cp.rho * math.sqrt(cp.P)
    p_res = cp.P * (1.0 - cp.rho * cp.rho)
    if s * s <= 0.0:
        return s, p_res, math.inf
    t, n = cp.T, cp.N
    d2 = math.sqrt((t * s * s * n + p_res * (t + n) ** 2) / (s * s * n * n))
    return s, p_res, d2


def sign_conditioned_entropies(
    cp: CoordParams, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> tuple[float, float, float]:
    """The three conditional entropies of the hybrid scheme given the sign, in bits.

    Returns (h(state, precoder | sign), h(output | sign), h(output, precoder | sign)).
    Conditioning a centered Gaussian on a sign costs exactly one bit for the
    joint with the state, and a Psi correction for the skewed pairs.
    """
    s, p_res, d2 = _skew_scales(cp)
    if p_res <= 0.0 or s == 0.0:
        raise DegenerateInput(
            f"degenerate hybrid scheme: residual power {p_res}, state scale {s}"
        )
    t, n = cp.T, cp.N
    h_state_prec = 0.5 * math.log2(
        (2.0 * math.pi * math.e) ** 2 * cp.P * cp.Q * (1.0 - cp.rho * cp.rho)
    ) - 1.0
    h_out = 0.5 * math.log2(2.0 * math.pi * math.e * (t + n)) - entropy_reduction(
        math.sqrt(t / n), cfg
    )
    h_out_prec = 0.5 * math.log2(
        (2.0 * math.pi * math.e) ** 2 * (t + n) * n * p_res / (p_res + n)
    ) - entropy_reduction(d2, cfg)
    return h_state_prec, h_out, h_out_prec


def coord_ic_margin(
    cp: CoordParams, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Information-constraint margin of the hybrid scheme, in bits.

    0.5 log2(1 + P(1-rho^2)/N) - Psi(sqrt(T/N)) + Psi(delta) - 1, where the
    trailing 1 is the one bit carried by the sign variable. The scheme is
    achievable iff the margin is >= 0. Returns -inf at the fully degenerate
    point where the interim state vanishes.
    """
    s, p_res, d2 = _skew_scales(cp)
    if s == 0.0:
        return -math.inf
    cap = 0.5 * math.log2(1.0 + p_res / cp.N)
    d1 = math.sqrt(cp.T / cp.N)
    return cap - entropy_reduction(d1, cfg) + entropy_reduction(d2, cfg) - 1.0


def skew_cond_variance(y1, T: float, N: float):
    """Conditional variance of the interim state given output y1 and a positive sign.

    (TN/(T+N)) (1 - u m(u) - m(u)^2) with u = y1 sqrt(T/(N(T+N))) and m the
    Mills ratio; clipped into [0, TN/(T+N)], the bounds it satisfies exactly.
    Accepts scalars or arrays.
    """
    if T <= 0.0 or N <= 0.0:
        raise ValueError("T and N must be positive")
    sig2 = T * N / (T + N)
    u = np.asarray(y1, dtype=float) * math.sqrt(T / (N * (T + N)))
    m = mills_ratio(u)
    val = np.clip(sig2 * (1.0 - u * m - m * m), 0.0, sig2)
    if np.ndim(y1) == 0:
        return float(val)
    return val


def skew_cond_mean(y1, T: float, N: float):
    """Conditional mean of the interim state given output y1 and a positive sign.

    mu + sigma m(mu/sigma) with mu = y1 T/(T+N) and sigma^2 = TN/(T+N): the
    mean of the conditional Gaussian truncated to the positive half-line.
    """
    if T <= 0.0 or N <= 0.0:
        raise ValueError("T and N must be positive")
    sig = math.sqrt(T * N / (T + N))
    mu = np.asarray(y1, dtype=float) * (T / (T + N))
    val = mu + sig * mills_ratio(mu / sig)
    if np.ndim(y1) == 0:
        return float(val)
    return val


def coord_mmse_at_rho(
    cp: CoordParams, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Estimation cost of the hybrid scheme at a fixed correlation, in power units.

    Closed-form single integral
    (TN/(T+N)) (1 - (1/pi) sqrt(N/(2T+N)) * int phi(w)/Phi(kappa w) dw),
    kappa = sqrt(T/(2T+N)); the ratio in the integrand is rewritten as
    mills(kappa w) exp(-w^2 (1-kappa^2)/2), total on the whole line. Since
    kappa^2 <= 1/2, the integrand decays at least like exp(-w^2/4).
    """
    t, n = cp.T, cp.N
    if t == 0.0:
        return 0.0
    sig2 = t * n / (t + n)
    kap2 = t / (2.0 * t + n)
    kap = math.sqrt(kap2)

    def f(w):
        w = np.asarray(w, dtype=float)
        return mills_ratio(kap * w) * np.exp(-0.5 * w * w * (1.0 - kap2))

    g = integral_real_line(f, cfg)
    return sig2 * (1.0 - (1.0 / math.pi) * math.sqrt(n / (2.0 * t + n)) * g)


def _coord_mmse_many(Ts: np.ndarray, N: float, cfg: QuadratureConfig) -> np.ndarray:
    """coord_mmse_at_rho on a batch of interim variances, one shared quadrature."""
    Ts = np.asarray(Ts, dtype=float)
    if Ts.size == 0:
        return np.zeros(0)
    sig2 = Ts * N / (Ts + N)
    kap2 = Ts / (2.0 * Ts + N)
    kap = np.sqrt(kap2)

    def f(w):
        w = np.asarray(w, dtype=float)
        arg = w[:, None] * kap[None, :]
        return mills_ratio(arg) * np.exp(-0.5 * (w * w)[:, None] * (1.0 - kap2)[None, :])

    R = cfg.truncation_radius
    g = np.asarray(_adaptive(f, -R, R, cfg), dtype=float)
    return sig2 * (1.0 - (1.0 / math.pi) * np.sqrt(N / (2.0 * Ts + N)) * g)


def mmse_via_conditional_density(
    cp: CoordParams, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Estimation cost as the conditional variance averaged over the output density.

    Independent route used to cross-check coord_mmse_at_rho: integrates
    skew_cond_variance against the skew-normal output density
    2 Phi(sqrt(T/N) s) phi(s) after standardizing the output by sqrt(T+N).
    """
    t, n = cp.T, cp.N
    if t == 0.0:
        return 0.0
    sy = math.sqrt(t + n)
    d1 = math.sqrt(t / n)

    def f(s):
        s = np.asarray(s, dtype=float)
        return skew_cond_variance(sy * s, t, n) * 2.0 * norm_cdf(d1 * s)

    return gauss_weighted_integral(f, cfg)


def dropped_odd_term(
    cp: CoordParams, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """The u m(u) cross term of the conditional variance, averaged over the output.

    Analytically zero (the integrand reduces to an odd function); evaluated
    literally as a check that dropping it from the closed form is sound.
    """
    t, n = cp.T, cp.N
    if t == 0.0:
        return 0.0
    d1 = math.sqrt(t / n)

    def f(s):
        u = d1 * np.asarray(s, dtype=float)
        return u * mills_ratio(u) * 2.0 * norm_cdf(u)

    return gauss_weighted_integral(f, cfg)


def mmse_coord(
    P: float, params: ProblemParams, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> tuple[float, float]:
    """Minimal hybrid-scheme estimation cost at power P, and its correlation.

    Minimizes coord_mmse_at_rho over rho in [-1, 1] subject to a nonnegative
    information-constraint margin (infeasible points count as +inf). The
    RHO_GRID grid values are precomputed in batch; refinement probes fall back
    to the scalar path. Raises EmptyFeasibleSet when no correlation lets the
    channel carry the one-bit sign.
    """
    Q, N = params.Q, params.N
    if not 0.0 <= P <= Q:
        raise ValueError(f"P={P} outside [0, Q]")

    xs = np.linspace(-1.0, 1.0, RHO_GRID)
    margins = _margin_grid(P, params, xs, cfg)
    margin_cache = {float(x): float(m) for x, m in zip(xs, margins)}
    feasible = np.array([ic_feasible(float(m)) for m in margins], dtype=bool)
    mmse_cache: dict[float, float] = {}
    if feasible.any():
        rhos = xs[feasible]
        ts = P + Q + 2.0 * rhos * math.sqrt(P * Q)
        vals = _coord_mmse_many(np.maximum(ts, 0.0), N, cfg)
        mmse_cache = {float(r): float(v) for r, v in zip(rhos, vals)}

    def objective(rho: float) -> float:
        m = margin_cache.get(rho)
        if m is None:
            m = coord_ic_margin(CoordParams(P, rho, Q, N), cfg)
        if not ic_feasible(m):
            return math.inf
        v = mmse_cache.get(rho)
        if v is None:
            v = coord_mmse_at_rho(CoordParams(P, rho, Q, N), cfg)
        return v

    rho_star, val = minimize_1d(objective, -1.0, 1.0, grid=RHO_GRID, tol=1e-9)
    return val, rho_star


def _margin_grid(
    P: float, params: ProblemParams, xs: np.ndarray, cfg: QuadratureConfig
) -> np.ndarray:
    """Information-constraint margins on a correlation grid, batched Psi calls."""
    Q, N = params.Q, params.N
    sq, sp = math.sqrt(Q), math.sqrt(P)
    s = sq + xs * sp
    p_res = P * (1.0 - xs * xs)
    t = np.maximum(P + Q + 2.0 * xs * sq * sp, 0.0)
    ok = s * s > 0.0
    d1 = np.sqrt(t / N)
    with np.errstate(divide="ignore", invalid="ignore"):
        d2 = np.sqrt((t * s * s * N + p_res * (t + N) ** 2) / (s * s * N * N))
    cap = 0.5 * np.log2(1.0 + p_res / N)

    psi = np.zeros((2, xs.size))
    psi[0, ok] = _entropy_reduction_many(d1[ok], cfg)
    psi[1, ok] = _entropy_reduction_many(d2[ok], cfg)
    return np.where(ok, cap - psi[0] + psi[1] - 1.0, -math.inf)


def cov_state_precoder(cp: CoordParams) -> np.ndarray:
    """Covariance of (state, precoder variable) for the hybrid scheme.

    Its determinant is P Q (1 - rho^2) regardless of the noise level.
    """
    s, p_res, _ = _skew_scales(cp)
    c = (p_res / (p_res + cp.N)) * (s / math.sqrt(cp.Q))
    return np.array(
        [
            [cp.Q, c * cp.Q],
            [c * cp.Q, p_res + c * c * cp.Q],
        ]
    )


def cov_interim_output_precoder(cp: CoordParams) -> np.ndarray:
    """Covariance of (interim state, output, precoder variable) for the hybrid scheme."""
    s, p_res, _ = _skew_scales(cp)
    t, n = cp.T, cp.N
    a = p_res * (t + n) / (p_res + n)
    w_var = p_res + (p_res * s / (p_res + n)) ** 2
    return np.array(
        [
            [t, t, a],
            [t, t + n, a],
            [a, a, w_var],
        ]
    )
