"""Reusable numerical kernels.

Gaussian-weighted and whole-line quadrature (adaptive Gauss-Kronrod on a
truncated domain), a numerically stable Gaussian tail ratio, a bracketing
root-finder and a grid + golden-section 1-D minimizer.

All functions are pure; function arguments passed in must be safe to call
concurrently if the caller evaluates grids in parallel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq
from scipy.special import log_ndtr

from .core import EmptyFeasibleSet, NoBracket, NonConvergence

__all__ = [
    "QuadratureConfig",
    "DEFAULT_QUADRATURE",
    "gauss_weighted_integral",
    "integral_real_line",
    "mills_ratio",
    "find_root",
    "minimize_1d",
    "norm_pdf",
    "norm_cdf",
]

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def norm_pdf(x):
    """Standard normal density, vectorized."""
    x = np.asarray(x, dtype=float)
    return _INV_SQRT_2PI * np.exp(-0.5 * x * x)


def norm_cdf(x):
    """Standard normal CDF, vectorized."""
    from scipy.special import ndtr

    return ndtr(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and truncation for the adaptive quadratures.

    All integrands handled here decay at least like exp(-c x^2), so truncating
    the real line at `truncation_radius` standard-scale units discards tail
    mass below 1e-31 for the default radius of 12.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    truncation_radius: float = 12.0

    def __post_init__(self) -> None:
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.truncation_radius < 8.0:
            raise ValueError("truncation_radius must be >= 8 standard deviations")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_QUADRATURE = QuadratureConfig()

# 15-point Kronrod extension of 7-point Gauss-Legendre (nodes on [-1, 1]).
_XK = np.array(
    [
        -0.991455371120813,
        -0.949107912342759,
        -0.864864423359769,
        -0.741531185599394,
        -0.586087235467691,
        -0.405845151377397,
        -0.207784955007898,
        0.0,
        0.207784955007898,
        0.405845151377397,
        0.586087235467691,
        0.741531185599394,
        0.864864423359769,
        0.949107912342759,
        0.991455371120813,
    ]
)
_WK = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
        0.204432940075298,
        0.190350578064785,
        0.169004726639267,
        0.140653259715525,
        0.104790010322250,
        0.063092092629979,
        0.022935322010529,
    ]
)
# Gauss weights sit on the odd Kronrod nodes; zero elsewhere.
_WG = np.array(
    [
        0.0,
        0.129484966168870,
        0.0,
        0.279705391489277,
        0.0,
        0.381830050505119,
        0.0,
        0.417959183673469,
        0.0,
        0.381830050505119,
        0.0,
        0.279705391489277,
        0.0,
        0.129484966168870,
        0.0,
    ]
)


def _eval_panel(f, a: float, b: float):
    """One Gauss-Kronrod panel; returns (kronrod, |kronrod - gauss|)."""
    h = 0.5 * (b - a)
    x = a + h * (_XK + 1.0)
    y = f(x)
    y = np.asarray(y, dtype=float)
    if y.ndim == 0:
        # constant integrand returning a scalar for an array argument
        y = np.full(x.shape, float(y))
    elif y.shape[0] != x.shape[0]:
        raise ValueError("integrand must return one value per node")
    ik = h * np.tensordot(_WK, y, axes=(0, 0))
    ig = h * np.tensordot(_WG, y, axes=(0, 0))
    return ik, float(np.max(np.abs(ik - ig)))


def _vectorized(f):
    """Wrap f so it accepts a node array even if written point-wise."""

    def call(x):
        try:
            return f(x)
        except (TypeError, ValueError):
            return np.array([f(xi) for xi in x], dtype=float)

    return call


def _adaptive(f, lo: float, hi: float, cfg: QuadratureConfig, initial_panels: int = 8):
    """Adaptive Gauss-Kronrod subdivision of [lo, hi].

    Supports integrands returning a scalar per node or a vector per node
    (shape (n_nodes, k)); the per-panel error is the max across components.
    """
    fv = _vectorized(f)
    edges = np.linspace(lo, hi, initial_panels + 1)
    panels = []
    for a, b in zip(edges[:-1], edges[1:]):
        ik, err = _eval_panel(fv, a, b)
        panels.append((a, b, ik, err))
    splits = 0
    while True:
        total = sum(p[2] for p in panels)
        err = sum(p[3] for p in panels)
        bound = max(cfg.abs_tol, cfg.rel_tol * float(np.max(np.abs(total))))
        if err <= bound:
            return total
        if splits >= cfg.max_subdivisions:
            raise NonConvergence(
                f"quadrature error {err:.3e} above tolerance {bound:.3e} "
                f"after {splits} subdivisions"
            )
        worst = max(range(len(panels)), key=lambda i: panels[i][3])
        a, b, _, _ = panels[worst]
        mid = 0.5 * (a + b)
        panels[worst] = (a, mid, *_eval_panel(fv, a, mid))
        panels.append((mid, b, *_eval_panel(fv, mid, b)))
        splits += 1


def gauss_weighted_integral(
    f: Callable[[float], float], cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Integral of f(x) * phi(x) over the real line, phi the standard normal density.

    The integrand f may grow at most polynomially (times logs); the Gaussian
    weight then confines everything to [-R, R] with R = cfg.truncation_radius.
    """
    R = cfg.truncation_radius
    fv = _vectorized(f)

    def weighted(x):
        return np.asarray(fv(x), dtype=float) * norm_pdf(x)

    out = _adaptive(weighted, -R, R, cfg)
    return float(out)


def integral_real_line(
    f: Callable[[float], float], cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Integral of f over the real line for integrands with Gaussian-type decay.

    Requires |f(x)| <= C exp(-c x^2) outside a bounded set, with a decay scale
    of order one so the truncation radius applies; callers standardize their
    variables accordingly.
    """
    R = cfg.truncation_radius
    return float(_adaptive(f, -R, R, cfg))


def mills_ratio(x):
    """Gaussian hazard-type ratio phi(x) / Phi(x), stable over the whole line.

    Evaluated in log space as exp(log phi(x) - log Phi(x)); the left tail,
    where both factors underflow, then reduces to a well-scaled difference of
    logs (relative error ~1e-13 at x = -40). Accepts scalars or arrays.
    """
    arr = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * arr * arr - _LOG_SQRT_2PI - log_ndtr(arr))
    if np.ndim(x) == 0:
        return float(out)
    return out


def find_root(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12
) -> float:
    """Root of f on [lo, hi]; requires a sign change (or a zero endpoint)."""
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise NoBracket(f"f({lo})={flo:.6g} and f({hi})={fhi:.6g} have the same sign")
    return float(brentq(f, lo, hi, xtol=tol, rtol=8.9e-16))


def minimize_1d(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    grid: int = 201,
    tol: float = 1e-9,
) -> tuple[float, float]:
    """Minimize f on [lo, hi]: coarse grid scan, then golden-section refinement.

    The objective may return +inf as an infeasibility sentinel; the feasible
    set is assumed to be an interval (this holds for every constrained problem
    in this package), so scanning plus local refinement is sound. Raises
    EmptyFeasibleSet when every grid sample is infeasible. The result is never
    worse than the best grid sample.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if grid < 3:
        raise ValueError("grid must be >= 3")
    xs = np.linspace(lo, hi, grid)
    vals = np.array([f(float(x)) for x in xs], dtype=float)
    finite = np.isfinite(vals)
    if not finite.any():
        raise EmptyFeasibleSet("objective is +inf at every grid point")
    i = int(np.nanargmin(np.where(finite, vals, np.inf)))
    best_x, best_v = float(xs[i]), float(vals[i])

    a = float(xs[max(i - 1, 0)])
    b = float(xs[min(i + 1, grid - 1)])
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for x, v in ((c, fc), (d, fd)):
        if v < best_v:
            best_x, best_v = float(x), float(v)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        for x, v in ((c, fc), (d, fd)):
            if v < best_v:
                best_x, best_v = float(x), float(v)
    return best_x, best_v
