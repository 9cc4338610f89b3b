"""Brute-force numerical checks that do not rely on any closed form.

Finite differences, grid + golden-section maximisation, composite trapezoid
quadrature, bisection and a seeded Monte Carlo of the 2x2 table. They serve as
test oracles for :mod:`infothreshold.core` and :mod:`infothreshold.adequacy`
and as fallbacks for arbitrary inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import ClassifierRates, check_probability, posterior
from .errors import DomainError, FlatCurvatureError, NoBracketError

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
RNG_NAME = "numpy.random.PCG64"


@dataclass(frozen=True)
class GridSearchResult:
    arg_max: float
    max_value: float
    grid_step: float
    refined: bool


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    intervals: int
    estimated_error: float


@dataclass(frozen=True)
class SimulationReport:
    n_samples: int
    prevalence: float
    empirical_ppv: float
    empirical_tpr: float
    empirical_tnr: float
    seed: int
    tp: int
    fp: int
    fn: int
    tn: int
    generator: str = RNG_NAME

    def ppv_standard_error(self, ppv: float) -> float:
        """Binomial standard error of a PPV estimate at true value ``ppv``."""
        called = self.tp + self.fp
        if called == 0:
            return math.inf
        return math.sqrt(ppv * (1.0 - ppv) / called)


def finite_diff(
    f: Callable[[float], float],
    x: float,
    h: float,
    order: int = 1,
    domain: tuple[float, float] | None = None,
) -> float:
    """Five-point central difference estimate of f' or f''.

    The stencil spans [x - 2h, x + 2h]; if ``domain`` is given and the stencil
    leaves it a :class:`DomainError` is raised.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if domain is not None and (x - 2 * h < domain[0] or x + 2 * h > domain[1]):
        raise DomainError(f"stencil [{x - 2 * h}, {x + 2 * h}] leaves domain {domain}")
    fm2, fm1, fp1, fp2 = f(x - 2 * h), f(x - h), f(x + h), f(x + 2 * h)
    if order == 1:
        return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h)
    f0 = f(x)
    return (16.0 * (fm1 + fp1) - (fm2 + fp2) - 30.0 * f0) / (12.0 * h * h)


def posterior_fd(rates: ClassifierRates, prior: float, order: int = 1, h: float | None = None) -> float:
    """Finite-difference derivative of the posterior curve, stencil kept in [0, 1]."""
    f = lambda p: posterior(rates, p)
    if h is None:
        h = 1e-6 if order == 1 else 1e-4
    return finite_diff(f, prior, h, order, domain=(0.0, 1.0))


def fd_curvature(rates: ClassifierRates, prior: float) -> float:
    """Curvature from finite differences of the posterior alone.

    The step shrinks near the ends of [0, 1] and with the local length scale of
    the curve (distance over which the denominator changes appreciably).
    """
    a, c = rates.tpr, 1.0 - rates.tnr
    denom = a * prior + c * (1.0 - prior)
    scale = denom / abs(a - c) if a != c else 1.0
    h = min(0.01 * scale, prior / 2.5, (1.0 - prior) / 2.5, 0.1)
    d1 = posterior_fd(rates, prior, 1, h)
    d2 = posterior_fd(rates, prior, 2, h)
    return abs(d2) / (1.0 + d1 * d1) ** 1.5


def golden_section_max(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10, max_iter: int = 500
) -> tuple[float, float]:
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
    x = 0.5 * (lo + hi)
    return x, f(x)


def maximize_curvature(
    rates: ClassifierRates,
    grid_step: float = 1e-3,
    curvature_fn: Callable[[ClassifierRates, float], float] = fd_curvature,
) -> GridSearchResult:
    """Locate the maximum-curvature prior by grid scan then golden section.

    By default curvature is estimated from finite differences of the posterior,
    so the result is independent of every analytic derivative.
    """
    if not (0 < grid_step <= 1e-3):
        raise ValueError("grid_step must lie in (0, 1e-3]")
    if rates.tpr + rates.tnr == 1.0:
        raise FlatCurvatureError("curvature is identically zero when tpr + tnr = 1")
    n = round(1.0 / grid_step)
    step = 1.0 / n
    # endpoints are excluded: the difference stencil cannot straddle them
    xs = [i * step for i in range(1, n)]
    values = [curvature_fn(rates, x) for x in xs]
    i = int(np.argmax(values))
    lo = xs[i - 1] if i > 0 else xs[0] / 2
    hi = xs[i + 1] if i < len(xs) - 1 else (xs[-1] + 1.0) / 2
    x, v = golden_section_max(lambda p: curvature_fn(rates, p), lo, hi)
    if v < values[i]:
        return GridSearchResult(xs[i], values[i], step, refined=False)
    return GridSearchResult(x, v, step, refined=True)


def integrate_curve(rates: ClassifierRates, n_intervals: int = 100_000) -> QuadratureResult:
    """Composite trapezoid estimate of the area under the curve on [0, 1].

    The error estimate is the Richardson difference against the rule on half
    as many intervals (n must be even for that, otherwise n-1 is used).
    """
    if n_intervals < 2:
        raise ValueError("n_intervals must be at least 2")
    phi = np.linspace(0.0, 1.0, n_intervals + 1)
    a, c = rates.tpr, 1.0 - rates.tnr
    denom = a * phi + c * (1.0 - phi)
    with np.errstate(invalid="ignore", divide="ignore"):
        rho = np.where(denom > 0, a * phi / np.where(denom > 0, denom, 1.0), np.nan)
    if np.isnan(rho).any():
        # endpoint where the curve is 0/0: fall back to the scalar error path
        bad = float(phi[np.isnan(rho)][0])
        posterior(rates, bad)
    h = 1.0 / n_intervals
    fine = h * (rho.sum() - 0.5 * (rho[0] + rho[-1]))
    half = n_intervals // 2
    if n_intervals % 2 == 0:
        coarse_pts = rho[::2]
        coarse = 2 * h * (coarse_pts.sum() - 0.5 * (coarse_pts[0] + coarse_pts[-1]))
    else:
        xs = np.linspace(0.0, 1.0, half + 1)
        ys = a * xs / (a * xs + c * (1.0 - xs))
        coarse = (1.0 / half) * (ys.sum() - 0.5 * (ys[0] + ys[-1]))
    return QuadratureResult(float(fine), n_intervals, float(abs(fine - coarse) / 3.0))


def simulate_confusion(
    rates: ClassifierRates, prevalence: float, n: int, seed: int
) -> SimulationReport:
    """Monte Carlo tally of the 2x2 table for ``n`` labelled items.

    Labels are Bernoulli(prevalence); positives are flagged with probability
    tpr and negatives cleared with probability tnr. Tallies are drawn as the
    equivalent binomials, which is exact in distribution.
    """
    prevalence = check_probability(prevalence, "prevalence")
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    positives = int(rng.binomial(n, prevalence))
    negatives = n - positives
    tp = int(rng.binomial(positives, rates.tpr))
    tn = int(rng.binomial(negatives, rates.tnr))
    fn = positives - tp
    fp = negatives - tn
    ppv = tp / (tp + fp) if tp + fp else math.nan
    return SimulationReport(
        n_samples=n,
        prevalence=prevalence,
        empirical_ppv=ppv,
        empirical_tpr=tp / positives if positives else math.nan,
        empirical_tnr=tn / negatives if negatives else math.nan,
        seed=seed,
        tp=tp,
        fp=fp,
        fn=fn,
        tn=tn,
    )


def bisect_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-9) -> float:
    if tol <= 0:
        raise ValueError("tol must be positive")
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoBracketError(f"f({lo})={flo} and f({hi})={fhi} have the same sign")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)
