"""Area under the prior -> posterior curve and lambda-adequacy of a classifier."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .core import ClassifierRates, ThresholdPoint, check_probability, information_threshold
from .errors import DomainError, InfoThresholdError, NoSolutionError
from .oracles import bisect_root

# below this |J / a| the closed form loses digits to cancellation; use the series
_SERIES_CUTOFF = 0.1
_SERIES_TERMS = 40

SOLVER_TOL = 1e-9


@dataclass(frozen=True)
class AdequacyReport:
    rates: ClassifierRates
    auc: float
    lambda_threshold: float
    adequate: bool
    epsilon: float
    threshold: ThresholdPoint
    ratio_posterior_to_prior: float

    @property
    def ratio_label(self) -> str:
        return ratio_label(self.threshold.phi_e)


def auc_closed_form(rates: ClassifierRates) -> float:
    """Exact area under rho(phi) on [0, 1].

        (a^2 + a(b - 1)(ln(a / (1 - b)) + 1)) / (a + b - 1)^2

    Writing t = J / a = 1 - (1 - b) / a the area equals
    sum_{m >= 0} t^m / ((m + 1)(m + 2)), which is used near J = 0 where the
    ratio above is 0/0 (its limit there is 1/2, the identity line).
    """
    a, b = rates.tpr, rates.tnr
    if a == 0.0:
        raise DomainError("area formula undefined at tpr = 0 (degenerate curve)")
    if b == 1.0:
        raise DomainError("area formula undefined at tnr = 1 (degenerate curve)")
    j = a + b - 1.0
    t = j / a
    if abs(t) < _SERIES_CUTOFF:
        return sum(t**m / ((m + 1) * (m + 2)) for m in range(_SERIES_TERMS))
    return (a * a + a * (b - 1.0) * (math.log(a / (1.0 - b)) + 1.0)) / (j * j)


def ratio_label(phi_e: float) -> str:
    """Posterior:prior split out of 10, rounded to the nearest half (e.g. '8.5:1.5')."""
    prior_part = round(phi_e * 10 * 2) / 2
    return f"{_fmt_half(10 - prior_part)}:{_fmt_half(prior_part)}"


def _fmt_half(x: float) -> str:
    return str(int(x)) if x == int(x) else f"{x:.1f}"


def is_adequate(rates: ClassifierRates, lam: float) -> AdequacyReport:
    if not (0.0 < lam < 1.0):
        raise ValueError(f"lambda must lie in (0, 1), got {lam!r}")
    auc = auc_closed_form(rates)
    point = information_threshold(rates)
    ratio = point.rho_e / point.phi_e if point.phi_e > 0 else math.inf
    return AdequacyReport(
        rates=rates,
        auc=auc,
        lambda_threshold=lam,
        adequate=auc > lam,
        epsilon=rates.epsilon,
        threshold=point,
        ratio_posterior_to_prior=ratio,
    )


def solve_min_tpr(tnr: float, lam: float, tol: float = SOLVER_TOL) -> float:
    """Smallest true positive rate whose curve area reaches ``lam`` at fixed ``tnr``.

    The area rises monotonically with the tpr, so plain bisection applies.
    """
    tnr = check_probability(tnr, "tnr")
    if not (0.0 < lam < 1.0):
        raise ValueError(f"lambda must lie in (0, 1), got {lam!r}")
    if tnr == 1.0:
        raise DomainError("area formula undefined at tnr = 1")
    gap = lambda a: auc_closed_form(ClassifierRates(a, tnr)) - lam
    if gap(1.0) < 0:
        raise NoSolutionError(f"no tpr reaches area {lam} at tnr={tnr}")
    lo = 1e-12
    if gap(lo) >= 0:
        return lo
    return _upper_end(gap, lo, 1.0, tol)


def solve_min_tnr(tpr: float, lam: float, tol: float = SOLVER_TOL) -> float:
    """Smallest true negative rate whose curve area reaches ``lam`` at fixed ``tpr``."""
    tpr = check_probability(tpr, "tpr")
    if not (0.0 < lam < 1.0):
        raise ValueError(f"lambda must lie in (0, 1), got {lam!r}")
    if tpr == 0.0:
        raise DomainError("area formula undefined at tpr = 0")
    gap = lambda b: auc_closed_form(ClassifierRates(tpr, b)) - lam
    hi = 1.0 - 1e-12
    if gap(hi) < 0:
        raise NoSolutionError(f"no tnr below 1 reaches area {lam} at tpr={tpr}")
    if gap(0.0) >= 0:
        return 0.0
    return _upper_end(gap, 0.0, hi, tol)


def _upper_end(gap, lo: float, hi: float, tol: float) -> float:
    # bisect_root returns the bracket midpoint; step to the side where gap >= 0
    x = bisect_root(gap, lo, hi, tol)
    while gap(x) < 0:
        x = min(hi, x + tol)
    return x


@dataclass(frozen=True)
class ScenarioRow:
    lam: float
    fixed_rate: float
    solved_tnr: float | None  # scenario with tpr fixed
    solved_tpr: float | None  # scenario with tnr fixed
    tnr_report: AdequacyReport | None
    tpr_report: AdequacyReport | None
    error: str | None = None


def scenario_table(lambdas: Iterable[float], fixed_rate: float = 0.99) -> list[ScenarioRow]:
    """Minimal-rate bounds per lambda for both scenarios (tpr fixed, tnr fixed)."""
    rows = []
    for lam in lambdas:
        errors = []
        tnr = tpr = None
        tnr_report = tpr_report = None
        try:
            tnr = solve_min_tnr(fixed_rate, lam)
            tnr_report = is_adequate(ClassifierRates(fixed_rate, tnr), lam)
        except InfoThresholdError as exc:
            errors.append(f"tnr: {exc}")
        try:
            tpr = solve_min_tpr(fixed_rate, lam)
            tpr_report = is_adequate(ClassifierRates(tpr, fixed_rate), lam)
        except InfoThresholdError as exc:
            errors.append(f"tpr: {exc}")
        rows.append(
            ScenarioRow(lam, fixed_rate, tnr, tpr, tnr_report, tpr_report, "; ".join(errors) or None)
        )
    return rows
