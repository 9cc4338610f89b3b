"""Closed-form geometry of the prior -> posterior curve of a binary classifier.

For a classifier with true positive rate ``a`` and true negative rate ``b`` the
belief after a positive result, as a function of the prior ``phi``, is

    rho(phi) = a*phi / (a*phi + (1 - b)*(1 - phi))

This module provides that curve, its first two derivatives, its curvature, and
the point of maximum curvature (the information threshold).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateDenominatorError, EmptyClassError, UndefinedThresholdError


def check_probability(value: float, name: str = "probability") -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class ClassifierRates:
    """True positive rate ``tpr`` (a) and true negative rate ``tnr`` (b)."""

    tpr: float
    tnr: float

    def __post_init__(self):
        object.__setattr__(self, "tpr", check_probability(self.tpr, "tpr"))
        object.__setattr__(self, "tnr", check_probability(self.tnr, "tnr"))

    @property
    def fallout(self) -> float:
        return 1.0 - self.tnr

    @property
    def youden_j(self) -> float:
        return self.tpr + self.tnr - 1.0

    @property
    def epsilon(self) -> float:
        return self.tpr + self.tnr

    @property
    def lr_positive(self) -> float:
        return lr_positive(self)


@dataclass(frozen=True)
class ThresholdPoint:
    phi_e: float
    rho_e: float
    kappa_max: float
    limit_case: bool = False

    @property
    def total(self) -> float:
        return self.phi_e + self.rho_e


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        for name in ("tp", "fp", "fn", "tn"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class CurveSample:
    rates: ClassifierRates
    step: float
    points: tuple[tuple[float, float], ...]


def _denominator(rates: ClassifierRates, prior: float) -> float:
    a, c = rates.tpr, rates.fallout
    hit = a * prior
    false_alarm = c * (1.0 - prior)
    if hit == 0.0 and false_alarm == 0.0:
        raise DegenerateDenominatorError(
            f"posterior undefined for tpr={a}, tnr={rates.tnr}, prior={prior}"
        )
    return hit + false_alarm


def posterior(rates: ClassifierRates, prior: float) -> float:
    """Belief after a positive classification (the positive predictive value)."""
    prior = check_probability(prior, "prior")
    return rates.tpr * prior / _denominator(rates, prior)


def negative_posterior(rates: ClassifierRates, prior: float) -> float:
    """Belief after a negative classification."""
    prior = check_probability(prior, "prior")
    miss = (1.0 - rates.tpr) * prior
    correct_reject = rates.tnr * (1.0 - prior)
    if miss == 0.0 and correct_reject == 0.0:
        raise DegenerateDenominatorError(
            f"negative posterior undefined for tpr={rates.tpr}, tnr={rates.tnr}, prior={prior}"
        )
    return miss / (miss + correct_reject)


def posterior_derivative(rates: ClassifierRates, prior: float) -> float:
    prior = check_probability(prior, "prior")
    d = _denominator(rates, prior)
    return rates.tpr * rates.fallout / (d * d)


def posterior_second_derivative(rates: ClassifierRates, prior: float) -> float:
    prior = check_probability(prior, "prior")
    a, c = rates.tpr, rates.fallout
    d = _denominator(rates, prior)
    # a - c written as a + b - 1 so the factor is exactly 0 whenever a + b == 1
    return -2.0 * a * c * rates.youden_j / d**3


def curvature(rates: ClassifierRates, prior: float) -> float:
    """Curvature |rho''| / (1 + rho'^2)^(3/2) of the curve at ``prior``."""
    slope = posterior_derivative(rates, prior)
    bend = posterior_second_derivative(rates, prior)
    return abs(bend) / (1.0 + slope * slope) ** 1.5


def information_threshold(rates: ClassifierRates) -> ThresholdPoint:
    """Prior of maximum curvature, with the posterior and curvature there.

    The maximiser is sqrt(1-b) / (sqrt(a) + sqrt(1-b)). At a perfect true
    negative rate (b = 1) the curve degenerates to a step and the limiting
    point (0, 1) is returned with ``limit_case`` set; likewise a = 0 gives
    the limit (1, 0). a = 0 together with b = 1 has no curve at all.
    """
    a, c = rates.tpr, rates.fallout
    if a == 0.0 and c == 0.0:
        raise UndefinedThresholdError("undefined threshold: tpr=0 and tnr=1")
    if c == 0.0:
        return ThresholdPoint(0.0, 1.0, math.inf, limit_case=True)
    if a == 0.0:
        return ThresholdPoint(1.0, 0.0, math.inf, limit_case=True)
    root_c = math.sqrt(c)
    phi_e = root_c / (math.sqrt(a) + root_c)
    return ThresholdPoint(phi_e, posterior(rates, phi_e), curvature(rates, phi_e))


def youden_j(rates: ClassifierRates) -> float:
    return rates.tpr + rates.tnr - 1.0


def lr_positive(rates: ClassifierRates) -> float:
    if rates.tnr == 1.0:
        raise ZeroDivisionError("LR+ is undefined when tnr = 1")
    return rates.tpr / rates.fallout


def rates_from_counts(counts: ConfusionCounts) -> ClassifierRates:
    positives = counts.tp + counts.fn
    negatives = counts.tn + counts.fp
    if positives == 0:
        raise EmptyClassError("no ground-truth positives (tp + fn == 0)")
    if negatives == 0:
        raise EmptyClassError("no ground-truth negatives (tn + fp == 0)")
    return ClassifierRates(counts.tp / positives, counts.tn / negatives)


def one_vs_rest(confusion: Sequence[Sequence[int]], target_index: int) -> ConfusionCounts:
    """Collapse a k-class confusion matrix to a binary table for one class.

    ``confusion[i][j]`` counts items of true class ``i`` predicted as ``j``.
    Every class other than ``target_index`` is merged into the negative class.
    """
    k = len(confusion)
    if k < 2:
        raise ValueError("one-vs-rest needs at least two classes")
    if any(len(row) != k for row in confusion):
        raise ValueError("confusion matrix must be square")
    if not 0 <= target_index < k:
        raise IndexError(f"target_index {target_index} out of range for {k} classes")
    t = target_index
    tp = confusion[t][t]
    fn = sum(confusion[t]) - tp
    fp = sum(row[t] for row in confusion) - tp
    total = sum(sum(row) for row in confusion)
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=total - tp - fn - fp)


def sample_curve(rates: ClassifierRates, step: float) -> CurveSample:
    """Evaluate the curve on an evenly spaced grid covering [0, 1] inclusive.

    ``1/step`` must be (close to) an integer; grid points are ``i/n`` so that
    they survive a decimal round trip exactly.
    """
    if not (0.0 < step <= 1.0):
        raise ValueError(f"step must lie in (0, 1], got {step!r}")
    n = round(1.0 / step)
    if abs(n * step - 1.0) > 1e-9:
        raise ValueError(f"1/step must be an integer, got step={step!r}")
    points = tuple((i / n, posterior(rates, i / n)) for i in range(n + 1))
    return CurveSample(rates=rates, step=1.0 / n, points=points)
