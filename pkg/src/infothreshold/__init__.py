"""Information threshold of Bayesian binary classifiers."""
from .adequacy import AdequacyReport, auc_closed_form, is_adequate, scenario_table, solve_min_tnr, solve_min_tpr
from .chain import ChainTrace, EvidenceItem, Outcome, run_chain, stopping_report
from .core import (
    ClassifierRates,
    ConfusionCounts,
    CurveSample,
    ThresholdPoint,
    curvature,
    information_threshold,
    lr_positive,
    negative_posterior,
    one_vs_rest,
    posterior,
    posterior_derivative,
    posterior_second_derivative,
    rates_from_counts,
    sample_curve,
    youden_j,
)
from .errors import *  # noqa: F401,F403

__version__ = "0.1.0"
