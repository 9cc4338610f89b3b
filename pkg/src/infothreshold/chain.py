"""Sequential Bayesian updating over an ordered list of evidence items.

Each item is a binary classifier (a clue with its own true positive / true
negative rates) together with what was observed. The posterior after one item
becomes the prior for the next. A step is flagged as the stopping point when
the prior entering it has reached that item's information threshold and the
prior and posterior together sum to at least one. Uninformative items
(tpr + tnr = 1) never trigger the stop.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence

import yaml

from .core import ClassifierRates, information_threshold, negative_posterior, posterior
from .errors import ConfigError, DegenerateDenominatorError, InfoThresholdError

CONFIG_VERSION = 1
# absorbs rounding when a prior lands exactly on the threshold
STOP_TOL = 1e-12


class Outcome(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class EvidenceItem:
    label: str
    rates: ClassifierRates
    outcome: Outcome = Outcome.POSITIVE


@dataclass(frozen=True)
class ChainStep:
    label: str
    prior_before: float
    posterior_after: float
    phi_e: float
    stopped_here: bool

    @property
    def gain(self) -> float:
        return self.posterior_after - self.prior_before


@dataclass
class ChainTrace:
    initial_prior: float
    steps: list[ChainStep] = field(default_factory=list)
    stopped_at: int | None = None
    aborted: str | None = None

    @property
    def final_belief(self) -> float:
        return self.steps[-1].posterior_after if self.steps else self.initial_prior

    @property
    def beliefs(self) -> list[float]:
        return [self.initial_prior] + [s.posterior_after for s in self.steps]


class ChainAborted(DegenerateDenominatorError):
    """An update in the chain was undefined; ``trace`` holds the steps before it."""

    def __init__(self, message: str, trace: ChainTrace):
        super().__init__(message)
        self.trace = trace


def should_stop(prior_before: float, posterior_after: float, phi_e: float, tol: float = STOP_TOL) -> bool:
    return prior_before + posterior_after >= 1.0 - tol and prior_before >= phi_e - tol


def run_chain(
    initial_prior: float,
    items: Sequence[EvidenceItem],
    stop_on_threshold: bool = True,
    continue_after_stop: bool = True,
) -> ChainTrace:
    if not items:
        raise ValueError("an evidence chain needs at least one item")
    if not (0.0 < initial_prior < 1.0):
        raise ValueError(f"initial prior must lie in (0, 1), got {initial_prior!r}")
    trace = ChainTrace(initial_prior=initial_prior)
    belief = initial_prior
    for k, item in enumerate(items):
        update = posterior if item.outcome is Outcome.POSITIVE else negative_posterior
        try:
            after = update(item.rates, belief)
            phi_e = information_threshold(item.rates).phi_e
        except InfoThresholdError as exc:
            trace.aborted = f"step {k} ({item.label}): {exc}"
            raise ChainAborted(trace.aborted, trace) from exc
        # an item on the chance line carries no evidence and cannot end the search
        stop = (
            stop_on_threshold
            and trace.stopped_at is None
            and item.rates.youden_j != 0.0
            and should_stop(belief, after, phi_e)
        )
        if stop:
            trace.stopped_at = k
        trace.steps.append(ChainStep(item.label, belief, after, phi_e, stop))
        belief = after
        if stop and not continue_after_stop:
            break
    return trace


@dataclass(frozen=True)
class StoppingReport:
    stopped_at: int | None
    belief_at_stop: float | None
    gain_at_stop: float | None
    post_stop_gains: list[float]
    all_gains: list[float]


def stopping_report(trace: ChainTrace) -> StoppingReport:
    gains = [s.gain for s in trace.steps]
    k = trace.stopped_at
    if k is None:
        return StoppingReport(None, None, None, [], gains)
    return StoppingReport(
        stopped_at=k,
        belief_at_stop=trace.steps[k].posterior_after,
        gain_at_stop=gains[k],
        post_stop_gains=gains[k + 1:],
        all_gains=gains,
    )


def _line_of(node) -> str:
    mark = getattr(node, "start_mark", None)
    return f"line {mark.line + 1}: " if mark is not None else ""


def parse_chain_config(text: str, source: str = "<config>") -> tuple[float, list[EvidenceItem]]:
    """Parse a YAML chain definition.

    Schema (version 1)::

        version: 1
        initial_prior: 0.3
        items:
          - {label: ..., tpr: 0.9, tnr: 0.8, outcome: positive}
    """
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}" if mark is not None else "unknown line"
        raise ConfigError(f"{source}: {where}: parse error: {getattr(exc, 'problem', exc)}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a mapping")

    nodes = {k.value: v for k, v in root.value} if root is not None else {}

    version = data.get("version", CONFIG_VERSION)
    if version != CONFIG_VERSION:
        raise ConfigError(f"{source}: {_line_of(nodes.get('version'))}unsupported version {version!r}")
    if "initial_prior" not in data:
        raise ConfigError(f"{source}: missing key 'initial_prior'")
    prior = data["initial_prior"]
    if not isinstance(prior, (int, float)) or not 0.0 < prior < 1.0:
        raise ConfigError(
            f"{source}: {_line_of(nodes.get('initial_prior'))}initial_prior must be a number in (0, 1)"
        )
    raw_items = data.get("items")
    if not isinstance(raw_items, list) or not raw_items:
        raise ConfigError(f"{source}: {_line_of(nodes.get('items'))}'items' must be a non-empty list")

    item_nodes = nodes["items"].value
    items = []
    for i, (raw, node) in enumerate(zip(raw_items, item_nodes)):
        where = f"{source}: {_line_of(node)}item {i}"
        if not isinstance(raw, dict):
            raise ConfigError(f"{where}: must be a mapping")
        missing = [k for k in ("label", "tpr", "tnr") if k not in raw]
        if missing:
            raise ConfigError(f"{where}: missing key(s) {', '.join(missing)}")
        unknown = set(raw) - {"label", "tpr", "tnr", "outcome"}
        if unknown:
            raise ConfigError(f"{where}: unknown key(s) {', '.join(sorted(unknown))}")
        try:
            rates = ClassifierRates(raw["tpr"], raw["tnr"])
            outcome = Outcome(str(raw.get("outcome", "positive")).lower())
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{where}: {exc}") from exc
        items.append(EvidenceItem(str(raw["label"]), rates, outcome))
    return float(prior), items


def load_chain_config(path: str | Path) -> tuple[float, list[EvidenceItem]]:
    path = Path(path)
    return parse_chain_config(path.read_text(encoding="utf-8"), source=str(path))


def bundled_example_path() -> Path:
    return Path(__file__).parent / "data" / "marital_status.yaml"
