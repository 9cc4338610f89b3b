"""Command line interface: ``infothreshold <command> [options]``.

Exit codes: 0 success, 1 validation error, 2 no solution, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import adequacy, chain, export, oracles
from .core import ClassifierRates, information_threshold, lr_positive, posterior
from .errors import NoSolutionError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NO_SOLUTION = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is reserved for "no solution"
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _rates(args) -> ClassifierRates:
    return ClassifierRates(args.tpr, args.tnr)


def cmd_threshold(args, out) -> int:
    rates = _rates(args)
    point = information_threshold(rates)
    try:
        lr = f"{lr_positive(rates):.6g}"
    except ZeroDivisionError:
        lr = "inf"
    print(f"tpr        {rates.tpr:.6g}", file=out)
    print(f"tnr        {rates.tnr:.6g}", file=out)
    print(f"phi_e      {point.phi_e:.3f}", file=out)
    print(f"rho_e      {point.rho_e:.3f}", file=out)
    print(f"kappa_max  {point.kappa_max:.6g}", file=out)
    print(f"J          {rates.youden_j:.6g}", file=out)
    print(f"epsilon    {rates.epsilon:.6g}", file=out)
    print(f"LR+        {lr}", file=out)
    print(f"sum        {point.total:.3f}", file=out)
    if point.limit_case:
        print("note       limiting point of a degenerate curve", file=out)
    return EXIT_OK


def cmd_curve(args, out) -> int:
    if not (0.0 < args.step <= 0.1):
        raise ValueError(f"--step must lie in (0, 0.1], got {args.step}")
    rates = _rates(args)
    if args.format == "csv":
        text = export.curve_csv(rates, args.step)
    else:
        text = export.curve_svg(rates, args.step, annotate_threshold=not args.no_annotate)
    if args.out is None or args.out == "-":
        out.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}", file=out)
    return EXIT_OK


def cmd_tables(args, out) -> int:
    checks = export.table3_checks() + export.table4_checks()
    print(export.format_checks(checks), file=out)
    flagged = [c for c in checks if c.flagged]
    print(f"\n{len(flagged)} cell(s) differ from the printed values", file=out)
    return EXIT_OK


def cmd_adequacy(args, out) -> int:
    report = adequacy.is_adequate(_rates(args), args.lam)
    print(f"auc        {report.auc:.6f}", file=out)
    print(f"lambda     {report.lambda_threshold:g}", file=out)
    print(f"adequate   {str(report.adequate).lower()}", file=out)
    print(f"epsilon    {report.epsilon:.6g}", file=out)
    print(f"phi_e      {report.threshold.phi_e:.3f}", file=out)
    print(f"rho_e      {report.threshold.rho_e:.3f}", file=out)
    print(f"ratio      {report.ratio_posterior_to_prior:.6g} (~{report.ratio_label})", file=out)
    return EXIT_OK


def _parse_fix(text: str) -> tuple[str, float]:
    side, sep, value = text.partition("=")
    side = side.strip().lower()
    if not sep or side not in ("tpr", "tnr"):
        raise ValueError(f"--fix expects tpr=<value> or tnr=<value>, got {text!r}")
    return side, float(value)


def cmd_solve(args, out) -> int:
    side, value = _parse_fix(args.fix)
    if side == "tnr":
        solved = adequacy.solve_min_tpr(value, args.lam)
        rates, name = ClassifierRates(solved, value), "tpr"
    else:
        solved = adequacy.solve_min_tnr(value, args.lam)
        rates, name = ClassifierRates(value, solved), "tnr"
    report = adequacy.is_adequate(rates, args.lam)
    print(f"{name}        {solved:.6f}", file=out)
    print(f"auc        {report.auc:.6f}", file=out)
    print(f"phi_e      {report.threshold.phi_e:.3f}", file=out)
    print(f"ratio      ~{report.ratio_label}", file=out)
    return EXIT_OK


def cmd_chain(args, out) -> int:
    path = args.config or chain.bundled_example_path()
    prior, items = chain.load_chain_config(path)
    try:
        trace = chain.run_chain(prior, items)
    except chain.ChainAborted as exc:
        _print_trace(exc.trace, out)
        raise
    _print_trace(trace, out)
    rep = chain.stopping_report(trace)
    print("", file=out)
    if rep.stopped_at is None:
        print("no stop: the threshold was never reached", file=out)
    else:
        print(f"stopped at step {rep.stopped_at} with belief {rep.belief_at_stop:.3f} "
              f"(gain {rep.gain_at_stop:.3f})", file=out)
        gains = ", ".join(f"{g:.3f}" for g in rep.post_stop_gains) or "none"
        print(f"gains after stop: {gains}", file=out)
    return EXIT_OK


def _print_trace(trace: chain.ChainTrace, out) -> None:
    print(f"initial prior {trace.initial_prior:.3f}", file=out)
    print(f"{'step':<5}{'evidence':<28}{'prior':>8}{'post':>8}{'phi_e':>8}{'gain':>8}  stop", file=out)
    for k, s in enumerate(trace.steps):
        print(f"{k:<5}{s.label[:27]:<28}{s.prior_before:>8.3f}{s.posterior_after:>8.3f}"
              f"{s.phi_e:>8.3f}{s.gain:>8.3f}  {'*' if s.stopped_here else ''}", file=out)
    if trace.aborted:
        print(f"aborted: {trace.aborted}", file=out)


def cmd_simulate(args, out) -> int:
    rates = _rates(args)
    rep = oracles.simulate_confusion(rates, args.prevalence, args.n, args.seed)
    expected = posterior(rates, args.prevalence)
    se = rep.ppv_standard_error(expected)
    print(f"generator  {rep.generator} seed={rep.seed}", file=out)
    print(f"n          {rep.n_samples}", file=out)
    print(f"counts     tp={rep.tp} fp={rep.fp} fn={rep.fn} tn={rep.tn}", file=out)
    print(f"ppv        {rep.empirical_ppv:.6f} (analytic {expected:.6f}, "
          f"z={(rep.empirical_ppv - expected) / se:+.2f})", file=out)
    print(f"tpr        {rep.empirical_tpr:.6f}", file=out)
    print(f"tnr        {rep.empirical_tnr:.6f}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="infothreshold", description="Information threshold of binary classifiers.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def rates_args(sp):
        sp.add_argument("--tpr", type=float, required=True, help="true positive rate a")
        sp.add_argument("--tnr", type=float, required=True, help="true negative rate b")

    sp = sub.add_parser("threshold", help="maximum-curvature point of the curve")
    rates_args(sp)
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("curve", help="export the prior/posterior curve")
    rates_args(sp)
    sp.add_argument("--step", type=float, default=0.01, help="grid spacing; 1/step must be an integer (default 0.01)")
    sp.add_argument("--format", choices=("csv", "svg"), default="csv")
    sp.add_argument("--out", default=None, help="output file (default stdout)")
    sp.add_argument("--no-annotate", action="store_true", help="omit the threshold marker (svg)")
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("tables", help="recompute the reference tables")
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("adequacy", help="area-under-curve adequacy report")
    rates_args(sp)
    sp.add_argument("--lambda", dest="lam", type=float, default=0.95, help="required area under the curve (default 0.95)")
    sp.set_defaults(func=cmd_adequacy)

    sp = sub.add_parser("solve", help="minimal rate reaching a given area")
    sp.add_argument("--fix", required=True, help="tpr=<value> or tnr=<value>")
    sp.add_argument("--lambda", dest="lam", type=float, default=0.95, help="required area under the curve (default 0.95)")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("chain", help="run a sequential evidence chain")
    sp.add_argument("--config", default=None, help="YAML chain file (default: bundled example)")
    sp.set_defaults(func=cmd_chain)

    sp = sub.add_parser("simulate", help="Monte Carlo check of the posterior")
    rates_args(sp)
    sp.add_argument("--prevalence", type=float, required=True, help="prior probability of the positive class")
    sp.add_argument("--n", type=int, default=1_000_000, help="number of simulated items")
    sp.add_argument("--seed", type=int, default=0, help="seed for the PCG64 generator")
    sp.set_defaults(func=cmd_simulate)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        print(exc, file=err)
        return EXIT_INVALID
    except NoSolutionError as exc:
        print(f"no solution: {exc}", file=err)
        return EXIT_NO_SOLUTION
    except OSError as exc:
        print(f"I/O error: {exc}", file=err)
        return EXIT_IO
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
