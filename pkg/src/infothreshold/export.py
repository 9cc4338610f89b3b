"""CSV / SVG curve export and recomputation of the published reference tables."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from xml.sax.saxutils import quoteattr

from .adequacy import ratio_label, scenario_table
from .core import ClassifierRates, information_threshold, sample_curve

CSV_HEADER = ("phi", "rho")
SVG_MARKER_ID = "threshold-marker"

# plot geometry in SVG user units
WIDTH, HEIGHT = 480, 480
MARGIN = 50
PLOT = WIDTH - 2 * MARGIN

# (tpr, tnr, phi_e, rho_e) as printed
TABLE3_PRINTED = [
    (0.95, 0.99, 0.093, 0.917),
    (0.85, 0.95, 0.195, 0.815),
    (0.75, 0.85, 0.309, 0.691),
    (0.50, 0.50, 0.500, 0.500),
    (0.20, 0.40, 0.633, 0.367),
    (0.10, 0.10, 0.750, 0.250),
    (0.02, 0.02, 0.875, 0.125),
]
TABLE3_FLAG = 0.005

# lambda -> (b, phi_e, ratio) with a = 0.99, and (a, phi_e, ratio) with b = 0.99
TABLE4_PRINTED = {
    0.95: ((0.985, 0.109, "9:1"), (0.66, 0.11, "9:1")),
    0.90: ((0.96, 0.16, "8.5:1.5"), (0.25, 0.16, "8.5:1.5")),
    0.85: ((0.925, 0.21, "8:2"), (0.13, 0.21, "8:2")),
    0.80: ((0.87, 0.26, "7.5:2.5"), (0.08, 0.26, "7.5:2.5")),
}
# table 4 is printed to roughly two decimals
TABLE4_FLAG = 0.01


def curve_csv(rates: ClassifierRates, step: float) -> str:
    sample = sample_curve(rates, step)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for phi, rho in sample.points:
        writer.writerow((f"{phi:.12g}", f"{rho:.12g}"))
    return buf.getvalue()


def read_curve_csv(text: str) -> list[tuple[float, float]]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header!r}")
    return [(float(phi), float(rho)) for phi, rho in reader]


def _xy(phi: float, rho: float) -> tuple[float, float]:
    return MARGIN + phi * PLOT, HEIGHT - MARGIN - rho * PLOT


def _polyline(points, css_class: str, colour: str) -> str:
    coords = " ".join(f"{x:.3f},{y:.3f}" for x, y in (_xy(p, r) for p, r in points))
    return (
        f'<polyline class="{css_class}" points="{coords}" fill="none" '
        f'stroke="{colour}" stroke-width="2"/>'
    )


def curve_svg(rates: ClassifierRates, step: float, annotate_threshold: bool = True) -> str:
    """Self-contained SVG 1.1 plot of the curve.

    With ``annotate_threshold`` the curve is split at the threshold into a
    steep part and a flat part drawn in different colours, and a dashed
    vertical marker is placed at the threshold prior.
    """
    sample = sample_curve(rates, step)
    pts = list(sample.points)
    parts = []
    marker = ""
    if annotate_threshold:
        point = information_threshold(rates)
        pe = point.phi_e
        below = [p for p in pts if p[0] <= pe]
        above = [p for p in pts if p[0] >= pe]
        if not point.limit_case:
            # join the two pieces at the exact threshold point
            below.append((pe, point.rho_e))
            above.insert(0, (pe, point.rho_e))
        if len(below) > 1:
            parts.append(_polyline(below, "curve below-threshold", "#1f4fbf"))
        if len(above) > 1:
            parts.append(_polyline(above, "curve above-threshold", "#2a9d3a"))
        x = MARGIN + pe * PLOT
        marker = (
            f'<line id="{SVG_MARKER_ID}" data-phi-e="{pe:.12g}" data-rho-e="{point.rho_e:.12g}" '
            f'x1="{x:.6f}" y1="{HEIGHT - MARGIN}" x2="{x:.6f}" y2="{MARGIN}" '
            f'stroke="red" stroke-width="1.5" stroke-dasharray="6,4"/>'
        )
    else:
        parts.append(_polyline(pts, "curve", "#1f4fbf"))

    title = f"prior vs posterior, tpr={rates.tpr:g}, tnr={rates.tnr:g}"
    ticks = []
    for i in range(11):
        v = i / 10
        x, _ = _xy(v, 0)
        _, y = _xy(0, v)
        ticks.append(f'<text x="{x:.1f}" y="{HEIGHT - MARGIN + 16}" font-size="10" text-anchor="middle">{v:.1f}</text>')
        ticks.append(f'<text x="{MARGIN - 6}" y="{y + 3:.1f}" font-size="10" text-anchor="end">{v:.1f}</text>')
    return "\n".join(
        [
            '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" data-plot-x0="{MARGIN}" data-plot-width="{PLOT}">',
            f"<title>{title}</title>",
            f'<rect id="axes" x="{MARGIN}" y="{MARGIN}" width="{PLOT}" height="{PLOT}" '
            'fill="none" stroke="black"/>',
            *ticks,
            f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" font-size="12" text-anchor="middle">prior</text>',
            f'<text x="14" y="{HEIGHT / 2}" font-size="12" text-anchor="middle" '
            f'transform="rotate(-90 14 {HEIGHT / 2})">posterior</text>',
            *parts,
            marker,
            f"<desc>{quoteattr(title)[1:-1]}</desc>",
            "</svg>",
            "",
        ]
    )


@dataclass(frozen=True)
class TableCheck:
    table: str
    row: str
    column: str
    printed: float | str
    computed: float | str
    flagged: bool


def table3_checks() -> list[TableCheck]:
    out = []
    for a, b, phi_p, rho_p in TABLE3_PRINTED:
        point = information_threshold(ClassifierRates(a, b))
        row = f"tpr={a:.2f} tnr={b:.2f}"
        for col, printed, computed in (("phi_e", phi_p, point.phi_e), ("rho_e", rho_p, point.rho_e)):
            out.append(TableCheck("3", row, col, printed, computed, abs(computed - printed) > TABLE3_FLAG))
    return out


def table4_checks(fixed_rate: float = 0.99) -> list[TableCheck]:
    out = []
    for row in scenario_table(TABLE4_PRINTED, fixed_rate):
        (b_p, pe_b_p, ratio_b_p), (a_p, pe_a_p, ratio_a_p) = TABLE4_PRINTED[row.lam]
        label = f"lambda={row.lam:.2f}"
        for col, printed, computed in (
            (f"b (a={fixed_rate})", b_p, row.solved_tnr),
            (f"phi_e (a={fixed_rate})", pe_b_p, row.tnr_report.threshold.phi_e),
            (f"a (b={fixed_rate})", a_p, row.solved_tpr),
            (f"phi_e (b={fixed_rate})", pe_a_p, row.tpr_report.threshold.phi_e),
        ):
            out.append(TableCheck("4", label, col, printed, computed, abs(computed - printed) > TABLE4_FLAG))
        for col, printed, pe in (
            (f"ratio (a={fixed_rate})", ratio_b_p, row.tnr_report.threshold.phi_e),
            (f"ratio (b={fixed_rate})", ratio_a_p, row.tpr_report.threshold.phi_e),
        ):
            computed = ratio_label(pe)
            out.append(TableCheck("4", label, col, printed, computed, computed != printed))
    return out


def format_checks(checks: list[TableCheck]) -> str:
    lines = [f"{'table':<6}{'row':<24}{'column':<20}{'printed':>10}{'computed':>12}  flag"]
    for c in checks:
        printed = c.printed if isinstance(c.printed, str) else f"{c.printed:.3f}"
        computed = c.computed if isinstance(c.computed, str) else f"{c.computed:.3f}"
        lines.append(
            f"{c.table:<6}{c.row:<24}{c.column:<20}{printed:>10}{computed:>12}  {'DIFF' if c.flagged else '-'}"
        )
    return "\n".join(lines)
