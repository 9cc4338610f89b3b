import io
import re
import xml.etree.ElementTree as ET

import pytest

from infothreshold import cli
from infothreshold.core import ClassifierRates, information_threshold, posterior
from infothreshold.export import SVG_MARKER_ID, curve_csv, curve_svg, read_curve_csv, table3_checks, table4_checks

SVG_NS = {"svg": "http://www.w3.org/2000/svg"}


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


class TestCsv:
    def test_rows_and_endpoint(self):
        rows = read_curve_csv(curve_csv(ClassifierRates(0.95, 0.99), 0.01))
        assert len(rows) == 101
        assert rows[0] == (0.0, 0.0)
        assert rows[-1] == (1.0, 1.0)

    def test_header(self):
        assert curve_csv(ClassifierRates(0.9, 0.9), 0.1).splitlines()[0] == "phi,rho"

    def test_identity(self):
        rows = read_curve_csv(curve_csv(ClassifierRates(0.5, 0.5), 0.01))
        assert all(phi == rho for phi, rho in rows)

    @pytest.mark.parametrize("a,b,step", [(0.95, 0.99, 0.01), (0.2, 0.4, 0.001), (0.85, 0.95, 0.05)])
    def test_round_trip(self, a, b, step):
        r = ClassifierRates(a, b)
        for phi, rho in read_curve_csv(curve_csv(r, step)):
            assert abs(posterior(r, phi) - rho) <= 1e-12


class TestSvg:
    def test_marker_position(self):
        r = ClassifierRates(0.95, 0.99)
        root = ET.fromstring(curve_svg(r, 0.01))
        assert root.get("version") == "1.1"
        marker = root.find(f".//svg:line[@id='{SVG_MARKER_ID}']", SVG_NS)
        x0, width = float(root.get("data-plot-x0")), float(root.get("data-plot-width"))
        frac = (float(marker.get("x1")) - x0) / width
        assert frac == pytest.approx(information_threshold(r).phi_e, abs=1e-6)
        assert frac == pytest.approx(0.093, abs=5e-4)
        assert marker.get("stroke-dasharray")

    def test_two_partitions(self):
        root = ET.fromstring(curve_svg(ClassifierRates(0.95, 0.99), 0.01))
        lines = root.findall(".//svg:polyline", SVG_NS)
        classes = [l.get("class") for l in lines]
        assert classes == ["curve below-threshold", "curve above-threshold"]
        assert lines[0].get("stroke") != lines[1].get("stroke")

    def test_unannotated(self):
        svg = curve_svg(ClassifierRates(0.95, 0.99), 0.01, annotate_threshold=False)
        assert SVG_MARKER_ID not in svg
        ET.fromstring(svg)


class TestTables:
    def test_table3_flags(self):
        flagged = [(c.row, c.column) for c in table3_checks() if c.flagged]
        assert flagged == [("tpr=0.95 tnr=0.99", "rho_e"), ("tpr=0.85 tnr=0.95", "rho_e")]

    def test_table3_row(self):
        cells = {c.column: c for c in table3_checks() if c.row == "tpr=0.75 tnr=0.85"}
        assert round(cells["phi_e"].computed, 3) == 0.309
        assert round(cells["rho_e"].computed, 3) == 0.691

    def test_table4_clean(self):
        checks = table4_checks()
        assert not any(c.flagged for c in checks)
        phi = [c.computed for c in checks if c.row == "lambda=0.95" and c.column.startswith("phi_e")]
        assert phi == pytest.approx([0.109, 0.109], abs=1e-3)


class TestCommands:
    def test_threshold(self):
        code, out, _ = run("threshold", "--tpr", "0.95", "--tnr", "0.99")
        assert code == 0
        assert re.search(r"phi_e\s+0\.093", out)
        assert re.search(r"sum\s+1\.000", out)
        for key in ("rho_e", "kappa_max", "J", "epsilon", "LR+"):
            assert key in out

    def test_threshold_half(self):
        code, out, _ = run("threshold", "--tpr", "0.5", "--tnr", "0.5")
        assert code == 0 and re.search(r"phi_e\s+0\.500", out)

    def test_threshold_undefined(self):
        code, _, err = run("threshold", "--tpr", "0", "--tnr", "1")
        assert code == cli.EXIT_INVALID == 1
        assert "undefined threshold" in err

    def test_invalid_rate(self):
        code, _, err = run("threshold", "--tpr", "1.5", "--tnr", "0.5")
        assert code == 1 and "tpr" in err

    def test_usage_error_is_validation(self):
        code, _, _ = run("threshold", "--tpr", "x", "--tnr", "0.5")
        assert code == 1
        assert run("nope")[0] == 1

    def test_curve_files(self, tmp_path):
        csv_path, svg_path = tmp_path / "c.csv", tmp_path / "c.svg"
        assert run("curve", "--tpr", ".95", "--tnr", ".99", "--step", "0.01", "--format", "csv", "--out", str(csv_path))[0] == 0
        assert run("curve", "--tpr", ".95", "--tnr", ".99", "--format", "svg", "--out", str(svg_path))[0] == 0
        assert len(read_curve_csv(csv_path.read_text())) == 101
        assert SVG_MARKER_ID in svg_path.read_text()

    def test_curve_step_range(self):
        assert run("curve", "--tpr", ".9", "--tnr", ".9", "--step", "0.2")[0] == 1

    def test_curve_io_error(self, tmp_path):
        code, _, err = run("curve", "--tpr", ".9", "--tnr", ".9", "--out", str(tmp_path / "missing" / "x.csv"))
        assert code == cli.EXIT_IO == 3
        assert "I/O" in err

    def test_tables(self):
        code, out, _ = run("tables")
        assert code == 0
        assert out.count("DIFF") == 2
        assert "2 cell(s) differ" in out

    def test_adequacy(self):
        code, out, _ = run("adequacy", "--tpr", "0.95", "--tnr", "0.99", "--lambda", "0.95")
        assert code == 0 and re.search(r"adequate\s+true", out)
        code, out, _ = run("adequacy", "--tpr", "0.5", "--tnr", "0.5", "--lambda", "0.95")
        assert re.search(r"adequate\s+false", out)

    def test_solve(self):
        code, out, _ = run("solve", "--fix", "tnr=0.99", "--lambda", "0.95")
        assert code == 0
        assert 0.660 <= float(re.search(r"tpr\s+([\d.]+)", out).group(1)) <= 0.670
        code, out, _ = run("solve", "--fix", "tpr=0.99", "--lambda", "0.95")
        assert 0.984 <= float(re.search(r"tnr\s+([\d.]+)", out).group(1)) <= 0.986

    def test_solve_no_solution(self):
        code, _, err = run("solve", "--fix", "tnr=0.2", "--lambda", "0.95")
        assert code == cli.EXIT_NO_SOLUTION == 2
        assert "no solution" in err

    def test_solve_bad_fix(self):
        assert run("solve", "--fix", "j=0.3")[0] == 1

    def test_chain_bundled(self):
        code, out, _ = run("chain")
        assert code == 0
        assert "stopped at step 2" in out
        assert out.count("*") == 1

    def test_chain_uninformative(self, tmp_path):
        cfg = tmp_path / "c.yaml"
        cfg.write_text("initial_prior: 0.5\nitems:\n  - {label: coin, tpr: 0.5, tnr: 0.5}\n")
        code, out, _ = run("chain", "--config", str(cfg))
        assert code == 0 and "no stop" in out

    def test_chain_malformed(self, tmp_path):
        cfg = tmp_path / "bad.yaml"
        cfg.write_text("initial_prior: 0.5\nitems:\n  - {label: x, tpr: 0.5\n")
        code, _, err = run("chain", "--config", str(cfg))
        assert code == 1 and "parse error" in err and "line" in err

    def test_chain_missing_file(self, tmp_path):
        assert run("chain", "--config", str(tmp_path / "none.yaml"))[0] == 3

    def test_chain_abort_prints_partial(self, tmp_path):
        cfg = tmp_path / "abort.yaml"
        cfg.write_text("initial_prior: 0.5\nitems:\n  - {label: ok, tpr: 0.9, tnr: 0.9}\n  - {label: broken, tpr: 0, tnr: 1}\n")
        code, out, err = run("chain", "--config", str(cfg))
        assert code == 1 and "aborted" in out and "ok" in out

    def test_simulate(self):
        code, out, _ = run("simulate", "--tpr", "0.95", "--tnr", "0.99", "--prevalence", "0.093", "--n", "100000", "--seed", "5")
        assert code == 0 and "seed=5" in out

    @pytest.mark.parametrize("argv", [
        ("threshold", "--tpr", "0.85", "--tnr", "0.95"),
        ("tables",),
        ("chain",),
        ("simulate", "--tpr", "0.9", "--tnr", "0.8", "--prevalence", "0.3", "--n", "1000", "--seed", "9"),
        ("curve", "--tpr", "0.9", "--tnr", "0.8", "--format", "svg"),
    ])
    def test_deterministic(self, argv):
        assert run(*argv) == run(*argv)
