import csv
import json
import os
from xml.etree import ElementTree

from jsonschema import validate

from . import UnitTestCase
from ..atlas.render import cross_section_svg
from ..atlas.schemas import REPORT_SCHEMA, sig
from ..atlas.suite import REFERENCE_DESIGNS, select
from ..classify import numeric_verdict
from ..models import DesignParams
from ..workspace import GridSpec

B1 = ["--d2", "0", "--d3", "2", "--d4", "1", "--r2", "0", "--r3", "0"]
COARSE = ["--grid", "96"]


class TableTestCase(UnitTestCase):
    # testing the group table command
    def test_table(self):
        result = self.runner.invoke(self.cli, ["table"])
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert len(lines) == 22
        assert lines[-1].split()[0] == "J"
        assert lines[-1].split()[-1] == "2"

    # testing the version option
    def test_version(self):
        result = self.runner.invoke(self.cli, ["--version"])
        assert result.exit_code == 0
        assert self.config.VERSION in result.output


class ClassifyTestCase(UnitTestCase):
    # testing the exit code of a negative length
    def test_invalid_parameters(self):
        args = ["classify", "--d2", "-1", "--d3", "2", "--d4", "1", "--r2", "0", "--r3", "0"]
        result = self.runner.invoke(self.cli, args)
        assert result.exit_code == 1
        assert "nonnegative" in result.stderr

    # testing the exit code of an out-of-family design
    def test_out_of_family(self):
        args = ["classify", "--d2", "1", "--d3", "2", "--d4", "1", "--r2", "1", "--r3", "0"]
        result = self.runner.invoke(self.cli, args)
        assert result.exit_code == 2

    # testing that a malformed number is invalid input, not an out-of-family design
    def test_malformed_number(self):
        args = ["classify", "--d2", "abc", "--d3", "2", "--d4", "1", "--r2", "0", "--r3", "0"]
        result = self.runner.invoke(self.cli, args)
        assert result.exit_code == 1
        assert "abc" in result.stderr
        result = self.runner.invoke(self.cli, ["classify", *B1, "--no-such-option"])
        assert result.exit_code == 1
        result = self.runner.invoke(self.cli, ["no-such-command"])
        assert result.exit_code == 1

    # testing the JSON report
    def test_json_report(self):
        result = self.runner.invoke(self.cli, ["classify", *B1, *COARSE, "--json"])
        assert result.exit_code == 0, result.stderr
        report = json.loads(result.output)
        validate(instance=report, schema=REPORT_SCHEMA)
        assert report["group_label"] == "B1"
        assert report["family_case"] == "B"
        assert report["class_rank"] == 2
        assert report["cuspidal"] is False
        assert report["metrics"]["node_count"] == 0
        assert report["grid"]["resolution"] == 96
        assert report["input_parameters"]["d3"] == 2.0

    # testing that the same input gives the same bytes
    def test_deterministic(self):
        first = self.runner.invoke(self.cli, ["classify", *B1, *COARSE, "--json"])
        second = self.runner.invoke(self.cli, ["classify", *B1, *COARSE, "--json"])
        assert first.exit_code == 0
        assert first.output == second.output

    # testing the text summary
    def test_text_output(self):
        result = self.runner.invoke(self.cli, ["classify", *B1, *COARSE])
        assert result.exit_code == 0
        assert "B1" in result.output

    # testing the 9 significant digit formatting
    def test_sig(self):
        assert sig(1 / 3) == 0.333333333
        assert sig(2) == 2.0


class AnalyzeTestCase(UnitTestCase):
    # testing the written artifacts
    def test_analyze(self):
        with self.runner.isolated_filesystem():
            result = self.runner.invoke(self.cli, ["analyze", *B1, *COARSE, "--out", "out"])
            assert result.exit_code == 0, result.stderr
            with open(os.path.join("out", "report.json")) as handle:
                report = json.load(handle)
            assert report["group_label"] == "B1"
            with open(os.path.join("out", "cross_section.svg")) as handle:
                svg = handle.read()
            assert svg.startswith("<?xml")
            assert "<polyline" in svg
            assert "#404040" in svg or "#C0C0C0" in svg

    # testing an unwritable output path
    def test_unwritable(self):
        with self.runner.isolated_filesystem():
            with open("taken", "w") as handle:
                handle.write("not a directory")
            result = self.runner.invoke(self.cli, ["analyze", *B1, *COARSE, "--out", "taken"])
            assert result.exit_code == 3
            assert "taken" in result.stderr

    # testing a sweep whose output directory is a file
    def test_sweep_unwritable(self):
        with self.runner.isolated_filesystem():
            with open("taken", "w") as handle:
                handle.write("not a directory")
            args = ["sweep", "--case", "B", "--x", "d3:1..1.5:2", "--y", "d4:2.5..3:2", "--out", "taken"]
            result = self.runner.invoke(self.cli, args)
            assert result.exit_code == 3


class SweepTestCase(UnitTestCase):
    # testing a parameter that the case keeps at zero
    def test_zero_pattern(self):
        args = ["sweep", "--case", "B", "--x", "d3:1..2:2", "--y", "r2:1..2:2", "--fixed", "d4=1"]
        result = self.runner.invoke(self.cli, args)
        assert result.exit_code == 1

    # testing a malformed axis
    def test_bad_axis(self):
        args = ["sweep", "--case", "B", "--x", "d3:1-2:2", "--y", "d4:1..2:2"]
        result = self.runner.invoke(self.cli, args)
        assert result.exit_code == 1

    # testing a small sweep and its CSV
    def test_sweep(self):
        with self.runner.isolated_filesystem():
            args = ["sweep", "--case", "B", "--x", "d3:1..1.5:2", "--y", "d4:2.5..3:2", "--out", "zones"]
            result = self.runner.invoke(self.cli, args)
            assert result.exit_code == 0, result.stderr
            with open(os.path.join("zones", "zone_map.csv")) as handle:
                rows = list(csv.reader(handle))
            assert rows[0] == ["x", "y", "label", "node_count", "void_count"]
            assert len(rows) == 5
            with open(os.path.join("zones", "zone_map.svg")) as handle:
                assert "<svg" in handle.read()


class VerifyTestCase(UnitTestCase):
    # testing the example selection
    def test_select(self):
        assert len(select()) == 21
        assert [entry.label for entry in select("D")] == ["D1", "D2", "D3", "D4", "D5"]
        assert [entry.label for entry in select("a3,b2")] == ["A3", "B2"]
        assert len(REFERENCE_DESIGNS) == 21

    # testing a selection with no example
    def test_empty_selection(self):
        result = self.runner.invoke(self.cli, ["verify", "--only", "Z"])
        assert result.exit_code == 1

    # testing a single case end to end
    def test_verify_case(self):
        result = self.runner.invoke(self.cli, ["verify", "--only", "C", *COARSE])
        assert result.exit_code == 0, result.output
        assert "1/1 passed" in result.output


class RenderTestCase(UnitTestCase):
    # testing that the figure is well-formed with one polyline per section curve
    def test_cross_section(self):
        p = DesignParams(0, 2, 3, 0, 0)
        verdict = numeric_verdict(p, GridSpec.for_params(p, 96), self.config.TRACE, self.config.ASPECT_GRID)
        svg = cross_section_svg(verdict.analysis)
        root = ElementTree.fromstring(svg.encode("utf-8"))
        polylines = root.findall(".//{http://www.w3.org/2000/svg}polyline")
        assert len(polylines) == len(verdict.analysis.curves)
        circles = root.findall(".//{http://www.w3.org/2000/svg}circle")
        assert len(circles) == len(verdict.analysis.nodes)
        assert svg == cross_section_svg(verdict.analysis)
