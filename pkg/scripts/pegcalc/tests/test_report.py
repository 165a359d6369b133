"""
Tests for report records, serialization and exit codes.

Run with: pytest scripts/pegcalc/tests/test_report.py -v
"""

import io
import re

import jsonschema
import orjson
import pandas as pd
import pytest

from pegcalc.constants import Anchor
from pegcalc.models import CheckResult
from pegcalc.report import DIGEST_LENGTH, REPORT_SCHEMA, CheckRecord, Report, scenario_digest
from pegcalc.scenario import classical_scenario, random_scenarios


def record(name, residual=0.0, scenario="s", digest="0" * DIGEST_LENGTH, wall_time=None):
    result = CheckResult.asserted(name, Anchor.ADDITIVITY, {"homogeneous": residual}, 1e-10)
    return CheckRecord(scenario=scenario, result=result, seed=1, digest=digest, wall_time=wall_time)


@pytest.fixture
def report():
    report = Report("suite", "1.0.0", seed=7)
    report.extend(
        [
            record("normalisation", digest="b" * DIGEST_LENGTH),
            record("additivity", digest="b" * DIGEST_LENGTH),
            record("additivity", digest="a" * DIGEST_LENGTH),
        ]
    )
    report.extend(
        [CheckRecord("s", CheckResult.diagnostic("monotonicity", Anchor.MONOTONICITY), 1, "c" * DIGEST_LENGTH)]
    )
    return report


class TestDigest:
    """Test scenario digests."""

    def test_length_and_stability(self):
        setup = random_scenarios(1, seed=5)[0]
        digest = scenario_digest(setup)
        assert len(digest) == DIGEST_LENGTH
        assert digest == scenario_digest(random_scenarios(1, seed=5)[0])

    def test_inputs_change_digest(self):
        assert scenario_digest(classical_scenario(seed=1)) != scenario_digest(classical_scenario(seed=2))


class TestReport:
    """Test ordering, summary and exit code."""

    def test_sorted_by_name_then_digest(self, report):
        keys = [(r.result.name, r.digest[0]) for r in report.sorted_records]
        assert keys == [("additivity", "a"), ("additivity", "b"), ("monotonicity", "c"), ("normalisation", "b")]

    def test_summary(self, report):
        assert report.summary() == {"pass": 3, "fail": 0, "diagnostic": 1, "total": 4}

    def test_exit_code(self, report):
        assert report.exit_code == 0
        report.extend([record("conjugation", residual=1.0)])
        assert report.exit_code == 1
        assert [r.result.name for r in report.failures] == ["conjugation"]

    def test_diagnostic_never_fails(self):
        report = Report("peg", "1.0.0")
        report.extend([CheckRecord("s", CheckResult.diagnostic("x", Anchor.PEG, {"r": 5.0}), None, "d" * DIGEST_LENGTH)])
        assert report.exit_code == 0


class TestSerialization:
    """Test JSON and CSV output."""

    def test_json_matches_schema(self, report):
        data = orjson.loads(report.to_json())
        jsonschema.validate(data, REPORT_SCHEMA)
        assert data["seed"] == 7
        assert [r["name"] for r in data["records"]] == ["additivity", "additivity", "monotonicity", "normalisation"]

    def test_json_is_deterministic(self, report):
        shuffled = Report(report.command, report.version, report.seed, list(reversed(report.records)))
        assert report.to_json() == shuffled.to_json()

    def test_wall_time_only_when_recorded(self, report):
        data = orjson.loads(report.to_json())
        assert all("wall_time" not in r for r in data["records"])
        timed = Report("suite", "1.0.0", records=[record("additivity", wall_time=0.25)])
        assert orjson.loads(timed.to_json())["records"][0]["wall_time"] == 0.25

    def test_bad_digest_rejected(self):
        bad = Report("suite", "1.0.0", records=[record("additivity", digest="xyz")])
        with pytest.raises(jsonschema.ValidationError):
            bad.to_json()

    def test_csv(self, report):
        frame = pd.read_csv(io.BytesIO(report.to_csv()))
        assert len(frame) == 4
        assert list(frame.columns[:3]) == ["scenario", "name", "anchor"]
        assert "residuals.homogeneous" in frame.columns
        assert list(frame["status"]) == ["pass", "pass", "diagnostic", "pass"]

    def test_unknown_format(self, report):
        with pytest.raises(ValueError):
            report.render("xml")

    def test_write(self, report, tmp_path):
        path = tmp_path / "report.json"
        report.write(path)
        assert path.read_bytes() == report.to_json()


class TestAnchors:
    """Test equation anchors on report records."""

    def test_records_name_their_equation(self, report):
        anchors = [r["anchor"] for r in orjson.loads(report.to_json())["records"]]
        assert anchors == ["Eq22-additivity", "Eq22-additivity", "Eq3-monotonicity", "Eq22-additivity"]
        assert list(pd.read_csv(io.BytesIO(report.to_csv()))["anchor"])[2] == "Eq3-monotonicity"

    @pytest.mark.parametrize(
        "anchor,label",
        [
            (Anchor.PEG, "Eq5-peg"),
            (Anchor.TRACE_IDENTITY, "Eq10-trace-identity"),
            (Anchor.SHIFTED_DYNAMICS, "Eq12-shifted-dynamics"),
            (Anchor.Z_FORM, "Eq16-Z-form"),
            (Anchor.Y_FORM, "Eq17-Y-form"),
            (Anchor.THEOREM_CONDITIONS, "Eq22-theorem-conditions"),
            (Anchor.UNIT_CONSTRAINT, "Eq33-unit-constraint"),
            (Anchor.GROUPING, "Eq47-grouping"),
            (Anchor.CONDITIONAL_ENTROPY, "Eq49-conditional-entropy"),
            (Anchor.STRONG_ADDITIVITY, "Eq51-strong-additivity"),
            (Anchor.CONCAVITY, "Eq52-concavity"),
        ],
    )
    def test_labels(self, anchor, label):
        assert anchor.label == label
        assert CheckResult.diagnostic("x", anchor).to_dict()["anchor"] == label

    def test_labels_unique(self):
        labels = [a.label for a in Anchor]
        assert len(labels) == len(set(labels))
        assert all(re.fullmatch(r"(Eq|Fig|Sec)\d+-[A-Za-z-]+", label) for label in labels)

    @pytest.mark.parametrize(
        "name,anchor",
        [
            ("grouping[first-time]", Anchor.GROUPING),
            ("additivity[disjoint]", Anchor.ADDITIVITY),
            ("y-form", Anchor.Y_FORM),
            ("strong-additivity[alpha|beta]", Anchor.STRONG_ADDITIVITY),
        ],
    )
    def test_for_check(self, name, anchor):
        assert Anchor.for_check(name) is anchor

    def test_for_unknown_check(self):
        with pytest.raises(KeyError):
            Anchor.for_check("nonsense[x]")
