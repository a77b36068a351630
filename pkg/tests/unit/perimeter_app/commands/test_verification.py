"""Tests for verification module."""
from unittest.mock import patch

import pytest

from perimeter_app.commands.verification import (
    FAIL,
    PASS,
    SKIPPED,
    check_bijection,
    check_expansion,
    check_g1_total,
    check_g2,
    check_golden,
    check_patterns,
    check_perimeter_laws,
    check_tree_census,
    pattern_records,
    summarize_diagnostics,
    verify,
)
from perimeter_app.commands.views.constants import (
    CHECK_EXPANSION,
    CHECK_G2,
    CHECK_GOLDEN,
    CHECK_PATTERNS,
)
from perimeter_app.lib.labeled_trees import PrueferCode
from perimeter_app.lib.tables import PerimeterTable, TableMode


class TestVerify:
    """Tests for the full verification run."""

    def test_n4_passes_with_golden_values(self):
        report = verify(4)
        assert report.passed
        statuses = {check.name: check.status for check in report.checks}
        assert statuses[CHECK_GOLDEN] == PASS
        assert all(status == PASS for status in statuses.values())
        assert report.to_dict()["passed"] is True

    @pytest.mark.slow
    def test_n6_passes(self):
        report = verify(6)
        assert report.passed, report.to_dict()
        assert {check.name: check.status for check in report.checks}[CHECK_G2] == PASS

    @pytest.mark.slow
    def test_n7_passes(self):
        assert verify(7).passed

    def test_budget_refusal_is_skipped(self, monkeypatch):
        monkeypatch.setenv("PERIMETER_APP_ENUMERATION_BUDGET", "10")
        report = verify(5)
        statuses = {check.name: check.status for check in report.checks}
        assert statuses[CHECK_GOLDEN] == SKIPPED
        assert statuses[CHECK_EXPANSION] == SKIPPED
        assert statuses[CHECK_G2] == SKIPPED
        assert report.passed


class TestChecks:
    """Tests for single checks and their counterexamples."""

    def test_g1_total(self):
        assert check_g1_total(10).status == PASS

    def test_g1_total_failure(self):
        wrong = PerimeterTable(5, 4, TableMode.PROPER, {20: 1})
        with patch("perimeter_app.commands.verification.g1", return_value=wrong):
            result = check_g1_total(5)
        assert result.status == FAIL
        assert result.counterexample == {"n": 5, "got": "1"}

    def test_golden_failure_names_table(self):
        wrong = PerimeterTable(4, 3, TableMode.PROPER, {15: 8, 16: 23})
        with patch("perimeter_app.commands.verification.g1", return_value=wrong):
            result = check_golden()
        assert result.status == FAIL
        assert result.counterexample["table"] == "g1(4)"

    def test_bijection_random_mode(self):
        result = check_bijection(9)
        assert result.status == PASS
        assert "random" in result.detail

    def test_bijection_failure(self):
        with patch("perimeter_app.commands.verification.encode", return_value=PrueferCode(5, (0, 0))):
            result = check_bijection(5)
        assert result.status == FAIL
        assert result.counterexample == {"code": [0, 1]}

    def test_bijection_small_n(self):
        assert check_bijection(2).status == SKIPPED

    def test_tree_census_limit(self):
        assert check_tree_census(7).status == PASS
        assert check_tree_census(10).status == SKIPPED

    def test_patterns(self):
        result = check_patterns(6)
        assert result.status == PASS
        assert CHECK_PATTERNS == result.name
        assert "xyzx-printed-total" in result.diagnostics

    def test_g2_small_n_uses_enumeration(self):
        result = check_g2(5)
        assert result.status == PASS
        assert "348" in result.detail

    def test_perimeter_laws(self):
        assert check_perimeter_laws(5).status == PASS
        assert check_perimeter_laws(2).status == SKIPPED

    def test_expansion(self):
        assert check_expansion(5).status == PASS


class TestPatternRecords:
    """Tests for the per-record pattern report."""

    def test_asserted_records_match(self):
        records = pattern_records(6)
        asserted = [r for r in records if r.asserted]
        assert asserted
        assert all(r.match for r in asserted)
        assert {r.check for r in asserted} == {"xx-class", "xx", "xyx", "xyx-slice", "xyzx", "free"}

    def test_printed_total_recorded_not_asserted(self):
        records = pattern_records(6)
        path = [r for r in records if r.check == "xyzx-printed-total" and r.delta == "(1,1,2,2,2,2)"]
        assert len(path) == 1
        assert path[0].formula == "1020"
        assert path[0].oracle == "48"
        assert not path[0].match
        assert not path[0].asserted

    def test_summary_counts_only_diagnostics(self):
        records = pattern_records(5)
        summary = summarize_diagnostics(records)
        assert "xx" not in summary
        recorded = sum(1 for r in records if not r.asserted)
        assert sum(b["match"] + b["mismatch"] for b in summary.values()) == recorded
