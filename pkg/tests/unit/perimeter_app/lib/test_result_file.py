"""Tests for result_file module."""
import json

import pytest

from perimeter_app.lib.errors import InvalidInputError
from perimeter_app.lib.proper_counts import g1
from perimeter_app.lib.result_file import ResultFile
from perimeter_app.lib.tables import PerimeterTable, Provenance, TableMode
from tests.helpers import load_result_file, load_test_file


class TestResultFile:
    """Tests for ResultFile serialization."""

    @pytest.mark.parametrize("filename", [
        "results/g1_n4_i3.csv",
        "results/proper_n4_i2.csv",
        "results/lattice_n2_d3.csv",
    ])
    def test_golden_files_round_trip(self, filename):
        text = load_test_file(filename)
        assert ResultFile.loads(text).dumps("csv") == text

    def test_golden_g1_matches_formula(self):
        result = load_result_file("results/g1_n4_i3.csv")
        assert result.to_table() == g1(4)
        assert result.provenance is Provenance.FORMULA
        assert result.mode is TableMode.PROPER

    def test_write_read_write(self, tmp_path):
        result = ResultFile.from_table(g1(9), wall_time=0.1234567)
        for fmt in ("csv", "json"):
            path = tmp_path / f"g1.{fmt}"
            result.write(path, fmt)
            again = ResultFile.read(path)
            assert again == result
            assert again.dumps(fmt) == path.read_text()

    def test_big_counts_are_decimal_strings(self):
        table = PerimeterTable(30, 29, TableMode.PROPER, {100: 2 ** 90})
        document = json.loads(ResultFile.from_table(table).dumps("json"))
        assert document["rows"] == [[100, str(2 ** 90)]]
        assert ResultFile.loads(ResultFile.from_table(table).dumps("csv")).rows == [(100, 2 ** 90)]

    def test_checksum_detects_edits(self):
        text = load_test_file("results/proper_n4_i2.csv").replace("9,8", "9,7")
        with pytest.raises(InvalidInputError, match="checksum"):
            ResultFile.loads(text)

    def test_rejects_non_integer_counts(self):
        text = load_test_file("results/lattice_n2_d3.csv").replace("10,3", "10,3.0")
        with pytest.raises(InvalidInputError):
            ResultFile.loads(text)

    def test_rejects_unsorted_rows(self):
        with pytest.raises(InvalidInputError):
            ResultFile(4, 2, TableMode.PROPER, Provenance.ENUMERATION, [(9, 8), (8, 9)])

    def test_rejects_unknown_format(self):
        with pytest.raises(InvalidInputError):
            ResultFile.from_table(g1(4)).dumps("xml")

    def test_rejects_garbage(self):
        with pytest.raises(InvalidInputError):
            ResultFile.loads("t,count\n1,2\n")

    @pytest.mark.parametrize("text", [
        "# {not json\nt,count\n15,8\n",
        '# {"n": 4}\nt,count\n1\n',
        '# {"n": 4}\nt,count\nx,2\n',
        '# [1, 2]\nt,count\n',
        '{"header": {"n": 4}, "rows": [[15, 8]]}',
        '{"rows": []}',
    ])
    def test_malformed_files_raise_invalid_input(self, text):
        with pytest.raises(InvalidInputError):
            ResultFile.loads(text)

    def test_malformed_file_through_read(self, tmp_path):
        path = tmp_path / "broken.csv"
        path.write_text(load_test_file("results/g1_n4_i3.csv").replace("15,8", "15"))
        with pytest.raises(InvalidInputError, match="malformed"):
            ResultFile.read(path)
