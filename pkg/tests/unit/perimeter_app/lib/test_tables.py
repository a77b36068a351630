"""Tests for tables module."""
import typing

import pytest

from perimeter_app.lib.errors import FormulaMisuseError, InvalidInputError
from perimeter_app.lib.tables import PerimeterTable, Provenance, TableMode


class TestPerimeterTable:
    """Tests for PerimeterTable."""

    def test_sorted_without_zeros(self):
        table = PerimeterTable(4, 2, TableMode.PROPER, {9: 8, 7: 0, 8: 9})
        assert list(table.counts) == [8, 9]
        assert table.total == 17
        assert table.support == (8, 9)
        assert table.rows() == [(8, 9), (9, 8)]

    def test_from_pairs_sums_repeats(self):
        table = PerimeterTable.from_pairs(4, 3, TableMode.PROPER, [(16, 8), (15, 8), (16, 16)])
        assert table.counts == {15: 8, 16: 24}

    def test_negative_counts_refused(self):
        with pytest.raises(FormulaMisuseError):
            PerimeterTable(4, 2, TableMode.PROPER, {8: -1})

    def test_invalid_shape(self):
        with pytest.raises(InvalidInputError):
            PerimeterTable(0, 2, TableMode.LATTICE)

    def test_empty(self):
        table = PerimeterTable(3, 3, TableMode.PROPER)
        assert table.support is None
        assert table.total == 0

    def test_equality_ignores_provenance(self):
        a = PerimeterTable(4, 2, TableMode.PROPER, {8: 9}, Provenance.FORMULA)
        b = PerimeterTable(4, 2, TableMode.PROPER, {8: 9}, Provenance.ENUMERATION)
        assert a == b
        assert a.same_counts(b)

    def test_differences(self):
        a = PerimeterTable(4, 2, TableMode.PROPER, {8: 9, 9: 8})
        assert a.differences({8: 9, 9: 7, 10: 1}) == {9: (8, 7), 10: (0, 1)}
        assert a.differences(a) == {}

    def test_annotations_resolve(self):
        hints = typing.get_type_hints(PerimeterTable.differences)
        assert "other" in hints
