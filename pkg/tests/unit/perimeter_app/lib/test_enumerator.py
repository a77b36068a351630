"""Tests for enumerator module."""
import json
from collections import Counter

import pytest

from perimeter_app.lib.enumerator import (
    GTable,
    PolycubeState,
    RedelmeierSearch,
    WorkUnit,
    enumerate_g,
    enumerate_proper,
    estimate_visits,
    iter_polycubes,
    run_unit,
    run_units,
    split_work,
)
from perimeter_app.lib.errors import BudgetExceededError, InvalidInputError
from perimeter_app.lib.tables import TableMode

# Fixed polycube counts A_d(n), n = 1..
A2 = [1, 2, 6, 19, 63]
A3 = [1, 3, 15, 86, 534, 3481]
A4 = [1, 4, 28, 234, 2162]


class TestPolycubeState:
    """Tests for incremental perimeter bookkeeping."""

    def test_domino(self):
        state = PolycubeState(3, 2)
        state.add(state.origin)
        assert state.perimeter == 6
        state.add(state.origin + state.strides[1])
        assert state.perimeter == 10
        assert state.spanned == 1
        assert state.remove() == state.origin + state.strides[1]
        assert state.perimeter == 6
        assert state.spanned == 0

    def test_incremental_matches_recount(self):
        mismatches = []

        def check(state: PolycubeState) -> None:
            if state.perimeter != state.recount_perimeter():
                mismatches.append(list(state.cells))

        RedelmeierSearch(3, 5).run(visit=check)
        assert mismatches == []

    def test_sparse_grid(self, monkeypatch):
        monkeypatch.setenv("PERIMETER_APP_DENSE_CELL_LIMIT", "10")
        state = PolycubeState(2, 3)
        assert not isinstance(state.occupied, bytearray)
        search = RedelmeierSearch(2, 4)
        totals = Counter()
        for (n, _, _), c in search.run().items():
            totals[n] += c
        assert [totals[n] for n in range(1, 5)] == A2[:4]


class TestEnumerateG:
    """Tests for enumerate_g and GTable views."""

    def test_square_lattice_counts(self):
        table = enumerate_g(5, 2)
        assert [table.total(n) for n in range(1, 6)] == A2

    def test_cubic_lattice_counts(self):
        table = enumerate_g(6, 3)
        assert [table.total(n) for n in range(1, 7)] == A3

    def test_four_dimensional_counts(self):
        table = enumerate_g(5, 4)
        assert [table.total(n) for n in range(1, 6)] == A4

    def test_dominoes(self):
        assert enumerate_g(2, 3).lattice_table(2).counts == {10: 3}
        assert enumerate_g(2, 2).lattice_table(2).counts == {6: 2}

    def test_lattice_table_mode(self):
        table = enumerate_g(3, 2).lattice_table(3)
        assert table.mode is TableMode.LATTICE
        assert table.counts == {7: 4, 8: 2}

    def test_proper_tables_n4(self):
        assert enumerate_proper(4, 2).proper_table(4, 2).counts == {8: 9, 9: 8}
        assert enumerate_proper(4, 1).proper_table(4, 1).counts == {2: 1}

    def test_proper_table_from_higher_dimension(self):
        # a d=3 run holds every 2-proper shape in C(3,2) axis choices
        run = enumerate_g(4, 3)
        assert run.proper_table(4, 2).counts == {8: 9, 9: 8}
        assert run.proper_table(4, 3).total == 32

    def test_proper_totals_n5(self):
        assert enumerate_proper(5, 2).proper_table(5, 2).total == 61
        assert enumerate_proper(5, 3).proper_table(5, 3).total == 348
        assert enumerate_proper(5, 4).proper_table(5, 4).total == 400

    def test_proper_dimension_out_of_range(self):
        with pytest.raises(InvalidInputError):
            enumerate_g(3, 2).proper_table(3, 3)

    def test_root_conventions_agree(self):
        assert enumerate_g(5, 3, root_convention="max").counts == enumerate_g(5, 3).counts

    def test_unknown_root_convention(self):
        with pytest.raises(InvalidInputError):
            RedelmeierSearch(2, 3, root_convention="centre")

    def test_invalid_arguments(self):
        with pytest.raises(InvalidInputError):
            enumerate_g(0, 3)


class TestWorkSplitting:
    """Tests for split_work, run_units and checkpoints."""

    def test_units_cover_the_search(self):
        whole = enumerate_g(6, 3).counts
        for depth in (1, 2, 3, 4):
            units = split_work(6, 3, depth)
            assert run_units(units) == whole

    def test_single_unit_tallies_sizes_spans_and_perimeters(self):
        tally = run_unit(WorkUnit(2, 2))
        assert tally == Counter({(1, 0, 4): 1, (2, 1, 6): 2})

    def test_prefix_units(self):
        units = split_work(5, 2, 2)
        assert units[0] == WorkUnit(2, 1, (), 1)
        assert len(units) == 1 + 2
        assert all(unit.min_size == 2 for unit in units[1:])

    def test_parallel_equals_sequential(self):
        parallel = enumerate_g(6, 3, jobs=2, prefix_depth=3)
        assert parallel.counts == enumerate_g(6, 3).counts

    def test_checkpoints_resume(self, tmp_path):
        first = enumerate_g(5, 3, checkpoint_dir=tmp_path, prefix_depth=2)
        files = sorted(tmp_path.glob("unit-*.json"))
        assert len(files) == len(split_work(5, 3, 2))
        payload = json.loads(files[0].read_text())
        assert payload["schema"] == 1
        second = enumerate_g(5, 3, checkpoint_dir=tmp_path, prefix_depth=2)
        assert second.counts == first.counts

    def test_corrupt_checkpoint_is_recomputed(self, tmp_path):
        expected = enumerate_g(4, 2, checkpoint_dir=tmp_path, prefix_depth=2).counts
        for path in tmp_path.glob("unit-*.json"):
            path.write_text("{not json")
        assert enumerate_g(4, 2, checkpoint_dir=tmp_path, prefix_depth=2).counts == expected

    def test_unit_keys_are_stable(self):
        assert WorkUnit(3, 6, (0, 1)).key == WorkUnit(3, 6, (0, 1)).key
        assert WorkUnit(3, 6, (0, 1)).key != WorkUnit(3, 6, (0, 2)).key

    def test_negative_depth(self):
        with pytest.raises(InvalidInputError):
            split_work(5, 2, -1)


class TestBudget:
    """Tests for the enumeration cost guard."""

    def test_estimate_is_exact_for_small_runs(self):
        assert estimate_visits(4, 3) == sum(A3[:4])

    def test_refused_over_budget(self, monkeypatch):
        monkeypatch.setenv("PERIMETER_APP_ENUMERATION_BUDGET", "1000")
        with pytest.raises(BudgetExceededError) as e:
            enumerate_g(8, 3)
        assert e.value.budget == 1000
        assert e.value.estimate > 1000

    def test_iter_polycubes_guarded(self, monkeypatch):
        monkeypatch.setenv("PERIMETER_APP_ENUMERATION_BUDGET", "10")
        with pytest.raises(BudgetExceededError):
            list(iter_polycubes(5, 3))


class TestIterPolycubes:
    """Tests for iter_polycubes function."""

    def test_trominoes(self):
        found = list(iter_polycubes(3, 2))
        assert len(found) == 6
        assert Counter(perimeter for _, perimeter, _ in found) == {7: 4, 8: 2}
        assert Counter(spanned for _, _, spanned in found) == {2: 4, 1: 2}

    def test_cells_are_sorted_coordinates(self):
        for cells, _, _ in iter_polycubes(3, 3):
            assert len(cells) == 3
            assert list(cells) == sorted(cells)
            assert all(len(cell) == 3 for cell in cells)

    @pytest.mark.slow
    def test_determinism_n7_d4(self):
        parallel = enumerate_g(7, 4, jobs=4, prefix_depth=3)
        assert parallel.counts == enumerate_g(7, 4).counts

    def test_gtable_sizes(self):
        assert GTable(2, 3, enumerate_g(3, 2).counts).sizes() == [1, 2, 3]
