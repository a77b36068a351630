"""Tests for labeled_trees module."""
import random
from collections import Counter

import pytest

from perimeter_app.lib.core_math import DegreeSequence, degree_sequences
from perimeter_app.lib.errors import BudgetExceededError, InvalidInputError
from perimeter_app.lib.labeled_trees import (
    EdgeLabeledTree,
    PatternClass,
    PatternKind,
    PrueferCode,
    all_merged_trees,
    classify,
    count_trees,
    decode,
    degree_label_multiplicity,
    encode,
    iter_codes,
    merge_patterns,
    merged_census,
    merged_tree,
    outgoing_labels,
    random_code,
    xx_code_class,
)


def path_tree(labels: tuple[int, ...]) -> EdgeLabeledTree:
    """A path 0-1-2-... whose k-th edge carries labels[k]."""
    n = len(labels) + 1
    return EdgeLabeledTree(n, tuple((k, k + 1) for k in range(n - 1)), labels)


class TestEdgeLabeledTree:
    """Tests for EdgeLabeledTree validation and views."""

    def test_rejects_cycle(self):
        with pytest.raises(InvalidInputError, match="tree"):
            EdgeLabeledTree(4, ((0, 1), (1, 2), (2, 0)), (0, 1, 2))

    def test_rejects_wrong_edge_count(self):
        with pytest.raises(InvalidInputError):
            EdgeLabeledTree(4, ((0, 1), (1, 2)), (0, 1))

    def test_modes(self):
        assert path_tree((0, 1, 2)).is_distinct
        assert path_tree((0, 1, 0)).is_merged
        assert not path_tree((0, 1, 0)).is_distinct

    def test_degree_sequence(self):
        star = EdgeLabeledTree(4, ((0, 1), (0, 2), (0, 3)), (2, 0, 1))
        assert star.degree_sequence() == DegreeSequence.of((3, 1, 1, 1))

    def test_fingerprint_ignores_vertex_names(self):
        a = EdgeLabeledTree(4, ((0, 1), (1, 2), (2, 3)), (0, 1, 2))
        b = EdgeLabeledTree(4, ((3, 2), (2, 0), (0, 1)), (0, 1, 2))
        assert a.fingerprint() == b.fingerprint()
        assert a.fingerprint() != path_tree((1, 0, 2)).fingerprint()


class TestPrueferCode:
    """Tests for PrueferCode validation."""

    def test_sequence_restores_leading_entry(self):
        assert PrueferCode(6, (1, 5, 1)).sequence == (4, 1, 5, 1)

    @pytest.mark.parametrize("n, entries", [(5, (0,)), (5, (0, 5)), (2, ())])
    def test_invalid(self, n, entries):
        with pytest.raises(InvalidInputError):
            PrueferCode(n, entries)


class TestBijection:
    """Tests for encode and decode."""

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_exhaustive_round_trip(self, n):
        fingerprints = set()
        for code in iter_codes(n):
            tree = decode(code)
            assert tree.is_distinct
            assert encode(tree) == code
            fingerprints.add(tree.fingerprint())
        assert len(fingerprints) == n ** (n - 3)

    def test_reference_tree_code(self):
        tree = EdgeLabeledTree(6, ((0, 1), (1, 4), (4, 3), (5, 3), (3, 2)), (2, 4, 1, 3, 0))
        code = encode(tree)
        assert code.entries == (1, 5, 1)
        assert decode(code).fingerprint() == tree.fingerprint()

    def test_random_round_trip_n12(self):
        rng = random.Random(12)
        for _ in range(10_000):
            code = random_code(12, rng)
            assert encode(decode(code)) == code

    @pytest.mark.slow
    @pytest.mark.parametrize("n", range(7, 17))
    def test_random_round_trip_up_to_n16(self, n):
        rng = random.Random(n)
        for _ in range(10_000):
            code = random_code(n, rng)
            tree = decode(code)
            assert encode(tree) == code
            assert decode(encode(tree)).fingerprint() == tree.fingerprint()

    def test_tree_round_trip(self):
        tree = EdgeLabeledTree(6, ((0, 1), (1, 2), (1, 3), (3, 4), (3, 5)), (4, 0, 1, 2, 3))
        assert decode(encode(tree)).fingerprint() == tree.fingerprint()

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_label_multiplicity_is_degree_minus_one(self, n):
        for code in iter_codes(n):
            tree = decode(code)
            multiplicity = degree_label_multiplicity(tree)
            for v, label in outgoing_labels(tree).items():
                assert multiplicity[label] == tree.degree(v) - 1

    def test_encode_rejects_merged_tree(self):
        with pytest.raises(InvalidInputError):
            encode(path_tree((0, 1, 0)))

    def test_iter_codes_slices(self):
        assert [c.entries for c in iter_codes(4)] == [(0,), (1,), (2,), (3,)]
        assert [c.entries for c in iter_codes(5, start=3, stop=5)] == [(0, 3), (0, 4)]


class TestCountTrees:
    """Tests for count_trees function."""

    def test_star_and_path(self):
        assert count_trees(DegreeSequence.of((1, 1, 1, 1, 4))) == 1
        assert count_trees(DegreeSequence.of((1, 1, 2, 2, 2))) == 12

    def test_two_high_degree_vertices(self):
        assert count_trees(DegreeSequence.of((1,) * 7 + (3, 4, 4))) == 20160

    @pytest.mark.parametrize("n", range(3, 11))
    def test_sum_is_n_to_the_n_minus_3(self, n):
        assert sum(count_trees(delta) for delta in degree_sequences(n)) == n ** (n - 3)

    @pytest.mark.parametrize("n", [4, 5, 6, 7])
    def test_matches_decoded_census(self, n):
        observed = Counter(decode(code).degree_sequence() for code in iter_codes(n))
        assert observed == {delta: count_trees(delta) for delta in degree_sequences(n)}


class TestClassify:
    """Tests for classify and merge_patterns."""

    def test_adjacent_equal_labels(self):
        assert classify(path_tree((0, 0, 1))) == PatternClass(PatternKind.XX, 0)

    def test_one_edge_between(self):
        pattern = classify(path_tree((0, 1, 0)))
        assert pattern == PatternClass(PatternKind.XYX, 1, (1, 1))
        assert pattern.key == ("xyx", (1, 1))

    def test_xyx_end_degrees_are_tree_degrees(self):
        # path of six vertices; x edges (0,1) and (2,3), far ends 0 (a leaf) and 3
        tree = EdgeLabeledTree(6, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5)), (0, 1, 0, 2, 3))
        assert classify(tree) == PatternClass(PatternKind.XYX, 1, (1, 2))

    def test_two_edges_between(self):
        assert classify(path_tree((0, 1, 2, 0))).kind is PatternKind.XYZX

    def test_far_apart_is_free(self):
        assert classify(path_tree((0, 1, 2, 3, 0))).kind is PatternKind.FREE

    def test_rejects_distinct_tree(self):
        with pytest.raises(InvalidInputError):
            classify(path_tree((0, 1, 2)))

    def test_merge_patterns_agree_with_classify(self):
        for code in iter_codes(6):
            tree = decode(code)
            patterns = merge_patterns(tree)
            assert len(patterns) == 4
            assert patterns == [classify(merged_tree(tree, j)) for j in range(4)]


class TestMergedCensus:
    """Tests for the exhaustive merged-label census."""

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_weights_add_up(self, n):
        census = merged_census(n)
        assert census.total_weight == (n - 2) * n ** (n - 3)
        for delta in degree_sequences(n):
            weights = census.pattern_weights[delta]
            assert sum(weights.values()) == (n - 2) * count_trees(delta)

    def test_n4_path(self):
        census = merged_census(4)
        path = DegreeSequence.of((1, 1, 2, 2))
        assert census.weight(path, PatternKind.XX) == 4
        assert census.weight(path, PatternKind.XYX) == 2
        assert census.xyx_end_weights(path) == {(1, 1): 2}

    def test_all_merged_trees_are_merged(self):
        trees = list(all_merged_trees(5))
        assert len(trees) == 3 * 25
        assert all(tree.is_merged and weight == 1 for tree, weight in trees)

    def test_refused_above_limit(self, monkeypatch):
        monkeypatch.setenv("PERIMETER_APP_MERGED_TREE_LIMIT", "5")
        with pytest.raises(BudgetExceededError):
            list(all_merged_trees(6))

    def test_xx_code_classes_cover_xx_weight(self):
        n = 6
        weights = Counter()
        for code in iter_codes(n):
            if xx_code_class(code) is not None:
                weights[decode(code).degree_sequence()] += n - 2
        census = merged_census(n)
        for delta in degree_sequences(n):
            assert weights[delta] == census.weight(delta, PatternKind.XX)
