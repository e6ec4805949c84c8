"""Tests for bit vectors, instance sets and decision trees."""

import pytest
from hypothesis import given

from mindepth.errors.handlers import (ColumnIndexError, DuplicateRow, FormatError,
                                      WidthMismatch)
from mindepth.models import (BitVector, InstanceSet, Leaf, Node, format_instance_set,
                             parse_instance_set, restrict, shift_tree, tree_depth,
                             tree_internal_nodes, tree_to_dot, validate_tree, xor_shift)
from mindepth.solvers.trees import opt_exact
from tests.strategies import instance_sets, shifted


def rows(instances):
    return [str(row) for row in instances]


class TestBitVector:
    """Test the packed bit vector."""

    def test_string_round_trip_keeps_column_order(self):
        """Test that column 0 is the first character."""
        v = BitVector.from_string("100")
        assert v.value == 1
        assert v.bit(0) == 1 and v.bit(2) == 0
        assert str(v) == "100"

    def test_operators(self):
        """Test xor, or, and, invert and implication."""
        a, b = BitVector.from_string("110"), BitVector.from_string("011")
        assert str(a ^ b) == "101"
        assert str(a | b) == "111"
        assert str(a & b) == "010"
        assert str(~a) == "001"
        assert (a & b).implies(a)
        assert not a.implies(b)

    def test_width_mismatch(self):
        """Test that vectors of different width do not combine."""
        with pytest.raises(WidthMismatch):
            BitVector.from_string("10") ^ BitVector.from_string("100")

    def test_bit_out_of_range(self):
        """Test that reading past the width raises an IndexError."""
        with pytest.raises(IndexError):
            BitVector.from_string("10").bit(2)

    def test_bad_characters(self):
        """Test that only 0 and 1 are accepted."""
        with pytest.raises(FormatError):
            BitVector.from_string("102")


class TestParsing:
    """Test the matrix text format."""

    def test_parse_three_rows(self):
        """Test a plain three-row file."""
        instances = parse_instance_set("3 2\n00\n01\n10")
        assert instances.m == 2
        assert rows(instances) == ["00", "01", "10"]

    def test_parse_minimal(self):
        """Test the one-row, one-column file."""
        instances = parse_instance_set("1 1\n0\n")
        assert instances.n == 1 and rows(instances) == ["0"]

    def test_comments_and_blank_lines(self):
        """Test that comments and blank lines are skipped."""
        instances = parse_instance_set("# full B_2\n\n4 2\n00\n01\n# middle\n10\n11\n")
        assert instances.n == 4

    def test_duplicate_row(self):
        """Test that a repeated row is rejected."""
        with pytest.raises(DuplicateRow):
            parse_instance_set("2 2\n01\n01")

    @pytest.mark.parametrize("text", [
        "",
        "0 2\n",
        "2 2\n00\n",
        "2 2\n00\n011\n",
        "1 2\n0a\n",
        "x 2\n00\n",
    ])
    def test_malformed(self, text):
        """Test malformed headers and rows."""
        with pytest.raises(FormatError):
            parse_instance_set(text)

    def test_format_parses_back(self):
        """Test that written files read back to the same set."""
        instances = InstanceSet.from_strings(["101", "010", "111"])
        assert parse_instance_set(format_instance_set(instances)) == instances


class TestTransformations:
    """Test xor shift and restriction."""

    def test_identity_shift(self):
        """Test that shifting by zero changes nothing."""
        instances = InstanceSet.from_strings(["00", "01", "10"])
        assert xor_shift(instances, BitVector.zeros(2)) == instances

    def test_complement_shift(self):
        """Test shifting by all ones."""
        instances = InstanceSet.from_strings(["00", "01", "10"])
        assert rows(xor_shift(instances, BitVector.ones(2))) == ["11", "10", "01"]

    def test_shift_width_mismatch(self):
        """Test that the shift must have the set's width."""
        with pytest.raises(WidthMismatch):
            xor_shift(InstanceSet.from_strings(["00"]), BitVector.zeros(3))

    def test_restrict(self):
        """Test restriction on the first column."""
        instances = InstanceSet.from_strings(["00", "01", "10"])
        assert rows(restrict(instances, 0, 0)) == ["00", "01"]
        assert rows(restrict(instances, 0, 1)) == ["10"]

    def test_restrict_empty(self):
        """Test that an empty restriction is None."""
        assert restrict(InstanceSet.from_strings(["11"]), 1, 0) is None

    def test_restrict_bad_column(self):
        """Test restriction past the last column."""
        with pytest.raises(ColumnIndexError):
            restrict(InstanceSet.from_strings(["11"]), 2, 0)

    @given(shifted())
    def test_shift_keeps_distances(self, case):
        """Test that every pairwise Hamming distance survives A -> A + h."""
        instances, h = case
        moved = xor_shift(instances, h)

        def distances(rows):
            return [(a.value ^ b.value).bit_count() for a in rows for b in rows]

        assert distances(moved.rows) == distances(instances.rows)

    @given(instance_sets())
    def test_restrict_partitions_rows(self, instances):
        """Test that A_{j,0} and A_{j,1} split A with no row in both, for every j."""
        for j in range(instances.m):
            parts = [restrict(instances, j, xi) for xi in (0, 1)]
            zeros, ones = [set(part.rows) if part is not None else set() for part in parts]
            assert not zeros & ones
            assert zeros | ones == set(instances.rows)
            assert all(row.bit(j) == 0 for row in zeros)
            assert all(row.bit(j) == 1 for row in ones)

    def test_mismatched_rows(self):
        """Test that rows of different width cannot share a set."""
        with pytest.raises(WidthMismatch):
            InstanceSet(2, (BitVector.from_string("00"), BitVector.from_string("000")))


class TestTrees:
    """Test tree validation, measurement and export."""

    def test_one_query_separates(self):
        """Test a single split on the first column."""
        tree = Node(0, Leaf(BitVector.from_string("00")), Leaf(BitVector.from_string("10")))
        assert validate_tree(tree, InstanceSet.from_strings(["00", "10"]))

    def test_leaf_cannot_hold_two_rows(self):
        """Test that a bare leaf does not separate two rows."""
        tree = Leaf(BitVector.from_string("00"))
        assert not validate_tree(tree, InstanceSet.from_strings(["00", "01"]))

    def test_wrong_label(self):
        """Test that a leaf must carry the row that reaches it."""
        tree = Node(0, Leaf(BitVector.from_string("01")), Leaf(BitVector.from_string("10")))
        assert not validate_tree(tree, InstanceSet.from_strings(["00", "10"]))

    def test_depth_and_size(self):
        """Test depth and internal node count."""
        leaf = Leaf(BitVector.from_string("0"))
        assert tree_depth(leaf) == 0
        tree = Node(0, leaf, Leaf(BitVector.from_string("1")))
        assert tree_depth(tree) == 1
        assert tree_internal_nodes(tree) == 1

    def test_dot_export(self):
        """Test that DOT output names columns 1-based and boxes the leaves."""
        tree = Node(0, Leaf(BitVector.from_string("00")), Leaf(BitVector.from_string("10")))
        dot = tree_to_dot(tree)
        assert dot.startswith("digraph tree {")
        assert 'label="x1"' in dot
        assert dot.count("shape=box") == 2
        assert '[label="0"]' in dot and '[label="1"]' in dot

    @given(shifted())
    def test_shifted_tree_is_valid_for_shifted_set(self, case):
        """Test that swapping children under h gives a tree for A + h of equal depth."""
        instances, h = case
        depth, tree = opt_exact(instances)
        moved = shift_tree(tree, h)
        assert validate_tree(moved, xor_shift(instances, h))
        assert tree_depth(moved) == depth
