"""
Core data model for instance sets and decision trees.

Defines:
- BitVector: an assignment in {0,1}^m packed into a Python int
- InstanceSet: a duplicate-free ordered set of rows with packed column masks
- Leaf / Node: the two shapes of a DecisionTree

and the elementary transformations every other package builds on
(parsing, xor shift, restriction, tree validation and export).

Column and row indices are 0-based in every Python API. The matrix text
format, DOT output and JSON documents use 1-based indices.
"""
from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from mindepth.errors.handlers import (ColumnIndexError, DuplicateRow, FormatError,
                                      WidthMismatch)


# ============================================================================
# Bit Helpers
# ============================================================================

def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(positions: Iterable[int]) -> int:
    """Pack a collection of positions into an int mask."""
    mask = 0
    for pos in positions:
        mask |= 1 << pos
    return mask


# ============================================================================
# BitVector
# ============================================================================

@dataclass(frozen=True)
class BitVector:
    """
    An assignment in {0,1}^width.

    Bit j lives at position j of value, so the string "100" has value 1.
    Two vectors of different width never compare equal.
    """

    value: int
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise FormatError("bit vector width must be at least 1")
        if self.value < 0 or self.value >> self.width:
            raise FormatError(f"value {self.value} does not fit in {self.width} bits")

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        if not text or any(ch not in "01" for ch in text):
            raise FormatError(f"not a 0/1 string: {text!r}")
        value = 0
        for j, ch in enumerate(text):
            if ch == "1":
                value |= 1 << j
        return cls(value, len(text))

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "BitVector":
        return cls.from_string("".join("1" if b else "0" for b in bits))

    @classmethod
    def zeros(cls, width: int) -> "BitVector":
        return cls(0, width)

    @classmethod
    def ones(cls, width: int) -> "BitVector":
        return cls((1 << width) - 1, width)

    def bit(self, j: int) -> int:
        if not 0 <= j < self.width:
            raise ColumnIndexError(f"column {j} outside [0, {self.width})")
        return (self.value >> j) & 1

    @property
    def bits(self) -> Tuple[int, ...]:
        return tuple((self.value >> j) & 1 for j in range(self.width))

    def popcount(self) -> int:
        return self.value.bit_count()

    def implies(self, other: "BitVector") -> bool:
        """True when every 1 of self is also a 1 of other (bitwise <=)."""
        self._check_width(other)
        return self.value & ~other.value == 0

    def _check_width(self, other: "BitVector"):
        if self.width != other.width:
            raise WidthMismatch(f"width {self.width} vs {other.width}")

    def __xor__(self, other: "BitVector") -> "BitVector":
        self._check_width(other)
        return BitVector(self.value ^ other.value, self.width)

    def __or__(self, other: "BitVector") -> "BitVector":
        self._check_width(other)
        return BitVector(self.value | other.value, self.width)

    def __and__(self, other: "BitVector") -> "BitVector":
        self._check_width(other)
        return BitVector(self.value & other.value, self.width)

    def __invert__(self) -> "BitVector":
        return BitVector(~self.value & ((1 << self.width) - 1), self.width)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __len__(self) -> int:
        return self.width

    def __str__(self) -> str:
        return "".join(str((self.value >> j) & 1) for j in range(self.width))


# ============================================================================
# InstanceSet
# ============================================================================

@dataclass(frozen=True)
class InstanceSet:
    """
    A non-empty, duplicate-free, ordered set of rows of equal width.

    columns[j] is a mask over row indices: bit r is set when row r has a 1
    in column j. Subsets of rows are passed around as such masks, which
    keeps column counts at one AND plus one popcount.
    """

    width: int
    rows: Tuple[BitVector, ...]
    columns: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rows = tuple(self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows:
            raise FormatError("an instance set needs at least one row")
        index = {}
        for r, row in enumerate(rows):
            if row.width != self.width:
                raise WidthMismatch(f"row {r + 1} has width {row.width}, expected {self.width}")
            if row.value in index:
                raise DuplicateRow(f"row {r + 1} ({row}) duplicates row {index[row.value] + 1}")
            index[row.value] = r
        columns = []
        for j in range(self.width):
            mask = 0
            for r, row in enumerate(rows):
                if (row.value >> j) & 1:
                    mask |= 1 << r
            columns.append(mask)
        object.__setattr__(self, "columns", tuple(columns))
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_strings(cls, rows: Iterable[str]) -> "InstanceSet":
        vectors = [BitVector.from_string(text) for text in rows]
        if not vectors:
            raise FormatError("an instance set needs at least one row")
        return cls(vectors[0].width, tuple(vectors))

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return self.width

    @property
    def full_mask(self) -> int:
        return (1 << len(self.rows)) - 1

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[BitVector]:
        return iter(self.rows)

    def __getitem__(self, r: int) -> BitVector:
        return self.rows[r]

    def __contains__(self, row: BitVector) -> bool:
        return row.width == self.width and row.value in self._index

    def index_of(self, row: BitVector) -> Optional[int]:
        if row.width != self.width:
            return None
        return self._index.get(row.value)

    def check_column(self, j: int):
        if not 0 <= j < self.width:
            raise ColumnIndexError(f"column {j} outside [0, {self.width})")

    def split(self, mask: int, j: int) -> Tuple[int, int]:
        """Split a row mask on column j into (rows with 0, rows with 1)."""
        ones = mask & self.columns[j]
        return mask & ~ones, ones

    def select(self, mask: int) -> "InstanceSet":
        """The sub-instance made of the rows in mask, order preserved."""
        return InstanceSet(self.width, tuple(self.rows[r] for r in iter_bits(mask)))

    def values(self) -> List[int]:
        return [row.value for row in self.rows]

    def __str__(self) -> str:
        return "{" + ",".join(str(row) for row in self.rows) + "}"


# ============================================================================
# Matrix Text Format
# ============================================================================

def parse_instance_set(text: str) -> InstanceSet:
    """
    Parse the matrix text format.

    Format:
        first line "n m", then n lines of exactly m characters from {0,1}.
        Lines starting with '#' are comments; blank lines are ignored.

    Raises:
        FormatError: bad header, wrong row length, bad character, n = 0
        DuplicateRow: the same row appears twice
    """
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line and not line.startswith("#")]
    if not lines:
        raise FormatError("empty matrix file")

    header = lines[0].split()
    if len(header) != 2 or not all(part.isdigit() for part in header):
        raise FormatError(f"header must be 'n m', got {lines[0]!r}")
    n, m = int(header[0]), int(header[1])
    if n == 0:
        raise FormatError("n must be at least 1")
    if m == 0:
        raise FormatError("m must be at least 1")

    body = lines[1:]
    if len(body) != n:
        raise FormatError(f"header announces {n} rows, found {len(body)}")

    rows = []
    for lineno, line in enumerate(body, start=1):
        if len(line) != m:
            raise FormatError(f"row {lineno} has length {len(line)}, expected {m}")
        rows.append(BitVector.from_string(line))
    return InstanceSet(m, tuple(rows))


def format_instance_set(instances: InstanceSet) -> str:
    """Write an instance set in the matrix text format."""
    lines = [f"{instances.n} {instances.m}"]
    lines.extend(str(row) for row in instances.rows)
    return "\n".join(lines) + "\n"


# ============================================================================
# Elementary Transformations
# ============================================================================

def xor_shift(instances: InstanceSet, h: BitVector) -> InstanceSet:
    """Return A + h: every row XOR h, order preserved."""
    if h.width != instances.width:
        raise WidthMismatch(f"shift width {h.width} vs set width {instances.width}")
    return InstanceSet(instances.width, tuple(row ^ h for row in instances.rows))


def restrict(instances: InstanceSet, j: int, xi: int) -> Optional[InstanceSet]:
    """
    Return A_{j,xi}, the rows whose bit j equals xi, order preserved.

    Returns None when no row matches (an empty set is never an InstanceSet).
    """
    instances.check_column(j)
    zeros, ones = instances.split(instances.full_mask, j)
    mask = ones if xi else zeros
    if not mask:
        return None
    return instances.select(mask)


# ============================================================================
# Decision Trees
# ============================================================================

@dataclass(frozen=True)
class Leaf:
    label: BitVector


@dataclass(frozen=True)
class Node:
    index: int
    child0: "DecisionTree"
    child1: "DecisionTree"


DecisionTree = Union[Leaf, Node]


def tree_depth(tree: DecisionTree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(tree_depth(tree.child0), tree_depth(tree.child1))


def tree_internal_nodes(tree: DecisionTree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + tree_internal_nodes(tree.child0) + tree_internal_nodes(tree.child1)


def validate_tree(tree: DecisionTree, instances: InstanceSet) -> bool:
    """
    Check that tree is a decision tree for instances.

    Every root-to-leaf path must either be satisfied by no row, or by
    exactly one row which is then the leaf's label. This also means each
    row reaches the leaf labelled with itself by following its own bits.
    """

    def walk(node: DecisionTree, mask: int) -> bool:
        if isinstance(node, Leaf):
            if node.label.width != instances.width:
                return False
            if not mask:
                return True
            if mask & (mask - 1):
                return False
            return instances.rows[mask.bit_length() - 1] == node.label
        if not 0 <= node.index < instances.width:
            return False
        zeros, ones = instances.split(mask, node.index)
        return walk(node.child0, zeros) and walk(node.child1, ones)

    return walk(tree, instances.full_mask)


def shift_tree(tree: DecisionTree, h: BitVector) -> DecisionTree:
    """
    Turn a decision tree for A into one for A + h of the same depth.

    Children are swapped at every node whose column has h_j = 1 and every
    leaf label is XORed with h.
    """
    if isinstance(tree, Leaf):
        return Leaf(tree.label ^ h)
    child0 = shift_tree(tree.child0, h)
    child1 = shift_tree(tree.child1, h)
    if h.bit(tree.index):
        child0, child1 = child1, child0
    return Node(tree.index, child0, child1)


def tree_to_dot(tree: DecisionTree, name: str = "tree") -> str:
    """
    Render a tree in graphviz DOT.

    Internal nodes read "x<j>" (1-based column), edges carry 0/1 and leaves
    show the row's bit string. Node ids follow preorder so equal trees give
    byte-identical output.
    """
    lines = [f"digraph {name} {{"]
    counter = [0]

    def emit(node: DecisionTree) -> str:
        node_id = f"n{counter[0]}"
        counter[0] += 1
        if isinstance(node, Leaf):
            lines.append(f'  {node_id} [label="{node.label}", shape=box];')
            return node_id
        lines.append(f'  {node_id} [label="x{node.index + 1}"];')
        left = emit(node.child0)
        lines.append(f'  {node_id} -> {left} [label="0"];')
        right = emit(node.child1)
        lines.append(f'  {node_id} -> {right} [label="1"];')
        return node_id

    emit(tree)
    lines.append("}")
    return "\n".join(lines) + "\n"
