"""
Domains, predicates and the Hasse diagram of a disjunction class.

A predicate over a finite domain X is stored as its truth table, a
BitVector of width |X| whose bit a is the predicate's value at the a-th
point. Disjunction is bitwise OR, and "G implies G'" is bitwise <=.
"""
import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Set, Tuple

import networkx as nx

from mindepth.errors.handlers import DomainTooLarge, FormatError
from mindepth.models import BitVector

Point = Tuple[int, ...]


@dataclass(frozen=True)
class Domain:
    """A finite, ordered set of points; `label` names how it was built."""

    points: Tuple[Point, ...]
    label: str

    @classmethod
    def grid(cls, n: int, m: int, size_limit: int = 4096) -> "Domain":
        """[n]^m in row-major order, coordinates starting at 1."""
        if n < 1 or m < 1:
            raise FormatError(f"grid needs n, m >= 1, got {n}, {m}")
        if n ** m > size_limit:
            raise DomainTooLarge(f"grid [{n}]^{m}", n ** m, size_limit)
        points = tuple(itertools.product(range(1, n + 1), repeat=m))
        return cls(points, f"grid {n} {m}")

    @classmethod
    def anonymous(cls, size: int, size_limit: int = 4096) -> "Domain":
        """size unnamed points, written (1,), (2,), ..."""
        if size < 1:
            raise FormatError("a domain needs at least one point")
        if size > size_limit:
            raise DomainTooLarge("point domain", size, size_limit)
        return cls(tuple((a,) for a in range(1, size + 1)), f"points {size}")

    @property
    def size(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class Predicate:
    name: str
    table: BitVector
    domain: Domain = field(compare=False, repr=False)

    @classmethod
    def from_function(cls, name: str, domain: Domain,
                      fn: Callable[[Point], bool]) -> "Predicate":
        value = 0
        for a, point in enumerate(domain.points):
            if fn(point):
                value |= 1 << a
        return cls(name, BitVector(value, domain.size), domain)

    def __call__(self, a: int) -> int:
        return self.table.bit(a)


@dataclass(frozen=True)
class LatticeElement:
    """A disjunction G of predicates, with the generators that imply it."""

    function: BitVector
    generator_set: Tuple[str, ...]

    @property
    def label(self) -> str:
        return "∨".join(self.generator_set) if self.generator_set else "0"


@dataclass
class HasseDiagram:
    """
    The closure of a predicate family under OR, ordered by implication.

    elements are sorted by (number of true points, table value), so the
    constant-false element is index 0 and the top (OR of everything) is the
    last index. graph has an edge G -> G' exactly when G' is an immediate
    descendant of G, i.e. G' < G with nothing strictly between.
    """

    elements: Tuple[LatticeElement, ...]
    graph: nx.DiGraph
    domain: Optional[Domain] = None
    _index: Dict[int, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {el.function.value: i for i, el in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.elements) - 1

    def index_of(self, function: BitVector) -> Optional[int]:
        return self._index.get(function.value)

    def element(self, i: int) -> LatticeElement:
        return self.elements[i]

    def descendants(self, i: int) -> List[int]:
        """De(G): immediate descendants, by index."""
        return sorted(self.graph.successors(i))

    def ascendants(self, i: int) -> List[int]:
        """As(G): immediate ascendants, by index."""
        return sorted(self.graph.predecessors(i))

    def neighbours(self, i: int) -> List[int]:
        return sorted(set(self.descendants(i)) | set(self.ascendants(i)))

    def all_descendants(self, i: int) -> Set[int]:
        return nx.descendants(self.graph, i)

    def all_ascendants(self, i: int) -> Set[int]:
        return nx.ancestors(self.graph, i)

    def node_degree(self, i: int) -> int:
        return self.graph.in_degree(i) + self.graph.out_degree(i)

    @property
    def degree(self) -> int:
        """deg(H): the largest number of neighbours of a single element."""
        return max((self.node_degree(i) for i in range(len(self))), default=0)
