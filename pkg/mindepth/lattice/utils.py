"""
Disjunction classes: OR-closure, Hasse diagrams and specifying sets.

A class is built from a family F of predicates over a finite domain X.
Its elements are all ORs of subsets of F (the empty OR is constant
false). Learning a hidden element with point queries is the exact
learning game on the induced matrix, whose rows are element truth tables
and whose columns are the points of X.
"""
import logging
import re
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from mindepth.errors.handlers import (DomainMismatch, ExactLimitExceeded, FormatError,
                                      MultipleMaximal)
from mindepth.lattice.models import Domain, HasseDiagram, LatticeElement, Predicate
from mindepth.measures.utils import greedy_hitting_masks, min_hitting_masks
from mindepth.models import BitVector, InstanceSet, iter_bits
from mindepth.solvers.learners import AnswerOracle, QueryTranscript, moshkov_learn


logger = logging.getLogger(__name__)


# ============================================================================
# Closure and Hasse Diagram
# ============================================================================

def _common_width(family: Sequence[Predicate], width: Optional[int]) -> int:
    widths = {p.table.width for p in family}
    domains = {p.domain for p in family}
    if len(widths) > 1 or len(domains) > 1:
        raise DomainMismatch("predicates are defined over different domains")
    if widths:
        return widths.pop()
    if width is None:
        raise FormatError("an empty family needs an explicit domain width")
    return width


def closure(family: Sequence[Predicate], width: Optional[int] = None) -> List[BitVector]:
    """
    F_or: every OR of a subset of family, constant false included.

    Elements are returned sorted by (number of true points, table value).
    New elements are only ever OR-ed with a generator, which reaches every
    subset OR one generator at a time.

    Raises:
        DomainMismatch: predicates over different domains
    """
    width = _common_width(family, width)
    generators = sorted({p.table.value for p in family})
    seen = {0}
    frontier = [0]
    while frontier:
        fresh = []
        for value in frontier:
            for g in generators:
                joined = value | g
                if joined not in seen:
                    seen.add(joined)
                    fresh.append(joined)
        frontier = fresh
    ordered = sorted(seen, key=lambda v: (v.bit_count(), v))
    return [BitVector(v, width) for v in ordered]


def hasse_build(family: Sequence[Predicate], domain: Optional[Domain] = None,
                width: Optional[int] = None) -> HasseDiagram:
    """
    Build the Hasse diagram of the OR-closure of family.

    The strict implication order is laid out as a DAG (larger -> smaller)
    and thinned with networkx's transitive reduction, leaving only
    immediate-descendant edges.
    """
    if domain is None and family:
        domain = family[0].domain
    if width is None and domain is not None:
        width = domain.size
    functions = closure(family, width)
    elements = tuple(
        LatticeElement(f, tuple(p.name for p in family if p.table.implies(f)))
        for f in functions
    )

    order = nx.DiGraph()
    order.add_nodes_from(range(len(functions)))
    for i, upper in enumerate(functions):
        for j in range(i):
            lower = functions[j]
            if lower.implies(upper):
                order.add_edge(i, j)
    hasse = HasseDiagram(elements, nx.transitive_reduction(order), domain)

    if __debug__:
        _check_descendant_joins(hasse)
    logger.debug("hasse: %d elements, %d edges, degree %d",
                 len(hasse), hasse.graph.number_of_edges(), hasse.degree)
    return hasse


def _check_descendant_joins(hasse: HasseDiagram):
    """Two distinct immediate descendants of G always OR to G."""
    for i in range(len(hasse)):
        below = hasse.descendants(i)
        target = hasse.elements[i].function
        for a, da in enumerate(below):
            for db in below[a + 1:]:
                joined = hasse.elements[da].function | hasse.elements[db].function
                assert joined == target, f"descendants of element {i} do not join to it"


def _index(hasse: HasseDiagram, element: LatticeElement) -> int:
    i = hasse.index_of(element.function)
    if i is None:
        raise FormatError(f"element {element.label} is not in the diagram")
    return i


def lca(hasse: HasseDiagram, g1: LatticeElement, g2: LatticeElement) -> LatticeElement:
    """Least common ascendant: G1 or G2, found in the diagram."""
    return hasse.elements[_index(hasse, LatticeElement(g1.function | g2.function, ()))]


def gcd(hasse: HasseDiagram, g1: LatticeElement, g2: LatticeElement) -> LatticeElement:
    """
    Greatest common descendant: the unique maximal element below both.

    Raises:
        MultipleMaximal: the common lower bounds have several maximal elements
    """
    i, j = _index(hasse, g1), _index(hasse, g2)
    common = (hasse.all_descendants(i) | {i}) & (hasse.all_descendants(j) | {j})
    maximal = [c for c in common if not (hasse.all_ascendants(c) & common)]
    if len(maximal) != 1:
        raise MultipleMaximal(f"{len(maximal)} maximal common descendants")
    return hasse.elements[maximal[0]]


def induced_matrix(hasse: HasseDiagram) -> InstanceSet:
    """Rows are element truth tables in diagram order; columns are points."""
    width = hasse.elements[0].function.width
    return InstanceSet(width, tuple(el.function for el in hasse.elements))


# ============================================================================
# Witness and Specifying Sets
# ============================================================================

def witness_set_min(hasse: HasseDiagram, element: LatticeElement,
                    x_limit: int = 64) -> Tuple[int, ...]:
    """
    A minimum set of points on which no other element agrees with G.

    This is a minimum hitting set of (induced matrix) + G; its size is the
    teaching dimension of G in the class.

    Raises:
        ExactLimitExceeded: |X| over x_limit
    """
    width = element.function.width
    if width > x_limit:
        raise ExactLimitExceeded("witness set search (|X|)", width, x_limit)
    g = element.function.value
    return min_hitting_masks(el.function.value ^ g for el in hasse.elements)


def _ascendant_rows(hasse: HasseDiagram, i: int) -> List[int]:
    g = hasse.elements[i].function.value
    return [hasse.elements[a].function.value & ~g for a in hasse.ascendants(i)]


def specifying_set_poly(hasse: HasseDiagram, h: BitVector,
                        exact_hs: bool = False) -> Tuple[int, ...]:
    """
    A specifying set for any h with respect to the class, of size <= deg(H).

    If h does not imply the top element, one point where h is 1 and the top
    is 0 already rules out every element. Otherwise walk down from the top
    to a minimal G with h => G (first qualifying descendant at each step).
    Then add, for every immediate descendant G', one point where h is 1 and
    G' is 0, plus a hitting set of the rows As(G) AND NOT G. The hitting set
    is greedy unless exact_hs is set.
    """
    top = hasse.elements[hasse.top].function
    if not h.implies(top):
        return (next(iter_bits(h.value & ~top.value)),)

    i = hasse.top
    while True:
        for d in hasse.descendants(i):
            if h.implies(hasse.elements[d].function):
                i = d
                break
        else:
            break

    points = set()
    for d in hasse.descendants(i):
        points.add(next(iter_bits(h.value & ~hasse.elements[d].function.value)))
    rows = _ascendant_rows(hasse, i)
    points.update(min_hitting_masks(rows) if exact_hs else greedy_hitting_masks(rows))
    return tuple(sorted(points))


def td_table(hasse: HasseDiagram, exact_hs: bool = True) -> List[Dict[str, object]]:
    """
    Per element G: |De(G)|, HS(As(G) AND NOT G) and their sum.

    The largest sum over G equals the extended teaching dimension of the class.
    """
    table = []
    for i, el in enumerate(hasse.elements):
        rows = _ascendant_rows(hasse, i)
        hs = len(min_hitting_masks(rows) if exact_hs else greedy_hitting_masks(rows))
        de = len(hasse.descendants(i))
        table.append({"index": i + 1, "element": el.label, "de": de, "hs": hs,
                      "total": de + hs, "degree": hasse.node_degree(i)})
    return table


def learn_disjunction(hasse: HasseDiagram, oracle: AnswerOracle,
                      exact_hs: bool = False) -> Tuple[LatticeElement, QueryTranscript]:
    """
    Identify a hidden element with point queries.

    Runs the majority/specifying-set learner on the induced matrix with
    specifying_set_poly as the set oracle and deg(H) as the size bound.
    """
    matrix = induced_matrix(hasse)
    transcript = moshkov_learn(
        matrix, oracle,
        spec_oracle=lambda live, h: specifying_set_poly(hasse, h, exact_hs),
        e_bound=hasse.degree,
        learner="disjunction",
    )
    return hasse.elements[matrix.index_of(transcript.result)], transcript


# ============================================================================
# Generators
# ============================================================================

def _ray_name(j: int, i: int) -> str:
    return f"f{j}{i}" if j < 10 and i < 10 else f"f{j}_{i}"


def gen_ray(n: int, m: int, size_limit: int = 4096) -> Tuple[Domain, List[Predicate]]:
    """
    Ray predicates over [n]^m: f_{j,i}(x) = [x_j >= i] for 1 <= j <= m, 1 <= i <= n.

    Raises:
        DomainTooLarge: n^m over size_limit
    """
    domain = Domain.grid(n, m, size_limit)
    family = [
        Predicate.from_function(_ray_name(j, i), domain,
                                lambda x, j=j, i=i: x[j - 1] >= i)
        for j in range(1, m + 1)
        for i in range(1, n + 1)
    ]
    return domain, family


def ray_sum_family(domain: Domain, thresholds: Iterable[int]) -> List[Predicate]:
    """Sum predicates h_i(x) = [x_1 + ... + x_m >= i + 1]."""
    return [Predicate.from_function(f"h{i}", domain, lambda x, i=i: sum(x) >= i + 1)
            for i in thresholds]


def gen_ray_sum(n: int = 3, size_limit: int = 4096) -> Tuple[Domain, List[Predicate]]:
    """
    Rays on each axis of [n]^2 plus the sum predicates.

    The default is the 9-point domain with f1..f3 = [x1 >= i],
    g1..g3 = [x2 >= i] and h1..h5 = [x1 + x2 >= i + 1].
    """
    domain = Domain.grid(n, 2, size_limit)
    family = [Predicate.from_function(f"f{i}", domain, lambda x, i=i: x[0] >= i)
              for i in range(1, n + 1)]
    family += [Predicate.from_function(f"g{i}", domain, lambda x, i=i: x[1] >= i)
               for i in range(1, n + 1)]
    family += ray_sum_family(domain, range(1, 2 * n))
    return domain, family


# ============================================================================
# Predicate Specs
# ============================================================================

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def parse_predicate_spec(text: str, size_limit: int = 4096) -> Tuple[Domain, List[Predicate]]:
    """
    Parse a predicate family.

    Format:
        domain grid <n> <m>      or      domain points <size>
        <name>: <|X| bits>       explicit truth table
        ray <j> <i>              [x_j >= i] (grid domains only)
        raysum <i>               [x_1 + ... + x_m >= i + 1] (grid domains only)

    '#' starts a comment line; blank lines are ignored.

    Raises:
        FormatError: bad header, directive, name or table
        DomainTooLarge: the domain has more than size_limit points
    """
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line and not line.startswith("#")]
    if not lines:
        raise FormatError("empty predicate spec")

    header = lines[0].split()
    if len(header) == 4 and header[:2] == ["domain", "grid"] and all(p.isdigit() for p in header[2:]):
        grid = (int(header[2]), int(header[3]))
        domain = Domain.grid(*grid, size_limit=size_limit)
    elif len(header) == 3 and header[:2] == ["domain", "points"] and header[2].isdigit():
        grid = None
        domain = Domain.anonymous(int(header[2]), size_limit)
    else:
        raise FormatError(f"expected 'domain grid n m' or 'domain points k', got {lines[0]!r}")

    family: List[Predicate] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if ":" in line:
            name, bits = (part.strip() for part in line.split(":", 1))
            if not _NAME.match(name):
                raise FormatError(f"line {lineno}: bad predicate name {name!r}")
            table = BitVector.from_string(bits)
            if table.width != domain.size:
                raise FormatError(f"line {lineno}: table has {table.width} bits, domain has {domain.size}")
            family.append(Predicate(name, table, domain))
            continue

        parts = line.split()
        if grid is None:
            raise FormatError(f"line {lineno}: {parts[0]!r} needs a grid domain")
        if parts[0] == "ray" and len(parts) == 3 and all(p.isdigit() for p in parts[1:]):
            j, i = int(parts[1]), int(parts[2])
            if not (1 <= j <= grid[1] and 1 <= i <= grid[0]):
                raise FormatError(f"line {lineno}: ray {j} {i} outside the grid")
            family.append(Predicate.from_function(_ray_name(j, i), domain,
                                                  lambda x, j=j, i=i: x[j - 1] >= i))
        elif parts[0] == "raysum" and len(parts) == 2 and parts[1].isdigit():
            family.extend(ray_sum_family(domain, [int(parts[1])]))
        else:
            raise FormatError(f"line {lineno}: unknown directive {line!r}")

    names = [p.name for p in family]
    if len(names) != len(set(names)):
        raise FormatError("predicate names must be unique")
    return domain, family


def load_class(spec: str, size_limit: int = 4096) -> Tuple[Domain, List[Predicate]]:
    """Resolve 'ray n m', 'raysum [n]' or a path to a predicate spec file."""
    parts = spec.split()
    if parts and parts[0] == "ray":
        if len(parts) != 3 or not all(p.isdigit() for p in parts[1:]):
            raise FormatError(f"expected 'ray n m', got {spec!r}")
        return gen_ray(int(parts[1]), int(parts[2]), size_limit)
    if parts and parts[0] == "raysum":
        if len(parts) > 2 or (len(parts) == 2 and not parts[1].isdigit()):
            raise FormatError(f"expected 'raysum [n]', got {spec!r}")
        return gen_ray_sum(int(parts[1]) if len(parts) == 2 else 3, size_limit)
    try:
        with open(spec, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise FormatError(f"cannot read predicate spec {spec!r}: {exc}") from exc
    return parse_predicate_spec(text, size_limit)


# ============================================================================
# Export
# ============================================================================

def hasse_to_dot(hasse: HasseDiagram, name: str = "hasse") -> str:
    """DOT rendering: one node per element, edges to immediate descendants."""
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    for i, el in enumerate(hasse.elements):
        lines.append(f'  g{i} [label="{el.label}"];')
    for i in range(len(hasse)):
        for d in hasse.descendants(i):
            lines.append(f"  g{i} -> g{d};")
    lines.append("}")
    return "\n".join(lines) + "\n"
