"""Tests for disjunction classes and their Hasse diagrams."""

import pytest

from mindepth.errors.handlers import DomainMismatch, DomainTooLarge, ExactLimitExceeded, FormatError
from mindepth.lattice.models import Domain, Predicate
from mindepth.lattice.utils import (closure, gcd, gen_ray, gen_ray_sum, hasse_build, hasse_to_dot,
                                    induced_matrix, lca, learn_disjunction, load_class,
                                    parse_predicate_spec, specifying_set_poly, td_table,
                                    witness_set_min)
from mindepth.measures.report import moshkov_bound
from mindepth.measures.utils import etd, is_specifying
from mindepth.models import BitVector
from mindepth.solvers.learners import FixedOracle, adversary_oracle


@pytest.fixture
def ray22():
    domain, family = gen_ray(2, 2)
    return hasse_build(family, domain)


def by_label(hasse, label):
    return next(el for el in hasse.elements if el.label == label)


class TestGenerators:
    """Test the ray and ray-sum families."""

    def test_ray22(self):
        """Test four predicates over four points, in row-major order."""
        domain, family = gen_ray(2, 2)
        assert domain.points == ((1, 1), (1, 2), (2, 1), (2, 2))
        assert [p.name for p in family] == ["f11", "f12", "f21", "f22"]
        assert str(family[1].table) == "0011"
        assert str(family[3].table) == "0101"

    def test_ray_chain(self):
        """Test that one axis gives a chain of n + 1 elements."""
        _, family = gen_ray(3, 1)
        assert len(closure(family)) == 4

    def test_ray_sum(self):
        """Test the eleven predicates over the 3x3 grid."""
        domain, family = gen_ray_sum()
        assert domain.size == 9
        assert [p.name for p in family] == ["f1", "f2", "f3", "g1", "g2", "g3",
                                            "h1", "h2", "h3", "h4", "h5"]
        h4 = family[9]
        assert [domain.points[a] for a in range(9) if h4(a)] == [(2, 3), (3, 2), (3, 3)]

    def test_domain_limit(self):
        """Test that oversized grids are refused."""
        with pytest.raises(DomainTooLarge):
            gen_ray(10, 4, size_limit=4096)


class TestClosure:
    """Test the OR-closure."""

    def test_ray22_has_five_elements(self):
        """Test the five distinct disjunctions of Ray_2^2."""
        _, family = gen_ray(2, 2)
        assert len(closure(family)) == 5

    def test_single_predicate(self):
        """Test that one predicate closes to {0, p}."""
        domain = Domain.anonymous(3)
        p = Predicate("p", BitVector.from_string("101"), domain)
        assert [str(f) for f in closure([p])] == ["000", "101"]

    def test_mixed_domains(self):
        """Test that predicates over different domains do not mix."""
        p = Predicate("p", BitVector.from_string("10"), Domain.anonymous(2))
        q = Predicate("q", BitVector.from_string("100"), Domain.anonymous(3))
        with pytest.raises(DomainMismatch):
            closure([p, q])


class TestHasseDiagram:
    """Test diagram structure and element operations."""

    def test_ray22_structure(self, ray22):
        """Test 0 -> {f12, f22} -> f12 v f22 -> top with degree 3."""
        assert len(ray22) == 5
        assert ray22.degree == 3
        middle = ray22.index_of(by_label(ray22, "f12∨f22").function)
        assert ray22.node_degree(middle) == 3
        assert ray22.ascendants(middle) == [ray22.top]
        assert sorted(ray22.elements[d].label for d in ray22.descendants(middle)) == ["f12", "f22"]
        assert ray22.descendants(ray22.bottom) == []

    def test_ray42_degree(self):
        """Test that Ray_4^2 has 17 elements and degree 4."""
        domain, family = gen_ray(4, 2)
        hasse = hasse_build(family, domain)
        assert len(hasse) == 17
        assert hasse.degree == 4

    def test_single_predicate_chain(self):
        """Test that one predicate gives a two-element chain."""
        domain = Domain.anonymous(2)
        hasse = hasse_build([Predicate("p", BitVector.from_string("11"), domain)], domain)
        assert len(hasse) == 2
        assert all(hasse.node_degree(i) == 1 for i in range(2))

    def test_lca_and_gcd(self, ray22):
        """Test that lca is the OR and gcd the largest common lower element."""
        f12, f22 = by_label(ray22, "f12"), by_label(ray22, "f22")
        assert lca(ray22, f12, f22).label == "f12∨f22"
        assert gcd(ray22, f12, f22).label == "0"
        middle = by_label(ray22, "f12∨f22")
        assert gcd(ray22, middle, f12) == f12

    def test_dot(self, ray22):
        """Test one DOT node per element."""
        dot = hasse_to_dot(ray22)
        assert dot.count("[label=") == 5
        assert "g0 [label=\"0\"]" in dot

    def test_induced_matrix(self, ray22):
        """Test that the induced matrix has one row per element."""
        matrix = induced_matrix(ray22)
        assert (matrix.n, matrix.m) == (5, 4)


class TestSpecifyingSets:
    """Test witness sets and the polynomial specifying sets."""

    def test_outside_top_needs_one_point(self, ray22):
        """Test a hypothesis that is 1 where every element is 0."""
        top = ray22.elements[ray22.top].function
        assert str(top) == "1111"
        _, family = gen_ray(2, 2)
        hasse = hasse_build(family[1:2] + family[3:4])
        h = BitVector.from_string("1000")
        assert specifying_set_poly(hasse, h) == (0,)

    @pytest.mark.parametrize("n", [2, 3])
    def test_every_hypothesis(self, n):
        """Test that every hypothesis gets a specifying set within the degree."""
        domain, family = gen_ray(n, 2)
        hasse = hasse_build(family, domain)
        matrix = induced_matrix(hasse)
        for value in range(1 << domain.size):
            h = BitVector(value, domain.size)
            for exact in (False, True):
                points = specifying_set_poly(hasse, h, exact)
                assert len(points) <= hasse.degree
                assert is_specifying(matrix, h, points)

    def test_witness_sets(self, ray22):
        """Test that witness sets separate an element from all others."""
        matrix = induced_matrix(ray22)
        for element in ray22.elements:
            points = witness_set_min(ray22, element)
            assert is_specifying(matrix, element.function, points)
        assert witness_set_min(ray22, ray22.elements[0]) == (3,)

    def test_witness_limit(self, ray22):
        """Test that the exact witness search respects its limit."""
        with pytest.raises(ExactLimitExceeded):
            witness_set_min(ray22, ray22.elements[0], x_limit=3)

    @pytest.mark.parametrize("build", [lambda: gen_ray(2, 2), lambda: gen_ray(3, 2),
                                       lambda: gen_ray_sum()])
    def test_etd_equals_table_maximum(self, build):
        """Test ETD = TD = max over G of |De(G)| + HS(As(G) and not G)."""
        domain, family = build()
        hasse = hasse_build(family, domain)
        best = max(row["total"] for row in td_table(hasse))
        teaching = max(len(witness_set_min(hasse, el)) for el in hasse.elements)
        assert etd(induced_matrix(hasse)) == teaching == best
        assert best <= hasse.degree


class TestLearning:
    """Test learning a hidden disjunction with point queries."""

    @pytest.mark.parametrize("build", [lambda: gen_ray(2, 2), lambda: gen_ray(4, 2),
                                       lambda: gen_ray_sum()])
    def test_every_element(self, build):
        """Test that every element is found within the degree bound."""
        domain, family = build()
        hasse = hasse_build(family, domain)
        matrix = induced_matrix(hasse)
        bound = moshkov_bound(hasse.degree, len(hasse))
        for i, element in enumerate(hasse.elements):
            found, transcript = learn_disjunction(hasse, FixedOracle(matrix, i))
            assert found == element
            assert transcript.count <= bound + 1e-9

    def test_adversary(self, ray22):
        """Test that the adversary game still ends at an element."""
        matrix = induced_matrix(ray22)
        found, transcript = learn_disjunction(ray22, adversary_oracle(matrix))
        assert found in ray22.elements
        assert transcript.count >= 1

    def test_trivial_class(self):
        """Test that a one-element class needs no query."""
        domain = Domain.anonymous(2)
        hasse = hasse_build([Predicate("z", BitVector.zeros(2), domain)], domain)
        found, transcript = learn_disjunction(hasse, FixedOracle(induced_matrix(hasse), 0))
        assert transcript.count == 0
        assert found.label == "z"


class TestPredicateSpecs:
    """Test the predicate spec format."""

    def test_explicit_tables(self):
        """Test named truth tables over anonymous points."""
        domain, family = parse_predicate_spec("domain points 3\n# two\np: 110\nq: 011\n")
        assert domain.size == 3
        assert [p.name for p in family] == ["p", "q"]

    def test_ray_directives(self):
        """Test ray and raysum lines on a grid."""
        domain, family = parse_predicate_spec("domain grid 2 2\nray 1 2\nray 2 2\nraysum 3\n")
        assert [p.name for p in family] == ["f12", "f22", "h3"]
        assert str(family[2].table) == "0001"

    @pytest.mark.parametrize("text", [
        "",
        "domain cube 2\n",
        "domain points 2\np: 101\n",
        "domain points 2\nray 1 1\n",
        "domain grid 2 2\nray 3 1\n",
        "domain points 2\np: 10\np: 01\n",
        "domain points 2\n1p: 10\n",
    ])
    def test_malformed(self, text):
        """Test rejected specs."""
        with pytest.raises(FormatError):
            parse_predicate_spec(text)

    def test_load_class_shortcuts(self):
        """Test the generator shortcuts."""
        assert len(load_class("ray 2 2")[1]) == 4
        assert len(load_class("raysum")[1]) == 11

    def test_load_class_missing_file(self, tmp_path):
        """Test a spec path that does not exist."""
        with pytest.raises(FormatError):
            load_class(str(tmp_path / "missing.pred"))
