"""Tests for the verification corpus, suites and command."""

import json

import pytest

from mindepth.config import RunConfig
from mindepth.models import BitVector, InstanceSet
from mindepth.verify.corpus import canonical_form, exhaustive_corpus, random_corpus
from mindepth.verify.suites import SUITES, SuiteResult, run_suite


class TestCorpus:
    """Test corpus generation."""

    def test_random_corpus_is_seeded(self):
        """Test that one seed gives one corpus."""
        first = random_corpus(7, 30, 6, 4)
        assert first == random_corpus(7, 30, 6, 4)
        assert first != random_corpus(8, 30, 6, 4)

    def test_random_corpus_respects_sizes(self):
        """Test the n and m limits."""
        for instances in random_corpus(3, 50, 5, 3):
            assert 1 <= instances.m <= 3
            assert 1 <= instances.n <= 5

    def test_canonical_form_merges_equivalent_sets(self):
        """Test that shifts and column swaps land on one representative."""
        assert canonical_form((0, 1), 2) == canonical_form((0, 2), 2) == (0, 1)
        assert canonical_form((1, 2), 2) == canonical_form((0, 3), 2)
        assert canonical_form((0, 1), 2) != canonical_form((0, 3), 2)

    def test_exhaustive_small(self):
        """Test the classes up to n = 4, m = 2."""
        corpus = list(exhaustive_corpus(4, 2))
        assert len(corpus) == 7
        assert all(BitVector.zeros(instances.m) in instances for instances in corpus)


class TestSuites:
    """Test the suites directly."""

    @pytest.fixture
    def run(self):
        return RunConfig(cases=10, max_n=5, max_m=3)

    @pytest.mark.parametrize("name", sorted(set(SUITES) - {"lattice"}))
    def test_suite_passes(self, name, run):
        """Test each instance-set suite on a small random corpus."""
        corpus = random_corpus(run.seed, run.cases, run.max_n, run.max_m)
        result = run_suite(name, corpus, run)
        assert result.passed, result.failures
        assert result.cases == len(corpus)
        assert result.checks > 0

    def test_suite_on_full_cube(self, run):
        """Test the adversary suite on B_2."""
        corpus = [InstanceSet.from_strings(["00", "01", "10", "11"])]
        result = run_suite("adversary", corpus, run)
        assert result.passed and result.checks == 4

    def test_result_document(self):
        """Test how failures are recorded and reported."""
        result = SuiteResult("demo")
        result.expect(True, "fine")
        result.expect(False, "broken")
        doc = result.to_dict()
        assert (doc["checks"], doc["failed"], doc["pass"]) == (2, 1, False)
        assert doc["failures"] == ["broken"]


class TestVerifyCommand:
    """Test the verify command."""

    def test_default_run_passes(self, runner):
        """Test that every suite passes under the testing config."""
        result = runner.invoke(args=["verify"])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert doc["pass"] is True
        assert sorted(s["name"] for s in doc["suites"]) == sorted(SUITES)

    def test_same_seed_same_output(self, runner):
        """Test byte-identical reruns."""
        args = ["verify", "--seed", "7", "--cases", "8", "--suite", "sandwich", "--suite", "shift"]
        assert runner.invoke(args=args).output == runner.invoke(args=args).output

    def test_single_suite(self, runner):
        """Test that --suite runs only the named suite."""
        result = runner.invoke(args=["verify", "--suite", "adversary", "--cases", "5"])
        doc = json.loads(result.output)
        assert [s["name"] for s in doc["suites"]] == ["adversary"]
        assert doc["instances"] == 5

    def test_suite_alias(self, runner):
        """Test that --suite lemma4 runs only the adversary suite."""
        result = runner.invoke(args=["verify", "--suite", "lemma4", "--suite", "adversary",
                                     "--cases", "5"])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert [s["name"] for s in doc["suites"]] == ["adversary"]

    def test_exhaustive(self, runner):
        """Test the exhaustive corpus."""
        result = runner.invoke(args=["verify", "--exhaustive", "--max-n", "4", "--max-m", "2",
                                     "--suite", "sandwich", "--suite", "sss"])
        doc = json.loads(result.output)
        assert doc["corpus"] == "exhaustive"
        assert doc["instances"] == 7
        assert doc["pass"] is True

    def test_text_format(self, runner):
        """Test the plain-text summary."""
        result = runner.invoke(args=["verify", "--suite", "greedy", "--cases", "3",
                                     "--format", "text"])
        assert result.exit_code == 0
        assert result.output.splitlines()[-1] == "PASS"

    def test_unknown_suite(self, runner):
        """Test that unknown suite names are a usage error."""
        result = runner.invoke(args=["verify", "--suite", "everything"])
        assert result.exit_code == 2
