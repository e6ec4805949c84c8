"""
Exact learning games: a learner asks for bits of a hidden row, an oracle
answers, and the learner must name the row.

Learners:
- tree_strategy: walk a decision tree (greedy or exact)
- moshkov_learn: majority vote plus specifying sets, phase by phase
- epsilon_learn: balanced columns first, specifying sets otherwise

Oracles:
- FixedOracle: answers from one row of A
- AdversaryOracle: answers by the majority of a dense subset, so that any
  learner needs many queries while the answers stay realizable
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from mindepth.errors.handlers import (ConfigError, ExactLimitExceeded, InconsistentOracle,
                                      InvalidSpecifyingSet, SpecSetTooLarge, VerificationFailed)
from mindepth.measures.report import default_epsilon
from mindepth.measures.utils import (den_exact, den_lower, etd, maj, specifying_set_greedy,
                                     specifying_set_min)
from mindepth.models import BitVector, DecisionTree, InstanceSet, Leaf, iter_bits, mask_of
from mindepth.solvers.trees import greedy_tree, opt_exact


logger = logging.getLogger(__name__)

SpecOracle = Callable[[InstanceSet, BitVector], Sequence[int]]

LEARNERS = ("greedy", "exact-tree", "moshkov", "epsilon")


# ============================================================================
# Transcripts
# ============================================================================

@dataclass
class Phase:
    """
    One round of a learner.

    kind is "phase" for a majority/specifying-set round, "balanced" or
    "specifying" for the epsilon-split learner's two step types.
    """

    kind: str
    size_before: int
    queries: int
    size_after: int

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "size_before": self.size_before,
                "queries": self.queries, "size_after": self.size_after}


@dataclass
class QueryTranscript:
    learner: str
    oracle: str
    queries: List[Tuple[int, int]] = field(default_factory=list)
    result: Optional[BitVector] = None
    phases: List[Phase] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.queries)

    def asked(self) -> Dict[int, int]:
        return dict(self.queries)

    def ask(self, oracle: "AnswerOracle", j: int) -> int:
        """Query column j once; a second query of the same column is a bug."""
        assert all(q != j for q, _ in self.queries), f"column {j} queried twice"
        answer = oracle.answer(j)
        self.queries.append((j, answer))
        return answer

    def consistent_with(self, row: BitVector) -> bool:
        return all(row.bit(j) == a for j, a in self.queries)

    def to_dict(self, with_phases: bool = False) -> Dict[str, Any]:
        doc = {
            "learner": self.learner,
            "oracle": self.oracle,
            "queries": [{"index": j + 1, "answer": a} for j, a in self.queries],
            "result": str(self.result) if self.result is not None else None,
            "count": self.count,
        }
        if with_phases:
            doc["phases"] = [phase.to_dict() for phase in self.phases]
        return doc


# ============================================================================
# Oracles
# ============================================================================

class AnswerOracle(ABC):
    """Answers column queries about a hidden row."""

    name = "oracle"

    @abstractmethod
    def answer(self, j: int) -> int:
        ...

    @abstractmethod
    def finalize(self) -> BitVector:
        """The row the oracle commits to once the game is over."""


class FixedOracle(AnswerOracle):
    def __init__(self, instances: InstanceSet, row: int):
        if not 0 <= row < instances.n:
            raise ConfigError(f"hidden row {row + 1} outside 1..{instances.n}")
        self.instances = instances
        self.row = instances.rows[row]
        self.name = f"hidden={row + 1}"

    def answer(self, j: int) -> int:
        return self.row.bit(j)

    def finalize(self) -> BitVector:
        return self.row


class AdversaryOracle(AnswerOracle):
    """
    Answers MAJ(B)_j for a fixed subset B of A.

    If that answer would leave no row of B consistent, the opposite answer
    is given instead, so some row of B always survives. Each answer removes
    at most MAMI(B) rows of B, which forces ceil((|B| - 1) / MAMI(B)) queries.
    """

    name = "adversary"

    def __init__(self, instances: InstanceSet, witness: Sequence[int]):
        self.instances = instances
        self.survivors = mask_of(witness) or instances.full_mask
        self.majority = maj(instances.select(self.survivors))

    def answer(self, j: int) -> int:
        self.instances.check_column(j)
        zeros, ones = self.instances.split(self.survivors, j)
        bit = self.majority.bit(j)
        keep = ones if bit else zeros
        if not keep:
            bit, keep = 1 - bit, (zeros if bit else ones)
        self.survivors = keep
        return bit

    def finalize(self) -> BitVector:
        return self.instances.rows[next(iter_bits(self.survivors))]


def adversary_oracle(instances: InstanceSet, witness: Optional[Sequence[int]] = None,
                     n_limit: int = 20, effort: int = 8, seed: int = 0) -> AdversaryOracle:
    """Adversary over witness, defaulting to a DEN witness of A."""
    if witness is None:
        try:
            _, witness = den_exact(instances, n_limit)
        except ExactLimitExceeded:
            _, witness = den_lower(instances, effort, seed)
    return AdversaryOracle(instances, witness)


# ============================================================================
# Learners
# ============================================================================

def _finish(transcript: QueryTranscript, result: BitVector, oracle: AnswerOracle) -> QueryTranscript:
    if not transcript.consistent_with(result):
        raise InconsistentOracle(f"result {result} contradicts the answers")
    committed = oracle.finalize()
    if committed != result:
        raise InconsistentOracle(f"learner found {result}, oracle committed to {committed}")
    transcript.result = result
    return transcript


def tree_strategy(instances: InstanceSet, tree: DecisionTree, oracle: AnswerOracle,
                  learner: str = "tree") -> QueryTranscript:
    """Play a decision tree: ask the column at each node, follow the answer."""
    transcript = QueryTranscript(learner, oracle.name)
    node = tree
    while not isinstance(node, Leaf):
        known = transcript.asked()
        answer = known[node.index] if node.index in known else transcript.ask(oracle, node.index)
        node = node.child1 if answer else node.child0
    return _finish(transcript, node.label, oracle)


def _live_result(instances: InstanceSet, live: int) -> BitVector:
    return instances.rows[live.bit_length() - 1]


def _agreeing(instances: InstanceSet, live: int, h: BitVector, z: int) -> int:
    """Number of live rows that agree with h on column z."""
    zeros, ones = instances.split(live, z)
    return (ones if h.bit(z) else zeros).bit_count()


def _spec_set(spec_oracle: SpecOracle, live_set: InstanceSet, h: BitVector,
              e_bound: Optional[int], known: Dict[int, int]) -> List[int]:
    columns = list(spec_oracle(live_set, h))
    if e_bound is not None and len(columns) > e_bound:
        raise SpecSetTooLarge(f"specifying set of size {len(columns)} over bound {e_bound}")
    # columns already answered are constant on the live set
    return sorted(j for j in set(columns) if j not in known)


def moshkov_learn(instances: InstanceSet, oracle: AnswerOracle,
                  spec_oracle: Optional[SpecOracle] = None, e_bound: Optional[int] = None,
                  learner: str = "moshkov") -> QueryTranscript:
    """
    Majority/specifying-set learner.

    Each phase takes h = MAJ of the live rows and a specifying set S for h.
    Columns of S are asked in order of fewest live rows agreeing with h on
    that column (lowest column on ties) until an answer disagrees with h or
    one row is left. A phase of k queries shrinks the live set by a factor
    of at least max(2, k).

    Args:
        instances: the instance set A
        oracle: answers queries about the hidden row
        spec_oracle: (live set, h) -> specifying set; a minimum one by default
        e_bound: reject specifying sets larger than this
        learner: name recorded in the transcript

    Raises:
        SpecSetTooLarge: spec_oracle returned more than e_bound columns
        InvalidSpecifyingSet: a set ran out with two or more rows alive
        InconsistentOracle: the answers fit no row, or not the committed one
    """
    spec_oracle = spec_oracle or specifying_set_min
    transcript = QueryTranscript(learner, oracle.name)
    live = instances.full_mask

    while live & (live - 1):
        start = live.bit_count()
        live_set = instances.select(live)
        h = maj(live_set)
        remaining = _spec_set(spec_oracle, live_set, h, e_bound, transcript.asked())

        asked = 0
        while True:
            if not remaining:
                raise InvalidSpecifyingSet(
                    f"specifying set exhausted with {live.bit_count()} rows alive")
            y = min(remaining, key=lambda z: (_agreeing(instances, live, h, z), z))
            remaining.remove(y)
            answer = transcript.ask(oracle, y)
            asked += 1
            zeros, ones = instances.split(live, y)
            live = ones if answer else zeros
            if not live:
                raise InconsistentOracle("no row fits the answers")
            if answer != h.bit(y) or live & (live - 1) == 0:
                break

        phase = Phase("phase", start, asked, live.bit_count())
        transcript.phases.append(phase)
        if phase.size_after * max(2, asked) > start:
            raise VerificationFailed(
                f"phase shrank {start} -> {phase.size_after} with {asked} queries")

    logger.debug("%s: %d queries in %d phases", learner, transcript.count, len(transcript.phases))
    return _finish(transcript, _live_result(instances, live), oracle)


def epsilon_learn(instances: InstanceSet, oracle: AnswerOracle, epsilon: Optional[float] = None,
                  spec_oracle: Optional[SpecOracle] = None, e_bound: Optional[int] = None,
                  learner: str = "epsilon") -> QueryTranscript:
    """
    Epsilon-split learner.

    While some column splits the live set with at least an epsilon fraction
    on each side, ask it. Otherwise ask the specifying set of the live
    majority, stopping at the first disagreement. A balanced step keeps at
    most (1 - epsilon) of the live rows; a specifying step that hits a
    disagreement keeps fewer than epsilon of them.

    A specifying step ends at the first answer that disagrees with the
    majority instead of asking the rest of the set; that answer alone
    leaves fewer than epsilon of the rows.

    epsilon defaults to ln E / E for E = ETD(A) >= 2 (or e_bound when
    given) and to 1/3 below that.
    """
    spec_oracle = spec_oracle or specifying_set_min
    if epsilon is None:
        e_value = e_bound if e_bound is not None else etd(instances)
        epsilon = default_epsilon(e_value)
    if not 0 < epsilon <= 0.5:
        raise ConfigError(f"epsilon must be in (0, 1/2], got {epsilon}")

    transcript = QueryTranscript(learner, oracle.name)
    live = instances.full_mask

    while live & (live - 1):
        size = live.bit_count()
        balanced = None
        for j, col in enumerate(instances.columns):
            ones = (live & col).bit_count()
            if epsilon * size <= size - ones <= (1 - epsilon) * size:
                balanced = j
                break

        if balanced is not None:
            answer = transcript.ask(oracle, balanced)
            zeros, ones = instances.split(live, balanced)
            live = ones if answer else zeros
            transcript.phases.append(Phase("balanced", size, 1, live.bit_count()))
            continue

        live_set = instances.select(live)
        h = maj(live_set)
        asked, disagreed = 0, False
        for y in _spec_set(spec_oracle, live_set, h, e_bound, transcript.asked()):
            answer = transcript.ask(oracle, y)
            asked += 1
            zeros, ones = instances.split(live, y)
            live = ones if answer else zeros
            if not live:
                raise InconsistentOracle("no row fits the answers")
            if answer != h.bit(y):
                disagreed = True
                break
        if not disagreed and live & (live - 1):
            raise InvalidSpecifyingSet(f"specifying set exhausted with {live.bit_count()} rows alive")
        transcript.phases.append(Phase("specifying", size, asked, live.bit_count()))

    return _finish(transcript, _live_result(instances, live), oracle)


# ============================================================================
# Games
# ============================================================================

def play_game(instances: InstanceSet, learner: str, oracle: AnswerOracle,
              opt_n_limit: int = 24, epsilon: Optional[float] = None,
              greedy_spec: bool = False) -> QueryTranscript:
    """
    Run one learner against one oracle.

    Args:
        learner: one of greedy, exact-tree, moshkov, epsilon
        greedy_spec: use greedy specifying sets instead of minimum ones

    Raises:
        ConfigError: unknown learner name
    """
    spec_oracle = specifying_set_greedy if greedy_spec else None
    if learner == "greedy":
        transcript = tree_strategy(instances, greedy_tree(instances), oracle, learner)
    elif learner == "exact-tree":
        _, tree = opt_exact(instances, opt_n_limit)
        transcript = tree_strategy(instances, tree, oracle, learner)
    elif learner == "moshkov":
        transcript = moshkov_learn(instances, oracle, spec_oracle=spec_oracle, learner=learner)
    elif learner == "epsilon":
        transcript = epsilon_learn(instances, oracle, epsilon=epsilon,
                                   spec_oracle=spec_oracle, learner=learner)
    else:
        raise ConfigError(f"unknown learner {learner!r}; expected one of {', '.join(LEARNERS)}")
    logger.info("%s vs %s: %d queries", learner, oracle.name, transcript.count)
    return transcript
