"""
Verification suites.

Each suite walks a corpus of instance sets and records one check per
inequality or identity it tests. A failed check keeps a short message
naming the instance, so a failing run can be replayed with `measure`.
"""
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Sequence

from mindepth.config import RunConfig
from mindepth.errors.handlers import Overbudget
from mindepth.lattice.utils import (gcd, gen_ray, gen_ray_sum, hasse_build, induced_matrix,
                                    lca, learn_disjunction, specifying_set_poly, td_table,
                                    witness_set_min)
from mindepth.measures.report import (TOLERANCE, ceil_log2, default_epsilon, epsilon_bound,
                                      epsilon_step_bound, greedy_bound, greedy_opt_bound,
                                      moshkov_bound, split_bound)
from mindepth.measures.utils import (den_exact, den_lower, etd, etd_at, hitting_set_greedy,
                                     hitting_set_min, hs_lower_bound, is_specifying, maj, mami,
                                     max_ones, setd, setd_at, specifying_set_greedy,
                                     specifying_set_min, strong_specifying_set_direct)
from mindepth.models import (BitVector, InstanceSet, format_instance_set, shift_tree, tree_depth,
                             validate_tree, xor_shift)
from mindepth.solvers.learners import (LEARNERS, AdversaryOracle, FixedOracle, epsilon_learn,
                                       moshkov_learn, play_game)
from mindepth.solvers.trees import greedy_tree, opt_exact


logger = logging.getLogger(__name__)

MAX_REPORTED_FAILURES = 20


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    checks: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def expect(self, ok: bool, message: str):
        self.checks += 1
        if not ok:
            self.failures.append(message)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "cases": self.cases, "checks": self.checks,
                "failed": len(self.failures), "pass": self.passed,
                "failures": self.failures[:MAX_REPORTED_FAILURES]}


def _tag(instances: InstanceSet) -> str:
    return format_instance_set(instances).strip().replace("\n", " / ")


def _random_h(rng: random.Random, width: int) -> BitVector:
    return BitVector(rng.getrandbits(width), width)


# ============================================================================
# Instance-Set Suites
# ============================================================================

def sandwich_suite(corpus: Sequence[InstanceSet], run: RunConfig, rng: random.Random,
                   result: SuiteResult):
    """ceil(log2 n) <= max(ETD, ceil(log2 n)) <= OPT <= n - 1."""
    for instances in corpus:
        result.cases += 1
        n, tag = instances.n, _tag(instances)
        opt, _ = opt_exact(instances, run.opt_exact_n_limit)
        low = max(etd(instances, run.etd_exact_m_limit), ceil_log2(n))
        result.expect(ceil_log2(n) <= low <= opt, f"lower bounds {low} > OPT {opt}: {tag}")
        result.expect(opt <= n - 1, f"OPT {opt} > n - 1: {tag}")


def shift_suite(corpus, run, rng, result):
    """OPT, ETD and SETD do not change under A -> A + h; trees carry over."""
    for instances in corpus:
        result.cases += 1
        tag = _tag(instances)
        h = _random_h(rng, instances.m)
        shifted = xor_shift(instances, h)
        depth, tree = opt_exact(instances, run.opt_exact_n_limit)
        result.expect(depth == opt_exact(shifted, run.opt_exact_n_limit)[0],
                      f"OPT changes under shift {h}: {tag}")
        result.expect(etd(instances) == etd(shifted), f"ETD changes under shift {h}: {tag}")
        result.expect(setd(instances) == setd(shifted), f"SETD changes under shift {h}: {tag}")
        moved = shift_tree(tree, h)
        result.expect(validate_tree(moved, shifted) and tree_depth(moved) == depth,
                      f"shifted tree invalid for shift {h}: {tag}")


def sss_suite(corpus, run, rng, result):
    """ETD <= SETD <= ETD + 1, HS(A) = SETDz(A), SETD(A, h) = HS(A + h)."""
    for instances in corpus:
        result.cases += 1
        tag = _tag(instances)
        e, s = etd(instances), setd(instances)
        result.expect(e <= s <= e + 1, f"ETD {e} / SETD {s} out of order: {tag}")

        zero = BitVector.zeros(instances.m)
        hs = len(hitting_set_min(instances))
        direct = len(strong_specifying_set_direct(instances, zero))
        result.expect(hs == direct, f"HS {hs} != SETDz {direct}: {tag}")

        h = _random_h(rng, instances.m)
        gap = setd_at(instances, h) - etd_at(instances, h)
        result.expect(gap in (0, 1), f"SETD - ETD = {gap} at {h}: {tag}")
        result.expect(len(strong_specifying_set_direct(instances, h))
                      == len(hitting_set_min(xor_shift(instances, h))),
                      f"SETD(A, h) != HS(A + h) at {h}: {tag}")

        best = specifying_set_min(instances, h)
        result.expect(is_specifying(instances, h, best), f"minimum set not specifying at {h}: {tag}")
        result.expect(is_specifying(instances, h, specifying_set_greedy(instances, h)),
                      f"greedy set not specifying at {h}: {tag}")
        if best:
            try:
                specifying_set_min(instances, h, budget=len(best) - 1)
                enforced = False
            except Overbudget:
                enforced = True
            result.expect(enforced, f"budget {len(best) - 1} not enforced at {h}: {tag}")


def density_suite(corpus, run, rng, result):
    """DEN <= OPT, DEN - 1 <= ETD <= ln(n) DEN + 1, MAMI identities and HS floors."""
    for instances in corpus:
        result.cases += 1
        n, tag = instances.n, _tag(instances)
        den, witness = den_exact(instances, run.den_exact_n_limit)
        opt, _ = opt_exact(instances, run.opt_exact_n_limit)
        e = etd(instances)

        result.expect(den <= opt, f"DEN {den} > OPT {opt}: {tag}")
        result.expect(den - 1 <= e, f"DEN {den} - 1 > ETD {e}: {tag}")
        result.expect(e <= math.log(n) * float(den) + 1 + TOLERANCE,
                      f"ETD {e} > ln(n) DEN + 1: {tag}")

        result.expect(mami(instances) == max_ones(xor_shift(instances, maj(instances))),
                      f"MAMI != MAX(A + MAJ(A)): {tag}")
        h = _random_h(rng, instances.m)
        result.expect(mami(xor_shift(instances, h)) == mami(instances),
                      f"MAMI changes under shift {h}: {tag}")

        hs = len(hitting_set_min(instances))
        result.expect(hs >= hs_lower_bound(instances), f"HS {hs} under (n-1)/MAX: {tag}")
        for shift in (BitVector.zeros(instances.m), h):
            peel = len(specifying_set_greedy(instances, shift))
            result.expect(peel <= float(den) * math.log(n) + 1 + TOLERANCE,
                          f"greedy specifying set {peel} over DEN ln n + 1 at {shift}: {tag}")
            greedy = len(hitting_set_greedy(xor_shift(instances, shift)))
            result.expect(greedy <= float(den) * math.log(n) + 2 + TOLERANCE,
                          f"greedy HS {greedy} over DEN ln n + 2 at {shift}: {tag}")

        lower, _ = den_lower(instances, run.den_lower_effort, run.seed)
        result.expect(lower <= den, f"DEN lower bound {lower} > DEN {den}: {tag}")
        if n >= 2:
            chosen = instances.select(sum(1 << r for r in witness))
            result.expect(Fraction(chosen.n - 1, mami(chosen)) == den,
                          f"DEN witness does not reach {den}: {tag}")


def greedy_suite(corpus, run, rng, result):
    """Greedy and exact trees are valid; greedy depth is within its bounds."""
    for instances in corpus:
        result.cases += 1
        n, tag = instances.n, _tag(instances)
        den, _ = den_exact(instances, run.den_exact_n_limit)
        opt, exact = opt_exact(instances, run.opt_exact_n_limit)
        tree = greedy_tree(instances)
        depth = tree_depth(tree)

        result.expect(validate_tree(tree, instances), f"greedy tree invalid: {tag}")
        result.expect(validate_tree(exact, instances) and tree_depth(exact) == opt,
                      f"exact tree invalid: {tag}")
        result.expect(opt <= depth <= greedy_bound(den, n),
                      f"greedy depth {depth} outside [OPT, ceil(DEN ln n)]: {tag}")
        result.expect(depth <= greedy_opt_bound(den, n, opt),
                      f"greedy depth {depth} over min(ln2 DEN, ln n) OPT: {tag}")


def moshkov_suite(corpus, run, rng, result):
    """The majority/specifying-set learner finds every row within its bound."""
    for instances in corpus:
        result.cases += 1
        n, tag = instances.n, _tag(instances)
        e = etd(instances)
        bound = moshkov_bound(e, n)
        for r in range(n):
            for spec_oracle in (specifying_set_min, specifying_set_greedy):
                transcript = moshkov_learn(instances, FixedOracle(instances, r),
                                           spec_oracle=spec_oracle)
                result.expect(transcript.result == instances[r],
                              f"moshkov missed row {r + 1}: {tag}")
            transcript = moshkov_learn(instances, FixedOracle(instances, r), e_bound=e)
            result.expect(transcript.count <= bound + TOLERANCE,
                          f"moshkov used {transcript.count} > {bound:.3f} on row {r + 1}: {tag}")
            result.expect(all(p.size_after * max(2, p.queries) <= p.size_before
                              for p in transcript.phases),
                          f"moshkov phase shrink too small on row {r + 1}: {tag}")


def epsilon_suite(corpus, run, rng, result):
    """The epsilon-split learner is correct, shrinks as promised and stays in bound."""
    for instances in corpus:
        result.cases += 1
        n, tag = instances.n, _tag(instances)
        e = etd(instances)
        eps = default_epsilon(e)
        bound = epsilon_bound(eps, e, n)
        steps = epsilon_step_bound(eps, e, n)
        split = split_bound(e, n)
        for r in range(n):
            transcript = epsilon_learn(instances, FixedOracle(instances, r), e_bound=e)
            result.expect(transcript.result == instances[r], f"epsilon missed row {r + 1}: {tag}")
            result.expect(transcript.count <= bound + TOLERANCE,
                          f"epsilon used {transcript.count} > {bound:.3f} on row {r + 1}: {tag}")
            result.expect(transcript.count <= steps,
                          f"epsilon used {transcript.count} > {steps} steps on row {r + 1}: {tag}")
            result.expect(transcript.count <= split + TOLERANCE,
                          f"epsilon used {transcript.count} > 2E/log2 E log2 n = {split:.3f} "
                          f"on row {r + 1}: {tag}")
            for step in transcript.phases:
                if step.kind == "balanced":
                    ok = step.size_after <= (1 - eps) * step.size_before + TOLERANCE
                else:
                    ok = step.size_after == 1 or step.size_after < eps * step.size_before + TOLERANCE
                result.expect(ok, f"epsilon {step.kind} step {step.size_before} -> "
                                  f"{step.size_after} on row {r + 1}: {tag}")


def adversary_suite(corpus, run, rng, result):
    """Against the dense-subset adversary every learner needs ceil(DEN) queries."""
    for instances in corpus:
        result.cases += 1
        tag = _tag(instances)
        den, witness = den_exact(instances, run.den_exact_n_limit)
        need = math.ceil(den)
        for learner in LEARNERS:
            oracle = AdversaryOracle(instances, witness)
            transcript = play_game(instances, learner, oracle, run.opt_exact_n_limit)
            result.expect(transcript.count >= need,
                          f"{learner} beat the adversary with {transcript.count} < {need}: {tag}")


def learners_suite(corpus, run, rng, result):
    """Every learner identifies a random hidden row without repeating a query."""
    for instances in corpus:
        result.cases += 1
        tag = _tag(instances)
        r = rng.randrange(instances.n)
        for learner in LEARNERS:
            transcript = play_game(instances, learner, FixedOracle(instances, r),
                                   run.opt_exact_n_limit)
            columns = [j for j, _ in transcript.queries]
            result.expect(transcript.result == instances[r],
                          f"{learner} missed row {r + 1}: {tag}")
            result.expect(len(columns) == len(set(columns)),
                          f"{learner} repeated a query: {tag}")
            if learner in ("greedy", "exact-tree"):
                result.expect(transcript.count <= instances.n - 1,
                              f"{learner} used more than n - 1 queries: {tag}")


# ============================================================================
# Lattice Suite
# ============================================================================

# (name, family builder, expected closure size or None, expected degree or None)
LATTICE_CLASSES = (
    ("ray 2 2", lambda limit: gen_ray(2, 2, limit), 5, 3),
    ("ray 3 2", lambda limit: gen_ray(3, 2, limit), 10, None),
    ("ray 4 2", lambda limit: gen_ray(4, 2, limit), 17, 4),
    ("raysum", lambda limit: gen_ray_sum(3, limit), None, None),
)

# exhaustive ETD / minimum specifying sets only on domains this small
EXACT_X_LIMIT = 9
HYPOTHESIS_X_LIMIT = 16


def lattice_suite(corpus, run, rng, result):
    """Hasse-diagram identities and specifying sets on the generated classes."""
    for name, build, size, degree in LATTICE_CLASSES:
        result.cases += 1
        domain, family = build(run.domain_size_limit)
        hasse = hasse_build(family, domain)
        matrix = induced_matrix(hasse)
        width = domain.size

        if size is not None:
            result.expect(len(hasse) == size, f"{name}: {len(hasse)} elements, expected {size}")
        if degree is not None:
            result.expect(hasse.degree == degree, f"{name}: degree {hasse.degree}, expected {degree}")
        if name.startswith("ray "):
            m = int(name.split()[2])
            result.expect(hasse.degree <= 2 * m, f"{name}: degree {hasse.degree} > 2m")

        _check_joins(hasse, name, result)
        _check_unique_witness(hasse, name, result)

        if width <= HYPOTHESIS_X_LIMIT:
            for value in range(1 << width):
                h = BitVector(value, width)
                points = specifying_set_poly(hasse, h, run.exact_lattice_hs)
                result.expect(len(points) <= hasse.degree and is_specifying(matrix, h, points),
                              f"{name}: bad polynomial specifying set for {h}")
                if width <= EXACT_X_LIMIT:
                    result.expect(len(specifying_set_min(matrix, h)) <= len(points),
                                  f"{name}: polynomial set below the minimum for {h}")

        if width <= EXACT_X_LIMIT:
            table = td_table(hasse, exact_hs=True)
            best = max(row["total"] for row in table)
            teaching = max(len(witness_set_min(hasse, el, run.witness_exact_x_limit))
                           for el in hasse.elements)
            value = etd(matrix, run.etd_exact_m_limit)
            result.expect(value == teaching == best,
                          f"{name}: ETD {value}, TD {teaching}, max De + HS {best} differ")

        bound = moshkov_bound(hasse.degree, len(hasse))
        for i, element in enumerate(hasse.elements):
            found, transcript = learn_disjunction(hasse, FixedOracle(matrix, i),
                                                  run.exact_lattice_hs)
            result.expect(found == element, f"{name}: learned {found.label} for {element.label}")
            result.expect(transcript.count <= bound + TOLERANCE,
                          f"{name}: {transcript.count} queries > {bound:.3f} for {element.label}")


def _check_joins(hasse, name: str, result: SuiteResult):
    elements = hasse.elements
    for a, first in enumerate(elements):
        for second in elements[a + 1:]:
            joined = lca(hasse, first, second)
            result.expect(joined.function == (first.function | second.function),
                          f"{name}: lca({first.label}, {second.label}) is not their OR")
            meet = gcd(hasse, first, second)
            result.expect(meet.function.implies(first.function)
                          and meet.function.implies(second.function),
                          f"{name}: gcd({first.label}, {second.label}) not below both")
    for i, element in enumerate(elements):
        below = hasse.descendants(i)
        for a, da in enumerate(below):
            for db in below[a + 1:]:
                result.expect(elements[da].function | elements[db].function == element.function,
                              f"{name}: descendants of {element.label} do not join to it")


def _check_unique_witness(hasse, name: str, result: SuiteResult):
    """A point separating G from one immediate descendant is 1 on all the others."""
    for i, element in enumerate(hasse.elements):
        below = hasse.descendants(i)
        for d in below:
            lower = hasse.elements[d].function
            separating = element.function.value & ~lower.value
            for a in range(element.function.width):
                if not (separating >> a) & 1:
                    continue
                others = [hasse.elements[o].function.bit(a) for o in below if o != d]
                result.expect(all(others),
                              f"{name}: point {a + 1} separates {element.label} from two descendants")


SuiteFn = Callable[[Sequence[InstanceSet], RunConfig, random.Random, SuiteResult], None]

SUITES: Dict[str, SuiteFn] = {
    "sandwich": sandwich_suite,
    "shift": shift_suite,
    "sss": sss_suite,
    "density": density_suite,
    "greedy": greedy_suite,
    "moshkov": moshkov_suite,
    "epsilon": epsilon_suite,
    "adversary": adversary_suite,
    "learners": learners_suite,
    "lattice": lattice_suite,
}

# alternate names accepted by --suite
SUITE_ALIASES: Dict[str, str] = {"lemma4": "adversary"}


def resolve_suites(names: Sequence[str]) -> List[str]:
    """Map aliases to suite names, dropping repeats; no names means every suite."""
    resolved = [SUITE_ALIASES.get(name, name) for name in names] or list(SUITES)
    return list(dict.fromkeys(resolved))


def run_suite(name: str, corpus: Sequence[InstanceSet], run: RunConfig) -> SuiteResult:
    """Run one suite with its own seeded generator so suites do not disturb each other."""
    result = SuiteResult(name)
    rng = random.Random(f"{run.seed}:{name}")
    SUITES[name](corpus, run, rng, result)
    logger.info("suite %s: %d cases, %d checks, %d failed",
                name, result.cases, result.checks, len(result.failures))
    return result
