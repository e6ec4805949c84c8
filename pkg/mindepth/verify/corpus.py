"""
Instance sets to run the verification suites over.

random_corpus draws everything from one seeded random.Random so a seed
fully determines the run. exhaustive_corpus lists every small set up to
XOR shifts and column permutations, keeping the smallest representative.
"""
import itertools
import random
from typing import Iterator, List, Tuple

from mindepth.models import BitVector, InstanceSet


def _make(values, width: int) -> InstanceSet:
    return InstanceSet(width, tuple(BitVector(v, width) for v in values))


def random_instance(rng: random.Random, max_n: int, max_m: int) -> InstanceSet:
    m = rng.randint(1, max_m)
    n = rng.randint(1, min(max_n, 1 << m))
    return _make(rng.sample(range(1 << m), n), m)


def random_corpus(seed: int, cases: int, max_n: int, max_m: int) -> List[InstanceSet]:
    rng = random.Random(seed)
    return [random_instance(rng, max_n, max_m) for _ in range(cases)]


def _permute(value: int, perm: Tuple[int, ...]) -> int:
    out = 0
    for src, dst in enumerate(perm):
        if (value >> src) & 1:
            out |= 1 << dst
    return out


def canonical_form(values: Tuple[int, ...], width: int) -> Tuple[int, ...]:
    """Smallest sorted row tuple over all XOR shifts and column permutations."""
    best = None
    perms = list(itertools.permutations(range(width)))
    for h in values:
        # the minimum contains 0, so only shifts by a row can reach it
        shifted = [v ^ h for v in values]
        for perm in perms:
            key = tuple(sorted(_permute(v, perm) for v in shifted))
            if best is None or key < best:
                best = key
    return best


def exhaustive_corpus(max_n: int, max_m: int) -> Iterator[InstanceSet]:
    """Every instance set with n <= max_n, m <= max_m, one per equivalence class."""
    for m in range(1, max_m + 1):
        seen = set()
        for n in range(1, min(max_n, 1 << m) + 1):
            for values in itertools.combinations(range(1 << m), n):
                if 0 not in values:
                    continue
                key = canonical_form(values, m)
                if key in seen:
                    continue
                seen.add(key)
                yield _make(key, m)
