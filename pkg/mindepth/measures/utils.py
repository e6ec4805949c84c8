"""
Combinatorial measures of an instance set.

Covers the per-column statistics (MAJ, MAX, MAMI), hitting sets,
specifying and strong specifying sets, the extended teaching dimension
(ETD / SETD) and the density DEN.

All searches work on packed ints: a row's value doubles as the mask of the
columns where it has a 1, and subsets of rows are masks over row indices.
"""
import itertools
import logging
import math
import random
from fractions import Fraction
from functools import lru_cache
from typing import Callable, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from mindepth.errors.handlers import ExactLimitExceeded, Overbudget, WidthMismatch
from mindepth.models import BitVector, InstanceSet, iter_bits, mask_of, xor_shift


logger = logging.getLogger(__name__)

Columns = Tuple[int, ...]


# ============================================================================
# Column Statistics
# ============================================================================

def _column_ones(instances: InstanceSet, mask: int) -> List[int]:
    return [(mask & col).bit_count() for col in instances.columns]


def maj(instances: InstanceSet) -> BitVector:
    """Per-column majority; a tie (ones == zeros) gives 1."""
    return BitVector(_maj_value(instances, instances.full_mask), instances.width)


def _maj_value(instances: InstanceSet, mask: int) -> int:
    size = mask.bit_count()
    value = 0
    for j, ones in enumerate(_column_ones(instances, mask)):
        if 2 * ones >= size:
            value |= 1 << j
    return value


def max_ones(instances: InstanceSet) -> int:
    """MAX(A): the largest number of ones in a single column."""
    return max(_column_ones(instances, instances.full_mask))


def mami(instances: InstanceSet) -> int:
    """MAMI(A) = max_j min(|A_{j,0}|, |A_{j,1}|)."""
    value = _mami_mask(instances, instances.full_mask)
    assert value == max_ones(xor_shift(instances, maj(instances))), "MAMI != MAX(A + MAJ(A))"
    return value


def _mami_mask(instances: InstanceSet, mask: int) -> int:
    size = mask.bit_count()
    best = 0
    for col in instances.columns:
        ones = (mask & col).bit_count()
        split = min(ones, size - ones)
        if split > best:
            best = split
    return best


# ============================================================================
# Hitting Sets
# ============================================================================

def greedy_hitting_masks(rows: Iterable[int]) -> Columns:
    """
    Greedy hitting set over row masks: repeatedly take the column that hits
    the most unhit rows (ties to the lowest column). Zero rows are ignored.
    """
    remaining = [row for row in rows if row]
    chosen = []
    while remaining:
        counts = {}
        for row in remaining:
            for j in iter_bits(row):
                counts[j] = counts.get(j, 0) + 1
        best = max(sorted(counts), key=lambda j: counts[j])
        chosen.append(best)
        remaining = [row for row in remaining if not (row >> best) & 1]
    return tuple(sorted(chosen))


def min_hitting_masks(rows: Iterable[int]) -> Columns:
    """
    Minimum hitting set over row masks by branch and bound.

    The incumbent starts from the greedy solution. A branch is cut when
    its size plus ceil(|R| / MAX(R)) cannot beat the incumbent, where R is
    the residual set of unhit rows (every column hits at most MAX(R) rows).
    Branching is on the unhit row with the fewest ones.
    """
    remaining = sorted({row for row in rows if row})
    if not remaining:
        return ()
    incumbent = greedy_hitting_masks(remaining)
    best = [len(incumbent), mask_of(incumbent)]

    def search(residual: List[int], chosen: int, size: int):
        if not residual:
            if size < best[0]:
                best[0], best[1] = size, chosen
            return
        counts = {}
        for row in residual:
            for j in iter_bits(row):
                counts[j] = counts.get(j, 0) + 1
        floor = -(-len(residual) // max(counts.values()))
        if size + floor >= best[0]:
            return
        pivot = min(residual, key=lambda row: row.bit_count())
        for j in iter_bits(pivot):
            search([row for row in residual if not (row >> j) & 1], chosen | (1 << j), size + 1)

    search(remaining, 0, 0)
    return tuple(iter_bits(best[1]))


def hitting_set_min(instances: InstanceSet) -> Columns:
    """A minimum set of columns hitting every nonzero row; |result| = HS(A)."""
    return min_hitting_masks(instances.values())


def hitting_set_greedy(instances: InstanceSet) -> Columns:
    return greedy_hitting_masks(instances.values())


def hs_lower_bound(instances: InstanceSet) -> Fraction:
    """The (|A| - 1) / MAX(A) floor on HS(A); 0 when every column is zero."""
    top = max_ones(instances)
    if top == 0:
        return Fraction(0)
    return Fraction(instances.n - 1, top)


@lru_cache(maxsize=1 << 16)
def _hs_size(values: FrozenSet[int]) -> int:
    return len(min_hitting_masks(values))


# ============================================================================
# Specifying Sets
# ============================================================================

def _check_width(instances: InstanceSet, h: BitVector):
    if h.width != instances.width:
        raise WidthMismatch(f"hypothesis width {h.width} vs set width {instances.width}")


def is_specifying(instances: InstanceSet, h: BitVector, columns: Iterable[int]) -> bool:
    """True when at most one row agrees with h on every column in columns."""
    _check_width(instances, h)
    mask = mask_of(columns)
    agreeing = sum(1 for v in instances.values() if (v ^ h.value) & mask == 0)
    return agreeing <= 1


def is_strong_specifying(instances: InstanceSet, h: BitVector, columns: Iterable[int]) -> bool:
    """True when no row other than h itself agrees with h on columns."""
    _check_width(instances, h)
    mask = mask_of(columns)
    return all((v ^ h.value) & mask for v in instances.values() if v != h.value)


def _min_specifying_zero(diffs: Sequence[int], width: int,
                         budget: Optional[int] = None) -> Columns:
    """
    Smallest column set leaving at most one of diffs all-zero on it.

    Iterative deepening over subset sizes, lexicographic within a size, so
    the first hit is the lexicographically smallest minimum set.
    """
    upper = min(width, len(diffs) - 1)
    for size in range(0, upper + 1):
        if budget is not None and size > budget:
            raise Overbudget(budget)
        for combo in itertools.combinations(range(width), size):
            mask = mask_of(combo)
            survivors = 0
            for d in diffs:
                if d & mask == 0:
                    survivors += 1
                    if survivors > 1:
                        break
            if survivors <= 1:
                return combo
    raise AssertionError("a specifying set of size min(m, n - 1) always exists")


def specifying_set_min(instances: InstanceSet, h: BitVector,
                       budget: Optional[int] = None) -> Columns:
    """
    A minimum specifying set for h with respect to A; |result| = ETD(A, h).

    Computed as the h = 0 case of the shifted set A + h.

    Raises:
        Overbudget: budget is set and every specifying set is larger
    """
    _check_width(instances, h)
    diffs = [v ^ h.value for v in instances.values()]
    return _min_specifying_zero(diffs, instances.width, budget)


def _greedy_specifying_zero(diffs: Sequence[int]) -> Columns:
    """
    Greedy peel: take the column that separates the most rows still all-zero
    on the chosen columns (ties to the lowest), until at most one is left.
    """
    survivors = list(diffs)
    chosen = []
    while len(survivors) > 1:
        counts = {}
        for d in survivors:
            for j in iter_bits(d):
                counts[j] = counts.get(j, 0) + 1
        best = max(sorted(counts), key=lambda j: counts[j])
        chosen.append(best)
        survivors = [d for d in survivors if not (d >> best) & 1]
    return tuple(sorted(chosen))


def specifying_set_greedy(instances: InstanceSet, h: BitVector) -> Columns:
    """A (not necessarily minimum) specifying set for h, peeled greedily."""
    _check_width(instances, h)
    return _greedy_specifying_zero([v ^ h.value for v in instances.values()])


def strong_specifying_set_min(instances: InstanceSet, h: BitVector) -> Columns:
    """A minimum strong specifying set; |result| = SETD(A, h) = HS(A + h)."""
    return hitting_set_min(xor_shift(instances, h))


def strong_specifying_set_direct(instances: InstanceSet, h: BitVector) -> Columns:
    """
    Minimum strong specifying set searched from the definition alone.

    Slower than strong_specifying_set_min; kept so that HS(A + h) = SETD(A, h)
    can be checked against an independent computation.
    """
    _check_width(instances, h)
    for size in range(0, instances.width + 1):
        for combo in itertools.combinations(range(instances.width), size):
            if is_strong_specifying(instances, h, combo):
                return combo
    raise AssertionError("all columns always form a strong specifying set")


@lru_cache(maxsize=1 << 16)
def _etd_z_size(values: FrozenSet[int], width: int) -> int:
    return len(_min_specifying_zero(sorted(values), width))


# ============================================================================
# ETD / SETD
# ============================================================================

def etd_at(instances: InstanceSet, h: BitVector) -> int:
    """ETD(A, h), looked up as ETDz(A + h) so shifted sets share one cache."""
    _check_width(instances, h)
    return _etd_z_size(frozenset(v ^ h.value for v in instances.values()), instances.width)


def setd_at(instances: InstanceSet, h: BitVector) -> int:
    """SETD(A, h) = HS(A + h), cached on the shifted set."""
    _check_width(instances, h)
    return _hs_size(frozenset(v ^ h.value for v in instances.values()))


def etd_z(instances: InstanceSet) -> int:
    return etd_at(instances, BitVector.zeros(instances.width))


def setd_z(instances: InstanceSet) -> int:
    return setd_at(instances, BitVector.zeros(instances.width))


def _hypotheses(instances: InstanceSet, m_limit: int, sample: int,
                seed: int) -> Tuple[Iterable[BitVector], bool]:
    """All 2^m hypotheses when m is within the limit, else a seeded sample."""
    width = instances.width
    if width <= m_limit:
        return (BitVector(v, width) for v in range(1 << width)), False
    if not sample:
        raise ExactLimitExceeded("ETD hypothesis sweep (m)", width, m_limit)
    rng = random.Random(seed)
    chosen = [maj(instances)] + list(instances.rows)
    chosen.extend(BitVector(rng.getrandbits(width), width) for _ in range(sample))
    logger.info("m=%d over limit %d: sampling %d hypotheses", width, m_limit, len(chosen))
    return chosen, True


def _max_over_hypotheses(instances: InstanceSet, measure: Callable[[InstanceSet, BitVector], int],
                         cap: int, m_limit: int, sample: int, seed: int) -> Tuple[int, bool]:
    hypotheses, sampled = _hypotheses(instances, m_limit, sample, seed)
    best = 0
    if cap == 0:
        return best, sampled
    for h in hypotheses:
        value = measure(instances, h)
        if value > best:
            best = value
            if best >= cap:
                break
    return best, sampled


def etd_with_source(instances: InstanceSet, m_limit: int = 16, sample: int = 0,
                    seed: int = 0) -> Tuple[int, bool]:
    """ETD(A) together with a flag telling whether hypotheses were sampled."""
    cap = min(instances.width, instances.n - 1)
    return _max_over_hypotheses(instances, etd_at, cap, m_limit, sample, seed)


def setd_with_source(instances: InstanceSet, m_limit: int = 16, sample: int = 0,
                     seed: int = 0) -> Tuple[int, bool]:
    cap = min(instances.width, instances.n)
    return _max_over_hypotheses(instances, setd_at, cap, m_limit, sample, seed)


def etd(instances: InstanceSet, m_limit: int = 16, sample: int = 0, seed: int = 0) -> int:
    """
    ETD(A) = max over h in {0,1}^m of ETD(A, h).

    Exact when m <= m_limit. Past the limit a positive sample returns a
    lower bound from sampled hypotheses plus MAJ(A) and every row of A.

    Raises:
        ExactLimitExceeded: m over the limit and no sample requested
    """
    return etd_with_source(instances, m_limit, sample, seed)[0]


def setd(instances: InstanceSet, m_limit: int = 16, sample: int = 0, seed: int = 0) -> int:
    """SETD(A) = max over h of SETD(A, h); same limit rules as etd."""
    return setd_with_source(instances, m_limit, sample, seed)[0]


# ============================================================================
# Density
# ============================================================================

def _density(instances: InstanceSet, mask: int) -> Fraction:
    split = _mami_mask(instances, mask)
    if split == 0:
        return Fraction(0)
    return Fraction(mask.bit_count() - 1, split)


def den_exact(instances: InstanceSet, n_limit: int = 20) -> Tuple[Fraction, Tuple[int, ...]]:
    """
    DEN(A) = max over B of (|B| - 1) / MAMI(B), with one maximizing B.

    Every subset with at least two rows is enumerated; the witness is the
    maximizer with the smallest row mask. DEN of a single row is 0 with an
    empty witness.

    Raises:
        ExactLimitExceeded: n over n_limit
    """
    n = instances.n
    if n > n_limit:
        raise ExactLimitExceeded("DEN subset enumeration (n)", n, n_limit)
    if n == 1:
        return Fraction(0), ()

    best_num, best_den, best_mask = 0, 1, 0
    for mask in range(3, 1 << n):
        size = mask.bit_count()
        if size < 2:
            continue
        split = _mami_mask(instances, mask)
        # distinct rows always leave some column split
        if (size - 1) * best_den > best_num * split:
            best_num, best_den, best_mask = size - 1, split, mask
    return Fraction(best_num, best_den), tuple(iter_bits(best_mask))


def den_lower(instances: InstanceSet, effort: int = 8,
              seed: int = 0) -> Tuple[Fraction, Tuple[int, ...]]:
    """
    A lower bound on DEN(A) by hill climbing over row subsets.

    Starts from B = A, then from `effort` seeded random subsets. Each climb
    moves to the best single-row addition or removal while it improves;
    ties prefer the larger subset.
    """
    n = instances.n
    if n == 1:
        return Fraction(0), ()
    rng = random.Random(seed)

    def rank(mask: int):
        return (_density(instances, mask), mask.bit_count(), -mask)

    def climb(mask: int) -> int:
        current = rank(mask)
        while True:
            neighbours = [mask ^ (1 << r) for r in range(n)]
            neighbours = [nb for nb in neighbours if nb.bit_count() >= 2]
            best = max(neighbours, key=rank, default=None)
            if best is None or rank(best) <= current:
                return mask
            mask, current = best, rank(best)

    starts = [instances.full_mask]
    for _ in range(effort):
        size = rng.randint(2, n)
        starts.append(mask_of(rng.sample(range(n), size)))

    best_mask = max((climb(start) for start in starts), key=rank)
    return _density(instances, best_mask), tuple(iter_bits(best_mask))
