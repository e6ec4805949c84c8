"""
Decision tree construction.

Two builders share the same mask representation of subproblems:
- greedy_tree: split on the most balanced column at every node
- opt_exact: branch and bound over row subsets for a minimum-depth tree
"""
import logging
from typing import Dict, Optional, Tuple

from mindepth.errors.handlers import DegenerateSplit, ExactLimitExceeded
from mindepth.models import DecisionTree, InstanceSet, Leaf, Node


logger = logging.getLogger(__name__)


def _ceil_log2(size: int) -> int:
    return (size - 1).bit_length()


def _only_row(instances: InstanceSet, mask: int) -> Leaf:
    return Leaf(instances.rows[mask.bit_length() - 1])


# ============================================================================
# Greedy Tree
# ============================================================================

def balanced_column(instances: InstanceSet, mask: int) -> int:
    """
    The column maximizing min(|B_{j,0}|, |B_{j,1}|) over the rows in mask.

    Ties go to the lowest column.

    Raises:
        DegenerateSplit: no column separates the rows of mask
    """
    size = mask.bit_count()
    best_col, best = -1, 0
    for j, col in enumerate(instances.columns):
        ones = (mask & col).bit_count()
        split = min(ones, size - ones)
        if split > best:
            best_col, best = j, split
    if best_col < 0:
        raise DegenerateSplit(f"no column splits a set of {size} rows")
    return best_col


def greedy_tree(instances: InstanceSet) -> DecisionTree:
    """Build the greedy tree for A; its depth is an upper bound on OPT(A)."""

    def build(mask: int) -> DecisionTree:
        if mask & (mask - 1) == 0:
            return _only_row(instances, mask)
        j = balanced_column(instances, mask)
        zeros, ones = instances.split(mask, j)
        return Node(j, build(zeros), build(ones))

    return build(instances.full_mask)


def _greedy_depth(instances: InstanceSet, mask: int, cache: Dict[int, int]) -> int:
    if mask & (mask - 1) == 0:
        return 0
    depth = cache.get(mask)
    if depth is None:
        zeros, ones = instances.split(mask, balanced_column(instances, mask))
        depth = 1 + max(_greedy_depth(instances, zeros, cache),
                        _greedy_depth(instances, ones, cache))
        cache[mask] = depth
    return depth


# ============================================================================
# Exact Tree
# ============================================================================

def opt_exact(instances: InstanceSet, n_limit: int = 24) -> Tuple[int, DecisionTree]:
    """
    Minimum-depth decision tree by memoized branch and bound.

    Args:
        instances: the instance set A
        n_limit: refuse sets with more rows than this

    Returns:
        (OPT(A), a tree of that depth)

    Each row subset is solved once and memoized as (depth, column). The
    incumbent for a subset starts one above its greedy depth, so the first
    column that reaches the greedy depth already wins. A column is pruned
    when 1 + ceil(log2 |larger side|) cannot beat the incumbent, and the
    search over columns stops once it meets ceil(log2 |B|). Among columns of
    equal depth the lowest index is kept.

    Raises:
        ExactLimitExceeded: n over n_limit
    """
    n = instances.n
    if n > n_limit:
        raise ExactLimitExceeded("exact tree search (n)", n, n_limit)

    memo: Dict[int, Tuple[int, int]] = {}
    greedy_cache: Dict[int, int] = {}

    def solve(mask: int) -> int:
        if mask & (mask - 1) == 0:
            return 0
        hit = memo.get(mask)
        if hit is not None:
            return hit[0]

        floor = _ceil_log2(mask.bit_count())
        best = _greedy_depth(instances, mask, greedy_cache) + 1
        best_col: Optional[int] = None
        for j in range(instances.width):
            zeros, ones = instances.split(mask, j)
            if not zeros or not ones:
                continue
            big, small = (zeros, ones) if zeros.bit_count() >= ones.bit_count() else (ones, zeros)
            if 1 + _ceil_log2(big.bit_count()) >= best:
                continue
            depth = solve(big)
            if 1 + depth >= best:
                continue
            depth = max(depth, solve(small))
            if 1 + depth < best:
                best, best_col = 1 + depth, j
                if best == floor:
                    break

        memo[mask] = (best, best_col)
        return best

    def build(mask: int) -> DecisionTree:
        if mask & (mask - 1) == 0:
            return _only_row(instances, mask)
        j = memo[mask][1]
        zeros, ones = instances.split(mask, j)
        return Node(j, build(zeros), build(ones))

    depth = solve(instances.full_mask)
    logger.debug("opt_exact: n=%d depth=%d subproblems=%d", n, depth, len(memo))
    return depth, build(instances.full_mask)
