"""Best-first branch-and-bound for the top-k reliable functional dependencies.

Candidates are subsets of the input attributes, generated without
redundancy by only ever appending attributes of larger index.  A node is
scored with the corrected fraction of information ``f0``; since the bias
term never decreases when attributes are added, ``1 - b0`` bounds the score
of every superset and is used both as queue priority and for pruning.
"""

from __future__ import annotations

import bisect
import heapq
import itertools
import math
import time
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .correction import ScoredPattern, expected_mi_permutation, reliable_fraction
from .data import Dataset, build_table
from .infotheory import DegenerateTargetError, entropy

__all__ = [
    "SearchNode",
    "TopKResult",
    "SearchStats",
    "branch",
    "bound",
    "best_first_search",
    "exhaustive_search",
    "cardinality_baseline_nodes",
]

EXHAUSTIVE_MAX_D = 20

EXACT = "exact"
APPROXIMATE = "alpha-approximate"
BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass(frozen=True)
class SearchNode:
    """A frontier element; ``attrs`` are positions among the input attributes."""

    attrs: tuple[int, ...]
    score: float
    bound: float

    @property
    def max_index(self) -> int:
        return self.attrs[-1] if self.attrs else -1

    def sort_key(self):
        return (-self.bound, len(self.attrs), self.attrs)

    def __lt__(self, other: "SearchNode") -> bool:
        return self.sort_key() < other.sort_key()


@dataclass(frozen=True)
class TopKResult:
    patterns: tuple[ScoredPattern, ...]
    k: int
    alpha: float
    guarantee: str

    @property
    def scores(self) -> list[float]:
        return [p.f0 for p in self.patterns]


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    nodes_enqueued: int = 0
    nodes_pruned: int = 0
    nodes_evaluated: int = 0
    max_depth_explored: int = 0
    solution_depth: int = 0
    wall_time: float = 0.0
    pruned_fraction: float = 0.0
    # Number of subsets never evaluated because an ancestor was pruned or left in the queue.
    pruned_subsets: int = field(default=0, repr=False)


def _result_key(p: ScoredPattern):
    return (-p.f0, len(p.attrs), p.attrs)


def branch(node: SearchNode | Sequence[int], d: int) -> list[tuple[int, ...]]:
    """Successors of a node: append each attribute position larger than the current maximum."""
    attrs = tuple(node.attrs if isinstance(node, SearchNode) else node)
    start = attrs[-1] + 1 if attrs else 0
    return [attrs + (i,) for i in range(start, d)]


def _check_target(dataset: Dataset) -> None:
    if entropy(np.bincount(dataset.target.codes), dataset.n) <= 0.0:
        raise DegenerateTargetError(f"target column {dataset.target.name!r} is constant")


def bound(dataset: Dataset, attrs: Sequence[int]) -> float:
    """Optimistic estimate ``1 - b0(attrs)`` of the corrected score of any superset of ``attrs``."""
    return 1.0 - expected_mi_permutation(build_table(dataset, attrs)).b0


def _evaluate(dataset: Dataset, columns: tuple[int, ...]) -> tuple[ScoredPattern, float]:
    pattern = reliable_fraction(build_table(dataset, columns), columns)
    return pattern, 1.0 - pattern.b0


def _subtree_size(max_pos: int, d: int) -> int:
    """Number of strict descendants of a node whose largest position is ``max_pos``."""
    return (1 << (d - 1 - max_pos)) - 1


def best_first_search(dataset: Dataset, k: int = 1, alpha: float = 1.0,
                      budget_seconds: float | None = None) -> tuple[TopKResult, SearchStats]:
    """Find the top-k attribute sets by corrected fraction of information.

    With ``alpha < 1`` the result is an alpha-approximation: every set left
    out scores, times ``alpha``, no more than the worst set returned.  A node
    is kept only while ``alpha * bound`` strictly exceeds the current k-th
    best score, and the search stops once the best remaining bound fails
    that test.  If ``budget_seconds`` elapses first, the current result is
    returned flagged as ``budget-exhausted``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    inputs = dataset.input_indices
    d = len(inputs)
    if d < 1:
        raise ValueError("dataset has no input attributes")
    _check_target(dataset)

    started = time.perf_counter()
    stats = SearchStats()
    top: list[tuple] = []  # sorted (key, pattern)
    queue = [SearchNode((), 0.0, 1.0)]
    exhausted = False

    def kth_score() -> float:
        return top[-1][1].f0 if len(top) >= k else -math.inf

    while queue:
        if budget_seconds is not None and time.perf_counter() - started > budget_seconds:
            exhausted = True
            break
        if alpha * queue[0].bound <= kth_score():
            break
        node = heapq.heappop(queue)
        stats.nodes_expanded += 1

        children = []
        for positions in branch(node, d):
            pattern, child_bound = _evaluate(dataset, tuple(inputs[p] for p in positions))
            stats.nodes_evaluated += 1
            stats.max_depth_explored = max(stats.max_depth_explored, len(positions))
            children.append(SearchNode(positions, pattern.f0, child_bound))
            entry = (_result_key(pattern), pattern)
            if len(top) < k or entry[0] < top[-1][0]:
                bisect.insort(top, entry)
                del top[k:]

        fk = kth_score()
        for child in children:
            if child.max_index == d - 1:
                continue
            if alpha * child.bound > fk:
                heapq.heappush(queue, child)
                stats.nodes_enqueued += 1
            else:
                stats.nodes_pruned += 1
                stats.pruned_subsets += _subtree_size(child.max_index, d)

    for node in queue:
        stats.nodes_pruned += 1
        stats.pruned_subsets += _subtree_size(node.max_index, d)

    patterns = tuple(p for _, p in top)
    stats.solution_depth = len(patterns[0].attrs) if patterns else 0
    stats.pruned_fraction = stats.pruned_subsets / ((1 << d) - 1)
    stats.wall_time = time.perf_counter() - started
    if exhausted:
        guarantee = BUDGET_EXHAUSTED
    else:
        guarantee = EXACT if alpha == 1.0 else APPROXIMATE
    return TopKResult(patterns, k, alpha, guarantee), stats


def exhaustive_search(dataset: Dataset, k: int = 1) -> TopKResult:
    """Score every non-empty attribute subset and keep the k best (test oracle)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    inputs = dataset.input_indices
    if len(inputs) > EXHAUSTIVE_MAX_D:
        raise ValueError(f"exhaustive search is limited to d <= {EXHAUSTIVE_MAX_D}")
    _check_target(dataset)
    scored = [
        reliable_fraction(build_table(dataset, attrs), attrs)
        for size in range(1, len(inputs) + 1)
        for attrs in itertools.combinations(inputs, size)
    ]
    scored.sort(key=_result_key)
    return TopKResult(tuple(scored[:k]), k, 1.0, EXACT)


def cardinality_baseline_nodes(d: int, max_depth: int) -> int:
    """Nodes visited by a search that prunes on set size alone: sum of C(d, i) for i = 1..max_depth."""
    if not 1 <= max_depth <= d:
        raise ValueError(f"need 1 <= max_depth <= d, got max_depth={max_depth}, d={d}")
    return sum(math.comb(d, i) for i in range(1, max_depth + 1))
