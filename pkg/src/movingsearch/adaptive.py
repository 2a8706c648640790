"""Closed-form capacities and constructive adaptive strategies.

Strategies are binary decision trees: each internal node holds a test set
and two children indexed by the answer bit, each leaf holds the announced
position set.  All constructors work in the model where the target still
moves after the final test, and only ever emit consecutive test sets
(intervals on paths, arcs on cycles).

The path construction below builds its test intervals on auxiliary
segments that are unbounded on one or both sides, then clips them to the
real path; clipping never enlarges a candidate set, so the accuracy
guarantees carry over.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .errors import BudgetExceededError, RegimeError
from .spaces import (
    PositionSet,
    SearchSpace,
    Topology,
    cycle,
    full_set,
    path,
    update,
)

DEFAULT_NODE_BUDGET = 250_000


@dataclass(frozen=True)
class StrategyNode:
    """Internal node (test plus two children) or leaf (answer set)."""

    test: Optional[PositionSet] = None
    on0: Optional["StrategyNode"] = None
    on1: Optional["StrategyNode"] = None
    answer: Optional[PositionSet] = None

    @property
    def is_leaf(self) -> bool:
        return self.test is None

    def child(self, bit: int) -> "StrategyNode":
        return self.on1 if bit else self.on0


@dataclass(frozen=True)
class AdaptiveStrategy:
    """A decision tree together with the arena and accuracy it targets."""

    space: SearchSpace
    root: StrategyNode
    accuracy_target: int

    def depth(self) -> int:
        def d(node):
            return 0 if node.is_leaf else 1 + max(d(node.on0), d(node.on1))

        return d(self.root)

    def num_nodes(self) -> int:
        return sum(1 for _ in self.iter_nodes())

    def iter_nodes(self) -> Iterator[StrategyNode]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            if not node.is_leaf:
                stack.append(node.on1)
                stack.append(node.on0)

    def leaves(self) -> Iterator[tuple[tuple[int, ...], StrategyNode]]:
        """(answer bits, leaf) pairs for every root-to-leaf path."""

        def walk(node, bits):
            if node.is_leaf:
                yield bits, node
            else:
                yield from walk(node.on0, bits + (0,))
                yield from walk(node.on1, bits + (1,))

        yield from walk(self.root, ())

    def replay(self, answers) -> tuple[list[PositionSet], StrategyNode]:
        """Descend by the given answer bits, returning the tests used."""
        node = self.root
        tests = []
        for bit in answers:
            if node.is_leaf:
                break
            tests.append(node.test)
            node = node.child(bit)
        return tests, node

    # one node per line: "node <id> test=<set> on0=<id> on1=<id>" or
    # "leaf <id> answer=<set>", ids assigned in preorder from 0
    def serialize(self) -> str:
        lines: list[str] = []
        counter = [0]

        def emit(node) -> int:
            nid = counter[0]
            counter[0] += 1
            idx = len(lines)
            lines.append("")
            if node.is_leaf:
                lines[idx] = f"leaf {nid} answer={node.answer}"
            else:
                i0 = emit(node.on0)
                i1 = emit(node.on1)
                lines[idx] = f"node {nid} test={node.test} on0={i0} on1={i1}"
            return nid

        emit(self.root)
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, space: SearchSpace, accuracy_target: int) -> "AdaptiveStrategy":
        raw: dict[int, tuple] = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            kind, nid, *fields = line.split()
            kv = dict(f.split("=", 1) for f in fields)
            if kind == "leaf":
                raw[int(nid)] = ("leaf", PositionSet.parse(kv["answer"]))
            elif kind == "node":
                raw[int(nid)] = ("node", PositionSet.parse(kv["test"]), int(kv["on0"]), int(kv["on1"]))
            else:
                raise ValueError(f"bad strategy line {line!r}")

        def build(nid: int) -> StrategyNode:
            entry = raw[nid]
            if entry[0] == "leaf":
                return StrategyNode(answer=entry[1])
            return StrategyNode(test=entry[1], on0=build(entry[2]), on1=build(entry[3]))

        return cls(space, build(0), accuracy_target)


class _Builder:
    """Node factory that enforces the construction budget."""

    def __init__(self, budget: int):
        self.budget = budget
        self.count = 0

    def leaf(self, answer: PositionSet) -> StrategyNode:
        return self._mk(StrategyNode(answer=answer))

    def node(self, test: PositionSet, on0: StrategyNode, on1: StrategyNode) -> StrategyNode:
        return self._mk(StrategyNode(test=test, on0=on0, on1=on1))

    def _mk(self, node: StrategyNode) -> StrategyNode:
        self.count += 1
        if self.count > self.budget:
            raise BudgetExceededError(f"strategy tree exceeds {self.budget} nodes")
        return node


# ---------------------------------------------------------------------------
# capacity and accuracy formulas


def cycle_capacity(n: int, s: int, k: int) -> int:
    """Largest cycle size solvable with n tests at accuracy s (speed k)."""
    _check_regime(n, s, k)
    return (1 << n) * (s - 4 * k) + 4 * k


def path_capacity(n: int, s: int, k: int) -> int:
    """Largest path size solvable with n tests at accuracy s (speed k)."""
    _check_regime(n, s, k)
    return (s - 4 * k) * (1 << n) + k * (2 * n + 4)


def _check_regime(n: int, s: int, k: int):
    if n < 0:
        raise RegimeError("test budget n must be >= 0")
    if k < 1:
        raise RegimeError("speed k must be >= 1")
    if s < 4 * k:
        raise RegimeError(f"accuracy s={s} below the 4k={4 * k} regime of the capacity formulas")


def path_min_accuracy(n_vertices: int, k: int) -> int:
    """Best achievable accuracy on a path of the given size."""
    if n_vertices < 1 or k < 1:
        raise ValueError("need N >= 1 and k >= 1")
    if n_vertices <= 2 * k + 1:
        return n_vertices
    if n_vertices < 4 * k + 1:
        return -(-n_vertices // 2) + k
    return 3 * k + 1


def cycle_min_accuracy(n_vertices: int, k: int) -> int:
    """Best achievable accuracy on a cycle of the given size."""
    if n_vertices < 1 or k < 1:
        raise ValueError("need N >= 1 and k >= 1")
    return n_vertices if n_vertices <= 4 * k else 4 * k + 1


@dataclass(frozen=True)
class MinTests:
    """A minimum test count; ``exact`` is False where only achievability
    (not optimality) is established for the regime."""

    n: int
    exact: bool = True

    def __int__(self) -> int:
        return self.n


def min_tests(topology: Union[Topology, str], n_vertices: int, s: int, k: int) -> MinTests:
    """Fewest tests for accuracy s on the given arena.

    Exact for s >= 4k (capacity inversion) and for the trivial/small
    regimes.  On paths with 3k+1 <= s < 4k the sliding-window bound is
    achievable but not known to be optimal, so the result is tagged
    ``exact=False``.
    """
    topo = Topology(topology) if isinstance(topology, str) else topology
    if n_vertices < 1 or k < 1:
        raise ValueError("need N >= 1 and k >= 1")
    if s < 1:
        raise RegimeError("accuracy must be >= 1")
    if n_vertices <= s:
        return MinTests(0)
    if topo is Topology.CYCLE:
        if s <= 4 * k:
            raise RegimeError(
                f"no finite test count: cycle needs accuracy > 4k (or N <= s), got s={s}"
            )
        n = 0
        while cycle_capacity(n, s, k) < n_vertices:
            n += 1
        return MinTests(n)
    if topo is Topology.PATH:
        if s >= 4 * k:
            n = 0
            while path_capacity(n, s, k) < n_vertices:
                n += 1
            return MinTests(n)
        if n_vertices < 4 * k + 1:
            if s >= path_min_accuracy(n_vertices, k):
                return MinTests(1)
            raise RegimeError(f"accuracy {s} unachievable on a {n_vertices}-vertex path")
        if s >= 3 * k + 1:
            span = s - 3 * k  # window slide per test
            return MinTests(max(1, -(-(n_vertices - 4 * k) // (2 * span))), exact=False)
        raise RegimeError(f"accuracy {s} unachievable on paths with N >= 4k+1")
    raise ValueError("min_tests is defined for paths and cycles")


# ---------------------------------------------------------------------------
# cycle construction: halve the candidate arc, re-expand, repeat


def _arc_set(n: int, start0: int, length: int) -> PositionSet:
    """Arc of ``length`` vertices starting at 0-based position ``start0``."""
    if length >= n:
        return PositionSet.interval(1, n)
    start0 %= n
    end0 = start0 + length - 1
    if end0 < n:
        return PositionSet.interval(start0 + 1, end0 + 1)
    return PositionSet([(start0 + 1, n), (1, end0 - n + 1)])


def cycle_strategy(
    n_vertices: int,
    s: int,
    k: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> AdaptiveStrategy:
    """Consecutive-arc halving strategy on the cycle.

    From a candidate arc, test its first half: either half re-expands by k
    on each side, so the arc length follows L -> ceil(L/2) + 2k until it
    reaches the accuracy target.
    """
    space = cycle(n_vertices, k)
    min_tests(Topology.CYCLE, n_vertices, s, k)  # regime check
    b = _Builder(node_budget)

    def build(start0: int, length: int) -> StrategyNode:
        if length <= s:
            return b.leaf(_arc_set(n_vertices, start0, length))
        t = (length + 1) // 2
        test = _arc_set(n_vertices, start0, t)
        on1 = build(start0 - k, min(t + 2 * k, n_vertices))
        on0 = build(start0 + t - k, min(length - t + 2 * k, n_vertices))
        return b.node(test, on0, on1)

    return AdaptiveStrategy(space, build(0, n_vertices), s)


# ---------------------------------------------------------------------------
# path constructions


def _edge_probe_strategy(n_vertices: int, k: int, window: int, s: int, node_budget: int) -> AdaptiveStrategy:
    """Halve once, then slide a probe window inward from the far edge.

    A hit on the probe pins the target down to at most window + 2k = s
    positions; a miss shrinks the candidate interval, which always stays a
    single interval anchored at one end of the path.
    """
    space = path(n_vertices, k)
    b = _Builder(node_budget)

    def build(d: PositionSet) -> StrategyNode:
        if len(d) <= s:
            return b.leaf(d)
        lo, hi = d.min_value(), d.max_value()
        if lo - 1 <= n_vertices - hi:
            probe = PositionSet.interval(hi - window + 1, hi)
        else:
            probe = PositionSet.interval(lo, lo + window - 1)
        on1 = build(update(space, d, probe, 1))
        on0 = build(update(space, d, probe, 0))
        return b.node(probe, on0, on1)

    d0 = full_set(space)
    if len(d0) <= s:
        return AdaptiveStrategy(space, b.leaf(d0), s)
    first = PositionSet.interval(1, -(-n_vertices // 2))
    root = b.node(first, build(update(space, d0, first, 0)), build(update(space, d0, first, 1)))
    return AdaptiveStrategy(space, root, s)


def path_shifting_strategy(n_vertices: int, k: int, node_budget: int = DEFAULT_NODE_BUDGET) -> AdaptiveStrategy:
    """The accuracy-3k+1 strategy for paths with at least 4k+1 vertices."""
    if k < 1:
        raise ValueError("speed k must be >= 1")
    if n_vertices < 4 * k + 1:
        raise RegimeError(f"path too small: need N >= 4k+1 = {4 * k + 1}")
    return _edge_probe_strategy(n_vertices, k, window=k + 1, s=3 * k + 1, node_budget=node_budget)


def path_sliding_window_strategy(
    n_vertices: int,
    k: int,
    span: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> AdaptiveStrategy:
    """Accuracy-(3k+span) strategy whose probe window slides ``span`` per miss.

    With n tests this handles paths up to 2*n*span + 4k vertices; span=1
    recovers the one-step shifting strategy.
    """
    if k < 1:
        raise ValueError("speed k must be >= 1")
    if not 1 <= span <= k:
        raise RegimeError(f"window slide must satisfy 1 <= l <= k, got l={span}")
    return _edge_probe_strategy(
        n_vertices, k, window=span + k, s=3 * k + span, node_budget=node_budget
    )


def _open_cap(j: int, s: int, k: int) -> int:
    """Capacity of the both-sides-open variant with j tests."""
    return (s - 4 * k) * (1 << j) + 4 * k


def _half_cap(j: int, s: int, k: int) -> int:
    """Capacity of the left-bounded variant with j tests."""
    return (s - 4 * k) * (1 << j) + (j + 4) * k


def path_strategy(
    n_vertices: int,
    s: int,
    k: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> AdaptiveStrategy:
    """Optimal-count path strategy for accuracy s >= 4k.

    The first test splits the path into two instances that are bounded on
    one side only; those recurse through the half-open construction, whose
    miss branch in turn falls back to plain halving on an open segment.
    Test intervals are computed against the unbounded model segments and
    clipped to the real path, which only ever shrinks candidate sets.
    """
    space = path(n_vertices, k)
    n = min_tests(Topology.PATH, n_vertices, s, k).n  # also checks the regime
    b = _Builder(node_budget)

    def clip_test(lo: int, hi: int, flip: bool) -> PositionSet:
        if flip:
            lo, hi = n_vertices + 1 - hi, n_vertices + 1 - lo
        return PositionSet.interval(lo, hi).clipped(1, n_vertices)

    def build_open(d: PositionSet, lo: int, hi: int, j: int, flip: bool) -> StrategyNode:
        # model state: interval [lo, hi] on a segment open on both sides
        if len(d) <= s:
            return b.leaf(d)
        assert j > 0, "open-segment budget exhausted"
        t = (hi - lo + 2) // 2  # left half, rounded up
        test = clip_test(lo, lo + t - 1, flip)
        on1 = build_open(update(space, d, test, 1), lo - k, lo + t - 1 + k, j - 1, flip)
        on0 = build_open(update(space, d, test, 0), lo + t - k, hi + k, j - 1, flip)
        return b.node(test, on0, on1)

    def build_half(d: PositionSet, y: int, j: int, flip: bool) -> StrategyNode:
        # model state: prefix {1..y} on a segment bounded on the left only
        if len(d) <= s:
            return b.leaf(d)
        assert j > 0, "half-open budget exhausted"
        t = y - _open_cap(j - 1, s, k) + 2 * k
        t = max(1, min(t, _half_cap(j - 1, s, k) - k, y - 1))
        test = clip_test(1, t, flip)
        on1 = build_half(update(space, d, test, 1), t + k, j - 1, flip)
        lo0 = t + 1 - k
        if lo0 <= 1:
            on0 = build_half(update(space, d, test, 0), y + k, j - 1, flip)
        else:
            on0 = build_open(update(space, d, test, 0), lo0, y + k, j - 1, flip)
        return b.node(test, on0, on1)

    d0 = full_set(space)
    if len(d0) <= s:
        return AdaptiveStrategy(space, b.leaf(d0), s)
    t = n_vertices - _half_cap(n - 1, s, k) + k
    t = max(1, min(t, _half_cap(n - 1, s, k) - k, n_vertices - 1))
    first = PositionSet.interval(1, t)
    on1 = build_half(update(space, d0, first, 1), t + k, n - 1, flip=False)
    on0 = build_half(update(space, d0, first, 0), n_vertices - t + k, n - 1, flip=True)
    root = b.node(first, on0, on1)
    return AdaptiveStrategy(space, root, s)
