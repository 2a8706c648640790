"""Shared verification helpers for strategy trees."""

from movingsearch.spaces import PositionSet, full_set, neighborhood, update


def assert_leaf_soundness(strategy):
    """Every leaf equals the replayed candidate chain and fits the target."""
    space = strategy.space
    for bits, leaf in strategy.leaves():
        d = full_set(space)
        tests, _ = strategy.replay(bits)
        for t, y in zip(tests, bits):
            d = update(space, d, t, y)
        assert leaf.answer == d, f"leaf mismatch on answers {bits}"
        if d:
            assert len(d) <= strategy.accuracy_target, (
                f"leaf too big on answers {bits}: {len(d)} > {strategy.accuracy_target}"
            )


def assert_every_walk_succeeds(strategy):
    """Each valid target walk ends inside the leaf its answers lead to."""
    space = strategy.space
    seen = set()

    def go(node, pos):
        key = (id(node), pos)
        if key in seen:
            return
        seen.add(key)
        if node.is_leaf:
            assert pos in node.answer, f"position {pos} escapes leaf {node.answer}"
            return
        child = node.child(1 if pos in node.test else 0)
        for nxt in neighborhood(space, PositionSet.from_members([pos])):
            go(child, nxt)

    for start in range(1, space.num_vertices + 1):
        go(strategy.root, start)


def branch_sizes(strategy):
    """Candidate-set size per round along every root-to-leaf path."""
    space = strategy.space
    out = []
    for bits, _ in strategy.leaves():
        d = full_set(space)
        sizes = []
        tests, _ = strategy.replay(bits)
        for t, y in zip(tests, bits):
            d = update(space, d, t, y)
            sizes.append(len(d))
        out.append((bits, sizes))
    return out
