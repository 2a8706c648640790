import itertools
import random

import pytest

from movingsearch.adaptive import (
    cycle_capacity,
    cycle_strategy,
    path_capacity,
    path_shifting_strategy,
    path_strategy,
)
from movingsearch.adversary import (
    CounterCertificate,
    Transcript,
    greedy_adversary,
    greedy_forced_size,
    margin_adversary,
    margin_forced_size,
    margin_start,
    matrix_counter,
    window_adversary,
    window_step,
)
from movingsearch.nonadaptive import TestMatrix, evaluate_matrix, expanding_accuracy_matrix
from movingsearch.spaces import (
    PositionSet,
    consistent_walk_exists,
    cycle,
    enumerate_interval_tests,
    full_set,
    is_valid_walk,
    path,
    update,
)

P = PositionSet.parse


def minimax_final_size(space, rounds, test_class="intervals"):
    """Independent re-derivation: best forced final size over ALL adversaries."""
    if test_class == "intervals":
        tests = enumerate_interval_tests(space)
    else:
        n = space.num_vertices
        tests = [
            PositionSet.from_members(v + 1 for v in range(n) if m >> v & 1)
            for m in range(1, (1 << n) - 1)
        ]
    memo = {}

    def go(d, left):
        if left == 0:
            return len(d)
        key = (d, left)
        if key in memo:
            return memo[key]
        best = go(update(space, d, PositionSet.empty(), 0), left - 1)
        seen = set()
        for t in tests:
            e1 = d & t
            if not e1 or e1 == d or e1 in seen:
                continue
            seen.add(e1)
            worst = max(
                go(update(space, d, t, y), left - 1) for y in (0, 1)
            )
            best = min(best, worst)
        memo[key] = best
        return best

    return go(full_set(space), rounds)


# -- greedy ---------------------------------------------------------------------


def test_greedy_single_round_bounds():
    assert greedy_forced_size(cycle(9, 1), 1) >= 6
    assert greedy_forced_size(path(7, 1), 1, test_class="all_subsets") >= 5


def test_greedy_no_rounds_transcript():
    tr = greedy_adversary(path(5, 1), [], rounds=0)
    assert tr.rounds == () and tr.final_candidates == P("1-5")


def test_greedy_ties_answer_zero():
    tr = greedy_adversary(path(8, 1), [P("1-4")], rounds=1)
    assert tr.answers() == [0]
    assert tr.final_candidates == P("4-8")


def test_greedy_transcripts_are_realizable():
    st = cycle_strategy(12, 5, 1)
    tr = greedy_adversary(tr_space := st.space, st)
    for i in range(1, len(tr.rounds) + 1):
        walk = consistent_walk_exists(tr_space, tr.tests()[:i], tr.answers()[:i])
        assert walk is not None and is_valid_walk(tr_space, walk)


@pytest.mark.parametrize(
    "space", [path(7, 1), path(9, 1), cycle(7, 1), cycle(9, 1)]
)
def test_greedy_matches_interval_minimax_small(space):
    for rounds in (1, 2, 3):
        greedy = greedy_forced_size(space, rounds)
        exact = minimax_final_size(space, rounds)
        assert greedy == exact


def test_greedy_never_exceeds_true_adversary_value():
    for space in (path(6, 1), cycle(6, 1), path(7, 1)):
        for rounds in (1, 2):
            greedy = greedy_forced_size(space, rounds, test_class="all_subsets")
            exact = minimax_final_size(space, rounds, test_class="all_subsets")
            assert greedy <= exact


def test_greedy_refutes_above_cycle_capacity():
    for n, s in itertools.product((1, 2, 3), (5, 6)):
        over = cycle_capacity(n, s, 1) + 1
        assert greedy_forced_size(cycle(over, 1), n) >= s + 1


# -- window adversary -------------------------------------------------------------


def test_window_against_shifting_strategy():
    tr = window_adversary(path(5, 1), path_shifting_strategy(5, 1))
    assert all(len(r.candidates) >= 4 for r in tr.rounds)
    assert all(len(r.tracked) == 4 and r.tracked.issubset(r.candidates) for r in tr.rounds)


def test_window_static_under_empty_tests():
    k = 2
    tr = window_adversary(path(4 * k + 1, k), [PositionSet.empty()] * 4)
    assert all(r.tracked == P("1-7") for r in tr.rounds)
    assert all(r.answer == 0 for r in tr.rounds)


def test_window_survives_every_depth3_interval_strategy():
    # adaptively sweep every interval-test choice; the window must always survive
    space = path(9, 2)
    tests = enumerate_interval_tests(space)
    seen = set()

    def sweep(window, d, depth):
        key = (window, d, depth)
        if key in seen:
            return
        seen.add(key)
        assert len(d) >= 7 and window.issubset(d)
        if depth == 0:
            return
        for t in tests:
            answer, new_window = window_step(space, window, t)
            sweep(new_window, update(space, d, t, answer), depth - 1)

    sweep(P("1-7"), full_set(space), 3)


def test_window_transcripts_realizable():
    st = path_strategy(10, 4, 1)
    tr = window_adversary(st.space, st)
    walk = consistent_walk_exists(st.space, tr.tests(), tr.answers())
    assert walk is not None and is_valid_walk(st.space, walk)
    assert all(len(r.candidates) >= 4 for r in tr.rounds)


def test_window_rejects_wrong_arena():
    with pytest.raises(ValueError):
        window_adversary(cycle(9, 1), [])
    with pytest.raises(ValueError):
        window_adversary(path(4, 1), [])


# -- margin adversary ---------------------------------------------------------------


def test_margin_critical_instance_k1():
    # one vertex above the 2-test capacity at accuracy 4
    n, s, k = 2, 4, 1
    n_vertices = path_capacity(n, s, k) + 1
    assert n_vertices == 9
    assert margin_forced_size(path(n_vertices, k), n, s) >= s + 1


def test_margin_single_test_all_subsets():
    n_vertices = path_capacity(1, 5, 1) + 1
    assert n_vertices == 9
    assert margin_forced_size(path(n_vertices, 1), 1, 5, test_class="all_subsets") >= 6


def test_margin_zero_tests():
    sp = path(4 * 1 + 1, 1)
    tr = margin_adversary(sp, [], 0, 4)
    assert tr.rounds == ()
    assert len(tr.final_candidates) == 5  # s + 1 immediately
    assert margin_start(sp, 0, 4) == P("1-5")


def test_margin_invariants_along_transcript():
    n, s, k = 2, 4, 1
    sp = path(path_capacity(n, s, k) + 1, k)
    strategy = path_strategy(sp.num_vertices, s, k)  # uses n+1 tests; first n rounds matter
    tr = margin_adversary(sp, strategy, n, s)
    for i, r in enumerate(tr.rounds, start=1):
        a = r.tracked
        assert len(a) >= (1 << (n - i)) * (s - 4 * k) + 4 * k + 1
        assert a.min_value() >= k * (n - i) + 1
        assert a.max_value() <= sp.num_vertices - k * (n - i)
        assert a.issubset(r.candidates)
    assert len(tr.final_candidates) >= s + 1


def test_margin_transcripts_realizable():
    sp = path(9, 1)
    tr = margin_adversary(sp, path_strategy(9, 4, 1), 2, 4)
    walk = consistent_walk_exists(sp, tr.tests(), tr.answers())
    assert walk is not None and is_valid_walk(sp, walk)


# -- counter-strategy against matrices -------------------------------------------------


def certificate_is_valid(space, matrix, cert: CounterCertificate):
    tests = list(matrix.tests())
    for walk in cert.walks:
        assert is_valid_walk(space, walk)
        assert len(walk) == matrix.rows + 1
        for pos, t, y in zip(walk, tests, cert.answers):
            assert (pos in t) == bool(y)
        assert walk[-1] in cert.final_candidates
    d = full_set(space)
    for t, y in zip(tests, cert.answers):
        d = update(space, d, t, y)
    assert d == cert.final_candidates


def test_counter_on_reference_matrix_is_tight():
    sp = path(16, 1)
    m = expanding_accuracy_matrix(16)
    cert = matrix_counter(sp, m)
    assert cert.forced_accuracy == 4
    certificate_is_valid(sp, m, cert)


def test_counter_constant_middle_forces_extra():
    sp = path(7, 1)
    m = TestMatrix(((1, 0, 1, 0, 1, 0, 1), (0, 0, 0, 0, 0, 0, 0)))
    cert = matrix_counter(sp, m)
    assert cert.forced_accuracy >= 5  # 4k + 1
    certificate_is_valid(sp, m, cert)


def test_counter_refutes_random_matrices_claiming_small_accuracy():
    rng = random.Random(7)
    sp = path(7, 1)
    for _ in range(50):
        bits = tuple(tuple(rng.randint(0, 1) for _ in range(7)) for _ in range(3))
        m = TestMatrix(bits)
        cert = matrix_counter(sp, m)
        assert cert.forced_accuracy >= 4
        certificate_is_valid(sp, m, cert)
        assert not evaluate_matrix(sp, m, 3).success


def test_counter_mirrored_flip_and_k2():
    rng = random.Random(11)
    sp = path(14, 2)
    for _ in range(40):
        bits = tuple(tuple(rng.randint(0, 1) for _ in range(14)) for _ in range(rng.randint(1, 4)))
        m = TestMatrix(bits)
        cert = matrix_counter(sp, m)
        assert cert.forced_accuracy >= 8
        certificate_is_valid(sp, m, cert)


def test_counter_preconditions():
    with pytest.raises(ValueError):
        matrix_counter(path(12, 2), TestMatrix(((0,) * 12,)))  # N <= 6k
    with pytest.raises(ValueError):
        matrix_counter(cycle(8, 1), TestMatrix(((0,) * 8,)))


# -- transcripts ------------------------------------------------------------------------


def test_transcript_serialization():
    st = cycle_strategy(8, 5, 1)
    tr = greedy_adversary(st.space, st)
    text = tr.serialize()
    assert text.splitlines()[0] == "round=0 test=- answer=- D=1-8"
    for i, r in enumerate(tr.rounds, start=1):
        assert f"round={i} " in text
