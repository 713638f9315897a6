import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlsgraph import (CyclicPath, EdgePath, PathError, concat_reduce, cyclic_equal,
                      cyclic_equal_unoriented, cyclically_reduce, format_path, is_reduced,
                      parse_path, path_length, path_loop_path_normal_form, random_graph,
                      reduce_path, shortest_path)
from mlsgraph.graphs import DirectedEdge
from mlsgraph.paths import cyclic_reduce_based


def P(g, text, at=None):
    return parse_path(g, text, at=at)


# -- construction and literals -----------------------------------------

def test_path_chaining_validated(theta):
    with pytest.raises(PathError):
        EdgePath(theta, 0, (DirectedEdge(0, False), DirectedEdge(1, False)))


def test_path_literal_roundtrip(theta):
    p = P(theta, "e0 e1^-1 e2")
    assert format_path(p) == "e0 e1^-1 e2"
    assert p.start == 0 and p.end == 1


def test_empty_literal_needs_base(theta):
    with pytest.raises(PathError):
        parse_path(theta, "")
    p = parse_path(theta, "", at=1)
    assert p.is_empty() and p.start == 1


# -- reduction ----------------------------------------------------------

def test_is_reduced_immediate_backtrack(theta):
    assert not is_reduced(P(theta, "e0 e0^-1"))


def test_is_reduced_distinct_edges(theta):
    assert is_reduced(P(theta, "e0 e1^-1"))


def test_empty_path_is_reduced(theta):
    assert is_reduced(EdgePath(theta, 0))


def test_reduce_single_cancellation(theta):
    assert format_path(reduce_path(P(theta, "e0 e0^-1 e1"))) == "e1"


def test_reduce_nested_cancellations(theta):
    assert format_path(reduce_path(P(theta, "e0 e1^-1 e1 e0^-1 e2"))) == "e2"


def test_reduce_fixed_point(theta):
    p = P(theta, "e0 e1^-1 e2")
    assert reduce_path(p) == p
    assert reduce_path(reduce_path(p)) == reduce_path(p)


def test_reduce_length_non_increasing(theta):
    p = P(theta, "e0 e1^-1 e1 e0^-1 e2")
    assert path_length(reduce_path(p)) <= path_length(p)
    assert reduce_path(p).support() <= p.support()


from helpers import insert_cancelling_pairs, random_reduced_path


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_reduction_uniqueness_under_reexpansion(seed):
    rng = random.Random(seed)
    g = random_graph(seed % 17, 2 + seed % 5, 1 + seed % 3, 5)
    p = random_reduced_path(rng, g, 12)
    blown = insert_cancelling_pairs(rng, p, rng.randint(0, 6))
    assert reduce_path(blown) == p


# -- cyclic reduction -----------------------------------------------------

def test_cyclically_reduce_theta_example(theta):
    loop = P(theta, "e0^-1 e2 e1^-1 e0", at=1)
    core, conjugator = cyclically_reduce(loop)
    assert format_path(conjugator) == "e0^-1"
    assert core is not None and path_length(core) == 5
    assert cyclic_equal(core, CyclicPath.from_steps(
        theta, P(theta, "e2 e1^-1").steps))


def test_cyclically_reduce_nullhomotopic(theta):
    core, conjugator = cyclically_reduce(P(theta, "e0 e0^-1"))
    assert core is None and conjugator.is_empty()


def test_cyclically_reduce_fixed_point(theta):
    loop = P(theta, "e0 e1^-1")
    core, conjugator = cyclically_reduce(loop)
    assert conjugator.is_empty()
    assert core is not None and core.steps == loop.steps


def test_cyclic_reduce_roundtrip(theta, dumbbell):
    rng = random.Random(3)
    for g in (theta, dumbbell):
        for _ in range(50):
            p = random_reduced_path(rng, g, 10)
            walk_back = shortest_path(g, p.end, p.start)
            loop = p.then(walk_back) if p.end != p.start else p
            based, conjugator = cyclic_reduce_based(loop)
            rebuilt = conjugator.then(based).then(conjugator.reverse())
            assert reduce_path(rebuilt) == reduce_path(loop)
            assert path_length(based) <= path_length(reduce_path(loop))


def test_cyclically_reduce_rejects_open_path(theta):
    with pytest.raises(PathError):
        cyclically_reduce(P(theta, "e0"))


# -- concatenation decomposition -----------------------------------------

def test_concat_reduce_full_cancellation(theta):
    d = concat_reduce(P(theta, "e0"), P(theta, "e0^-1 e1"))
    assert d.q1.is_empty()
    assert format_path(d.q2) == "e1"
    assert format_path(d.r) == "e0"


def test_concat_reduce_no_cancellation(theta):
    d = concat_reduce(P(theta, "e0"), P(theta, "e1^-1"))
    assert format_path(d.q1) == "e0" and format_path(d.q2) == "e1^-1"
    assert d.r.is_empty()


def test_concat_reduce_single_step(theta):
    p1 = P(theta, "e2 e0^-1")  # 0 -> 1 -> 0
    p2 = P(theta, "e0 e1^-1")  # 0 -> 1 -> 0
    d = concat_reduce(p1, p2)
    assert format_path(d.r) == "e0^-1"
    assert format_path(d.q1) == "e2" and format_path(d.q2) == "e1^-1"
    assert is_reduced(d.q1.then(d.q2))


def test_concat_reduce_roundtrip_random():
    rng = random.Random(11)
    for seed in range(40):
        g = random_graph(seed, 2 + seed % 5, 2, 4)
        p1 = random_reduced_path(rng, g, 8)
        p2 = random_reduced_path(rng, g, 8)
        if p1.end != p2.start:
            bridge = shortest_path(g, p1.end, p2.start)
            p1 = reduce_path(p1.then(bridge))
        d = concat_reduce(p1, p2)
        assert d.q1.then(d.r) == p1
        assert d.r.reverse().then(d.q2) == p2
        assert is_reduced(d.q1.then(d.q2))


def test_multiple_concat_stays_reduced():
    # Pairwise-reduced chains concatenate to a reduced path.
    rng = random.Random(7)
    for seed in range(30):
        g = random_graph(seed, 3 + seed % 4, 2, 4)
        chain = random_reduced_path(rng, g, 4)
        pieces = [chain]
        for _ in range(3):
            nxt = random_reduced_path(rng, g, 4)
            if nxt.start != pieces[-1].end or nxt.is_empty():
                continue
            if not is_reduced(pieces[-1].then(nxt)):
                continue
            pieces.append(nxt)
        total = pieces[0]
        for piece in pieces[1:]:
            total = total.then(piece)
        if all(is_reduced(a.then(b)) for a, b in zip(pieces, pieces[1:])):
            assert is_reduced(total)


# -- path-loop-path -------------------------------------------------------

def test_plp_empty_conjugator(theta):
    loop = CyclicPath.from_steps(theta, P(theta, "e0 e1^-1").steps)
    out = path_loop_path_normal_form(EdgePath(theta, 0), loop)
    assert out.start == 0 and not out.is_empty()


def test_plp_theta(theta):
    loop = CyclicPath.from_steps(theta, P(theta, "e0^-1 e1", at=1).steps)
    out = path_loop_path_normal_form(P(theta, "e0"), loop)
    assert 1 in out.vertices()
    assert out.start == 0 and out.is_closed()


def test_plp_dumbbell_begins_with_path(dumbbell):
    loop = CyclicPath.from_steps(dumbbell, P(dumbbell, "e1", at=1).steps)
    p = P(dumbbell, "e2")
    out = path_loop_path_normal_form(p, loop)
    assert format_path(out) == "e2 e1 e2^-1"
    assert out.steps[: len(p.steps)] == p.steps or \
        out.steps[-len(p.steps):] == p.reverse().steps


def test_plp_requires_content(theta):
    with pytest.raises(PathError):
        path_loop_path_normal_form(P(theta, "e0"),
                                   CyclicPath(theta, ()))


# -- cyclic equality -------------------------------------------------------

def test_cyclic_equal_rotation(theta):
    a = CyclicPath.from_steps(theta, P(theta, "e2 e1^-1").steps)
    b = CyclicPath.from_steps(theta, P(theta, "e1^-1 e2", at=1).steps)
    assert cyclic_equal(a, b)


def test_cyclic_equal_orientation(theta):
    a = CyclicPath.from_steps(theta, P(theta, "e2 e1^-1").steps)
    b = CyclicPath.from_steps(theta, P(theta, "e1 e2^-1").steps)
    assert not cyclic_equal(a, b)
    assert cyclic_equal_unoriented(a, b)


def test_cyclic_equal_different_support(theta):
    a = CyclicPath.from_steps(theta, P(theta, "e2 e1^-1").steps)
    b = CyclicPath.from_steps(theta, P(theta, "e2 e0^-1").steps)
    assert not cyclic_equal(a, b)
    assert not cyclic_equal_unoriented(a, b)


# -- shortest paths ---------------------------------------------------------

def test_shortest_path_theta(theta):
    p = shortest_path(theta, 0, 1)
    assert format_path(p) == "e0"
    assert path_length(p) == 1


def test_shortest_path_identity(theta):
    p = shortest_path(theta, 1, 1)
    assert p.is_empty() and path_length(p) == 0


def test_shortest_path_dumbbell(dumbbell):
    assert format_path(shortest_path(dumbbell, 0, 1)) == "e2"


def test_shortest_path_is_reduced_and_lex_least():
    g = random_graph(9, 6, 3, 3)
    for u in g.vertex_ids:
        for v in g.vertex_ids:
            p = shortest_path(g, u, v)
            assert is_reduced(p)


def test_shortest_path_deterministic_on_ties():
    # Two parallel edges of equal length: the least edge id wins.
    g = random_graph(1, 2, 0, 5)
    eid = next(iter(g.edge_ids))
    from mlsgraph import MetricGraph
    g2 = MetricGraph([0, 1], [(0, 0, 1, 2), (1, 0, 1, 2)])
    assert format_path(shortest_path(g2, 0, 1)) == "e0"
