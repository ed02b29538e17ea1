import random

import pytest

from topocycles.cyclespace import reconstruct_from_chords
from topocycles.graphs import FiniteGraph, OrientedEdge, builtin
from topocycles.spanning import chord_index, comb_tree, dfs_tree, fundamental_circuit, normal_spanning_tree
from topocycles.traces import (
    Walk,
    WalkError,
    abelianize,
    circuit_walk,
    euler_tour,
    homotopy_variants,
    net_traversal,
    pass_counts,
    random_walk,
    realize_as_loop,
    rho_walk,
    trace,
    tree_walk,
)
from topocycles.words import ChordRay, Letter, parse_word, reduce

LADDER = builtin("ladder")


def test_fig1_trace():
    for n in range(1, 8):
        t = comb_tree(LADDER, n + 1)
        idx = chord_index(t)
        out = [OrientedEdge(f"e{i}") for i in range(n + 1)]
        walk = Walk.from_steps(t.host, "v0", out + [oe.reverse() for oe in reversed(out)])
        tr = trace(walk, t, idx)
        assert tr == tuple(Letter(i) for i in range(n + 1)) + tuple(Letter(i, False) for i in range(n, -1, -1))
        assert reduce(tr) == ()


def test_trace_small_cases():
    t = normal_spanning_tree(LADDER, 3)
    idx = chord_index(t)
    assert trace(tree_walk(t, "v0", "v3"), t, idx) == ()
    e = t.host.edge(idx[1])
    assert trace(Walk.from_steps(t.host, e.tail, [OrientedEdge(e.id)]), t, idx) == (Letter(1),)


def test_trace_rejects_unindexed_edges():
    t = normal_spanning_tree(LADDER, 3)
    short = chord_index(normal_spanning_tree(LADDER, 1))
    walk = Walk.from_steps(t.host, "v2", [OrientedEdge("e2")])
    with pytest.raises(WalkError):
        trace(walk, t, short)


def test_walk_validation():
    g = LADDER.ball(2)
    with pytest.raises(WalkError):
        Walk.from_steps(g, "v0", [OrientedEdge("e1")])
    with pytest.raises(WalkError):
        Walk.from_steps(g, "v0", [OrientedEdge("nope")])


def test_euler_tour_examples():
    g = FiniteGraph.build(["r", "v"], [("x", "r", "v")])
    tour = euler_tour(dfs_tree(g, "r"))
    assert tour.vertices == ("r", "v", "r")
    star = FiniteGraph.build(range(4), [(f"s{i}", 0, i) for i in range(1, 4)])
    assert len(euler_tour(dfs_tree(star, 0))) == 6
    t = normal_spanning_tree(LADDER, 4)
    counts = pass_counts(euler_tour(t))
    assert all(counts[e] == (1, 1) for e in t.tree_edges)


def test_net_traversal_two_ways():
    rng = random.Random(3)
    g = builtin("double_ladder").ball(3)
    for _ in range(50):
        walk = random_walk(g, "v0", 12, rng)
        by_steps = {}
        for oe in walk.steps:
            by_steps[oe.edge] = by_steps.get(oe.edge, 0) + (1 if oe.forward else -1)
        assert net_traversal(walk).values == {e: v for e, v in by_steps.items() if v}


def test_realize_as_loop_examples():
    fam = builtin("double_ladder")
    t = normal_spanning_tree(fam, 4)
    idx = chord_index(t)
    assert net_traversal(realize_as_loop({}, t, idx, fam, 4)).is_zero()
    walk = realize_as_loop({0: 1}, t, idx, fam, 4)
    assert net_traversal(walk) == fundamental_circuit(t, idx, 0)
    walk = realize_as_loop({1: -2}, t, idx, fam, 4)
    assert net_traversal(walk) == reconstruct_from_chords({1: -2}, t, idx)
    assert len(walk) == len(euler_tour(t)) + 2 * len(circuit_walk(t, idx, 1))
    far = max(range(len(idx)))
    with pytest.raises(WalkError):
        realize_as_loop({far: 1}, t, idx, fam, 4)


@pytest.mark.parametrize("name,ray", [("ladder", ChordRay(0, 1)), ("double_ladder", ChordRay(1, 2, "+"))])
def test_rho_walk_nets_zero(name, ray):
    fam = builtin(name)
    for depth in (4, 6, 9):
        t = normal_spanning_tree(fam, depth)
        idx = chord_index(t)
        walk, word = rho_walk(fam, t, idx, ray, depth)
        assert walk.closed
        assert net_traversal(walk).is_zero()
        tr = trace(walk, t, idx)
        half = len(tr) // 2
        assert tr[:half] == tuple(Letter(k) for k in range(ray.start, 99, ray.step))[:half]
        assert tr[half:] == tuple(a.inverse() for a in tr[:half])


def test_rho_walk_two_chords():
    # ball(2) of the ladder holds chords 0 and 1 only
    t = normal_spanning_tree(LADDER, 3)
    walk, _ = rho_walk(LADDER, t, chord_index(t), ChordRay(), 3)
    assert trace(walk, t, chord_index(t)) == parse_word("+0 +1 -0 -1")
    assert net_traversal(walk).is_zero()


def test_homotopy_variants_examples():
    t = normal_spanning_tree(LADDER, 4)
    idx = chord_index(t)
    walk = tree_walk(t, "v0", "v4")
    assert homotopy_variants(walk, t, seed=0, moves=0) == walk
    chord = t.host.edge(idx[0])
    at = walk.vertices.index(chord.tail)
    back = Walk.from_steps(t.host, chord.tail, [OrientedEdge(chord.id), OrientedEdge(chord.id, False)])
    bumped = walk.splice(at, back)
    assert trace(bumped, t, idx) == (Letter(0), Letter(0, False))
    assert reduce(trace(bumped, t, idx)) == reduce(trace(walk, t, idx)) == ()


def test_abelianize():
    assert abelianize(parse_word("+0 -0")) == {}
    t = normal_spanning_tree(LADDER, 4)
    idx = chord_index(t)
    assert abelianize(trace(circuit_walk(t, idx, 2), t, idx)) == {2: 1}
    a, b = parse_word("+0 +1"), parse_word("+1 -2")
    assert abelianize(a + b) == {0: 1, 1: 2, 2: -1}


def test_walk_json_round_trip():
    t = normal_spanning_tree(LADDER, 3)
    walk = euler_tour(t)
    assert Walk.from_json(t.host, walk.to_json()) == walk
