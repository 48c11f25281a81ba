import random

import pytest
from hypothesis import given, settings, strategies as st

from nupn import (DOT, Limits, NuNet, PTNet, ResourceExhausted, embed_pt, enabled_firings, fire,
                  replay)
from nupn.forward import bounded, measure, reach_set, reachable_alpha, terminates
from nupn.limits import (BOUNDED, EXHAUSTED, NON_TERMINATING, NOT_APPLICABLE, NOT_REACHABLE,
                         REACHABLE, TERMINATING, UNBOUNDED)
from nupn.net import successors
from nupn.order import canonicalize, embeds
from nupn.reductions import InhibitorNet, ResetNet, inhibitor_to_nu, reset_to_nu, source_terminates

from oracles import random_marking, random_nunet
from test_net import fig2_right, fig4_left, fig4_right

A, B = 1, 2


def cycle():
    pt = PTNet(("a", "b"), ("ab", "ba"), {("a", "ab"): 1, ("ab", "b"): 1,
                                          ("b", "ba"): 1, ("ba", "a"): 1})
    return embed_pt(pt, {"a": 1})


def deadlocked():
    net = NuNet(["p", "q"], ["t"], {("q", "t"): "x", ("t", "p"): "x"})
    return net, net.marking({"p": [A, A]})


def _check_pump(net, m0, res, strict):
    i, j = res.pump
    mi = replay(net, m0, res.witness[:i])
    mj = replay(net, m0, res.witness[:j])
    ci, cj = canonicalize(net, mi), canonicalize(net, mj)
    assert i < j and embeds(ci, cj)
    if strict:
        assert ci != cj


class TestTerminates:
    def test_deadlock(self):
        net, m0 = deadlocked()
        res = terminates(net, m0)
        assert res.verdict == TERMINATING and res.nodes == 1 and res.edges == 0

    @pytest.mark.parametrize("make, m0", [(fig4_left, {"p1": [A]}), (fig4_right, {"p1": [DOT]})])
    def test_fig4(self, make, m0):
        net = make()
        m0 = net.marking(m0)
        res = terminates(net, m0)
        assert res.verdict == NON_TERMINATING
        _check_pump(net, m0, res, strict=False)

    def test_cycle(self):
        net, m0 = cycle()
        res = terminates(net, m0)
        assert res.verdict == NON_TERMINATING
        _check_pump(net, m0, res, strict=False)

    def test_fig5_image(self):
        src = ResetNet(["p", "r", "q"], ["t"], {("p", "t"): 1, ("t", "q"): 1}, resets={("r", "t")})
        m0 = {"p": 2, "r": 2}
        tr = reset_to_nu(src, m0)
        assert source_terminates(src, m0) is True
        assert terminates(tr.net, tr.initial).verdict == TERMINATING

    def test_node_limit(self):
        pt = PTNet(("a", "b"), ("ab",), {("a", "ab"): 1, ("ab", "b"): 1})
        net, m0 = embed_pt(pt, {"a": 30})
        assert terminates(net, m0, Limits(max_nodes=5)).verdict == EXHAUSTED


class TestBounded:
    @pytest.mark.parametrize("make, m0", [(fig4_left, {"p1": [A]}), (fig4_right, {"p1": [DOT]})])
    def test_fig4(self, make, m0):
        net = make()
        m0 = net.marking(m0)
        res = bounded(net, m0)
        assert res.verdict == UNBOUNDED
        _check_pump(net, m0, res, strict=True)

    def test_cycle(self):
        net, m0 = cycle()
        res = bounded(net, m0)
        assert res.verdict == BOUNDED and res.nodes == 2

    def test_deadlock(self):
        assert bounded(*deadlocked()).verdict == BOUNDED

    def test_producer(self):
        net, m0 = embed_pt(PTNet(("p",), ("t",), {("t", "p"): 1}), {})
        assert bounded(net, m0).verdict == UNBOUNDED


class TestReachSet:
    def test_deadlock(self):
        net, m0 = deadlocked()
        assert reach_set(net, m0) == {canonicalize(net, m0)}

    def test_fig2_right(self):
        net = fig2_right()
        m0 = net.marking({"p0": [A], "p2": [B]})
        got = reach_set(net, m0)
        assert got == {canonicalize(net, m0),
                       canonicalize(net, net.marking({"p1": [A], "p3": [B]}))}

    def test_marked_graph(self):
        pt = PTNet(("a", "b", "c"), ("ab", "bc", "ca"),
                   {("a", "ab"): 1, ("ab", "b"): 1, ("b", "bc"): 1, ("bc", "c"): 1,
                    ("c", "ca"): 1, ("ca", "a"): 1})
        net, m0 = embed_pt(pt, {"a": 3})
        # three tokens on a three-place ring: C(5, 2) placements
        assert len(reach_set(net, m0)) == 10

    def test_exhaustion_raises(self):
        net = fig4_right()
        with pytest.raises(ResourceExhausted):
            reach_set(net, net.marking({"p1": [DOT]}), Limits(max_nodes=20))


class TestReachable:
    def test_initial(self):
        net, m0 = cycle()
        assert reachable_alpha(net, m0, m0).verdict == REACHABLE

    def test_unbounded_guard(self):
        net = fig4_left()
        m0 = net.marking({"p1": [A]})
        assert reachable_alpha(net, m0, m0).verdict == NOT_APPLICABLE

    def test_witness_replays(self):
        net, m0 = cycle()
        mf = net.marking({"b": [DOT]})
        res = reachable_alpha(net, m0, mf)
        assert res.verdict == REACHABLE and replay(net, m0, res.witness) == mf

    def test_fig3_image(self):
        src = InhibitorNet(["p", "r", "q"], ["t"], {("p", "t"): 1, ("t", "q"): 1},
                           inhibitors={("r", "t")})
        tr = inhibitor_to_nu(src, {"p": 2, "r": 2})
        for target in ({"p": 1, "r": 2, "q": 1}, {"q": 2, "r": 2}):
            res = reachable_alpha(tr.net, tr.initial, tr.marking(target), within=tr.clean)
            assert res.verdict == NOT_REACHABLE
        res = reachable_alpha(tr.net, tr.initial, tr.initial, within=tr.clean)
        assert res.verdict == REACHABLE

    def test_confinement_must_hold_initially(self):
        net, m0 = cycle()
        with pytest.raises(ValueError):
            reachable_alpha(net, m0, m0, within=lambda m: False)


class TestMeasure:
    def test_deadlock(self):
        res = measure(*deadlocked())
        assert (res.width, res.depth, res.exact) == (1, 2, True)

    def test_fig4_right(self):
        net = fig4_right()
        res = measure(net, net.marking({"p1": [DOT]}), 10)
        assert res.width >= 10 and res.depth == 1 and not res.exact

    def test_fig4_left(self):
        net = fig4_left()
        m0 = net.marking({"p1": [A]})
        small, large = measure(net, m0, 10), measure(net, m0, 20)
        assert small.width == large.width == 1
        assert small.depth < large.depth and not large.exact


def _case(seed):
    rng = random.Random(seed)
    nplaces = rng.randint(1, 3)
    net = random_nunet(rng, nplaces, rng.randint(1, 3), fresh_prob=0.2)
    return net, random_marking(rng, nplaces, max_names=3, max_count=2)


def _graph(net, m0, limit=100, max_width=10):
    nodes = {canonicalize(net, m0): m0}
    edges = {}
    frontier = [m0]
    while frontier:
        m = frontier.pop()
        c = canonicalize(net, m)
        edges[c] = set()
        for f in enabled_firings(net, m):
            m2 = fire(net, m, f.transition, f.sigma)
            c2 = canonicalize(net, m2)
            edges[c].add(c2)
            if c2 not in nodes:
                if c2.width > max_width:
                    return None
                nodes[c2] = m2
                frontier.append(m2)
                if len(nodes) > limit:
                    return None
    return edges


def _has_cycle(edges):
    state = {}

    def visit(u):
        state[u] = 1
        for v in edges[u]:
            if state.get(v) == 1 or (v not in state and visit(v)):
                return True
        state[u] = 2
        return False

    return any(u not in state and visit(u) for u in list(edges))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_verdicts_match_explicit_graph(seed):
    net, m0 = _case(seed)
    edges = _graph(net, m0)
    b = bounded(net, m0, Limits(max_nodes=4000))
    t = terminates(net, m0, Limits(max_nodes=4000))
    if b.verdict == UNBOUNDED:
        _check_pump(net, m0, b, strict=True)
    if t.verdict == NON_TERMINATING:
        _check_pump(net, m0, t, strict=False)
    if edges is None:
        return
    # a finite graph: bounded, and termination is acyclicity
    assert b.verdict == BOUNDED
    assert set(reach_set(net, m0)) == set(edges)
    assert (t.verdict == TERMINATING) == (not _has_cycle(edges))


def test_successors_stay_in_reach_set():
    net, m0 = cycle()
    reach = reach_set(net, m0)
    assert successors(net, m0) <= reach
