"""Brute-force reference implementations and random instance generators.

Nothing here uses the matching kernels or canonical forms, so agreement
with the package is independent evidence.
"""

import itertools
import random
from collections import Counter

from nupn import NuNet, enabled_firings, fire
from nupn.net import Marking
from nupn.reductions import InhibitorNet, ResetNet, explore_source


# -- renamings -------------------------------------------------------------------

def rename(m: Marking, iota) -> Marking:
    return Marking(tuple(tuple(sorted(iota.get(a, a) for a in bag)) for bag in m.tokens))


def _included(m1, m2, iota):
    for b1, b2 in zip(m1.tokens, m2.tokens):
        c2 = Counter(b2)
        for a, k in Counter(b1).items():
            if c2[iota[a]] < k:
                return False
    return True


def brute_equiv(m1: Marking, m2: Marking) -> bool:
    n1, n2 = sorted(m1.names()), sorted(m2.names())
    if len(n1) != len(n2):
        return False
    for perm in itertools.permutations(n2):
        iota = dict(zip(n1, perm))
        if rename(m1, iota) == m2:
            return True
    return False


def brute_leq(m1: Marking, m2: Marking) -> bool:
    n1, n2 = sorted(m1.names()), sorted(m2.names())
    for image in itertools.permutations(n2, len(n1)):
        if _included(m1, m2, dict(zip(n1, image))):
            return True
    return False


def witness_ok(m1: Marking, m2: Marking, iota) -> bool:
    """Is ``iota`` an injection of Id(m1) under which m1 is included in m2?"""
    names = m1.names()
    if not names <= set(iota) or len({iota[a] for a in names}) != len(names):
        return False
    return _included(m1, m2, iota)


# -- random markings and nets --------------------------------------------------

def random_marking(rng: random.Random, nplaces: int, max_names=5, max_count=3, min_names=0):
    k = rng.randint(min_names, max_names)
    names = rng.sample(range(1, 12), k)
    bags = [[] for _ in range(nplaces)]
    for a in names:
        for p in range(nplaces):
            if rng.random() < 0.6:
                bags[p].extend([a] * rng.randint(1, max_count))
    return Marking(tuple(tuple(sorted(b)) for b in bags))


def random_bijection(rng, m: Marking):
    names = sorted(m.names())
    image = rng.sample(range(1, 40), len(names))
    return dict(zip(names, image))


def random_nunet(rng: random.Random, nplaces=3, ntrans=2, arc_prob=0.5, max_label=2,
                 fresh_prob=0.3) -> NuNet:
    """A valid name net: outputs use input variables or fresh ones."""
    places = [f"p{i}" for i in range(nplaces)]
    trans = [f"t{i}" for i in range(ntrans)]
    arcs = {}
    for t in trans:
        plain = ["x", "y"]
        used = set()
        for p in places:
            if rng.random() < arc_prob:
                label = [rng.choice(plain) for _ in range(rng.randint(1, max_label))]
                arcs[p, t] = label
                used.update(label)
        for p in places:
            if rng.random() < arc_prob:
                pool = sorted(used) + (["nu"] if rng.random() < fresh_prob else [])
                if not pool:
                    pool = ["nu"]
                arcs[t, p] = [rng.choice(pool) for _ in range(rng.randint(1, max_label))]
    return NuNet(places, trans, arcs)


def random_source(rng: random.Random, kind, nplaces=None, ntrans=None):
    nplaces = nplaces or rng.randint(2, 4)
    ntrans = ntrans or rng.randint(1, 3)
    places = [f"s{i}" for i in range(nplaces)]
    trans = [f"u{i}" for i in range(ntrans)]
    flow = {}
    special = set()
    for t in trans:
        for p in places:
            r = rng.random()
            if r < 0.35:
                flow[p, t] = 1
            elif r < 0.45:
                special.add((p, t))
        for p in places:
            if rng.random() < 0.3 and (kind is InhibitorNet or (p, t) not in special):
                flow[t, p] = rng.choice([1, 1, 2])
    m0 = {p: rng.randint(0, 2) for p in places}
    if kind is ResetNet:
        return ResetNet(places, trans, flow, resets=special), m0
    return InhibitorNet(places, trans, flow, inhibitors=special), m0


# -- brute-force pred basis ---------------------------------------------------------

def canonical_markings(nplaces: int, bound: int):
    """One concrete marking per renaming class with at most ``bound`` tokens."""
    vectors = []
    for total in range(1, bound + 1):
        for combo in itertools.combinations_with_replacement(range(nplaces), total):
            vectors.append(tuple(Counter(combo).get(p, 0) for p in range(nplaces)))
    vectors = sorted(set(vectors))

    def rec(start, left, acc):
        yield list(acc)
        for i in range(start, len(vectors)):
            v = vectors[i]
            if sum(v) <= left:
                acc.append(v)
                yield from rec(i, left - sum(v), acc)
                acc.pop()

    for profiles in rec(0, bound, []):
        bags = [[] for _ in range(nplaces)]
        for a, v in enumerate(profiles, start=1):
            for p, k in enumerate(v):
                bags[p].extend([a] * k)
        yield Marking(tuple(tuple(b) for b in bags))


def is_predecessor(net: NuNet, mm: Marking, target: Marking) -> bool:
    """Does some single firing from ``mm`` reach a marking above ``target``?"""
    for f in enabled_firings(net, mm):
        if brute_leq(target, fire(net, mm, f.transition, f.sigma)):
            return True
    return False


# -- source-net oracles -------------------------------------------------------------

def source_covers(net, m0, target, max_states=10_000):
    space = explore_source(net, m0, max_states)
    assert space.complete
    want = net.key(target)
    return any(all(a >= b for a, b in zip(v, want)) for v in space.states)


def source_reachable(net, m0, target, max_states=10_000):
    space = explore_source(net, m0, max_states)
    assert space.complete
    return net.key(target) in space.states


def source_pump(net, m0, max_nodes=20_000):
    """A reset-free segment strictly increasing the marking, proving unboundedness.

    Returns True when found, None when the budget runs out first.
    """
    resetting = {t for t in net.transitions if net.refreshed(t)}
    start = net.key(m0)
    stack = [(start, ((start, False),))]
    count = 0
    seen = set()
    while stack:
        v, path = stack.pop()
        count += 1
        if count > max_nodes:
            return None
        m = net.unkey(v)
        for t in net.transitions:
            m2 = net.fire(m, t)
            if m2 is None:
                continue
            w = net.key(m2)
            # path entries remember whether a reset fired after them
            for u, dirty in path:
                if not dirty and u != w and all(a <= b for a, b in zip(u, w)) and t not in resetting:
                    return True
            if (w, path[-1][0]) in seen:
                continue
            seen.add((w, path[-1][0]))
            step = tuple((u, d or t in resetting) for u, d in path)
            if len(step) < 30:
                stack.append((w, step + ((w, False),)))
    return None
