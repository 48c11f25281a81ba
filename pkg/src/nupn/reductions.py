"""Inhibitor nets and reset nets, with their simulations by name nets.

Both translations double every place ``p`` with a control place ``p_bar``
holding one name, the current identity of ``p``. Ordinary arcs on ``p``
move tokens carrying that identity and read it back into ``p_bar``. A
zero test (inhibitor) or a reset on ``p`` swaps the identity for a fresh
name, turning every token left in ``p`` into garbage that no transition
can ever consume again.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .net import DOT, Marking, NuNet


def _norm(m: Mapping[str, int]) -> dict:
    return {p: k for p, k in m.items() if k}


@dataclass(frozen=True)
class _SourceNet:
    places: tuple
    transitions: tuple
    flow: Mapping = field(default_factory=dict)  # (src, dst) -> weight

    def __post_init__(self):
        object.__setattr__(self, "places", tuple(self.places))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        if not isinstance(self.flow, Mapping):
            object.__setattr__(self, "flow", {arc: 1 for arc in self.flow})
        if set(self.places) & set(self.transitions):
            raise ValueError("places and transitions must be disjoint")
        for (src, dst), w in self.flow.items():
            ok = ((src in self.places and dst in self.transitions)
                  or (src in self.transitions and dst in self.places))
            if not ok or w < 1:
                raise ValueError(f"bad flow arc {src} -> {dst}")

    def pre(self, t) -> dict:
        return {p: self.flow[p, t] for p in self.places if (p, t) in self.flow}

    def post(self, t) -> dict:
        return {p: self.flow[t, p] for p in self.places if (t, p) in self.flow}

    def refreshed(self, t) -> set:
        raise NotImplementedError

    def key(self, m: Mapping[str, int]) -> tuple:
        return tuple(m.get(p, 0) for p in self.places)

    def unkey(self, v: tuple) -> dict:
        return {p: k for p, k in zip(self.places, v) if k}


@dataclass(frozen=True)
class InhibitorNet(_SourceNet):
    inhibitors: frozenset = frozenset()

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "inhibitors", frozenset(self.inhibitors))
        for p, t in self.inhibitors:
            if p not in self.places or t not in self.transitions:
                raise ValueError(f"bad inhibitor arc {p} -> {t}")

    def refreshed(self, t) -> set:
        return {p for p, u in self.inhibitors if u == t}

    def fire(self, m, t):
        return fire_inhibitor(self, m, t)


@dataclass(frozen=True)
class ResetNet(_SourceNet):
    resets: frozenset = frozenset()

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "resets", frozenset(self.resets))
        for p, t in self.resets:
            if p not in self.places or t not in self.transitions:
                raise ValueError(f"bad reset arc {p} -> {t}")
            if (t, p) in self.flow:
                raise ValueError(f"reset place {p} is also an output of {t}")

    def refreshed(self, t) -> set:
        return {p for p, u in self.resets if u == t}

    def fire(self, m, t):
        return fire_reset(self, m, t)


def fire_inhibitor(net: InhibitorNet, m: Mapping[str, int], t: str) -> dict | None:
    """Fire ``t`` if its inputs are marked and its inhibiting places empty; else None."""
    pre = net.pre(t)
    if any(m.get(p, 0) < w for p, w in pre.items()):
        return None
    if any(m.get(p, 0) for p in net.refreshed(t)):
        return None
    out = dict(m)
    for p, w in pre.items():
        out[p] -= w
    for p, w in net.post(t).items():
        out[p] = out.get(p, 0) + w
    return _norm(out)


def fire_reset(net: ResetNet, m: Mapping[str, int], t: str) -> dict | None:
    """Fire ``t`` if its inputs are marked, emptying its reset places; else None."""
    pre = net.pre(t)
    if any(m.get(p, 0) < w for p, w in pre.items()):
        return None
    out = dict(m)
    for p, w in pre.items():
        out[p] -= w
    for p in net.refreshed(t):
        out[p] = 0
    for p, w in net.post(t).items():
        out[p] = out.get(p, 0) + w
    return _norm(out)


# -- translation ---------------------------------------------------------------

def bar(p: str) -> str:
    return f"{p}_bar"


@dataclass(frozen=True)
class Translation:
    """A source net, its name-net image, and the identity name of each source place."""

    source: _SourceNet
    net: NuNet
    initial: Marking
    table: Mapping  # source place -> initial identity name

    def __iter__(self):
        return iter((self.net, self.initial))

    def marking(self, m: Mapping[str, int]) -> Marking:
        """The image of source marking ``m`` under the initial identity names."""
        content = {}
        for p in self.source.places:
            a = self.table[p]
            content[bar(p)] = [a]
            if m.get(p, 0):
                content[p] = [a] * m[p]
        return self.net.marking(content)

    def project(self, m: Marking) -> dict:
        """The source marking an image marking simulates: per place, copies of its identity."""
        out = {}
        for p in self.source.places:
            ids = m.tokens[self.net.place_index[bar(p)]]
            if len(ids) != 1:
                raise ValueError(f"{bar(p)} must hold exactly one name")
            k = m.tokens[self.net.place_index[p]].count(ids[0])
            if k:
                out[p] = k
        return out

    def garbage(self, m: Marking) -> int:
        """Number of tokens not carrying their place's identity."""
        total = 0
        for p in self.source.places:
            ident = m.tokens[self.net.place_index[bar(p)]]
            bag = m.tokens[self.net.place_index[p]]
            total += sum(1 for a in bag if a not in ident)
        return total

    def clean(self, m: Marking) -> bool:
        """True when every token carries its place's identity."""
        return self.garbage(m) == 0


def _translate(source: _SourceNet, m0: Mapping[str, int]) -> Translation:
    # identities 1, 2, ... in place order; 0 stays the black token
    table = {p: i + 1 for i, p in enumerate(source.places)}
    assert DOT not in table.values()
    arcs = {}
    for t in source.transitions:
        pre, post, fresh = source.pre(t), source.post(t), source.refreshed(t)
        for p in source.places:
            x, nu = f"x_{p}", f"nu_{p}"
            touched = p in pre or p in post or p in fresh
            if p in pre:
                arcs[p, t] = (x,) * pre[p]
            if touched:
                arcs[bar(p), t] = (x,)
                arcs[t, bar(p)] = (nu,) if p in fresh else (x,)
            if p in post:
                # only inhibitor nets can produce into a place they just tested empty
                arcs[t, p] = ((nu,) if p in fresh else (x,)) * post[p]
    places = source.places + tuple(bar(p) for p in source.places)
    net = NuNet(places, source.transitions, arcs)
    tr = Translation(source, net, net.empty_marking(), table)
    return Translation(source, net, tr.marking(m0), table)


def inhibitor_to_nu(net: InhibitorNet, m0: Mapping[str, int]) -> Translation:
    """Name-net simulation of an inhibitor net (reachability is preserved up to renaming)."""
    return _translate(net, m0)


def reset_to_nu(net: ResetNet, m0: Mapping[str, int]) -> Translation:
    """Name-net simulation of a reset net (termination and coverability are preserved)."""
    return _translate(net, m0)


def _check_instance(net, translation):
    if translation.source is not net and translation.source != net:
        raise ValueError("translation belongs to a different source net")


def inhibitor_marking(net: InhibitorNet, m: Mapping[str, int], translation: Translation) -> Marking:
    _check_instance(net, translation)
    return translation.marking(m)


def reset_marking(net: ResetNet, m: Mapping[str, int], translation: Translation) -> Marking:
    _check_instance(net, translation)
    return translation.marking(m)


# -- exhaustive source exploration ---------------------------------------------

@dataclass(frozen=True)
class SourceSpace:
    states: dict  # state key -> (parent key, transition)
    complete: bool

    def reachable(self) -> list:
        return list(self.states)


def explore_source(net: _SourceNet, m0: Mapping[str, int], max_states: int = 10_000) -> SourceSpace:
    """Breadth-first reachability set of a source net, as place-count tuples."""
    start = net.key(m0)
    states = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        m = net.unkey(v)
        for t in net.transitions:
            m2 = net.fire(m, t)
            if m2 is None:
                continue
            w = net.key(m2)
            if w not in states:
                if len(states) >= max_states:
                    return SourceSpace(states, False)
                states[w] = (v, t)
                queue.append(w)
    return SourceSpace(states, True)


def source_terminates(net: _SourceNet, m0: Mapping[str, int], max_nodes: int = 100_000) -> bool | None:
    """Termination of a source net by its finite reachability tree.

    Reset and inhibitor semantics are monotone for the pointwise order only
    when no inhibitor arcs are present; for inhibitor nets this is a search
    for repeated states, exact only when the state space is finite. Returns
    None when the budget is exhausted.
    """
    monotone = isinstance(net, ResetNet)
    start = net.key(m0)
    stack = [(start, (start,))]
    count = 0
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
            for u in path:
                if u == w or (monotone and all(a <= b for a, b in zip(u, w))):
                    return False
            stack.append((w, path + (w,)))
    return True
