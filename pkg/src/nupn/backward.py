"""Backward coverability: minimal predecessor bases and their saturation."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from .invariants import InvariantBound
from .limits import COVERABLE, EXHAUSTED, NOT_COVERABLE, Limits
from .net import Firing, Marking, NuNet, _check_mode, require_valid
from .order import Antichain, canonicalize, leq_alpha, minor_set
from .witness import ReplayError, concretize


@dataclass(frozen=True)
class PredBasisEntry:
    marking: Marking
    via: Firing
    target_min: Marking


@dataclass(frozen=True)
class CoverResult:
    verdict: str
    witness: tuple | None = None
    basis_size: int = 0
    iterations: int = 0
    basis: tuple = field(default=(), compare=False, repr=False)


def _instantiate(net: NuNet, arcs, sigma) -> list[Counter]:
    bags = [Counter() for _ in net.places]
    for i, label in arcs:
        for v, k in label.items():
            bags[i][sigma[v]] += k
    return bags


def min_t_sigma(net: NuNet, m: Marking, t: str, sigma) -> Marking:
    """Least marking above ``m`` that ``t`` can produce with ``sigma``: ``m`` joined with the output."""
    _check_mode(net, t, sigma)
    out = _instantiate(net, net.info(t).post, sigma)
    return Marking(tuple(tuple(sorted((Counter(bag) | o).elements()))
                         for bag, o in zip(m.tokens, out)))


def pred_of_min(net: NuNet, m: Marking, t: str, sigma) -> Marking | None:
    """The predecessor of ``min_t_sigma(m)`` under ``(t, sigma)``, if the firing is legal there.

    None when a fresh variable's name would still be present in the
    predecessor, which would make the firing illegal.
    """
    info = net.info(t)
    top = min_t_sigma(net, m, t, sigma)
    out = _instantiate(net, info.post, sigma)
    inp = _instantiate(net, info.pre, sigma)
    bags = [Counter(bag) for bag in top.tokens]
    for bag, o, i in zip(bags, out, inp):
        bag.subtract(o)
        bag.update(i)
    pred = Marking(tuple(tuple(sorted(b.elements())) for b in bags))
    if info.fresh:
        present = pred.names()
        if any(sigma[v] in present for v in info.fresh):
            return None
    return pred


def _modes(variables, names, pool):
    """Injective assignments into ``names`` plus ``pool``, pool names taken in order.

    Pool names are interchangeable, so using them only in first-use order
    yields one mode per renaming class.
    """
    assign = {}

    def rec(i, used, npool):
        if i == len(variables):
            yield dict(assign)
            return
        v = variables[i]
        for a in names:
            if a not in used:
                assign[v] = a
                used.add(a)
                yield from rec(i + 1, used, npool)
                used.discard(a)
        if npool < len(pool):
            assign[v] = pool[npool]
            yield from rec(i + 1, used, npool + 1)
        assign.pop(v, None)

    yield from rec(0, set(), 0)


def _pred_fast(info, bags, m, sigma):
    """``pred_of_min`` for a checked mode, touching only the places of the transition."""
    touched = {}
    for i, label in info.post:
        have = bags[i]
        new = touched.setdefault(i, Counter(have))
        for v, k in label.items():
            a = sigma[v]
            # join with the output, then remove it: max(m - o, 0)
            new[a] = max(have[a] - k, 0)
    for i, label in info.pre:
        new = touched.setdefault(i, Counter(bags[i]))
        for v, k in label.items():
            new[sigma[v]] += k
    tokens = list(m.tokens)
    for i, bag in touched.items():
        tokens[i] = tuple(sorted(bag.elements()))
    pred = Marking(tuple(tokens))
    if info.fresh:
        present = pred.names()
        if any(sigma[v] in present for v in info.fresh):
            return None
    return pred


def pred_basis(net: NuNet, m: Marking) -> list[PredBasisEntry]:
    """Minimal one-step predecessors of the upward closure of ``m``.

    Each entry is the predecessor of ``min_t_sigma`` for a mode ranging over
    the names of ``m`` plus ``|Var(t)|`` unused names. The result keeps one
    entry per minimal canonical form, so its upward closure (up to renaming)
    is exactly the predecessor set of the upward closure of ``m``.
    """
    names = sorted(m.names())
    bags = m.counters()
    first = {}
    for t in net.transitions:
        info = net.info(t)
        variables = net.variables(t)
        start = m.max_name() + 1
        pool = list(range(start, start + len(variables)))
        for sigma in _modes(variables, names, pool):
            pred = _pred_fast(info, bags, m, sigma)
            if pred is None:
                continue
            c = canonicalize(net, pred)
            if c not in first:
                first[c] = (pred, t, sigma)
    return [PredBasisEntry(first[c][0], Firing.of(first[c][1], first[c][2]),
                           min_t_sigma(net, m, first[c][1], first[c][2]))
            for c in minor_set(first)]


def coverable(net: NuNet, m0: Marking, mf: Marking, limits: Limits = Limits()) -> CoverResult:
    """Decide whether some marking reachable from ``m0`` embeds ``mf`` up to renaming.

    Backward saturation over a FIFO work-list of canonical forms, keeping a
    minimal basis of the upward-closed set of markings that can reach the
    target's upward closure. A coverable verdict carries a witness that has
    been replayed from ``m0``. Predecessors exceeding a place invariant of
    ``m0`` are dropped, since nothing reachable lies above them.
    """
    require_valid(net)
    bound = InvariantBound(net, m0)
    root = canonicalize(net, mf)
    reps = {root: mf}
    parent = {root: None}
    chain = Antichain(len(net.places))
    chain.add(root)
    live = {root}
    queue = deque([root])
    iterations = 0

    def result(verdict, hit=None):
        witness = None
        if hit is not None:
            witness = _witness(net, m0, mf, hit, reps, parent)
        return CoverResult(verdict, witness, len(chain), iterations, tuple(chain))

    if leq_alpha(net, mf, m0) is not None:
        return result(COVERABLE, root)
    if bound.exceeds(mf):
        return result(NOT_COVERABLE)
    while queue:
        if iterations >= limits.max_iterations:
            return result(EXHAUSTED)
        c = queue.popleft()
        if c not in live:
            continue
        iterations += 1
        for entry in pred_basis(net, reps[c]):
            d = canonicalize(net, entry.marking)
            if d in reps or bound.exceeds(entry.marking):
                continue
            evicted = chain.add(d)
            if evicted is None:
                continue
            live.difference_update(evicted)
            live.add(d)
            reps[d] = entry.marking
            parent[d] = (c, entry.via)
            if leq_alpha(net, entry.marking, m0) is not None:
                return result(COVERABLE, d)
            if len(chain) > limits.max_basis:
                return result(EXHAUSTED)
            queue.append(d)
    return result(NOT_COVERABLE)


def _witness(net, m0, mf, hit, reps, parent):
    steps = []
    node = hit
    while parent[node] is not None:
        up, via = parent[node]
        steps.append((reps[node], via))
        node = up
    firings, final = concretize(net, m0, steps)
    if leq_alpha(net, mf, final) is None:
        raise ReplayError("coverability witness does not reach the target")
    return tuple(firings)


def pin_names(net: NuNet, names) -> tuple[NuNet, callable]:
    """Extend ``net`` with one isolated place per name, marked with that name.

    Returns the extended net and a function lifting markings of ``net``.
    """
    names = sorted(names)
    taken = set(net.places) | set(net.transitions)
    extra = []
    for a in names:
        p = f"_name{a}"
        while p in taken:
            p = "_" + p
        taken.add(p)
        extra.append(p)
    arcs = {(s, d): label for s, d, label in net.arcs()}
    star = NuNet(net.places + tuple(extra), net.transitions, arcs)

    def lift(m: Marking) -> Marking:
        return Marking(m.tokens + tuple((a,) for a in names))

    return star, lift


def restricted_coverable(net: NuNet, m0: Marking, mf: Marking,
                         limits: Limits = Limits()) -> CoverResult:
    """Coverability where names shared by ``m0`` and ``mf`` may not be renamed.

    Witness firings apply unchanged to ``net``, since the pinning places are
    isolated.
    """
    shared = m0.names() & mf.names()
    if not shared:
        return coverable(net, m0, mf, limits)
    star, lift = pin_names(net, shared)
    return coverable(star, lift(m0), lift(mf), limits)
