"""Nets whose tokens are pure names, and their firing rule.

Names are non-negative integers; ``DOT`` (0) is the ordinary black token.
Arc labels are multisets of variables, stored as sorted tuples of strings.
A variable spelled ``nu``, ``nu<digits>`` or ``nu_<suffix>`` is fresh: it
may only label output arcs and is instantiated to a name absent from the
marking at firing time.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple

DOT = 0

_FRESH = re.compile(r"nu(\d+|_\w+)?")

Label = tuple  # sorted tuple of variable names


def is_fresh(var: str) -> bool:
    return _FRESH.fullmatch(var) is not None


class ModeError(ValueError):
    """A mode whose domain or injectivity does not fit the transition."""


class NotEnabled(ValueError):
    pass


def _label(vars_) -> Label:
    if isinstance(vars_, str):
        vars_ = vars_.split()
    return tuple(sorted(vars_))


class _TransInfo(NamedTuple):
    pre: tuple  # ((place_index, Counter var->mult), ...)
    post: tuple
    variables: tuple  # Var(t), sorted
    plain: tuple  # Var(t) minus fresh, sorted
    fresh: tuple  # fresh variables of t, sorted


class NuNet:
    """A net with name-carrying tokens.

    ``arcs`` maps ``(source, target)`` pairs to labels; a label is an iterable
    of variable names or a whitespace separated string. One end of every arc
    is a place and the other a transition. Structural well-formedness (fresh
    variables only on outputs, output variables bound by inputs) is *not*
    enforced here; see :func:`validate_net`.
    """

    def __init__(self, places: Iterable[str], transitions: Iterable[str],
                 arcs: Mapping[tuple[str, str], Iterable[str] | str] = ()):
        self.places = tuple(places)
        self.transitions = tuple(transitions)
        if len(set(self.places)) != len(self.places):
            raise ValueError("duplicate place")
        if len(set(self.transitions)) != len(self.transitions):
            raise ValueError("duplicate transition")
        if set(self.places) & set(self.transitions):
            raise ValueError("places and transitions must be disjoint")
        self.place_index = {p: i for i, p in enumerate(self.places)}
        self.trans_index = {t: i for i, t in enumerate(self.transitions)}
        self.pre: dict[tuple[str, str], Label] = {}
        self.post: dict[tuple[str, str], Label] = {}
        items = arcs.items() if isinstance(arcs, Mapping) else arcs
        for (src, dst), vars_ in items:
            label = _label(vars_)
            if not label:
                continue
            if src in self.place_index and dst in self.trans_index:
                self.pre[src, dst] = label
            elif src in self.trans_index and dst in self.place_index:
                self.post[src, dst] = label
            else:
                raise ValueError(f"arc {src} -> {dst} must join a place and a transition")
        self._info = {t: self._build_info(t) for t in self.transitions}

    def _build_info(self, t):
        pre = tuple((i, Counter(self.pre[p, t])) for i, p in enumerate(self.places)
                    if (p, t) in self.pre)
        post = tuple((i, Counter(self.post[t, p])) for i, p in enumerate(self.places)
                     if (t, p) in self.post)
        variables = set()
        for _, c in pre + post:
            variables.update(c)
        fresh = tuple(sorted(v for v in variables if is_fresh(v)))
        plain = tuple(sorted(v for v in variables if not is_fresh(v)))
        return _TransInfo(pre, post, tuple(sorted(variables)), plain, fresh)

    def info(self, t: str) -> _TransInfo:
        return self._info[t]

    def variables(self, t: str) -> tuple:
        return self._info[t].variables

    def arcs(self) -> Iterator[tuple[str, str, Label]]:
        """All arcs, grouped by transition: inputs then outputs, in place order."""
        for t in self.transitions:
            for p in self.places:
                if (p, t) in self.pre:
                    yield p, t, self.pre[p, t]
            for p in self.places:
                if (t, p) in self.post:
                    yield t, p, self.post[t, p]

    def marking(self, content: Mapping[str, Iterable[int] | Mapping[int, int]] = ()) -> Marking:
        """Build a marking from ``{place: names}`` or ``{place: {name: count}}``."""
        tokens = [()] * len(self.places)
        items = content.items() if isinstance(content, Mapping) else content
        for place, names in items:
            if isinstance(names, Mapping):
                bag = []
                for a, k in names.items():
                    if k < 0:
                        raise ValueError("negative multiplicity")
                    bag.extend([a] * k)
                names = bag
            tokens[self.place_index[place]] = tuple(sorted(names))
        return Marking(tuple(tokens))

    def empty_marking(self) -> Marking:
        return Marking(((),) * len(self.places))

    def format_marking(self, m: Marking) -> str:
        parts = [f"{p}={{{','.join(map(str, m.tokens[i]))}}}"
                 for i, p in enumerate(self.places) if m.tokens[i]]
        return "(" + ", ".join(parts) + ")"

    def __repr__(self):
        return f"NuNet(places={list(self.places)}, transitions={list(self.transitions)})"


@dataclass(frozen=True)
class Marking:
    """Per-place multisets of names, as sorted tuples aligned with the net's places."""

    tokens: tuple

    def names(self) -> frozenset:
        return frozenset(a for bag in self.tokens for a in bag)

    def count(self, place: int, name: int) -> int:
        return self.tokens[place].count(name)

    def counters(self) -> list[Counter]:
        return [Counter(bag) for bag in self.tokens]

    def size(self) -> int:
        return sum(len(bag) for bag in self.tokens)

    def max_name(self) -> int:
        return max((a for bag in self.tokens for a in bag), default=DOT)

    def rename(self, iota: Mapping[int, int]) -> Marking:
        return Marking(tuple(tuple(sorted(iota.get(a, a) for a in bag)) for bag in self.tokens))

    def join(self, other: Marking) -> Marking:
        """Placewise multiset union (max of multiplicities)."""
        out = []
        for x, y in zip(self.tokens, other.tokens):
            out.append(tuple(sorted((Counter(x) | Counter(y)).elements())))
        return Marking(tuple(out))

    def __le__(self, other: Marking) -> bool:
        for x, y in zip(self.tokens, other.tokens):
            cy = Counter(y)
            for a, k in Counter(x).items():
                if cy[a] < k:
                    return False
        return True

    def __lt__(self, other: Marking) -> bool:
        return self != other and self <= other


class Firing(NamedTuple):
    """A transition together with a mode, kept as sorted ``(var, name)`` pairs."""

    transition: str
    mode: tuple

    @classmethod
    def of(cls, transition: str, sigma: Mapping[str, int]) -> Firing:
        return cls(transition, tuple(sorted(sigma.items())))

    @property
    def sigma(self) -> dict:
        return dict(self.mode)


# -- structure ----------------------------------------------------------------

def validate_net(net: NuNet) -> list[str]:
    """Return one message per breach of the structural conditions; empty if valid."""
    problems = []
    for t in net.transitions:
        info = net.info(t)
        pre_vars = set()
        for _, c in info.pre:
            pre_vars.update(c)
        post_vars = set()
        for _, c in info.post:
            post_vars.update(c)
        fresh_in = sorted(v for v in pre_vars if is_fresh(v))
        if fresh_in:
            problems.append(f"transition {t}: fresh variable(s) {', '.join(fresh_in)} on an input arc")
        unbound = sorted(v for v in post_vars if not is_fresh(v) and v not in pre_vars)
        if unbound:
            problems.append(f"transition {t}: output variable(s) {', '.join(unbound)} not bound by any input arc")
    return problems


def require_valid(net: NuNet) -> None:
    problems = validate_net(net)
    if problems:
        raise ValueError("invalid net: " + "; ".join(problems))


def is_normal(net: NuNet) -> bool:
    """Every label has at most one variable and all fresh labels share one variable."""
    fresh_seen = set()
    for _, _, label in net.arcs():
        if len(label) > 1:
            return False
        fresh_seen.update(v for v in label if is_fresh(v))
    return len(fresh_seen) <= 1


# -- firing -------------------------------------------------------------------

def _check_mode(net: NuNet, t: str, sigma: Mapping[str, int]) -> None:
    if t not in net.trans_index:
        raise KeyError(f"unknown transition {t}")
    expected = set(net.variables(t))
    if set(sigma) != expected:
        raise ModeError(f"mode domain {sorted(sigma)} differs from Var({t}) = {sorted(expected)}")
    if len(set(sigma.values())) != len(sigma):
        raise ModeError(f"mode for {t} is not injective")


def is_enabled(net: NuNet, m: Marking, t: str, sigma: Mapping[str, int]) -> bool:
    _check_mode(net, t, sigma)
    info = net.info(t)
    for i, need in info.pre:
        have = Counter(m.tokens[i])
        for v, k in need.items():
            if have[sigma[v]] < k:
                return False
    if info.fresh:
        present = m.names()
        if any(sigma[v] in present for v in info.fresh):
            return False
    return True


def fire(net: NuNet, m: Marking, t: str, sigma: Mapping[str, int]) -> Marking:
    if not is_enabled(net, m, t, sigma):
        raise NotEnabled(f"{t} is not enabled with mode {dict(sorted(sigma.items()))}")
    return _fire_unchecked(net, m, t, sigma)


def _fire_unchecked(net, m, t, sigma):
    info = net.info(t)
    bags = m.counters()
    for i, need in info.pre:
        for v, k in need.items():
            bags[i][sigma[v]] -= k
    for i, out in info.post:
        for v, k in out.items():
            bags[i][sigma[v]] += k
    return Marking(tuple(tuple(sorted(c.elements())) for c in bags))


def fresh_names(m: Marking, count: int) -> list[int]:
    """The ``count`` smallest names above every name of ``m`` (never ``DOT``)."""
    start = m.max_name() + 1
    return list(range(start, start + count))


def _plain_candidates(info, bags, var):
    # names a with bags[p][a] >= multiplicity of var on every input place
    cands = None
    for i, need in info.pre:
        k = need.get(var, 0)
        if not k:
            continue
        here = {a for a, c in bags[i].items() if c >= k}
        cands = here if cands is None else cands & here
    return sorted(cands or ())


def _orbit_representatives(m: Marking, k: int) -> set:
    """Names of ``m`` that are among the first ``k`` of their profile class.

    Names with equal per-place counts are swapped by an automorphism of
    ``m``, so modes using only these names cover every mode up to renaming.
    """
    profiles = {}
    for i, bag in enumerate(m.tokens):
        for a in bag:
            profiles.setdefault(a, [0] * len(m.tokens))[i] += 1
    classes = {}
    for a in sorted(profiles):
        classes.setdefault(tuple(profiles[a]), []).append(a)
    return {a for group in classes.values() for a in group[:k]}


def enabled_firings(net: NuNet, m: Marking, symmetric: bool = False) -> list[Firing]:
    """Every enabled (transition, mode) pair, with fresh choices canonicalized.

    Plain variables range injectively over the names of ``m``; fresh variables
    take the smallest unused names above ``m``, in variable order. Ordered by
    transition then mode. With ``symmetric``, modes that differ only by an
    automorphism of ``m`` are mostly skipped; every successor is still
    produced up to renaming.
    """
    bags = m.counters()
    out = []
    reps = {}
    for t in net.transitions:
        info = net.info(t)
        fresh = dict(zip(info.fresh, fresh_names(m, len(info.fresh))))
        options = [_plain_candidates(info, bags, v) for v in info.plain]
        if symmetric and info.plain:
            k = len(info.plain)
            if k not in reps:
                reps[k] = _orbit_representatives(m, k)
            options = [[a for a in o if a in reps[k]] for o in options]
        if any(not o for o in options):
            continue
        for choice in itertools.product(*options):
            if len(set(choice)) != len(choice):
                continue
            sigma = dict(zip(info.plain, choice))
            sigma.update(fresh)
            out.append(Firing.of(t, sigma))
    return out


def successors(net: NuNet, m: Marking) -> set:
    """One-step successors of ``m``, as canonical markings."""
    from .order import canonicalize

    return {canonicalize(net, _fire_unchecked(net, m, f.transition, f.sigma))
            for f in enabled_firings(net, m, symmetric=True)}


def step_successors(net: NuNet, m: Marking, symmetric: bool = False) -> list[tuple[Firing, Marking]]:
    """Enabled firings paired with the markings they produce."""
    return [(f, _fire_unchecked(net, m, f.transition, f.sigma))
            for f in enabled_firings(net, m, symmetric)]


# -- ordinary P/T nets ----------------------------------------------------------

@dataclass(frozen=True)
class PTNet:
    places: tuple
    transitions: tuple
    weights: Mapping  # (src, dst) -> positive int

    def fire(self, m: Mapping[str, int], t: str):
        for (src, dst), w in self.weights.items():
            if dst == t and m.get(src, 0) < w:
                return None
        out = dict(m)
        for (src, dst), w in self.weights.items():
            if dst == t:
                out[src] -= w
            elif src == t:
                out[dst] = out.get(dst, 0) + w
        return {p: k for p, k in out.items() if k}


DOT_PLACE = "_dot"


def embed_pt(net: PTNet, m0: Mapping[str, int]) -> tuple[NuNet, Marking]:
    """Image of a P/T net as a name net over the single name ``DOT``.

    Each weight-``k`` arc carries one shared variable ``x`` repeated ``k``
    times. A transition with outputs but no inputs cannot bind ``x``, so such
    transitions read and return a token of an extra place ``_dot``, added only
    when needed and holding one black token forever.
    """
    arcs = {}
    sources = set()
    for t in net.transitions:
        has_in = any(dst == t for (src, dst) in net.weights)
        has_out = any(src == t for (src, dst) in net.weights)
        if has_out and not has_in:
            sources.add(t)
    places = tuple(net.places) + ((DOT_PLACE,) if sources else ())
    for (src, dst), w in net.weights.items():
        arcs[src, dst] = ("x",) * w
    for t in sorted(sources):
        arcs[DOT_PLACE, t] = ("x",)
        arcs[t, DOT_PLACE] = ("x",)
    nu = NuNet(places, net.transitions, arcs)
    content = {p: {DOT: k} for p, k in m0.items() if k}
    if sources:
        content[DOT_PLACE] = {DOT: 1}
    return nu, nu.marking(content)
