"""Forward exploration over canonical markings.

All searches are breadth-first over markings up to renaming. A newly found
marking is compared with its ancestors in the spanning tree: an ancestor
strictly below it proves unboundedness (the firing rule is strictly
monotonic), and an ancestor below or equal to it proves non-termination.
Because the order is a wqo, every infinite spanning branch contains such a
pair, so the searches stop whenever the state space is finite or one is found.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .limits import (BOUNDED, EXHAUSTED, NON_TERMINATING, NOT_APPLICABLE, NOT_REACHABLE,
                     REACHABLE, TERMINATING, UNBOUNDED, Limits, ResourceExhausted)
from .net import Marking, NuNet, require_valid, step_successors
from .order import CanonicalMarking, canonicalize, embeds
from .witness import concretize

OPEN = "open"
DEADLOCK = "deadlock"
SUBSUMED = "subsumed"
STRICTLY_DOMINATED = "strictly-dominated"


@dataclass
class ReachTreeNode:
    canon: CanonicalMarking
    marking: Marking  # exactly fire(parent.marking, via)
    parent: int | None
    depth: int
    via: object = None
    status: str = OPEN


@dataclass(frozen=True)
class AnalysisResult:
    verdict: str
    witness: tuple | None = None
    pump: tuple | None = None  # (i, j): state after i steps lies below the state after j
    nodes: int = 0
    edges: int = 0
    width: int = 0
    depth: int = 0


@dataclass(frozen=True)
class Measurement:
    width: int
    depth: int
    exact: bool
    explored: int


class _Tree:
    def __init__(self, net, m0):
        root = ReachTreeNode(canonicalize(net, m0), m0, None, 0)
        self.net = net
        self.m0 = m0
        self.nodes = [root]
        self.index = {root.canon: 0}
        self.edges = 0

    def add(self, parent, firing, marking, canon):
        node = ReachTreeNode(canon, marking, parent, self.nodes[parent].depth + 1, firing)
        self.nodes.append(node)
        self.index[canon] = len(self.nodes) - 1
        return len(self.nodes) - 1

    def expand(self, k):
        """Successors of node ``k``, one per canonical form, in firing order."""
        seen = set()
        out = []
        for f, m2 in step_successors(self.net, self.nodes[k].marking, symmetric=True):
            c2 = canonicalize(self.net, m2)
            if c2 not in seen:
                seen.add(c2)
                out.append((f, m2, c2))
        self.edges += len(out)
        if not out:
            self.nodes[k].status = DEADLOCK
        return out

    def ancestors(self, k):
        while k is not None:
            yield k
            k = self.nodes[k].parent

    def below(self, k, canon):
        """Nearest ancestor of ``k`` (itself included) embedding into ``canon``."""
        for j in self.ancestors(k):
            if embeds(self.nodes[j].canon, canon):
                return j
        return None

    def path(self, k):
        return list(reversed(list(self.ancestors(k))))[1:]

    def witness(self, path_nodes, tail=()):
        steps = [(self.nodes[self.nodes[j].parent].marking, self.nodes[j].via) for j in path_nodes]
        steps.extend(tail)
        firings, _ = concretize(self.net, self.m0, steps)
        return tuple(firings)

    def result(self, verdict, witness=None, pump=None):
        return AnalysisResult(
            verdict, witness, pump, len(self.nodes), self.edges,
            max(n.canon.width for n in self.nodes),
            max(n.canon.depth for n in self.nodes),
        )


def _bounded_tree(net, m0, limits, within=None):
    require_valid(net)
    tree = _Tree(net, m0)
    queue = deque([0])
    while queue:
        k = queue.popleft()
        for f, m2, c2 in tree.expand(k):
            if c2 in tree.index:
                continue
            if within is not None and not within(m2):
                continue
            # a confined space is not upward closed, so pumping proves nothing there
            anc = tree.below(k, c2) if within is None else None
            new = tree.add(k, f, m2, c2)
            if anc is not None:
                tree.nodes[new].status = STRICTLY_DOMINATED
                w = tree.witness(tree.path(new))
                return tree.result(UNBOUNDED, w, (tree.nodes[anc].depth, tree.nodes[new].depth)), tree
            if len(tree.nodes) > limits.max_nodes:
                return tree.result(EXHAUSTED), tree
            queue.append(new)
    return tree.result(BOUNDED), tree


def bounded(net: NuNet, m0: Marking, limits: Limits = Limits()) -> AnalysisResult:
    """Decide whether finitely many markings (up to renaming) are reachable.

    Unbounded comes with a witness path whose ``pump`` pair marks an
    ancestor strictly below a descendant.
    """
    return _bounded_tree(net, m0, limits)[0]


def terminates(net: NuNet, m0: Marking, limits: Limits = Limits()) -> AnalysisResult:
    """Decide whether every run from ``m0`` is finite.

    A non-terminating verdict carries a witness and a ``pump`` pair ``(i, j)``
    where the state after ``i`` steps embeds into the state after ``j``;
    repeating steps ``i..j`` runs forever.
    """
    require_valid(net)
    tree = _Tree(net, m0)
    graph = {}
    queue = deque([0])
    while queue:
        k = queue.popleft()
        graph[k] = []
        for f, m2, c2 in tree.expand(k):
            j = tree.index.get(c2)
            if j is not None:
                if j in set(tree.ancestors(k)):
                    tree.nodes[k].status = SUBSUMED
                    w = tree.witness(tree.path(k), [(tree.nodes[k].marking, f)])
                    return tree.result(NON_TERMINATING, w, (tree.nodes[j].depth, len(w)))
                graph[k].append((j, f))
                continue
            anc = tree.below(k, c2)
            new = tree.add(k, f, m2, c2)
            if anc is not None:
                tree.nodes[new].status = SUBSUMED
                w = tree.witness(tree.path(new))
                return tree.result(NON_TERMINATING, w, (tree.nodes[anc].depth, tree.nodes[new].depth))
            if len(tree.nodes) > limits.max_nodes:
                return tree.result(EXHAUSTED)
            graph[k].append((new, f))
            queue.append(new)
    cycle = _find_cycle(graph)
    if cycle is None:
        return tree.result(TERMINATING)
    entry, loop = cycle
    prefix = tree.path(entry)
    tail = [(tree.nodes[u].marking, f) for u, f in loop]
    w = tree.witness(prefix, tail)
    return tree.result(NON_TERMINATING, w, (len(prefix), len(w)))


def _find_cycle(graph):
    """Some cycle as ``(entry, [(node, firing), ...])``, or None. Iterative DFS."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = dict.fromkeys(graph, WHITE)
    for root in sorted(graph):
        if color[root] != WHITE:
            continue
        stack = [(root, iter(graph[root]))]
        trail = []  # (node, firing) edges along the stack
        color[root] = GREY
        while stack:
            u, it = stack[-1]
            step = next(it, None)
            if step is None:
                color[u] = BLACK
                stack.pop()
                if trail:
                    trail.pop()
                continue
            v, f = step
            if color[v] == GREY:
                start = next(i for i, (n, _) in enumerate(stack) if n == v)
                loop = trail[start:] + [(u, f)]
                return v, loop
            if color[v] == WHITE:
                color[v] = GREY
                trail.append((u, f))
                stack.append((v, iter(graph[v])))
    return None


def reach_set(net: NuNet, m0: Marking, limits: Limits = Limits()) -> set:
    """All reachable canonical markings; raises ResourceExhausted past ``limits.max_nodes``."""
    require_valid(net)
    tree = _Tree(net, m0)
    queue = deque([0])
    while queue:
        k = queue.popleft()
        for f, m2, c2 in tree.expand(k):
            if c2 in tree.index:
                continue
            queue.append(tree.add(k, f, m2, c2))
            if len(tree.nodes) > limits.max_nodes:
                raise ResourceExhausted(f"more than {limits.max_nodes} reachable markings")
    return set(tree.index)


def reachable_alpha(net: NuNet, m0: Marking, mf: Marking,
                    limits: Limits = Limits(), within=None) -> AnalysisResult:
    """Reachability of ``mf`` up to renaming, answered only for bounded nets.

    ``within`` optionally confines the search to markings satisfying it. It
    must hold on ``mf`` and on every marking of a run to ``mf`` (for example
    "no garbage", which no step can undo). The confined space is explored
    exhaustively, so it must be finite or the result is resource-exhausted.
    """
    if within is not None and not within(m0):
        raise ValueError("initial marking lies outside the confinement")
    res, tree = _bounded_tree(net, m0, limits, within)
    if res.verdict == UNBOUNDED:
        return tree.result(NOT_APPLICABLE)
    if res.verdict == EXHAUSTED:
        return res
    k = tree.index.get(canonicalize(net, mf))
    if k is None:
        return tree.result(NOT_REACHABLE)
    return tree.result(REACHABLE, tree.witness(tree.path(k)))


def measure(net: NuNet, m0: Marking, steps: int = 1000) -> Measurement:
    """Largest width (distinct names) and depth (copies of one name in one place) seen.

    Explores breadth-first, expanding at most ``steps`` markings; ``exact``
    tells whether the exploration exhausted the state space.
    """
    require_valid(net)
    tree = _Tree(net, m0)
    queue = deque([0])
    expanded = 0
    while queue and expanded < steps:
        k = queue.popleft()
        expanded += 1
        for f, m2, c2 in tree.expand(k):
            if c2 not in tree.index:
                queue.append(tree.add(k, f, m2, c2))
    return Measurement(
        max(n.canon.width for n in tree.nodes),
        max(n.canon.depth for n in tree.nodes),
        not queue,
        len(tree.nodes),
    )
