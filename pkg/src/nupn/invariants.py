"""Token-count place invariants.

Firing ``t`` removes ``|F(p,t)|`` tokens from ``p`` and adds ``|F(t,p)|``
whatever the mode, so names play no part here. A semiflow is a vector
``w >= 0`` with ``w . C = 0`` for the incidence matrix ``C``; then
``w . |M|`` is the same for every reachable ``M``. Since ``w >= 0``, a marking
whose weight exceeds the initial one has no reachable marking above it.
"""

from __future__ import annotations

from math import gcd

import numpy as np

from .net import Marking, NuNet


def incidence(net: NuNet) -> np.ndarray:
    """Token-count effect of each transition, shape ``(n_places, n_transitions)``."""
    c = np.zeros((len(net.places), len(net.transitions)), dtype=np.int64)
    for j, t in enumerate(net.transitions):
        info = net.info(t)
        for p, bag in info.pre:
            c[p, j] -= sum(bag.values())
        for p, bag in info.post:
            c[p, j] += sum(bag.values())
    return c


def _normalize(row):
    g = 0
    for v in row:
        g = gcd(g, int(v))
    return row // g if g > 1 else row


def semiflows(net: NuNet, cap: int = 256) -> list[np.ndarray]:
    """Semi-positive place invariants by Fourier-Motzkin elimination.

    Rows beyond ``cap`` are dropped while eliminating; every vector returned
    is still a genuine semiflow, the set just may not be complete.
    """
    c = incidence(net)
    n, m = c.shape
    rows = [np.concatenate([c[i], np.eye(n, dtype=np.int64)[i]]) for i in range(n)]
    for j in range(m):
        zero = [r for r in rows if r[j] == 0]
        pos = [r for r in rows if r[j] > 0]
        neg = [r for r in rows if r[j] < 0]
        combined = []
        for a in pos:
            for b in neg:
                combined.append(_normalize(-b[j] * a + a[j] * b))
                if len(zero) + len(combined) >= cap:
                    break
            if len(zero) + len(combined) >= cap:
                break
        rows = zero + combined
        # drop duplicates, keep order for determinism
        seen = set()
        unique = []
        for r in rows:
            key = r.tobytes()
            if key not in seen:
                seen.add(key)
                unique.append(r)
        rows = unique
    return [r[m:] for r in rows if r[m:].any()]


def counts(m: Marking) -> np.ndarray:
    return np.array([len(bag) for bag in m.tokens], dtype=np.int64)


class InvariantBound:
    """Rejects markings that no marking reachable from ``m0`` can lie above."""

    def __init__(self, net: NuNet, m0: Marking, cap: int = 256):
        flows = semiflows(net, cap)
        self.weights = np.array(flows, dtype=np.int64).reshape(len(flows), len(net.places))
        self.limit = self.weights @ counts(m0)

    def exceeds(self, m: Marking) -> bool:
        if not len(self.weights):
            return False
        return bool(np.any(self.weights @ counts(m) > self.limit))
