"""Renaming-invariant normal forms and the embedding quasi-order on markings.

A marking is summarized by the multiset of its name profiles: for each name,
the vector of its multiplicities per place. Two markings are equal up to a
bijective renaming exactly when these multisets coincide, and one embeds in
the other up to an injective renaming exactly when the profile multisets
embed (each profile below a distinct partner, componentwise).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class CanonicalMarking:
    """Sorted profile vectors; sorted descending lexicographically."""

    profiles: tuple
    nplaces: int

    @property
    def width(self) -> int:
        return len(self.profiles)

    @property
    def depth(self) -> int:
        return max((max(p) for p in self.profiles if p), default=0)

    @cached_property
    def total(self) -> int:
        return sum(sum(p) for p in self.profiles)

    @cached_property
    def array(self) -> np.ndarray:
        if not self.profiles:
            return np.zeros((0, self.nplaces), dtype=np.int64)
        return np.asarray(self.profiles, dtype=np.int64).reshape(len(self.profiles), self.nplaces)

    def __le__(self, other: CanonicalMarking) -> bool:
        return embeds(self, other)

    def __lt__(self, other: CanonicalMarking) -> bool:
        return self != other and embeds(self, other)


def name_profiles(net, m) -> dict:
    """Map each name of ``m`` to its per-place count vector."""
    n = len(net.places)
    out = {}
    for i, bag in enumerate(m.tokens):
        for a in bag:
            vec = out.get(a)
            if vec is None:
                vec = out[a] = [0] * n
            vec[i] += 1
    return {a: tuple(v) for a, v in out.items()}


def canonicalize(net, m) -> CanonicalMarking:
    profiles = sorted(name_profiles(net, m).values(), reverse=True)
    return CanonicalMarking(tuple(profiles), len(net.places))


def alpha_equiv(net, m1, m2) -> bool:
    return canonicalize(net, m1) == canonicalize(net, m2)


def _as_array(profiles, nplaces=None) -> np.ndarray:
    if isinstance(profiles, CanonicalMarking):
        return profiles.array
    if isinstance(profiles, np.ndarray):
        return profiles.astype(np.int64, copy=False)
    rows = [tuple(p) for p in profiles]
    width = nplaces if nplaces is not None else (len(rows[0]) if rows else 0)
    return np.asarray(rows, dtype=np.int64).reshape(len(rows), width)


def multiset_embed(a: Sequence, b: Sequence) -> list[int] | None:
    """Injective index map ``h`` with ``a[i] <= b[h[i]]`` componentwise, or None."""
    if len(a) == 0:
        return []
    if len(b) == 0:
        return None
    width = len(a[0]) if not isinstance(a, CanonicalMarking) else a.nplaces
    h = _kernels.match(_as_array(a, width), _as_array(b, width))
    return None if h is None else [int(j) for j in h]


def embeds(c1: CanonicalMarking, c2: CanonicalMarking) -> bool:
    if c1.width > c2.width or c1.total > c2.total:
        return False
    return _kernels.match(c1.array, c2.array) is not None


def leq_alpha(net, m1, m2) -> dict | None:
    """An injection ``iota`` on names with ``m1(p)(a) <= m2(p)(iota(a))``, or None."""
    prof1 = name_profiles(net, m1)
    prof2 = name_profiles(net, m2)
    names1 = sorted(prof1)
    names2 = sorted(prof2)
    if len(names1) > len(names2):
        return None
    n = len(net.places)
    h = multiset_embed(_as_array([prof1[a] for a in names1], n),
                       _as_array([prof2[b] for b in names2], n))
    if h is None:
        return None
    return {a: names2[j] for a, j in zip(names1, h)}


class Antichain:
    """A set of pairwise incomparable canonical markings.

    Elements are kept in insertion order next to a flat ``int64`` store so
    that domination queries run as one kernel call over the whole set.
    """

    def __init__(self, nplaces: int):
        self.nplaces = nplaces
        self.items: list[CanonicalMarking] = []
        self._flat = np.zeros((0, nplaces), dtype=np.int64)
        self._offsets = np.zeros(1, dtype=np.int64)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def _rebuild(self):
        arrays = [c.array for c in self.items]
        self._flat = (np.concatenate(arrays) if arrays
                      else np.zeros((0, self.nplaces), dtype=np.int64))
        sizes = [a.shape[0] for a in arrays]
        self._offsets = np.concatenate([[0], np.cumsum(sizes, dtype=np.int64)]).astype(np.int64)

    def below(self, c: CanonicalMarking) -> int:
        """Index of some element embedding into ``c``, or -1."""
        if not self.items:
            return -1
        return int(_kernels.first_below(self._flat, self._offsets, c.array))

    def add(self, c: CanonicalMarking) -> list[CanonicalMarking] | None:
        """Insert ``c`` unless dominated; returns the evicted elements, or None."""
        if self.below(c) >= 0:
            return None
        evicted = []
        if self.items:
            mask = _kernels.above_mask(c.array, self._flat, self._offsets)
            if mask.any():
                evicted = [x for x, gone in zip(self.items, mask) if gone]
                self.items = [x for x, gone in zip(self.items, mask) if not gone]
                self._rebuild()
        self.items.append(c)
        self._flat = np.concatenate([self._flat, c.array])
        self._offsets = np.append(self._offsets, self._offsets[-1] + c.width)
        return evicted


def minor_set(items: Iterable[CanonicalMarking]) -> list[CanonicalMarking]:
    """Minimal elements of ``items`` under embedding, one per equivalence class.

    Scanning by increasing token count means a later element can never lie
    strictly below a kept one, so no eviction is needed.
    """
    unique = sorted(set(items), key=lambda c: (c.total, c.width, c.profiles))
    if not unique:
        return []
    chain = Antichain(unique[0].nplaces)
    for c in unique:
        chain.add(c)
    return list(chain)


def format_canonical(places: Sequence[str], c: CanonicalMarking) -> str:
    """Render as ``{{p1:2},{p1:1,p2:1}}``: profiles in stored order, places in net order."""
    parts = []
    for prof in c.profiles:
        inner = ",".join(f"{places[i]}:{k}" for i, k in enumerate(prof) if k)
        parts.append("{" + inner + "}")
    return "{" + ",".join(parts) + "}"
