"""Embedding kernels for multisets of count vectors.

A multiset of profiles is an ``int64`` array of shape ``(k, n_places)``.
``a`` embeds into ``b`` when there is an injective row map ``h`` with
``a[i] <= b[h[i]]`` componentwise, decided here by augmenting paths on the
compatibility graph.

Two implementations share one contract: a numba ``@njit`` path and a pure
numpy path. Set ``NUPN_DISABLE_JIT=1`` to force the numpy path (useful when
debugging, or where numba is not installed).
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

JIT_DISABLED = os.environ.get("NUPN_DISABLE_JIT", "").lower() in ("1", "true", "yes")
USE_NUMBA = numba is not None and not JIT_DISABLED


# -- numpy path ---------------------------------------------------------------

def _augment_np(compat):
    n, m = compat.shape
    match_l = np.full(n, -1, dtype=np.int64)
    match_r = np.full(m, -1, dtype=np.int64)
    adj = [np.flatnonzero(compat[i]) for i in range(n)]
    for u in range(n):
        parent = {}
        queue = [u]
        head = 0
        found = -1
        while head < len(queue) and found < 0:
            x = queue[head]
            head += 1
            for j in adj[x]:
                if j in parent:
                    continue
                parent[j] = x
                if match_r[j] < 0:
                    found = j
                    break
                queue.append(match_r[j])
        # a row that cannot be matched now never will be (Kuhn)
        if found < 0:
            return None
        j = found
        while j >= 0:
            x = parent[j]
            prev = match_l[x]
            match_l[x] = j
            match_r[j] = x
            j = prev
    return match_l


def match_numpy(a, b):
    """Return the row map of ``a`` into ``b`` as an int array, or None."""
    n, m = a.shape[0], b.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64)
    if n > m:
        return None
    if np.any(a.sum(axis=0) > b.sum(axis=0)):
        return None
    compat = np.all(a[:, None, :] <= b[None, :, :], axis=2)
    if not compat.any(axis=1).all():
        return None
    return _augment_np(compat)


def first_below_numpy(flat, offsets, b):
    """Index of the first stored multiset that embeds into ``b``, else -1."""
    for k in range(offsets.shape[0] - 1):
        if match_numpy(flat[offsets[k]:offsets[k + 1]], b) is not None:
            return k
    return -1


def above_mask_numpy(a, flat, offsets):
    """Mask of the stored multisets that ``a`` embeds into."""
    count = offsets.shape[0] - 1
    out = np.zeros(count, dtype=np.bool_)
    for k in range(count):
        out[k] = match_numpy(a, flat[offsets[k]:offsets[k + 1]]) is not None
    return out


# -- numba path ---------------------------------------------------------------

def _match_loops(a, b, out):
    n = a.shape[0]
    m = b.shape[0]
    places = a.shape[1]
    for i in range(n):
        out[i] = -1
    if n == 0:
        return True
    if n > m:
        return False
    for p in range(places):
        sa = 0
        sb = 0
        for i in range(n):
            sa += a[i, p]
        for j in range(m):
            sb += b[j, p]
        if sa > sb:
            return False
    compat = np.zeros((n, m), dtype=np.bool_)
    for i in range(n):
        any_ok = False
        for j in range(m):
            ok = True
            for p in range(places):
                if a[i, p] > b[j, p]:
                    ok = False
                    break
            compat[i, j] = ok
            if ok:
                any_ok = True
        if not any_ok:
            return False
    match_r = np.full(m, -1, dtype=np.int64)
    parent = np.empty(m, dtype=np.int64)
    seen = np.zeros(m, dtype=np.bool_)
    queue = np.empty(n + 1, dtype=np.int64)
    for u in range(n):
        for j in range(m):
            seen[j] = False
        head = 0
        tail = 1
        queue[0] = u
        found = -1
        while head < tail and found < 0:
            x = queue[head]
            head += 1
            for j in range(m):
                if compat[x, j] and not seen[j]:
                    seen[j] = True
                    parent[j] = x
                    if match_r[j] < 0:
                        found = j
                        break
                    queue[tail] = match_r[j]
                    tail += 1
        if found < 0:
            return False
        j = found
        while j >= 0:
            x = parent[j]
            prev = out[x]
            out[x] = j
            match_r[j] = x
            j = prev
    return True


# rebound to the compiled matcher below; numba resolves globals at compile time
_match_kernel = _match_loops


def _first_below_loops(flat, offsets, b):
    scratch = np.empty(b.shape[0] + 1, dtype=np.int64)
    for k in range(offsets.shape[0] - 1):
        a = flat[offsets[k]:offsets[k + 1]]
        if a.shape[0] > b.shape[0]:
            continue
        if _match_kernel(a, b, scratch[:a.shape[0]]):
            return k
    return -1


def _above_mask_loops(a, flat, offsets):
    count = offsets.shape[0] - 1
    out = np.zeros(count, dtype=np.bool_)
    scratch = np.empty(a.shape[0], dtype=np.int64)
    for k in range(count):
        b = flat[offsets[k]:offsets[k + 1]]
        if a.shape[0] > b.shape[0]:
            continue
        out[k] = _match_kernel(a, b, scratch)
    return out


if numba is not None:
    _njit = numba.njit(cache=True, nogil=True)
    _match_jit = _njit(_match_loops)
    _match_kernel = _match_jit
    _first_below_jit = _njit(_first_below_loops)
    _above_mask_jit = _njit(_above_mask_loops)

    def match_numba(a, b):
        out = np.empty(a.shape[0], dtype=np.int64)
        return out if _match_jit(a, b, out) else None

    first_below_numba = _first_below_jit
    above_mask_numba = _above_mask_jit
else:  # pragma: no cover
    match_numba = first_below_numba = above_mask_numba = None


if USE_NUMBA:
    match, first_below, above_mask = match_numba, first_below_numba, above_mask_numba
else:
    match, first_below, above_mask = match_numpy, first_below_numpy, above_mask_numpy
