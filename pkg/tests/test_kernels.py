import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nupn import _kernels

needs_numba = pytest.mark.skipif(_kernels.match_numba is None, reason="numba not installed")


def _random_store(rng, nplaces, count):
    blocks = [rng.integers(0, 3, size=(rng.integers(0, 4), nplaces)) for _ in range(count)]
    flat = np.concatenate(blocks) if blocks else np.zeros((0, nplaces), dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum([b.shape[0] for b in blocks])])
    return blocks, flat.astype(np.int64), offsets.astype(np.int64)


def _valid(a, b, h):
    return len(set(h.tolist())) == len(h) and all((a[i] <= b[j]).all() for i, j in enumerate(h))


@needs_numba
@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_match_paths_agree(seed):
    rng = np.random.default_rng(seed)
    p = int(rng.integers(1, 5))
    a = rng.integers(0, 3, size=(rng.integers(0, 5), p)).astype(np.int64)
    b = rng.integers(0, 4, size=(rng.integers(0, 6), p)).astype(np.int64)
    h1 = _kernels.match_numpy(a, b)
    h2 = _kernels.match_numba(a, b)
    assert (h1 is None) == (h2 is None)
    if h1 is not None:
        assert _valid(a, b, h1) and _valid(a, b, h2)


@needs_numba
@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_store_queries_agree(seed):
    rng = np.random.default_rng(seed)
    p = int(rng.integers(1, 4))
    _, flat, offsets = _random_store(rng, p, int(rng.integers(0, 6)))
    q = rng.integers(0, 3, size=(rng.integers(0, 4), p)).astype(np.int64)
    assert _kernels.first_below_numpy(flat, offsets, q) == _kernels.first_below_numba(flat, offsets, q)
    assert (_kernels.above_mask_numpy(q, flat, offsets)
            == _kernels.above_mask_numba(q, flat, offsets)).all()


def test_env_flag_selects_numpy():
    code = "from nupn import _kernels as k; print(k.USE_NUMBA, k.match is k.match_numpy)"
    env = dict(os.environ, NUPN_DISABLE_JIT="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    assert out == ["False", "True"]
