"""Compare the numba and numpy embedding kernels.

    python3 benchmarks/bench_kernels.py [--stores 200] [--queries 200] [--seed 0]

Both paths run on the same random store of profile multisets; the script
checks they agree before printing timings. With ``--end-to-end`` it also
times a coverability run on the large corpus instance once per path, each in
a fresh interpreter so the env flag takes effect.
"""

import argparse
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from nupn import _kernels

ROOT = Path(__file__).resolve().parent.parent


def random_store(rng, count, places, max_rows, max_value):
    parts = [rng.integers(0, max_value + 1, size=(rng.integers(1, max_rows + 1), places))
             for _ in range(count)]
    offsets = np.zeros(count + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(p) for p in parts])
    return np.concatenate(parts).astype(np.int64), offsets


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def kernel_table(args):
    rng = np.random.default_rng(args.seed)
    flat, offsets = random_store(rng, args.stores, args.places, args.rows, 3)
    queries = [rng.integers(0, 5, size=(rng.integers(1, 2 * args.rows + 1), args.places)).astype(np.int64)
               for _ in range(args.queries)]

    # warm up the compiled path so timings exclude compilation
    _kernels.first_below_numba(flat, offsets, queries[0])
    _kernels.above_mask_numba(queries[0], flat, offsets)

    rows = []
    for label, numba_fn, numpy_fn in (
        ("first_below", lambda q: _kernels.first_below_numba(flat, offsets, q),
         lambda q: _kernels.first_below_numpy(flat, offsets, q)),
        ("above_mask", lambda q: _kernels.above_mask_numba(q, flat, offsets),
         lambda q: _kernels.above_mask_numpy(q, flat, offsets)),
    ):
        t_jit, r_jit = best_of(lambda: [numba_fn(q) for q in queries], args.repeat)
        t_np, r_np = best_of(lambda: [numpy_fn(q) for q in queries], args.repeat)
        agree = all(np.array_equal(x, y) for x, y in zip(r_jit, r_np))
        rows.append((label, t_jit, t_np, agree))
    print(f"store: {args.stores} multisets over {args.places} places, {args.queries} queries")
    print(f"{'kernel':<12} {'numba s':>10} {'numpy s':>10} {'speedup':>8}  agree")
    for label, t_jit, t_np, agree in rows:
        print(f"{label:<12} {t_jit:>10.4f} {t_np:>10.4f} {t_np / t_jit:>8.1f}x  {agree}")
    return all(r[3] for r in rows)


def end_to_end():
    argv = [sys.executable, "-m", "nupn.cli", "cover", str(ROOT / "corpus" / "large.reset"),
            "--target", str(ROOT / "corpus" / "large.target"), "--limit-basis", "500"]
    outputs = {}
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, NUPN_DISABLE_JIT=flag)
        start = time.perf_counter()
        proc = subprocess.run(argv, env=env, capture_output=True, text=True)
        outputs[label] = proc.stdout
        print(f"cover large.reset with {label}: {time.perf_counter() - start:.2f}s "
              f"(exit {proc.returncode}, includes interpreter start)")
    print(f"identical reports: {outputs['numba'] == outputs['numpy']}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--stores", type=int, default=200)
    parser.add_argument("--queries", type=int, default=200)
    parser.add_argument("--places", type=int, default=4)
    parser.add_argument("--rows", type=int, default=5)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--end-to-end", action="store_true")
    args = parser.parse_args()
    if _kernels.match_numba is None:
        sys.exit("numba is not installed; only the numpy path is available")
    ok = kernel_table(args)
    if args.end_to_end:
        end_to_end()
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
