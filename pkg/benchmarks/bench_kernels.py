"""Compare the compiled kernels with the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py``. Both implementations are
imported directly, checked for identical results, and timed on rational row
reduction, multilinear evaluation and one end-to-end transfer.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

from operadkit import _kernels_py

try:
    from operadkit import _core
except ImportError:
    _core = None


def random_matrix(rng: random.Random, rows: int, cols: int) -> list[list[Fraction]]:
    return [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if rng.random() < 0.6 else Fraction(0)
             for _ in range(cols)] for _ in range(rows)]


def random_table(rng: random.Random, dim: int, arity: int) -> dict:
    table = {}
    for _ in range(dim ** arity // 2):
        key = tuple(rng.randrange(dim) for _ in range(arity))
        table[key] = {rng.randrange(dim): Fraction(rng.randint(-3, 3) or 1)}
    return table


def random_vectors(rng: random.Random, dim: int, arity: int) -> list[dict]:
    return [{k: Fraction(rng.randint(1, 4)) for k in range(dim) if rng.random() < 0.7} or {0: Fraction(1)}
            for _ in range(arity)]


def bench(label: str, fn, repeat: int) -> float:
    t = min(timeit.repeat(fn, number=1, repeat=repeat))
    print(f"  {label:<10} {t * 1000:9.2f} ms")
    return t


def end_to_end(pure: bool) -> float:
    env = dict(os.environ, OPERADKIT_PURE="1" if pure else "0")
    code = ("import time;from operadkit.htt.examples import random_dgas;"
            "from operadkit.htt.transfer import transfer_ainfinity;"
            "algs=random_dgas(7,5,6);t=time.perf_counter();"
            "[transfer_ainfinity(a,max_arity=5) for a in algs];print(time.perf_counter()-t)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=40, help="matrix side length")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _core is None:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation` first")
        return 1
    rng = random.Random(args.seed)
    mat = random_matrix(rng, args.size, args.size + 5)
    assert _core.rref(mat, args.size + 5) == _kernels_py.rref(mat, args.size + 5)
    print(f"rref on a {args.size} x {args.size + 5} rational matrix")
    tp = bench("python", lambda: _kernels_py.rref(mat, args.size + 5), args.repeat)
    tc = bench("cython", lambda: _core.rref(mat, args.size + 5), args.repeat)
    print(f"  speedup    {tp / tc:9.2f}x")

    table = random_table(rng, 8, 4)
    vecs = random_vectors(rng, 8, 4)
    assert _core.apply_multilinear(table, vecs) == _kernels_py.apply_multilinear(table, vecs)
    print("apply_multilinear, arity 4 on an 8-dimensional space")
    tp = bench("python", lambda: _kernels_py.apply_multilinear(table, vecs), args.repeat)
    tc = bench("cython", lambda: _core.apply_multilinear(table, vecs), args.repeat)
    print(f"  speedup    {tp / tc:9.2f}x")

    print("transfer through arity 5 on five random dg algebras")
    tp, tc = end_to_end(True), end_to_end(False)
    print(f"  python     {tp * 1000:9.2f} ms\n  cython     {tc * 1000:9.2f} ms\n  speedup    {tp / tc:9.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
