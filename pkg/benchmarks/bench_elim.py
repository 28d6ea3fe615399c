"""Compare the compiled and pure-Python elimination kernels.

    python3 benchmarks/bench_elim.py [--repeat 3]

Workloads: random dense integer matrices of a few sizes, and the blocks of
the order-3 determining system (the largest exact elimination the
package runs routinely).  Both kernels must return identical output; the
script checks that before timing.
"""

import argparse
import random
import time

from kolmogorov_weyl import _elim_py

try:
    from kolmogorov_weyl import _elim
except ImportError:
    _elim = None


def dense_case(n, bound, seed):
    rng = random.Random(seed)
    return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)], n


def determining_blocks(n=3):
    # rebuild the sparse rows exactly as solve_determining does, then split
    from kolmogorov_weyl import linalg
    from kolmogorov_weyl import solutions

    captured = []
    orig = linalg.sparse_nullspace

    def spy(rows, ncols):
        captured.append((rows, ncols))
        return orig(rows, ncols)

    solutions.sparse_nullspace = spy
    try:
        solutions.solve_determining(n)
    finally:
        solutions.sparse_nullspace = orig
    rows, ncols = captured[0]
    blocks = []
    for cols, block_rows in linalg._components(rows, ncols):
        if not block_rows:
            continue
        local = {c: i for i, c in enumerate(cols)}
        dense = []
        for r in block_rows:
            row = [0] * len(cols)
            for c, v in r.items():
                row[local[c]] = int(v)
            dense.append(row)
        blocks.append((dense, len(cols)))
    return blocks


def best_of(func, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        func()
        best = min(best, time.perf_counter() - t0)
    return best


def run(cases, label, repeat):
    py = lambda: [_elim_py.rref_int(r, c) for r, c in cases]
    for r, c in cases:
        if _elim is not None:
            assert _elim.rref_int(r, c) == _elim_py.rref_int(r, c), "kernels disagree"
    t_py = best_of(py, repeat)
    line = f"{label:<34} python {t_py * 1e3:9.2f} ms"
    if _elim is not None:
        cy = lambda: [_elim.rref_int(r, c) for r, c in cases]
        t_cy = best_of(cy, repeat)
        line += f"   cython {t_cy * 1e3:9.2f} ms   speedup {t_py / t_cy:6.1f}x"
    else:
        line += "   (compiled kernel not built)"
    print(line)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    for n, bound in ((20, 9), (40, 9), (60, 3), (30, 10**12)):
        run([dense_case(n, bound, seed) for seed in range(5)], f"dense {n}x{n}, |a| <= {bound}", args.repeat)
    blocks = determining_blocks(3)
    run(blocks, f"determining system n=3 ({len(blocks)} blocks)", args.repeat)


if __name__ == "__main__":
    main()
