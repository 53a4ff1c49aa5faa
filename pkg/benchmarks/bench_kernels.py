"""Time the numba and numpy kernel paths on the same workloads.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Results are checked for equality before timings are reported.  The first
numba call per kernel is excluded (compilation, or loading the on-disk cache).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qgrass import _kernels
from qgrass.euler import band_table, euler_flag_tree, tree_table
from qgrass.quiver import Arrow, Quiver, Winding, cycle_quiver
from qgrass.subsets import closed_masks


def zigzag_tree(n: int) -> Winding:
    """Alternating path with 2n vertices over the Kronecker quiver."""
    K = Quiver(("1", "2"), (("a", "1", "2"), ("b", "1", "2")))
    verts, arrows, vmap, amap = [], [], {}, {}
    for i in range(n):
        verts += [f"s{i}", f"t{i}"]
        vmap[f"s{i}"], vmap[f"t{i}"] = "1", "2"
        arrows.append(Arrow(f"a{i}", f"s{i}", f"t{i}"))
        amap[f"a{i}"] = "a"
        if i:
            arrows.append(Arrow(f"b{i}", f"s{i}", f"t{i - 1}"))
            amap[f"b{i}"] = "b"
    return Winding(Quiver(tuple(verts), tuple(arrows)), K, vmap, amap)


def cycle_band(l: int) -> Winding:
    signs = [1 if i % 2 else -1 for i in range(l)]
    S = cycle_quiver(signs)
    K = Quiver(("1", "2"), (("a", "1", "2"), ("b", "1", "2")))
    # every second vertex is a source; label sources 1 and sinks 2
    sources = {v for i, v in enumerate(S.vertices) if i % 2 == 0}
    vmap = {v: "1" if v in sources else "2" for v in S.vertices}
    amap = {a.id: "a" if i % 2 == 0 else "b" for i, a in enumerate(S.arrows)}
    return Winding(S, K, vmap, amap)


WORKLOADS = {
    "closed subsets (zigzag, 24 vertices)": lambda: closed_masks(zigzag_tree(12)),
    "closed subsets exact (zigzag, 30 vertices)": lambda: closed_masks(zigzag_tree(15), (7, 8)),
    "tree table (zigzag, 20 vertices)": lambda: tree_table(zigzag_tree(10), (11, 11)),
    "band table (Kronecker band, n=6)": lambda: band_table(cycle_band(2), 6, (7, 7)),
    "flag chain (zigzag, 20 vertices)": lambda: euler_flag_tree(zigzag_tree(10), [(2, 3), (5, 6), (8, 9)]),
    "convolution (40x40 dense)": lambda: _kernels.convolve(
        np.arange(1600, dtype=np.int64).reshape(40, 40) % 7,
        np.arange(1600, dtype=np.int64).reshape(40, 40) % 5),
}


def _same(a, b) -> bool:
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def run(repeat: int) -> None:
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    width = max(len(k) for k in WORKLOADS)
    print(f"{'workload':<{width}}  {'numpy ms':>10}  {'numba ms':>10}  {'speedup':>8}")
    for name, job in WORKLOADS.items():
        best = {}
        out = {}
        for backend in ("numpy", "numba"):
            with _kernels.using_backend(backend):
                out[backend] = job()  # warm-up
                times = []
                for _ in range(repeat):
                    t0 = time.perf_counter()
                    job()
                    times.append(time.perf_counter() - t0)
                best[backend] = min(times) * 1e3
        assert _same(out["numpy"], out["numba"]), name
        ratio = best["numpy"] / best["numba"] if best["numba"] else float("inf")
        print(f"{name:<{width}}  {best['numpy']:>10.2f}  {best['numba']:>10.2f}  {ratio:>7.1f}x")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    run(p.parse_args().repeat)


if __name__ == "__main__":
    main()
