"""Time the 4-D grid kernel under both backends.

    python benchmarks/bench_kernels.py [--grid 32] [--points 20]
"""

import argparse
import time

import numpy as np

from hexablock import _kernels, oracles


def run(backend: str, points, grid: int) -> tuple[float, list[float]]:
    oracles.grid_sup_psi(points[0], grid, 1, backend=backend)  # warm-up (JIT)
    t0 = time.perf_counter()
    vals = [oracles.grid_sup_psi(q, grid, 3, backend=backend) for q in points]
    return time.perf_counter() - t0, vals


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid", type=int, default=32)
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    pts = oracles.sample_region("H", rng, args.points)

    t_np, v_np = run("numpy", pts, args.grid)
    print(f"numpy  {t_np:8.3f} s  ({t_np / len(pts) * 1e3:.1f} ms/point)")
    if not _kernels.HAVE_NUMBA:
        print("numba  unavailable (missing or disabled by HEXABLOCK_NO_NUMBA)")
        return
    t_nb, v_nb = run("numba", pts, args.grid)
    print(f"numba  {t_nb:8.3f} s  ({t_nb / len(pts) * 1e3:.1f} ms/point)  speedup {t_np / t_nb:.2f}x")
    print(f"max backend disagreement {max(abs(a - b) for a, b in zip(v_np, v_nb)):.2e}")


if __name__ == "__main__":
    main()
