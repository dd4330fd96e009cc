#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot paths: the cyclic Jacobi eigensolver on batches of random
Hermitian matrices, and the convex-roof refinement on a rank-2 two-qubit
state. Run as a script; prints a small table with speedups.
"""

from __future__ import annotations

import time

import numpy as np

from qmonogamy._backend import HAVE_NUMBA
from qmonogamy.kernels import jacobi, roof
from qmonogamy.states import generator, random_mixed
from qmonogamy.tensor import hermitian_eig


def _random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2.0


def bench_jacobi(n: int, count: int) -> dict[str, float]:
    rng = generator(99, n)
    mats = [_random_hermitian(n, rng) for _ in range(count)]
    out = {}
    if HAVE_NUMBA:
        jacobi.jacobi_eigh_numba(mats[0])  # trigger compilation
        t0 = time.perf_counter()
        for m in mats:
            jacobi.jacobi_eigh_numba(m)
        out["numba"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    for m in mats:
        jacobi.jacobi_eigh_numpy(m)
    out["numpy"] = time.perf_counter() - t0
    return out


def bench_roof(restarts: int, steps: int) -> dict[str, float]:
    rho = random_mixed((2, 2), 2, seed=5)
    eig = hermitian_eig(rho.mat)
    vals = np.clip(eig.values, 0.0, None)
    rank = int(np.sum(vals > 1e-10))
    weighted = (eig.vectors[:, :rank] * np.sqrt(vals[:rank])).T
    m = rank + 2
    pairs = np.array(
        [(i, j) for i in range(m - 1) for j in range(i + 1, m)], dtype=np.int64
    ).T.reshape(2, -1)
    phis = np.zeros((restarts, m, weighted.shape[1]), dtype=np.complex128)
    phis[0, :rank, :] = weighted
    for t in range(1, restarts):
        u = roof.haar_isometry(m, rank, generator(5, t))
        phis[t] = u @ weighted
    out = {}
    if HAVE_NUMBA:
        warm = phis[0].copy()
        roof._refine_numba(
            warm, pairs[0], pairs[1], 2, 2, roof.CODE_CONCURRENCE, 1.0, 4,
            roof.GRID_N, roof.GS_ITERS, roof.CYCLE_TOL,
        )
        batch = phis.copy()
        t0 = time.perf_counter()
        for t in range(restarts):
            roof._refine_numba(
                batch[t], pairs[0], pairs[1], 2, 2, roof.CODE_CONCURRENCE, 1.0,
                steps, roof.GRID_N, roof.GS_ITERS, roof.CYCLE_TOL,
            )
        out["numba"] = time.perf_counter() - t0
    batch = phis.copy()
    hfun = lambda rows: roof.h_rows_numpy(rows, 2, 2, roof.CODE_CONCURRENCE)  # noqa: E731
    t0 = time.perf_counter()
    roof.refine_numpy(batch, pairs[0], pairs[1], hfun, 1.0, steps)
    out["numpy"] = time.perf_counter() - t0
    return out


def _row(label: str, res: dict[str, float]) -> str:
    numpy_t = res["numpy"]
    if "numba" in res:
        return (
            f"{label:<34} {res['numba'] * 1e3:>10.2f} {numpy_t * 1e3:>10.2f}"
            f" {numpy_t / res['numba']:>9.1f}x"
        )
    return f"{label:<34} {'n/a':>10} {numpy_t * 1e3:>10.2f} {'':>10}"


def main() -> None:
    if not HAVE_NUMBA:
        print("numba not importable; timing the numpy path only")
    print(f"{'benchmark':<34} {'numba ms':>10} {'numpy ms':>10} {'speedup':>10}")
    print(_row("jacobi eigh 8x8    x500", bench_jacobi(8, 500)))
    print(_row("jacobi eigh 16x16  x200", bench_jacobi(16, 200)))
    print(_row("roof refine 64x400 (2-qubit)", bench_roof(64, 400)))


if __name__ == "__main__":
    main()
