#!/usr/bin/env python3
"""Time the jitted kernels against the pure-numpy fallback.

Runs the deterministic method-of-lines kernel and the stochastic
Euler-Maruyama kernel on a mid-sized grid with both builds and prints a
small table.  The first jitted call is excluded from the timing so the
one-off compilation cost is reported separately.
"""

import argparse
import time

import numpy as np

from stochkdv._kernels import build_kernels


def _timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-points", type=int, default=513)
    ap.add_argument("--n-steps", type=int, default=4096)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    nz, n = args.n_points, args.n_steps
    z = np.linspace(-20.0, 20.0, nz)
    h = z[1] - z[0]
    dt = 1.0 / n
    u0 = 2.0 / (1.0 + np.exp(-z))
    rng = np.random.default_rng(0)
    coeffs_half = np.zeros((5, 2 * n + 1))
    coeffs_half[0] = 0.05   # dispersion
    coeffs_half[1] = 0.5    # diffusion
    coeffs_half[2] = 0.2    # nonlinearity
    coeffs = coeffs_half[:, ::2].copy()[:, :n]
    sigma = np.ones(n)
    dW = rng.normal(size=n) * np.sqrt(dt)

    rows = []
    for label, use_numba in (("numba", True), ("numpy", False)):
        try:
            k = build_kernels(use_numba)
        except ImportError:
            print(f"{label}: unavailable, skipped")
            continue
        t0 = time.perf_counter()
        k.mol_run(u0, h, dt, coeffs_half)
        k.em_run(u0, h, dt, coeffs, sigma, dW, 1)
        warm = time.perf_counter() - t0
        mol = _timeit(lambda: k.mol_run(u0, h, dt, coeffs_half), args.repeats)
        em = _timeit(lambda: k.em_run(u0, h, dt, coeffs, sigma, dW, 1),
                     args.repeats)
        rows.append((label, warm, mol, em))

    print(f"grid: {nz} points x {n} steps, best of {args.repeats}")
    print(f"{'build':<8}{'warmup [s]':>12}{'mol_run [s]':>13}{'em_run [s]':>12}")
    for label, warm, mol, em in rows:
        print(f"{label:<8}{warm:>12.4f}{mol:>13.5f}{em:>12.5f}")
    if len(rows) == 2:
        print(f"speedup: mol_run {rows[1][2] / rows[0][2]:.1f}x, "
              f"em_run {rows[1][3] / rows[0][3]:.1f}x")


if __name__ == "__main__":
    main()
