"""Seeded Brownian motion sample paths.

One BrownianPath is the single source of randomness shared by the exact
composition solvers and the numerical oracle, so pathwise comparisons are
made on a common realization.

RNG convention (documented so statistics are comparable across
implementations): a counter-based Philox stream keyed by (seed, path_index);
53-bit uniforms in (0, 1) mapped through the inverse normal CDF.  Bridge
refinement draws come from an independent stream keyed by
(seed XOR salt, n_steps << 32 | segment_index), so refining a fixed path is
itself reproducible and does not disturb the path's own stream.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from .grids import TimeGrid

__all__ = ["BrownianPath", "sample_brownian", "refine", "increments_matrix",
           "path_to_csv", "path_from_csv"]

_BRIDGE_SALT = np.uint64(0x9E3779B97F4A7C15)
_TWO53 = float(1 << 53)


def _stream(key0: int, key1: int) -> np.random.Generator:
    key = np.array([key0, key1], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _normals(gen: np.random.Generator, n: int) -> np.ndarray:
    u = gen.integers(1, 1 << 53, size=n, dtype=np.int64) / _TWO53
    return ndtri(u)


@dataclass(frozen=True, eq=False)
class BrownianPath:
    grid: TimeGrid
    values: np.ndarray = field(repr=False)
    seed: int

    def __post_init__(self):
        if self.values.shape != (self.grid.n_steps + 1,):
            raise ValueError("values length does not match grid")

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.values)


def sample_brownian(grid: TimeGrid, seed: int, path_index: int = 0) -> BrownianPath:
    """Brownian path on the grid: W(t0)=0, Normal(0, dt) increments."""
    gen = _stream(np.uint64(seed), np.uint64(path_index))
    dW = np.sqrt(grid.dt) * _normals(gen, grid.n_steps)
    values = np.concatenate(([0.0], np.cumsum(dW)))
    return BrownianPath(grid, values, int(seed))


def increments_matrix(grid: TimeGrid, seed: int, n_paths: int,
                      start_index: int = 0) -> np.ndarray:
    """(n_paths, n_steps) increment matrix; row k is path start_index+k."""
    out = np.empty((n_paths, grid.n_steps))
    sdt = np.sqrt(grid.dt)
    for k in range(n_paths):
        gen = _stream(np.uint64(seed), np.uint64(start_index + k))
        out[k] = sdt * _normals(gen, grid.n_steps)
    return out


def refine(path: BrownianPath, factor: int) -> BrownianPath:
    """Brownian-bridge refinement onto a grid with n_steps*factor steps.

    Values at the original nodes are kept bit-for-bit; interior values are
    conditionally sampled given the segment endpoints.
    """
    if factor < 2:
        raise ValueError(f"refinement factor must be >= 2, got {factor}")
    grid = path.grid
    fine = grid.refined(factor)
    W = path.values
    new = np.empty(fine.n_steps + 1)
    sub = fine.dt
    key0 = np.uint64(path.seed) ^ _BRIDGE_SALT
    for i in range(grid.n_steps):
        key1 = np.uint64(grid.n_steps) << np.uint64(32) | np.uint64(i)
        zs = _normals(_stream(key0, key1), factor - 1)
        new[i * factor] = W[i]
        w = W[i]
        for j in range(1, factor):
            rem = grid.dt - (j - 1) * sub  # time from previous fill to segment end
            mean = w + (sub / rem) * (W[i + 1] - w)
            var = sub * (rem - sub) / rem
            w = mean + np.sqrt(var) * zs[j - 1]
            new[i * factor + j] = w
    new[-1] = W[-1]
    return BrownianPath(fine, new, path.seed)


def path_to_csv(path: BrownianPath) -> str:
    lines = ["t,W"]
    for t, w in zip(path.grid.nodes, path.values):
        lines.append(f"{t:.17g},{w:.17g}")
    return "\n".join(lines) + "\n"


def path_from_csv(text: str, seed: int = 0) -> BrownianPath:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if lines[0].strip() != "t,W":
        raise ValueError("path CSV must start with header 't,W'")
    rows = [tuple(float(x) for x in ln.split(",")) for ln in lines[1:]]
    t = np.array([r[0] for r in rows])
    w = np.array([r[1] for r in rows])
    grid = TimeGrid(t[0], t[-1], len(t) - 1)
    if not np.allclose(t, grid.nodes, rtol=0, atol=1e-9 * grid.dt):
        raise ValueError("path CSV nodes are not a uniform grid")
    return BrownianPath(grid, w, seed)
