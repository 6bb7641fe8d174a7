"""Uniform time and space grids."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["TimeGrid", "SpatialGrid"]


@dataclass(frozen=True)
class TimeGrid:
    t0: float
    T: float
    n_steps: int

    def __post_init__(self):
        if not self.t0 < self.T:
            raise ValueError(f"need t0 < T, got [{self.t0}, {self.T}]")
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")

    @property
    def dt(self) -> float:
        return (self.T - self.t0) / self.n_steps

    @property
    def nodes(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n_steps + 1)

    def refined(self, factor: int) -> "TimeGrid":
        return TimeGrid(self.t0, self.T, self.n_steps * factor)

    def node_index(self, t: float) -> int:
        """Index of the grid node equal to t (to within 1e-9*dt)."""
        i = round((t - self.t0) / self.dt)
        if i < 0 or i > self.n_steps or abs(self.t0 + i * self.dt - t) > 1e-9 * self.dt:
            raise ValueError(f"t={t} is not a node of {self}")
        return int(i)


@dataclass(frozen=True)
class SpatialGrid:
    z_min: float
    z_max: float
    n_points: int

    def __post_init__(self):
        if not self.z_min < self.z_max:
            raise ValueError(f"need z_min < z_max, got [{self.z_min}, {self.z_max}]")
        if self.n_points < 8:
            raise ValueError(f"n_points must be >= 8, got {self.n_points}")

    @property
    def h(self) -> float:
        return (self.z_max - self.z_min) / (self.n_points - 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.z_min + self.h * np.arange(self.n_points)

    def refined(self, factor: int) -> "SpatialGrid":
        # keeps the endpoints; (n-1)*factor intervals
        return SpatialGrid(self.z_min, self.z_max, (self.n_points - 1) * factor + 1)
