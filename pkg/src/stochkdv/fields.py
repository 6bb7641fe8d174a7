"""Space-time field trajectories and their CSV form (long format: t,z,u)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grids import SpatialGrid, TimeGrid

__all__ = ["FieldTrajectory", "field_to_csv", "field_from_csv"]


@dataclass(frozen=True, eq=False)
class FieldTrajectory:
    tgrid: TimeGrid
    sgrid: SpatialGrid
    values: np.ndarray = field(repr=False)  # shape (n_steps+1, n_points)
    provenance: str = "exact"

    def __post_init__(self):
        expected = (self.tgrid.n_steps + 1, self.sgrid.n_points)
        if self.values.shape != expected:
            raise ValueError(f"values shape {self.values.shape} != {expected}")

    def slice_at(self, t: float) -> np.ndarray:
        return self.values[self.tgrid.node_index(t)]


def field_to_csv(traj: FieldTrajectory) -> str:
    t = traj.tgrid.nodes
    z = traj.sgrid.nodes
    lines = ["t,z,u"]
    for i in range(len(t)):
        for j in range(len(z)):
            lines.append(f"{t[i]:.17g},{z[j]:.17g},{traj.values[i, j]:.17g}")
    return "\n".join(lines) + "\n"


def field_from_csv(text: str, provenance: str = "exact") -> FieldTrajectory:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if lines[0].strip() != "t,z,u":
        raise ValueError("field CSV must start with header 't,z,u'")
    rows = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])
    t = np.unique(rows[:, 0])
    z = np.unique(rows[:, 1])
    if len(t) * len(z) != len(rows):
        raise ValueError("field CSV is not a full space-time grid")
    tgrid = TimeGrid(t[0], t[-1], len(t) - 1)
    sgrid = SpatialGrid(z[0], z[-1], len(z))
    vals = rows[:, 2].reshape(len(t), len(z))
    return FieldTrajectory(tgrid, sgrid, vals, provenance)
