"""Independent numerical oracle: method of lines + Euler-Maruyama.

The oracle discretizes the stochastic equations exactly as written (drift
part with the same central stencils as the deterministic solver, noise term
per kind) and consumes Brownian increments from the same BrownianPath object
used by the exact composition, so pathwise comparisons happen on a common
realization.  The path grid must equal or refine the oracle time grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import KERNELS
from .det_solutions import required_dt, _max_abs
from .errors import GridMismatchError, NumericalError, StabilityError
from .fields import FieldTrajectory
from .grids import SpatialGrid, TimeGrid
from .paths import BrownianPath
from .spde_exact import Scenario

__all__ = ["OracleConfig", "em_required_dt", "em_solve", "ErrorReport",
           "compare"]

_NOISE_CODE = {"advection": 0, "additive": 1, "multiplicative": 2}


def em_required_dt(h: float, delta_max: float, mu_max: float, alpha_max: float,
                   safety: float = 0.9, horizon: float = 1.0) -> float:
    """Largest admissible Euler step on spacing h.

    Forward Euler needs the scaled FD symbol z = dt(ia - b) inside the unit
    disk around -1, i.e. dt <= 2b/(a^2 + b^2) over all wavenumbers, where
    ia collects the odd-derivative (dispersive/advective) stencil symbols
    and b >= 0 the diffusive one.  Where b = 0 the symbol is purely
    imaginary and Euler only grows like exp(horizon*a^2*dt/2), so a
    transient-growth cap dt <= 2/(horizon*a^2) is used instead.  The
    classical h^3/h^2/h single-term bounds are intersected on top.
    """
    theta = np.linspace(1e-3, np.pi, 2048)
    a = (delta_max * np.abs(np.sin(2 * theta) - 2 * np.sin(theta)) / h ** 3
         + alpha_max * np.abs(np.sin(theta)) / h)
    b = mu_max * (2.0 - 2.0 * np.cos(theta)) / h ** 2
    bound = required_dt(h, delta_max, mu_max, alpha_max, safety)
    if mu_max > 0:
        with np.errstate(divide="ignore"):
            bound = min(bound, safety * float(np.min(2.0 * b / (a * a + b * b))))
    elif delta_max > 0 or alpha_max > 0:
        a_max = float(np.max(a))
        bound = min(bound, safety * 2.0 / (max(horizon, 1e-12) * a_max ** 2))
    return bound


@dataclass(frozen=True)
class OracleConfig:
    sgrid: SpatialGrid
    tgrid: TimeGrid
    safety: float = 0.9

    def __post_init__(self):
        if not 0 < self.safety <= 1:
            raise ValueError("safety factor must be in (0, 1]")


def _coarse_increments(path: BrownianPath, tgrid: TimeGrid) -> np.ndarray:
    pg = path.grid
    if abs(pg.t0 - tgrid.t0) > 1e-12 or abs(pg.T - tgrid.T) > 1e-12:
        raise GridMismatchError("path interval does not match the oracle grid")
    ratio = pg.n_steps // tgrid.n_steps
    if ratio * tgrid.n_steps != pg.n_steps or ratio < 1:
        raise GridMismatchError(
            f"path n_steps={pg.n_steps} must be a multiple of oracle "
            f"n_steps={tgrid.n_steps}")
    return path.values[::ratio][1:] - path.values[::ratio][:-1]


def em_solve(s: Scenario, path: BrownianPath, cfg: OracleConfig) -> FieldTrajectory:
    """Euler-Maruyama step u += RHS dt + Noise dW on the oracle grids."""
    tg, sg = cfg.tgrid, cfg.sgrid
    dmax = _max_abs(s.delta, tg.t0, tg.T)
    mmax = _max_abs(s.mu, tg.t0, tg.T)
    amax = _max_abs(s.alpha, tg.t0, tg.T)
    admissible = em_required_dt(sg.h, dmax, mmax, amax, cfg.safety,
                                tg.T - tg.t0)
    if tg.dt > admissible:
        raise StabilityError(
            f"oracle dt={tg.dt:.3e} exceeds the stability bound; need "
            f"dt <= {admissible:.3e} for h={sg.h:.3e}")
    dW = _coarse_increments(path, tg)
    tn = tg.nodes[:-1]
    coeff_fns = (s.delta, s.mu, s.beta, s.alpha, s.gamma)
    coeffs = np.vstack([np.broadcast_to(f(tn), tn.shape).astype(float)
                        for f in coeff_fns])
    if s.kind == "multiplicative":
        coeffs[2] = 0.0  # the linear equation has no nonlinear term
    sigma = np.broadcast_to(s.sigma(tn), tn.shape).astype(float)
    u0 = np.asarray(s.phi(tg.t0, sg.nodes), dtype=float)
    out, fail = KERNELS.em_run(u0, sg.h, tg.dt, coeffs, sigma, dW,
                               _NOISE_CODE[s.kind])
    if fail >= 0:
        raise NumericalError(f"em_solve diverged (non-finite values) at step {fail}")
    return FieldTrajectory(tg, sg, out, "oracle")


@dataclass(frozen=True)
class ErrorReport:
    linf: float
    l2: float
    slice_linf: np.ndarray  # per-time-slice sup error

    def __repr__(self):
        return f"ErrorReport(linf={self.linf:.3e}, l2={self.l2:.3e})"


def compare(a: FieldTrajectory, b: FieldTrajectory) -> ErrorReport:
    """Space-time L-inf and (grid-weighted) L2 errors between two fields."""
    if a.tgrid != b.tgrid or a.sgrid != b.sgrid:
        raise GridMismatchError("compared trajectories live on different grids")
    diff = a.values - b.values
    slice_linf = np.max(np.abs(diff), axis=1)
    l2 = float(np.sqrt(np.sum(diff ** 2) * a.tgrid.dt * a.sgrid.h))
    return ErrorReport(float(np.max(slice_linf)), l2, slice_linf)
