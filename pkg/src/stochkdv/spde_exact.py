"""Exact pathwise solutions of the three stochastic KdV-Burgers variants.

A solution u(t,z) is built by composing a deterministic solution surface
with an explicitly simulated characteristic process driven by one Brownian
path shared across all spatial points (the noise is space-uniform):

* advection noise (sigma u_z dW):  u(t,z) = U(t, X_t) with
  dX = alpha dt + sigma dW, X(t0) = z, and U solving the deterministic
  equation with diffusion mu - sigma^2/2.
* additive noise (sigma dW):  u(t,z) = R(t) (V(t, Z_t) + Zdot_t / Bfrak(t))
  with R = exp(int gamma), Bfrak = beta R, and (Z, Zdot) the Langevin pair
  with B = Bfrak, K = sigma / R.
* multiplicative noise (sigma u dW, linear equation):
  u(t,z) = v(t,z) exp(-Y_t), Y_t = 1/2 int sigma^2 - int sigma dW, with v
  solving the deterministic linear equation dv = f(v) dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coeffs import CoeffFn, Const, Exp, Scale, Sum, constant_value, multiply
from .det_solutions import (ConstantProfile, LogisticFront, Profile,
                            TravelingWave, mol_solve)
from .errors import ConfigError, GridMismatchError
from .fields import FieldTrajectory
from .grids import SpatialGrid
from .ito import ito_integral
from .paths import BrownianPath
from .processes import LangevinProcess

__all__ = ["Scenario", "r_factor", "solve", "solve_advection", "solve_additive",
           "solve_multiplicative"]

KINDS = ("advection", "additive", "multiplicative")


@dataclass(frozen=True)
class Scenario:
    kind: str
    alpha: CoeffFn
    beta: CoeffFn
    gamma: CoeffFn
    delta: CoeffFn
    mu: CoeffFn
    sigma: CoeffFn
    phi: Profile
    t0: float
    T: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == "additive":
            b = self.beta(np.linspace(self.t0, self.T, 1001))
            if np.min(b) <= 0:
                raise ConfigError("additive kind requires beta(t) > 0 on [t0, T]")


def r_factor(gamma: CoeffFn, t0: float, t: float) -> float:
    """R(t) = exp(int_{t0}^t gamma)."""
    return math.exp(gamma.integrate(t0, t))


def _check_path(s: Scenario, path: BrownianPath):
    if abs(path.grid.t0 - s.t0) > 1e-12 or abs(path.grid.T - s.T) > 1e-12:
        raise GridMismatchError("path grid does not cover the scenario interval")


def _cumulative_integral(f: CoeffFn, t: np.ndarray) -> np.ndarray:
    """int_{t[0]}^{t_i} f, exact when f is symbolic."""
    try:
        A = f.antiderivative()
    except TypeError:
        return np.array([f.integrate(t[0], ti) for ti in t])
    At = A(t)
    return At - At[0]

def _mu_shifted(mu: CoeffFn, sigma: CoeffFn) -> CoeffFn:
    return Sum((mu, Scale(-0.5, sigma.square())))


def _r_coeff(gamma: CoeffFn, t0: float, invert: bool = False) -> CoeffFn:
    """R(t) (or 1/R(t)) as a symbolic coefficient; needs constant gamma."""
    g = constant_value(gamma)
    if g is None:
        raise ConfigError("the additive solver needs a constant gamma "
                          "(R(t) must stay in the symbolic coefficient family)")
    if g == 0.0:
        return Const(1.0)
    sign = -1.0 if invert else 1.0
    return Exp(math.exp(-sign * g * t0), sign * g)


def _deterministic_advection(s: Scenario, sgrid: SpatialGrid, path: BrownianPath):
    """Solution surface U of the shifted-diffusion deterministic equation.

    Returns (eval(t_scalar_or_col, x_array), provenance).
    """
    gamma0 = constant_value(s.gamma) == 0.0
    if isinstance(s.phi, (TravelingWave, LogisticFront)) and gamma0:
        return s.phi, "exact"
    if isinstance(s.phi, ConstantProfile):
        c = s.phi.c
        return (lambda t, x: c * np.exp(_as_array_integral(s.gamma, s.t0, t)) + 0.0 * x,
                "exact")
    traj = mol_solve(s.delta, _mu_shifted(s.mu, s.sigma), s.beta, Const(0.0),
                     s.gamma, s.phi, sgrid, path.grid)
    return _interp_surface(traj), "exact+numeric-profile"


def _as_array_integral(f: CoeffFn, t0, t):
    t = np.asarray(t, dtype=float)
    try:
        A = f.antiderivative()
        return A(t) - A(t0)
    except TypeError:
        flat = np.atleast_1d(t)
        vals = np.array([f.integrate(t0, ti) for ti in flat])
        return vals.reshape(t.shape)


def _interp_surface(traj: FieldTrajectory):
    zs = traj.sgrid.nodes

    def evaluate(t, x):
        i = traj.tgrid.node_index(float(np.ravel(t)[0]))
        return np.interp(x, zs, traj.values[i])

    return evaluate


def solve_advection(s: Scenario, path: BrownianPath,
                    sgrid: SpatialGrid) -> FieldTrajectory:
    if s.kind != "advection":
        raise ConfigError(f"solve_advection got kind {s.kind!r}")
    _check_path(s, path)
    t = path.grid.nodes
    drift = _as_array_integral(s.alpha, s.t0, t)
    offset = drift + ito_integral(s.sigma, path).values
    U, provenance = _deterministic_advection(s, sgrid, path)
    z = sgrid.nodes
    if provenance == "exact":
        values = np.asarray(U(t[:, None], z[None, :] + offset[:, None]), dtype=float)
    else:
        values = np.empty((len(t), len(z)))
        for i in range(len(t)):
            values[i] = U(t[i], z + offset[i])
    return FieldTrajectory(path.grid, sgrid, values, provenance)


def _deterministic_additive(s: Scenario, bfrak: CoeffFn, sgrid: SpatialGrid,
                            path: BrownianPath):
    alpha0 = constant_value(s.alpha) == 0.0
    if isinstance(s.phi, (TravelingWave, LogisticFront)) and alpha0:
        return s.phi, "exact"
    if isinstance(s.phi, ConstantProfile):
        c = s.phi.c
        return (lambda t, x: c + 0.0 * np.asarray(x, dtype=float) + 0.0 * t, "exact")
    traj = mol_solve(s.delta, s.mu, bfrak, s.alpha, Const(0.0), s.phi, sgrid,
                     path.grid)
    return _interp_surface(traj), "exact+numeric-profile"


def solve_additive(s: Scenario, path: BrownianPath,
                   sgrid: SpatialGrid) -> FieldTrajectory:
    if s.kind != "additive":
        raise ConfigError(f"solve_additive got kind {s.kind!r}")
    _check_path(s, path)
    R = _r_coeff(s.gamma, s.t0)
    Rinv = _r_coeff(s.gamma, s.t0, invert=True)
    bfrak = multiply(s.beta, R)
    K = multiply(s.sigma, Rinv)
    if bfrak is None or K is None:
        raise ConfigError("beta*R or sigma/R leaves the symbolic coefficient family")
    t = path.grid.nodes
    bf = np.asarray(bfrak(t), dtype=float)
    if np.min(np.abs(bf)) == 0.0:
        raise ConfigError("Bfrak(t) = beta(t) R(t) vanishes on the interval")
    proc = LangevinProcess(bfrak, K, z0=0.0, t0=s.t0)
    z_off, zdot = proc.simulate(path)
    V, provenance = _deterministic_additive(s, bfrak, sgrid, path)
    rt = np.asarray(R(t), dtype=float)
    z = sgrid.nodes
    if provenance == "exact":
        warped = np.asarray(V(t[:, None], z[None, :] + z_off[:, None]), dtype=float)
    else:
        warped = np.empty((len(t), len(z)))
        for i in range(len(t)):
            warped[i] = V(t[i], z + z_off[i])
    values = rt[:, None] * (warped + (zdot / bf)[:, None])
    return FieldTrajectory(path.grid, sgrid, values, provenance)


def solve_multiplicative(s: Scenario, path: BrownianPath,
                         sgrid: SpatialGrid) -> FieldTrajectory:
    if s.kind != "multiplicative":
        raise ConfigError(f"solve_multiplicative got kind {s.kind!r}")
    _check_path(s, path)
    t = path.grid.nodes
    half_sq = 0.5 * _as_array_integral(s.sigma.square(), s.t0, t)
    y = half_sq - ito_integral(s.sigma, path).values
    if isinstance(s.phi, ConstantProfile):
        v = (s.phi.c * np.exp(_as_array_integral(s.gamma, s.t0, t)))[:, None] \
            * np.ones((1, sgrid.n_points))
        provenance = "exact"
    else:
        traj = mol_solve(s.delta, s.mu, Const(0.0), s.alpha, s.gamma, s.phi,
                         sgrid, path.grid)
        v = traj.values
        provenance = "exact+numeric-profile"
    values = v * np.exp(-y)[:, None]
    return FieldTrajectory(path.grid, sgrid, values, provenance)


_SOLVERS = {"advection": solve_advection, "additive": solve_additive,
            "multiplicative": solve_multiplicative}


def solve(s: Scenario, path: BrownianPath, sgrid: SpatialGrid) -> FieldTrajectory:
    """Dispatch to the kind-specific exact composition."""
    return _SOLVERS[s.kind](s, path, sgrid)
