"""Deterministic KdV-Burgers machinery: closed-form profiles, a
method-of-lines RK4 solver used as fallback and oracle, and a finite
difference residual checker that arbitrates which PDE a profile satisfies.

The closed forms:

* the constant-coefficient traveling wave
  U(t,x) = 3m^2/(25 b d) sech^2(theta) - 6m^2/(25 b d) tanh(theta) + 6m^2/(25 b d),
  theta = -(m/(10 d)) x - (6 m^3/(250 d^2)) t,
  which solves U_t = d U_xxx + m U_xx + b U U_x;
* the logistic Burgers front V(t,x) = 2/(1+exp(-1-x-exp(t))), which solves
  V_t = exp(t) V_xx + exp(t) V V_x.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import KERNELS
from .coeffs import CoeffFn
from .errors import NumericalError, StabilityError
from .fields import FieldTrajectory
from .grids import SpatialGrid, TimeGrid

__all__ = [
    "WaveParams",
    "Profile",
    "TravelingWave",
    "LogisticFront",
    "ConstantProfile",
    "SampledProfile",
    "traveling_wave",
    "logistic_burgers",
    "mol_solve",
    "pde_residual",
    "required_dt",
]


@dataclass(frozen=True)
class WaveParams:
    delta: float
    mu_eff: float
    beta: float

    def __post_init__(self):
        if self.delta == 0 or self.beta == 0:
            raise ValueError("traveling wave needs delta != 0 and beta != 0")


def traveling_wave(p: WaveParams, t, x):
    m, d, b = p.mu_eff, p.delta, p.beta
    theta = -(m / (10.0 * d)) * x - (6.0 * m ** 3 / (250.0 * d ** 2)) * t
    amp = m ** 2 / (25.0 * b * d)
    return 3.0 * amp / np.cosh(theta) ** 2 - 6.0 * amp * np.tanh(theta) + 6.0 * amp


def logistic_burgers(t, x):
    return 2.0 / (1.0 + np.exp(-1.0 - x - np.exp(t)))


class Profile:
    """A solution surface evaluable at (t, x); initial data is the t0 slice."""

    closed_form = True

    def __call__(self, t, x):
        raise NotImplementedError


@dataclass(frozen=True)
class TravelingWave(Profile):
    params: WaveParams

    def __call__(self, t, x):
        return traveling_wave(self.params, t, x)


@dataclass(frozen=True)
class LogisticFront(Profile):
    def __call__(self, t, x):
        return logistic_burgers(t, x)


@dataclass(frozen=True)
class ConstantProfile(Profile):
    c: float

    def __call__(self, t, x):
        return self.c + 0.0 * np.asarray(x, dtype=float) + 0.0 * t


@dataclass(frozen=True, eq=False)
class SampledProfile(Profile):
    """Initial data known only at grid nodes; not evaluable off-grid in time."""

    sgrid: SpatialGrid
    samples: np.ndarray = field(repr=False)
    closed_form = False

    def __call__(self, t, x):
        return np.interp(x, self.sgrid.nodes, self.samples)


def _max_abs(f: CoeffFn, t0: float, T: float) -> float:
    return float(np.max(np.abs(f(np.linspace(t0, T, 1001)))))


def required_dt(h: float, delta_max: float, mu_max: float, alpha_max: float,
                safety: float = 0.1) -> float:
    """Largest admissible dt for the explicit schemes on spacing h."""
    bound = np.inf
    if delta_max > 0:
        bound = min(bound, safety * h ** 3 / delta_max)
    if mu_max > 0:
        bound = min(bound, safety * h ** 2 / (2.0 * mu_max))
    if alpha_max > 0:
        bound = min(bound, 0.5 * h / alpha_max)
    return bound


def _check_stability(h, dt, delta, mu, alpha, t0, T, safety):
    dmax = _max_abs(delta, t0, T)
    mmax = _max_abs(mu, t0, T)
    amax = _max_abs(alpha, t0, T)
    admissible = required_dt(h, dmax, mmax, amax, safety)
    if dt > admissible:
        raise StabilityError(
            f"dt={dt:.3e} exceeds the stability bound; need dt <= {admissible:.3e} "
            f"for h={h:.3e} (max|delta|={dmax:.3g}, max|mu|={mmax:.3g})"
        )


def mol_solve(delta: CoeffFn, mu: CoeffFn, beta: CoeffFn, alpha: CoeffFn,
              gamma: CoeffFn, phi: Profile, sgrid: SpatialGrid, tgrid: TimeGrid,
              safety: float = 0.1) -> FieldTrajectory:
    """Method-of-lines solve of u_t = delta u_xxx + mu u_xx + beta u u_x
    + alpha u_x + gamma u with RK4 in time and 2nd-order central stencils.
    """
    _check_stability(sgrid.h, tgrid.dt, delta, mu, alpha, tgrid.t0, tgrid.T, safety)
    u0 = np.asarray(phi(tgrid.t0, sgrid.nodes), dtype=float)
    th = tgrid.t0 + 0.5 * tgrid.dt * np.arange(2 * tgrid.n_steps + 1)
    coeffs = np.vstack([np.broadcast_to(f(th), th.shape).astype(float)
                        for f in (delta, mu, beta, alpha, gamma)])
    out, fail = KERNELS.mol_run(u0, sgrid.h, tgrid.dt, coeffs)
    if fail >= 0:
        raise NumericalError(f"mol_solve diverged (non-finite values) at step {fail}")
    return FieldTrajectory(tgrid, sgrid, out, "mol")


def pde_residual(profile: Profile, delta: CoeffFn, mu: CoeffFn, beta: CoeffFn,
                 alpha: CoeffFn, gamma: CoeffFn, sgrid: SpatialGrid,
                 tgrid: TimeGrid) -> float:
    """max over interior nodes of |u_t - (delta u_xxx + mu u_xx + beta u u_x
    + alpha u_x + gamma u)| with central finite differences in t and x.
    """
    if not profile.closed_form:
        raise ValueError("pde_residual needs a closed-form profile (off-grid refinable)")
    t = tgrid.nodes
    z = sgrid.nodes
    U = np.asarray(profile(t[:, None], z[None, :]), dtype=float)
    h, dt = sgrid.h, tgrid.dt
    ut = (U[2:, :] - U[:-2, :]) / (2.0 * dt)
    inner = U[1:-1, :]
    ux = (inner[:, 3:-1] - inner[:, 1:-3]) / (2.0 * h)
    uxx = (inner[:, 3:-1] - 2.0 * inner[:, 2:-2] + inner[:, 1:-3]) / h ** 2
    uxxx = (inner[:, 4:] - 2.0 * inner[:, 3:-1] + 2.0 * inner[:, 1:-3]
            - inner[:, :-4]) / (2.0 * h ** 3)
    tc = t[1:-1, None]
    rhs = (delta(tc) * uxxx + mu(tc) * uxx + beta(tc) * inner[:, 2:-2] * ux
           + alpha(tc) * ux + gamma(tc) * inner[:, 2:-2])
    return float(np.max(np.abs(ut[:, 2:-2] - rhs)))
