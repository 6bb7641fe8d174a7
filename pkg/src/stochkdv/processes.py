"""Closed-form Gaussian laws and pathwise simulators for the two
characteristic process families: the linear SDE dX = C dt + E dW and the
Langevin-type pair (Z, Zdot) with Zdd = (B'/B) Zdot + B K Wdot.

All moments are exact symbolic integrals (quadrature fallback only where a
square leaves the symbolic family).  Conditional laws divide by t, as the
source formulas do, and are therefore rejected at t == t0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coeffs import CoeffFn, Const, Scale, Sum, product
from .ito import ito_integral, kernel_integral_path
from .paths import BrownianPath

__all__ = ["GaussianLaw", "LinearSDEProcess", "LangevinProcess"]


@dataclass(frozen=True)
class GaussianLaw:
    mean: float
    variance: float

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")


def _clip0(x: float) -> float:
    # conditional variances can round a hair below zero in degenerate cases
    return 0.0 if -1e-12 < x < 0 else x


def _bbar(B: CoeffFn, t: float) -> CoeffFn:
    """Bbar(s) = int_s^t B(r) dr as a symbolic function of s (t fixed)."""
    A = B.antiderivative()
    return Sum((Const(float(A(t))), Scale(-1.0, A)))


@dataclass(frozen=True)
class LinearSDEProcess:
    """dX = C(t) dt + E(t) dW with X(t0) ~ N(x0_mean, x0_var)."""

    C: CoeffFn
    E: CoeffFn
    x0_mean: float = 0.0
    x0_var: float = 0.0
    t0: float = 0.0

    def __post_init__(self):
        if self.x0_var < 0:
            raise ValueError("x0_var must be >= 0")

    def x_law(self, t: float) -> GaussianLaw:
        self._check(t)
        mean = self.x0_mean + self.C.integrate(self.t0, t)
        var = self.x0_var + self.E.square().integrate(self.t0, t)
        return GaussianLaw(mean, var)

    def x_cov_W(self, t: float) -> float:
        self._check(t)
        return self.E.integrate(self.t0, t)

    def x_conditional(self, t: float, w: float) -> GaussianLaw:
        self._check(t, strict=True)
        ie = self.E.integrate(self.t0, t)
        mean = self.x0_mean + self.C.integrate(self.t0, t) + w * ie / t
        var = self.x0_var + self.E.square().integrate(self.t0, t) - ie ** 2 / t
        return GaussianLaw(mean, _clip0(var))

    def simulate(self, path: BrownianPath, z_init: float) -> np.ndarray:
        """X at every node of the path: z_init + exact drift + Ito integral of E."""
        self._check_grid(path)
        t = path.grid.nodes
        AC = self.C.antiderivative()
        drift = AC(t) - AC(self.t0)
        return z_init + drift + ito_integral(self.E, path).values

    def _check(self, t, strict=False):
        if t < self.t0 or (strict and t == self.t0):
            op = "<=" if strict else "<"
            raise ValueError(f"t={t} {op} t0={self.t0} is outside the process interval")

    def _check_grid(self, path):
        if abs(path.grid.t0 - self.t0) > 1e-12:
            raise ValueError("path grid does not start at the process t0")


@dataclass(frozen=True)
class LangevinProcess:
    """Zdd = (B'/B) Zdot + B(t) K(t) Wdot with Z(t0) = z0, Zdot(t0) = 0.

    Z_t = z0 + int Bbar(s) K(s) dW_s, Zdot_t = B(t) int K dW.
    """

    B: CoeffFn
    K: CoeffFn
    z0: float = 0.0
    t0: float = 0.0

    def z_law(self, t: float) -> GaussianLaw:
        self._check(t)
        bk = product(_bbar(self.B, t), self.K)
        return GaussianLaw(self.z0, bk.square().integrate(self.t0, t))

    def zdot_law(self, t: float) -> GaussianLaw:
        self._check(t)
        var = float(self.B(t)) ** 2 * self.K.square().integrate(self.t0, t)
        return GaussianLaw(0.0, var)

    def z_cov_W(self, t: float) -> float:
        self._check(t)
        return product(_bbar(self.B, t), self.K).integrate(self.t0, t)

    def zdot_cov_W(self, t: float) -> float:
        self._check(t)
        return float(self.B(t)) * self.K.integrate(self.t0, t)

    def z_conditional(self, t: float, w: float) -> GaussianLaw:
        self._check(t, strict=True)
        bk = product(_bbar(self.B, t), self.K)
        ibk = bk.integrate(self.t0, t)
        mean = self.z0 + w * ibk / t
        var = bk.square().integrate(self.t0, t) - ibk ** 2 / t
        return GaussianLaw(mean, _clip0(var))

    def zdot_conditional(self, t: float, w: float) -> GaussianLaw:
        self._check(t, strict=True)
        bt = float(self.B(t))
        ik = self.K.integrate(self.t0, t)
        mean = w * bt * ik / t
        var = bt ** 2 * (self.K.square().integrate(self.t0, t) - ik ** 2 / t)
        return GaussianLaw(mean, _clip0(var))

    def simulate(self, path: BrownianPath):
        """(Z, Zdot) trajectories at every node of the path."""
        if abs(path.grid.t0 - self.t0) > 1e-12:
            raise ValueError("path grid does not start at the process t0")
        t = path.grid.nodes
        z = self.z0 + kernel_integral_path(self.B, self.K, path).values
        zdot = self.B(t) * ito_integral(self.K, path).values
        return z, zdot

    def _check(self, t, strict=False):
        if t < self.t0 or (strict and t == self.t0):
            op = "<=" if strict else "<"
            raise ValueError(f"t={t} {op} t0={self.t0} is outside the process interval")
