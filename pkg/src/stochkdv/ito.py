"""Pathwise Wiener integrals.

Two independent evaluations of the same integral are provided: left-point
Riemann-Ito sums and an integration-by-parts identity
(int_a^b f dW = f W |_a^b - int_a^b f' W dt) whose remaining integral is an
ordinary Lebesgue integral handled by the trapezoid rule.  Stochastic sums
always use the left endpoint (Ito convention); time integrals always use the
trapezoid rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .coeffs import CoeffFn
from .grids import TimeGrid
from .paths import BrownianPath

__all__ = ["IntegralPath", "ito_integral", "ito_integral_ibp",
           "kernel_integral", "kernel_integral_path", "time_integral_W"]


@dataclass(frozen=True, eq=False)
class IntegralPath:
    """Cumulative integral values per grid node; values[0] == 0."""

    grid: TimeGrid
    values: np.ndarray = field(repr=False)
    method: str


def ito_integral(f: CoeffFn, path: BrownianPath) -> IntegralPath:
    """Left-point Ito sums of int f(s) dW_s, cumulated per node."""
    t = path.grid.nodes
    inc = f(t[:-1]) * path.increments
    values = np.concatenate(([0.0], np.cumsum(inc)))
    return IntegralPath(path.grid, values, "ito_sum")


def ito_integral_ibp(f: CoeffFn, path: BrownianPath) -> IntegralPath:
    """int f dW via integration by parts: f(t)W_t - int f'(s) W_s ds."""
    t = path.grid.nodes
    W = path.values
    lebesgue = cumulative_trapezoid(f.derivative()(t) * W, t, initial=0.0)
    values = f(t) * W - f(t[0]) * W[0] - lebesgue
    return IntegralPath(path.grid, values, "ibp")


def kernel_integral_path(B: CoeffFn, K: CoeffFn, path: BrownianPath) -> IntegralPath:
    """int_{t0}^{t_i} Bbar(s) K(s) dW_s at every node, Bbar(s) = int_s^{t_i} B.

    Bbar is exact via the symbolic antiderivative A of B:
    Bbar(s) = A(t_i) - A(s), which collapses the double sum to two running
    sums (O(n) for the whole trajectory).
    """
    t = path.grid.nodes
    dW = path.increments
    A = B.antiderivative()(t)
    KdW = K(t[:-1]) * dW
    s1 = np.concatenate(([0.0], np.cumsum(KdW)))
    s2 = np.concatenate(([0.0], np.cumsum(A[:-1] * KdW)))
    values = A * s1 - s2
    values[0] = 0.0
    return IntegralPath(path.grid, values, "ito_sum")


def kernel_integral(B: CoeffFn, K: CoeffFn, path: BrownianPath, t: float) -> float:
    """int_{t0}^{t} Bbar(s) K(s) dW_s at grid node t."""
    i = path.grid.node_index(t)
    return float(kernel_integral_path(B, K, path).values[i])


def time_integral_W(path: BrownianPath) -> IntegralPath:
    """Trapezoid cumulative integral int_{t0}^{t_i} W_s ds."""
    t = path.grid.nodes
    values = cumulative_trapezoid(path.values, t, initial=0.0)
    return IntegralPath(path.grid, values, "trapezoid")
