"""Hot time-stepping kernels: RK4 method-of-lines and Euler-Maruyama.

Both kernels exist in two flavors built from the same source functions: a
numba @njit build and a pure-numpy build.  Selection: numba is used when
importable unless the environment variable STOCHKDV_NUMBA=0 is set.  The
slice arithmetic is identical in both modes, so results match bit-for-bit.

Boundary handling (two ghost nodes per side, profiles flat to tail
precision at the domain ends): the deterministic RK4 kernel clamps ghosts
to the initial edge values; the stochastic EM kernel uses zero-gradient
ghosts (copies of the current edge values) because additive and
multiplicative noise move the tail level over time, which frozen ghosts
cannot follow.

Noise kinds for the EM kernel: 0 = sigma*u_z (advection), 1 = sigma
(additive), 2 = sigma*u (multiplicative).
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

__all__ = ["KERNELS", "USE_NUMBA", "build_kernels"]


def build_kernels(use_numba: bool) -> SimpleNamespace:
    def fd_rhs(u_ext, h, delta, mu, beta, alpha, gamma):
        u = u_ext[2:-2]
        up1 = u_ext[3:-1]
        um1 = u_ext[1:-3]
        up2 = u_ext[4:]
        um2 = u_ext[:-4]
        ux = (up1 - um1) / (2.0 * h)
        uxx = (up1 - 2.0 * u + um1) / (h * h)
        uxxx = (up2 - 2.0 * up1 + 2.0 * um1 - um2) / (2.0 * h * h * h)
        return delta * uxxx + mu * uxx + beta * u * ux + alpha * ux + gamma * u

    def mol_run(u0, h, dt, coeffs_half):
        # coeffs_half: (5, 2n+1) rows delta, mu, beta, alpha, gamma at half nodes
        n = (coeffs_half.shape[1] - 1) // 2
        nz = u0.shape[0]
        out = np.empty((n + 1, nz))
        out[0] = u0
        ue = np.empty(nz + 4)
        ue[0] = u0[0]
        ue[1] = u0[0]
        ue[nz + 2] = u0[nz - 1]
        ue[nz + 3] = u0[nz - 1]
        u = u0.copy()
        for i in range(n):
            c0 = coeffs_half[:, 2 * i]
            cm = coeffs_half[:, 2 * i + 1]
            c1 = coeffs_half[:, 2 * i + 2]
            ue[2:-2] = u
            k1 = fd_rhs(ue, h, c0[0], c0[1], c0[2], c0[3], c0[4])
            ue[2:-2] = u + 0.5 * dt * k1
            k2 = fd_rhs(ue, h, cm[0], cm[1], cm[2], cm[3], cm[4])
            ue[2:-2] = u + 0.5 * dt * k2
            k3 = fd_rhs(ue, h, cm[0], cm[1], cm[2], cm[3], cm[4])
            ue[2:-2] = u + dt * k3
            k4 = fd_rhs(ue, h, c1[0], c1[1], c1[2], c1[3], c1[4])
            u = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if np.any(~np.isfinite(u)):
                return out, i
            out[i + 1] = u
        return out, -1

    def em_run(u0, h, dt, coeffs, sigma, dW, noise_kind):
        # coeffs: (5, n) at left nodes; sigma: (n,); dW: (n,)
        n = dW.shape[0]
        nz = u0.shape[0]
        out = np.empty((n + 1, nz))
        out[0] = u0
        ue = np.empty(nz + 4)
        u = u0.copy()
        for i in range(n):
            c = coeffs[:, i]
            ue[2:-2] = u
            ue[0] = u[0]
            ue[1] = u[0]
            ue[nz + 2] = u[nz - 1]
            ue[nz + 3] = u[nz - 1]
            rhs = fd_rhs(ue, h, c[0], c[1], c[2], c[3], c[4])
            if noise_kind == 0:
                ux = (ue[3:-1] - ue[1:-3]) / (2.0 * h)
                noise = sigma[i] * ux * dW[i]
            elif noise_kind == 1:
                noise = sigma[i] * dW[i] + 0.0 * u
            else:
                noise = sigma[i] * u * dW[i]
            u = u + dt * rhs + noise
            if np.any(~np.isfinite(u)):
                return out, i
            out[i + 1] = u
        return out, -1

    if use_numba:
        import numba

        fd_rhs = numba.njit(fd_rhs)
        mol_run = numba.njit(mol_run)
        em_run = numba.njit(em_run)

    return SimpleNamespace(fd_rhs=fd_rhs, mol_run=mol_run, em_run=em_run,
                           jitted=use_numba)


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USE_NUMBA = os.environ.get("STOCHKDV_NUMBA", "1") != "0" and _numba_available()
KERNELS = build_kernels(USE_NUMBA)
