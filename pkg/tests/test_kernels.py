"""Parity between the numba-jitted and pure-numpy kernel builds."""

import numpy as np
import pytest

from stochkdv._kernels import build_kernels

numba = pytest.importorskip("numba")

RNG = np.random.default_rng(2024)
NZ, N = 48, 200
U0 = np.exp(-np.linspace(-4.0, 4.0, NZ) ** 2)
H, DT = 8.0 / (NZ - 1), 1e-4


@pytest.fixture(scope="module")
def builds():
    return build_kernels(True), build_kernels(False)


def test_jit_flag(builds):
    jit, plain = builds
    assert jit.jitted and not plain.jitted


def test_mol_run_bitwise_identical(builds):
    jit, plain = builds
    coeffs_half = RNG.normal(size=(5, 2 * N + 1)) * 0.01
    a, fa = jit.mol_run(U0, H, DT, coeffs_half)
    b, fb = plain.mol_run(U0, H, DT, coeffs_half)
    assert fa == fb == -1
    np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("noise_kind", [0, 1, 2])
def test_em_run_bitwise_identical(builds, noise_kind):
    jit, plain = builds
    coeffs = RNG.normal(size=(5, N)) * 0.01
    sigma = RNG.normal(size=N)
    dW = RNG.normal(size=N) * np.sqrt(DT)
    a, fa = jit.em_run(U0, H, DT, coeffs, sigma, dW, noise_kind)
    b, fb = plain.em_run(U0, H, DT, coeffs, sigma, dW, noise_kind)
    assert fa == fb == -1
    np.testing.assert_array_equal(a, b)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_divergence_reported_same_step(builds):
    jit, plain = builds
    coeffs = np.zeros((5, N))
    coeffs[2] = 1e9  # absurd nonlinearity blows the iteration up
    sigma = np.zeros(N)
    dW = np.zeros(N)
    _, fa = jit.em_run(U0 * 1e8, H, DT, coeffs, sigma, dW, 1)
    _, fb = plain.em_run(U0 * 1e8, H, DT, coeffs, sigma, dW, 1)
    assert fa == fb >= 0


def test_env_flag_selects_numpy_build(monkeypatch):
    import importlib

    import stochkdv._kernels as k

    monkeypatch.setenv("STOCHKDV_NUMBA", "0")
    importlib.reload(k)
    try:
        assert k.USE_NUMBA is False
        assert k.KERNELS.jitted is False
    finally:
        monkeypatch.delenv("STOCHKDV_NUMBA")
        importlib.reload(k)
