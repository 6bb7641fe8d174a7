import numpy as np
import pytest

from stochkdv.coeffs import Const, Exp, Power
from stochkdv.grids import TimeGrid
from stochkdv.ito import (ito_integral, ito_integral_ibp, kernel_integral,
                          kernel_integral_path, time_integral_W)
from stochkdv.paths import (BrownianPath, increments_matrix, refine,
                            sample_brownian)

GRID = TimeGrid(0.0, 1.0, 256)
PATH = sample_brownian(GRID, 31)


def test_unit_integrand_telescopes_to_W():
    out = ito_integral(Const(1.0), PATH)
    np.testing.assert_allclose(out.values, PATH.values, atol=1e-14)


def test_zero_integrand():
    out = ito_integral(Const(0.0), PATH)
    np.testing.assert_array_equal(out.values, np.zeros_like(PATH.values))


def test_ibp_unit_integrand_exact():
    out = ito_integral_ibp(Const(1.0), PATH)
    np.testing.assert_allclose(out.values, PATH.values, atol=1e-14)


def test_isometry_linear_integrand():
    # Var int_0^1 s dW = int_0^1 s^2 ds = 1/3
    grid = TimeGrid(0.0, 1.0, 128)
    n = 100_000
    inc = increments_matrix(grid, 99, n)
    f = grid.nodes[:-1]
    samples = inc @ f
    assert abs(samples.mean()) < 3 * samples.std(ddof=1) / np.sqrt(n)
    assert samples.var(ddof=1) == pytest.approx(1.0 / 3.0, rel=0.05)


def test_methods_agree_under_refinement():
    f = Power(1.0, 1)
    path = sample_brownian(TimeGrid(0.0, 1.0, 64), 17)
    gaps = []
    for _ in range(5):
        a = ito_integral(f, path).values[-1]
        b = ito_integral_ibp(f, path).values[-1]
        gaps.append(abs(a - b))
        path = refine(path, 2)
    gaps = np.array(gaps)
    order = -np.polyfit(np.arange(5), np.log2(gaps), 1)[0]
    assert order >= 0.5


def test_ibp_matches_explicit_expansion():
    # t^n W_t - int n s^(n-1) W_s ds, trapezoid on the same grid
    from scipy.integrate import cumulative_trapezoid
    n = 3
    t, W = GRID.nodes, PATH.values
    expected = t ** n * W - cumulative_trapezoid(n * t ** (n - 1) * W, t,
                                                 initial=0.0)
    out = ito_integral_ibp(Power(1.0, n), PATH)
    np.testing.assert_allclose(out.values, expected, atol=1e-12)


def test_kernel_integral_variance_one_third():
    # B=K=1: int_0^1 (1-s) dW has variance 1/3
    grid = TimeGrid(0.0, 1.0, 128)
    n = 100_000
    inc = increments_matrix(grid, 55, n)
    bbar = 1.0 - grid.nodes[:-1]
    samples = inc @ bbar
    assert samples.var(ddof=1) == pytest.approx(1.0 / 3.0, rel=0.05)


def test_kernel_integral_path_matches_per_node_definition():
    # direct double-loop left sums vs the O(n) collapsed evaluation
    B, K = Exp(1.0, 1.0), Power(1.0, 1)
    path = sample_brownian(TimeGrid(0.0, 1.0, 32), 3)
    t, dW = path.grid.nodes, path.increments
    out = kernel_integral_path(B, K, path).values
    for i in (1, 7, 32):
        bbar = np.array([B.integrate(t[k], t[i]) for k in range(i)])
        direct = float(np.sum(bbar * K(t[:i]) * dW[:i]))
        assert out[i] == pytest.approx(direct, rel=1e-12, abs=1e-12)
    assert kernel_integral(B, K, path, t[7]) == pytest.approx(out[7])


def test_kernel_exponential_identity():
    # B=exp, K=1: int (e^t - e^s) dW_s = e^t W_t - int e^s dW_s pathwise
    out = kernel_integral_path(Exp(1.0, 1.0), Const(1.0), PATH).values
    t = GRID.nodes
    expected = np.exp(t) * PATH.values - ito_integral(Exp(1.0, 1.0), PATH).values
    np.testing.assert_allclose(out, expected, atol=1e-12)


def test_kernel_zero_K():
    out = kernel_integral_path(Const(1.0), Const(0.0), PATH).values
    np.testing.assert_array_equal(out, np.zeros_like(out))


def test_time_integral_starts_at_zero():
    assert time_integral_W(PATH).values[0] == 0.0


def test_time_integral_exact_on_linear_path():
    grid = TimeGrid(0.0, 1.0, 100)
    lin = BrownianPath(grid, grid.nodes.copy(), 0)
    out = time_integral_W(lin)
    assert out.values[-1] == pytest.approx(0.5, abs=1e-12)


def test_time_integral_variance_one_third():
    grid = TimeGrid(0.0, 1.0, 128)
    n = 50_000
    inc = increments_matrix(grid, 77, n)
    W = np.hstack([np.zeros((n, 1)), np.cumsum(inc, axis=1)])
    samples = np.trapezoid(W, grid.nodes, axis=1)
    assert samples.var(ddof=1) == pytest.approx(1.0 / 3.0, rel=0.05)
