import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stochkdv.coeffs import (Const, Exp, NumericFn, Power, Scale, Sum,
                             constant_value, multiply, parse, product)


def test_eval_monomial():
    assert Power(1.0, 2)(3.0) == 9.0


def test_eval_const():
    assert Const(5.0)(0.7) == 5.0


def test_eval_exp():
    assert Exp(1.0, 1.0)(1.0) == pytest.approx(np.e, rel=1e-15)


def test_eval_vectorized():
    t = np.linspace(0.0, 2.0, 7)
    np.testing.assert_allclose(Power(2.0, 3)(t), 2.0 * t ** 3)
    np.testing.assert_allclose(Const(4.0)(t), np.full_like(t, 4.0))


def test_derivative_power_rule():
    assert Power(1.0, 3).derivative() == Power(3.0, 2)


def test_derivative_const():
    assert Const(4.0).derivative() == Const(0.0)


def test_derivative_exp_chain_rule():
    assert Exp(2.0, 3.0).derivative() == Exp(6.0, 3.0)


def test_integrate_exp():
    assert Exp(1.0, 1.0).integrate(0.0, 1.0) == pytest.approx(np.e - 1.0, rel=1e-14)


def test_integrate_monomial():
    assert Power(1.0, 2).integrate(0.0, 1.0) == pytest.approx(1.0 / 3.0, rel=1e-14)


def test_integrate_sum_linearity():
    f = Sum((Const(1.0), Power(2.0, 1)))
    assert f.integrate(0.0, 2.0) == pytest.approx(6.0, rel=1e-14)


def test_integrate_rejects_misordered_interval():
    with pytest.raises(ValueError, match="misordered"):
        Const(1.0).integrate(1.0, 0.0)


def test_square_power():
    assert Power(1.0, 1).square() == Power(1.0, 2)


def test_square_exp():
    assert Exp(1.0, 1.0).square() == Exp(1.0, 2.0)


def test_square_const():
    assert Const(3.0).square() == Const(9.0)


def test_square_mixed_sum_falls_back_to_quadrature():
    f = Sum((Power(1.0, 1), Exp(1.0, 1.0)))
    sq = f.square()
    assert isinstance(sq, NumericFn)
    # int_0^1 (t + e^t)^2 dt = 1/3 + 2(1) + (e^2-1)/2  with int t e^t = 1
    expected = 1.0 / 3.0 + 2.0 + (np.e ** 2 - 1.0) / 2.0
    assert sq.integrate(0.0, 1.0) == pytest.approx(expected, abs=1e-10)


def test_power_rejects_negative_exponent():
    with pytest.raises(ValueError, match="nonnegative"):
        Power(1.0, -2)


def test_multiply_power_exp_leaves_family():
    assert multiply(Power(1.0, 1), Exp(1.0, 1.0)) is None
    p = product(Power(1.0, 1), Exp(1.0, 1.0))
    assert p(2.0) == pytest.approx(2.0 * np.e ** 2, rel=1e-14)


def test_constant_value():
    assert constant_value(Const(2.0)) == 2.0
    assert constant_value(Power(3.0, 0)) == 3.0
    assert constant_value(Scale(2.0, Const(1.5))) == 3.0
    assert constant_value(Power(1.0, 1)) is None
    assert constant_value(Exp(1.0, 1.0)) is None


def test_parse_basic_forms():
    assert parse("const(2.5)") == Const(2.5)
    assert parse("pow(1.0,2)") == Power(1.0, 2)
    assert parse("exp(1.0,1.0)") == Exp(1.0, 1.0)
    assert parse("2*const(3.0)") == Scale(2.0, Const(3.0))
    f = parse("const(1.0) + pow(2.0,1)")
    assert f(2.0) == pytest.approx(5.0)


def test_parse_rejects_garbage():
    for bad in ("pow(1,-2)", "const(", "sin(1)", "const(1.0) const(2.0)"):
        with pytest.raises(ValueError):
            parse(bad)


def test_text_round_trip():
    fns = [Const(1.0), Power(2.0, 3), Exp(-1.5, 2.0),
           Scale(0.5, Sum((Const(1.0), Power(1.0, 1)))),
           Sum((Exp(1.0, 1.0), Const(-2.0)))]
    for f in fns:
        g = parse(f.text())
        t = np.linspace(0.0, 1.5, 11)
        np.testing.assert_array_equal(f(t), g(t))


coeff_strategy = st.one_of(
    st.builds(Const, st.floats(-5, 5, allow_nan=False)),
    st.builds(Power, st.floats(-5, 5, allow_nan=False), st.integers(0, 4)),
    st.builds(Exp, st.floats(-3, 3, allow_nan=False),
              st.floats(-2, 2, allow_nan=False)),
)


@settings(max_examples=50, deadline=None)
@given(coeff_strategy, st.floats(0, 1, allow_nan=False),
       st.floats(0, 1, allow_nan=False))
def test_fundamental_theorem(f, a, w):
    b = a + w
    lhs = f.derivative().integrate(a, b)
    rhs = f(b) - f(a)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(coeff_strategy, st.floats(0, 1, allow_nan=False),
       st.floats(0, 1, allow_nan=False), st.floats(0, 1, allow_nan=False))
def test_integral_additive_over_adjacent_intervals(f, a, w1, w2):
    m, b = a + w1, a + w1 + w2
    whole = f.integrate(a, b)
    split = f.integrate(a, m) + f.integrate(m, b)
    assert whole == pytest.approx(split, rel=1e-12, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(coeff_strategy, st.floats(0, 2, allow_nan=False))
def test_square_pointwise(f, t):
    assert f.square()(t) == pytest.approx(f(t) ** 2, rel=1e-12, abs=1e-12)
