import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from darbouxlab import analytic as an
from darbouxlab.analytic import X, DomainError, jet_check_fd, jet_eval


def test_cosh_jet():
    assert jet_eval(an.cosh(X), 0.0).as_tuple() == pytest.approx((1, 0, 1, 0))


def test_minus_tanh():
    j = jet_eval(-an.tanh(X), 0.0)
    assert j.f == pytest.approx(0) and j.f1 == pytest.approx(-1)


def test_fractional_power_jet():
    e = an.sin(X) ** Fraction(3, 2)
    j = jet_eval(e, math.pi / 2)
    assert j.as_tuple() == pytest.approx((1, 0, -1.5, 0), abs=1e-12)
    assert jet_check_fd(e, math.pi / 2, 1e-5) < 1e-6


def test_fd_checks():
    assert jet_check_fd(an.exp(-X), 1.0, 1e-4) < 1e-6
    assert jet_check_fd(2 / X ** 2, 0.5, 1e-5) < 1e-6


def test_domain_errors():
    with pytest.raises(DomainError):
        jet_eval(an.tan(X), math.pi / 2)
    with pytest.raises(DomainError):
        jet_eval(an.sqrt(X), -1.0)
    with pytest.raises(DomainError):
        jet_eval(1 / X, 0.0)


def test_exact_mode_matches_rational_derivatives():
    from darbouxlab.exactrat import RationalFunction
    r = RationalFunction.x()
    rf = (3 * r ** 2 - 1) / (r ** 3 + 2)
    e = (3 * X ** 2 - 1) / (X ** 3 + 2)
    pt = Fraction(2, 3)
    jet = e.jet(pt, 3)
    assert jet[0] == rf(pt)
    assert jet[1] == rf.derive()(pt)
    assert jet[3] == rf.derive().derive().derive()(pt)


def test_vectorized_value():
    xs = np.linspace(0.1, 1, 5)
    assert np.allclose(an.sin(X)(xs) * X(xs), xs * np.sin(xs))


def test_deriv_node():
    e = an.sin(X).derivative()
    assert jet_eval(e, 0.3).as_tuple() == pytest.approx(
        (math.cos(0.3), -math.sin(0.3), -math.cos(0.3), math.sin(0.3)))


smooth = st.floats(min_value=0.2, max_value=2.5)


@settings(max_examples=100, deadline=None)
@given(smooth)
def test_fd_agreement_on_smooth_points(x):
    for e in (an.exp(an.sin(X)) * X, an.cosh(X) / (1 + X ** 2), an.sqrt(X) * an.tanh(X)):
        assert jet_check_fd(e, x, 1e-4) < 1e-6


@settings(max_examples=100, deadline=None)
@given(smooth)
def test_product_rule(x):
    f, g = an.sin(X), an.exp(X / 3)
    jf, jg, jfg = f.jet(x, 3), g.jet(x, 3), (f * g).jet(x, 3)
    assert jfg[1] == pytest.approx(jf[1] * jg[0] + jf[0] * jg[1])
    assert jfg[2] == pytest.approx(jf[2] * jg[0] + 2 * jf[1] * jg[1] + jf[0] * jg[2])
