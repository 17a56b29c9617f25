import math
from fractions import Fraction

import numpy as np
import pytest

from darbouxlab import analytic as an
from darbouxlab.analytic import X
from darbouxlab.catalog import eq10
from darbouxlab.darboux import (SeedError, SeedSolution, chain_build, chain_smatrix_compose,
                                cokernel, intertwine, make_step, partner_function,
                                partner_potential, second_solution, superpotential, wronskian)
from darbouxlab.exactrat import RationalFunction

x = RationalFunction.x()


def test_superpotentials():
    assert superpotential(SeedSolution(x, 0)) == -1 / x
    W = superpotential(SeedSolution(an.cosh(X), -1))
    assert W(0.4) == pytest.approx(-math.tanh(0.4))
    assert superpotential(SeedSolution(RationalFunction(3), 0)).is_zero()
    with pytest.raises(ValueError):
        superpotential(SeedSolution(RationalFunction(0), 0))


def test_first_step_partners():
    assert partner_function(make_step(SeedSolution(x, 0))) == 2 / x ** 2
    V1 = partner_function(make_step(SeedSolution(an.cosh(X), -1)))
    xs = np.linspace(-3, 3, 13)
    assert np.allclose(V1(xs), -2 / np.cosh(xs) ** 2, atol=1e-12)
    assert partner_function(make_step(SeedSolution(RationalFunction(1), 0))).is_zero()


def test_partner_potential_has_pole_piece():
    spec = partner_potential(make_step(SeedSolution(x, 0)))
    assert [p.character for p in spec.pieces] == ["purely-repulsive", "purely-repulsive"]


def test_kernel_and_cokernel():
    mu = Fraction(1)
    phi = mu / x + x ** 2
    step = make_step(SeedSolution(phi, 0, 2 / x ** 2))
    assert intertwine(step, phi).is_zero()
    assert cokernel(step).is_zero()
    trig = make_step(SeedSolution(an.cosh(X), -1))
    grid = np.linspace(-2, 2, 50)
    assert np.max(np.abs(intertwine(trig, an.cosh(X))(grid))) < 1e-12
    assert np.max(np.abs(cokernel(trig)(grid))) < 1e-12


def test_bound_state_from_two_steps():
    # A2 A1 exp(-kappa x) = (kappa^2 + 3x(1 + kappa x)/(mu + x^3)) exp(-kappa x)
    mu, kappa = 1.0, 1.0
    chain, _ = chain_build(0, [(x, 0), (Fraction(1) / x + x ** 2, 0)], final_spec=False)
    psi = an.exp(-kappa * X)
    for step in chain.steps:
        psi = intertwine(step, psi)
    xs = np.linspace(0.2, 4, 9)
    expected = (kappa ** 2 + 3 * xs * (1 + kappa * xs) / (mu + xs ** 3)) * np.exp(-kappa * xs)
    assert np.allclose(psi(xs), expected, rtol=1e-12)


def test_transparent_wave():
    k = 0.8
    step = make_step(SeedSolution(an.cosh(X), -1))
    psi = intertwine(step, an.exp(1j * k * X))
    xs = np.linspace(-3, 3, 7)
    assert np.allclose(psi(xs), (1j * k - np.tanh(xs)) * np.exp(1j * k * xs))


def test_isospectral_intertwining():
    step = make_step(SeedSolution(an.cosh(X), -1))
    V1 = partner_function(step)
    E = 0.49
    psi = intertwine(step, an.cos(0.7 * X))
    for s in np.linspace(-2, 2, 15):
        j = psi.jet(float(s), 2)
        assert abs(-j[2] + (V1(float(s)) - E) * j[0]) < 1e-8


def test_second_solutions():
    assert second_solution(1 / x) == x ** 2 / 3
    assert second_solution(RationalFunction(1)) == x
    assert second_solution(x ** -2) == x ** 3 / 5


@pytest.mark.parametrize("psi1", [x, x ** 2, 1 / x, x ** -3])
def test_wronskian_closed_form(psi1):
    psi2 = second_solution(psi1)
    for pt in (0.5, 1.7, 3.0):
        assert wronskian(psi1, psi2, pt) == pytest.approx(1, abs=1e-9)


def test_wronskian_quadrature():
    psi2 = second_solution(an.cosh(X), x0=0.0, method="numeric-quadrature")
    assert psi2(1.2) == pytest.approx(math.sinh(1.2), rel=1e-9)
    for pt in (-1.0, 0.3, 2.0):
        assert wronskian(an.cosh(X), psi2, pt) == pytest.approx(1, abs=1e-9)


def test_quadrature_reports_zero():
    psi2 = second_solution(an.sin(X), x0=1.0, method="numeric-quadrature")
    with pytest.raises(ZeroDivisionError, match="3.14159"):
        psi2(4.0)


def test_chain_examples():
    chain, spec = chain_build(0, [(x, 0), (1 / x + x ** 2, 0)])
    assert chain.final == eq10(1)
    assert spec.rational and len(spec.pieces) == 2
    chain, _ = chain_build(0, [(x, 0), (x ** 2, 0), (x ** 3, 0)])
    assert chain.final == 12 / x ** 2
    chain, _ = chain_build(0, [])
    assert chain.final.is_zero()


def test_chain_rejects_bad_seed():
    with pytest.raises(SeedError, match="step 2"):
        chain_build(0, [(x, 0), (x ** 3, 0)])


def test_chain_json():
    chain, _ = chain_build(0, [(x, 0)])
    assert '"W1"' in chain.to_json()


def test_smatrix_composition():
    assert chain_smatrix_compose(1, 0.0)(2.0) == pytest.approx(-1)
    assert chain_smatrix_compose(-1, 0.0)(0.3) == pytest.approx(1)
    S = lambda k: np.exp(0.3j * k)
    assert chain_smatrix_compose(S, math.inf)(1.1) == S(1.1)
