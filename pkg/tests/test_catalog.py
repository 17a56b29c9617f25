import math
from fractions import Fraction

import numpy as np
import pytest

from darbouxlab import analytic as an
from darbouxlab.catalog import (PHI, catalog_get, eigen_residual, eq10, eq22, family32_rational,
                                golden_extrema, golden_values, listing, regenerate,
                                trig_partner_build)
from darbouxlab.exactrat import RationalFunction

x = RationalFunction.x()


def test_family32_members():
    mu = Fraction(5, 3)
    assert family32_rational(1, mu) == eq10(mu)
    assert family32_rational(2, mu) == eq22(mu)
    assert catalog_get("37", n=0).evaluator.is_zero()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_regeneration_is_exact(n):
    assert regenerate("32", n=n, mu=Fraction(2, 7)) == family32_rational(n, Fraction(2, 7))


def test_mu_must_be_positive():
    with pytest.raises(ValueError):
        catalog_get("10", mu=-1)


def test_pieces_and_tails():
    spec = catalog_get("32", n=2, mu=1)
    chars = [p.character for p in spec.pieces]
    assert chars == ["purely-repulsive", "confining", "scattering-with-bound-state"]
    left, mid, right = spec.pieces
    assert mid.lo.strength == pytest.approx(2) and mid.hi.strength == pytest.approx(2)
    assert right.lo.strength == pytest.approx(2)  # n(n-1) at x = 0
    assert right.hi.strength == pytest.approx(12)
    big = 1e6
    assert big ** 2 * spec.V(big) == pytest.approx(12, rel=1e-6)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_near_pole_tail_is_two(n):
    spec = catalog_get("32", n=n, mu=1)
    assert spec.piece_named("left").hi.strength == pytest.approx(2)


def test_family10_two_pieces():
    spec = catalog_get("10", mu=1)
    assert [p.character for p in spec.pieces] == ["purely-repulsive", "scattering-with-bound-state"]


def test_golden_extrema():
    g = golden_extrema(1)
    assert g.x_max ** 3 == pytest.approx(2 + 3 * PHI, abs=1e-8)
    assert g.x_min ** 3 == pytest.approx(2 - 3 / PHI, abs=1e-8)
    assert g.V_max == pytest.approx(0.8969, abs=1e-4)
    assert g.V_max == pytest.approx(2 * PHI * (2 + 3 * PHI) ** (1 / 3) / (1 + PHI) ** 2, abs=1e-8)
    assert g.V_min < 0


def test_golden_scaling():
    g1, g8 = golden_extrema(1), golden_extrema(8)
    assert g8.x_max == pytest.approx(2 * g1.x_max, rel=1e-10)
    assert g8.V_min == pytest.approx(g1.V_min / 4, rel=1e-10)


def test_golden_phi_map():
    v = golden_values(1.0)
    def value(p):
        return 2 * p * np.cbrt(2 + 3 * p) / (1 + p) ** 2
    assert v["cube_2-3/phi"] == pytest.approx(value(-1 / PHI), abs=1e-12)
    assert float(eq10(1)((2 - 3 / PHI) ** (1 / 3))) == pytest.approx(v["cube_2-3/phi"], abs=1e-8)


def test_trig_partner():
    spec = trig_partner_build()
    assert spec.params["seed_energy"] == Fraction(1, 4)
    assert spec.params["max_deviation"] < 1e-10
    assert spec.V(math.pi / 2) == pytest.approx(1.75, abs=1e-12)


def test_sin_three_halves_is_eigenstate_of_42():
    grid = np.linspace(0.1, math.pi - 0.1, 200)
    psi = an.sin(an.X) ** Fraction(3, 2)
    assert eigen_residual(psi, catalog_get("42"), 2.25, grid) < 1e-10
    assert eigen_residual(psi, catalog_get("44"), 2.25, grid) > 1e-2


def test_first_step_listing():
    spec = catalog_get("5", seed="cosh")
    assert spec.V(0.0) == pytest.approx(-2)
    assert "32" in listing()
    assert regenerate("5") == 2 / x ** 2
