import io
import math

import numpy as np
import pytest
from scipy import integrate

from darbouxlab.catalog import catalog_get
from darbouxlab.exactrat import RationalFunction
from darbouxlab.potential import DomainPiece, Endpoint, PotentialSpec
from darbouxlab.schrodinger import (Grid, Shooter, frobenius, make_grid, numerov_integrate,
                                    shoot_eigen, write_wavefunction_csv, zero_energy_state)
from darbouxlab.verify import numerov_order_ratio

FREE = PotentialSpec("free", {}, RationalFunction(0))
WHOLE = DomainPiece(Endpoint(-math.inf), Endpoint(math.inf), "whole-line")


def test_free_plane_wave():
    h, k = 1e-3, 1.3
    x = np.arange(0.0, 20.0, h)
    out = numerov_integrate(FREE, k * k, Grid(x, h, WHOLE), "plane-wave", k=k)
    assert np.max(np.abs(out.psi - np.sin(k * x))) < 1e-8


def test_fourth_order_convergence():
    assert 12.0 < numerov_order_ratio() < 20.0


def test_inverse_square_zero_energy_is_x_squared():
    spec = catalog_get("37", n=1)
    piece = spec.piece_named("right")
    grid = make_grid(piece, h=1e-3, cutoff=5.0)
    out = numerov_integrate(spec, 0.0, grid, "indicial-left")
    ratio = out.psi / grid.x ** 2
    assert np.ptp(ratio) / np.mean(ratio) < 1e-6


def test_frobenius_exponent():
    spec = catalog_get("37", n=2)
    p, a = frobenius(spec.piece_named("right").lo, 0.0, +1)
    assert p == pytest.approx(3)
    assert a[1] == pytest.approx(0)


def test_family10_level():
    spec = catalog_get("10", mu=1)
    states = shoot_eigen(spec, spec.piece_named("right"), (-50, -1e-6), 5)
    assert len(states) == 1
    assert states[0].energy == pytest.approx(-1, abs=1e-6)
    assert states[0].nodes == 0
    norm = integrate.simpson(states[0].psi ** 2, x=states[0].x)
    assert norm == pytest.approx(1, abs=1e-3)


def test_family10_scaled_level():
    mu = 8  # c = 2, E = -1/c^2
    spec = catalog_get("10", mu=mu)
    states = shoot_eigen(spec, spec.piece_named("right"), (-50, -1e-6), 5)
    assert [s.energy for s in states] == pytest.approx([-0.25], abs=1e-6)


def test_family22_left_has_no_bound_state():
    spec = catalog_get("22", mu=1)
    assert shoot_eigen(spec, spec.piece_named("left"), (-50, -1e-6), 5) == []


@pytest.mark.parametrize("n", [2, 3])
def test_family32_right_no_negative_level(n):
    spec = catalog_get("32", n=n, mu=1)
    assert shoot_eigen(spec, spec.piece_named("right"), (-50, -1e-6), 5) == []


@pytest.mark.parametrize("n", [2, 3])
def test_zero_energy_state(n):
    spec = catalog_get("32", n=n, mu=1)
    st = zero_energy_state(spec)
    assert st.energy == 0 and st.extra["residual_exact_zero"]
    tail = integrate.quad(lambda s: (s ** n / (1 + s ** (2 * n + 1)) / st.norm) ** 2,
                          st.x[-1], np.inf)[0]
    assert integrate.simpson(st.psi ** 2, x=st.x) + tail == pytest.approx(1, abs=1e-5)


def test_zero_energy_state_rejects_n1():
    with pytest.raises(ValueError, match="normalizable"):
        zero_energy_state(catalog_get("32", n=1, mu=1))


def test_oscillation_theorem():
    spec = catalog_get("32", n=2, mu=1)
    states = shoot_eigen(spec, spec.piece_named("middle"), (0, 400), 5)
    assert [s.nodes for s in states] == list(range(5))
    energies = [s.energy for s in states]
    assert energies == sorted(energies)


def test_mismatch_monotone():
    spec = catalog_get("32", n=2, mu=1)
    sh = Shooter(spec, spec.piece_named("middle"))
    g = [sh.mismatch(E) for E in np.linspace(1, 200, 25)]
    assert np.all(np.diff(g) > 0)


def test_wavefunction_csv():
    buf = io.StringIO()
    x = np.linspace(0, 1, 3)
    write_wavefunction_csv(buf, x, x ** 2, 2 * x)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x,psi,dpsi"
    assert lines[2] == "5.00000000000e-01,2.50000000000e-01,1.00000000000e+00"
