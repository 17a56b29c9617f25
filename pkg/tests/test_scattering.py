import io
import math

import numpy as np
import pytest

from darbouxlab.catalog import catalog_get
from darbouxlab.darboux import chain_smatrix_compose
from darbouxlab.exactrat import Poly
from darbouxlab.scattering import (analytic_smatrix, chain_plane_wave_poly, delta_from_S,
                                   levinson_span, numeric_phase_shift, phase_table,
                                   pole_polynomial, reflection_phase_fix, sech_transmission,
                                   sech_transmission_analytic, whole_line_scatter,
                                   write_phase_csv)

KS = (0.3, 1.0, 3.0)


@pytest.fixture(scope="module")
def fam10():
    return catalog_get("10", mu=1)


def test_analytic_examples():
    assert analytic_smatrix("10-right", 1.0) == pytest.approx(-1j)
    assert analytic_smatrix("10-left", 1.0) == pytest.approx(1j)
    assert analytic_smatrix("32-right", 2.0, n=2) == -1
    assert analytic_smatrix("32-right", 2.0, n=3) == 1
    assert analytic_smatrix("centrifugal", 0.5, n=1) == -1
    with pytest.raises(ValueError):
        analytic_smatrix("nonsense", 1.0)
    with pytest.raises(ValueError):
        analytic_smatrix("10-right", 1.0, c=0)


@pytest.mark.parametrize("piece,n", [("10-right", None), ("10-left", None), ("22-left", None),
                                     ("36-left", None), ("32-left", 2), ("32-left", 3),
                                     ("32-left", 4)])
def test_analytic_unitary(piece, n):
    ks = np.linspace(0.1, 10, 50)
    assert np.allclose(np.abs(analytic_smatrix(piece, ks, n=n)), 1, atol=1e-12)


def test_bound_state_pole():
    # S of the right piece of family 10 has its pole at k = i/c
    S = lambda k: analytic_smatrix("10-right", k, c=2.0)
    assert abs(S(0.5j * (1 + 1e-8))) > 1e7
    assert abs(S(0.5j * (1 + 1e-2))) < 1e3


def test_inverse_relation():
    ks = np.linspace(0.1, 5, 20)
    assert np.allclose(analytic_smatrix("10-left", ks) * analytic_smatrix("10-right", ks), 1)


def test_pole_polynomial_n2_matches_22():
    qr, qi = pole_polynomial(2)
    assert qr == Poly([3, 0, -1]) and qi == Poly([0, 3])
    ks = np.linspace(0.2, 4, 9)
    assert np.allclose(analytic_smatrix("32-left", ks, n=2), analytic_smatrix("22-left", ks))


def test_pole_polynomial_n3():
    qr, qi = pole_polynomial(3)
    assert qr == Poly([15, 0, -6]) and qi == Poly([0, 15, 0, -1])


def test_plane_wave_poly_n1():
    # (D - 1/x) e^{ikx} = (ik - 1/x) e^{ikx}
    assert len(chain_plane_wave_poly(1)) == 2


def test_numeric_examples(fam10):
    for k in KS:
        S = numeric_phase_shift(fam10, "right", k).S
        assert abs(S - analytic_smatrix("10-right", k)) < 1e-4


def test_numeric_unitarity():
    spec = catalog_get("32", n=2, mu=1)
    for side in ("left", "right"):
        for k in KS:
            assert abs(abs(numeric_phase_shift(spec, side, k).S) - 1) < 1e-10


def test_numeric_left_right_inverse(fam10):
    for k in KS:
        Sl = numeric_phase_shift(fam10, "left", k).S
        Sr = numeric_phase_shift(fam10, "right", k).S
        assert abs(Sl * Sr - 1) < 1e-4


def test_centrifugal_numeric():
    spec = catalog_get("37", n=1)
    for k in KS:
        assert abs(numeric_phase_shift(spec, "right", k).S - (-1)) < 1e-4


@pytest.mark.parametrize("n", [2, 3, 4])
def test_constant_phase(n):
    spec = catalog_get("32", n=n, mu=1)
    for k in KS:
        assert abs(numeric_phase_shift(spec, "right", k).S - (-1) ** (n + 1)) < 1e-3


@pytest.mark.parametrize("n", [3, 4])
def test_constructed_left_piece(n):
    spec = catalog_get("32", n=n, mu=1)
    for k in KS:
        S = numeric_phase_shift(spec, "left", k).S
        assert abs(S - analytic_smatrix("32-left", k, n=n)) < 1e-3


def test_composition_law():
    # free half line S = -1; one step with W'(inf) = 0 gives the 2/x^2 value +1
    S1 = chain_smatrix_compose(-1, 0.0)
    assert S1(1.0) == pytest.approx(analytic_smatrix("centrifugal", 1.0, n=1) * -1)
    S2 = chain_smatrix_compose(S1, 0.0)
    assert S2(1.0) == pytest.approx(analytic_smatrix("centrifugal", 1.0, n=2) * -1)


def test_22_left_endpoints():
    assert analytic_smatrix("22-left", 1e-9) == pytest.approx(-1)
    assert analytic_smatrix("22-left", 1e9) == pytest.approx(-1)
    S = analytic_smatrix("22-left", np.geomspace(1e-4, 1e4, 2000))
    d = 0.5 * np.unwrap(np.angle(S))
    # the continuous phase sweeps through pi from k -> 0 to k -> inf
    assert d[0] - d[-1] == pytest.approx(-math.pi, abs=1e-3)
    assert delta_from_S(complex(S[0]), -math.pi / 2) == pytest.approx(-math.pi / 2, abs=1e-3)


@pytest.mark.parametrize("n", [2, 3])
def test_spans(n):
    span = levinson_span(catalog_get("32", n=n, mu=1), "left")
    assert span.span == pytest.approx(-n * math.pi / 2, abs=0.05)
    assert span.span == pytest.approx(span.ledger_total, abs=0.05)


def test_family10_right_levinson(fam10):
    span = levinson_span(fam10, "right")
    assert span.span == pytest.approx(span.ledger_total, abs=0.05)
    assert span.ledger["bound_states"] == pytest.approx(math.pi)


def test_reflection_phase_fix_consistency():
    # node at x = -c of the intertwined wave gives the left-piece S
    for k in (0.4, 1.5):
        ratio = reflection_phase_fix(k, 1.0)
        assert abs(abs(ratio) - 1) < 1e-12
    with pytest.raises(ValueError):
        reflection_phase_fix(-1.0, 1.0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sech_reflectionless(n):
    for k in (0.5, 1.0, 2.0):
        s = sech_transmission(n, k)
        assert abs(s.r) < 1e-6
        assert abs(abs(s.t) - 1) < 1e-12


def test_sech_transmission_numeric():
    V = lambda x: -6 / np.cosh(x) ** 2
    for k in (0.5, 2.0):
        t, _ = whole_line_scatter(V, k)
        assert abs(t - sech_transmission_analytic(2, k)) < 1e-4


def test_nonreflectionless_detected():
    V = lambda x: -1.5 / np.cosh(x) ** 2
    _, r = whole_line_scatter(V, 1.0)
    assert abs(r) > 1e-3


def test_phase_csv(fam10):
    buf = io.StringIO()
    write_phase_csv(buf, phase_table(fam10, "right", [0.5, 1.0]))
    lines = buf.getvalue().splitlines()
    assert lines[0] == "k,Re S,Im S,delta_unwrapped,piece_id"
    assert len(lines) == 3 and lines[1].endswith("10-right")
