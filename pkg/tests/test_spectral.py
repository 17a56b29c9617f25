import io
import math

import pytest

from darbouxlab.spectral import (numerov_crosscheck, self_test, spectral_equation_build,
                                 spectral_roots, write_spectrum_csv)


def test_n1_rejected():
    with pytest.raises(ValueError, match="no confining piece"):
        spectral_equation_build(1)


def test_reference_forms_only_for_2_3():
    with pytest.raises(ValueError):
        spectral_equation_build(4, form="reference")


def test_self_test():
    assert self_test(2)["identical_up_to_scale"]
    assert not self_test(3)["identical_up_to_scale"]


@pytest.mark.parametrize("n", [2, 3])
def test_n_roots_are_spherical_bessel_zeros(n):
    from scipy.special import spherical_jn
    roots = spectral_roots(spectral_equation_build(n), 6)
    for r in roots:
        assert abs(spherical_jn(n, r.kappa)) < 1e-10


def test_roots_between_poles_and_ordered():
    eq = spectral_equation_build(2)
    roots = spectral_roots(eq, 10)
    kappas = [r.kappa for r in roots]
    assert kappas == sorted(kappas)
    for r in roots:
        assert abs(eq.cleared(r.kappa)) < 1e-9
        assert abs(math.cos(r.kappa)) > 1e-6


def test_energy_scaling():
    eq = spectral_equation_build(2, c=2.0)
    r = spectral_roots(eq, 1)[0]
    assert r.E == pytest.approx((r.kappa / 2) ** 2)


@pytest.mark.parametrize("n", [2, 3])
def test_constructed_roots_match_shooting(n):
    roots = numerov_crosscheck(spectral_roots(spectral_equation_build(n), 6), n)
    assert max(r.extra["rel_diff"] for r in roots) < 1e-6
    assert [r.extra["nodes"] for r in roots] == list(range(6))


def test_reference_n2_matches_shooting():
    roots = numerov_crosscheck(spectral_roots(spectral_equation_build(2, form="reference"), 6), 2)
    assert max(r.extra["rel_diff"] for r in roots) < 1e-6


@pytest.mark.xfail(strict=True, reason="the reference n=3 form has the wrong sign on the z^2 term")
def test_reference_n3_matches_shooting():
    roots = numerov_crosscheck(spectral_roots(spectral_equation_build(3, form="reference"), 6), 3)
    assert max(r.extra["rel_diff"] for r in roots) < 1e-6


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.xfail(strict=True, reason="roots approach (m + n/2) pi, not m pi")
def test_literal_asymptotics(n):
    roots = spectral_roots(spectral_equation_build(n), 20)
    gaps = [abs(r.kappa - r.m * math.pi) for r in roots[9:]]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


@pytest.mark.parametrize("n", [2, 3])
def test_shifted_asymptotics(n):
    roots = spectral_roots(spectral_equation_build(n), 20)
    gaps = [abs(r.kappa - (r.m + n / 2) * math.pi) for r in roots[9:]]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_spectrum_csv():
    buf = io.StringIO()
    roots = numerov_crosscheck(spectral_roots(spectral_equation_build(2), 2), 2)
    write_spectrum_csv(buf, 2, roots)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "n,m,kappa_m,E_m,E_m_numerov,rel_diff"
    assert lines[1].startswith("2,1,")
