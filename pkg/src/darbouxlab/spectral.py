"""Spectral equations of the confining piece (-c, 0) of family (32).

An eigenfunction there is the last intertwiner applied to the regular
combination of (D - n/x)...(D - 1/x) exp(+-ikx). That combination must vanish
at the pole x = -c, which gives

    f(kappa) = tan(kappa) Dn(kappa) - Nn(kappa) = 0,   kappa = k c,

with integer polynomials Dn, Nn. Roots are searched on the pole-free form
sin(kappa) Dn - cos(kappa) Nn and refined with brentq.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy import optimize

from .exactrat import Poly
from .scattering import pole_polynomial

ROOT_TOL = 1e-12

# reference closed forms, as (D, N) coefficient lists in ascending powers
REFERENCE = {
    2: ([3, 0, -1], [0, 3]),
    3: ([105, 0, 42], [0, -105, 0, 7]),
}


@dataclass
class SpectralEquation:
    n: int
    c: float
    D: Poly
    N: Poly
    source: str = "constructed"

    def __call__(self, kappa):
        """f(kappa) = tan(kappa) D(kappa) - N(kappa)."""
        return np.tan(kappa) * self._ev(self.D, kappa) - self._ev(self.N, kappa)

    def cleared(self, kappa):
        """sin(kappa) D - cos(kappa) N, which has the same zeros and no poles."""
        return np.sin(kappa) * self._ev(self.D, kappa) - np.cos(kappa) * self._ev(self.N, kappa)

    def poles(self, kmax: float) -> list[float]:
        """Poles of f in (0, kmax): the tangent poles."""
        return [(j + 0.5) * math.pi for j in range(int(kmax / math.pi) + 1)
                if (j + 0.5) * math.pi < kmax]

    @staticmethod
    def _ev(p: Poly, z):
        return np.polyval(p.float_coeffs()[::-1] or [0.0], z)


@dataclass(frozen=True)
class SpectralRoot:
    m: int
    kappa: float
    E: float
    extra: dict = field(default_factory=dict)


def constructed_polynomials(n: int) -> tuple[Poly, Poly]:
    """(Dn, Nn) from the exact intertwiner chain: the regular wave at x = -c
    is proportional to Im(exp(-i kappa) Q(kappa)) = cos Qi - sin Qr."""
    qr, qi = pole_polynomial(n)
    return qr, qi


def spectral_equation_build(n: int, c: float = 1.0, form: str = "constructed") -> SpectralEquation:
    """Spectral equation of the confining piece for ``n`` >= 2.

    ``form='reference'`` returns the literal closed form for n = 2 or 3.
    """
    if int(n) != n:
        raise ValueError("n must be an integer")
    n = int(n)
    if n < 2:
        raise ValueError("n = 1 has no confining piece: the potential has only the two "
                         "regions x < -c and x > -c")
    if c <= 0:
        raise ValueError("c must be > 0")
    if form == "reference":
        if n not in REFERENCE:
            raise ValueError("reference forms exist only for n = 2, 3")
        D, N = REFERENCE[n]
        return SpectralEquation(n, c, Poly(D), Poly(N), "reference")
    if form != "constructed":
        raise ValueError(f"unknown form {form!r}")
    D, N = constructed_polynomials(n)
    return SpectralEquation(n, c, D, N, "constructed")


def proportional(a: tuple[Poly, Poly], b: tuple[Poly, Poly]) -> Optional[Fraction]:
    """Common scalar lam with b = lam * a coefficientwise, or None."""
    lam = None
    for pa, pb in zip(a, b):
        la, lb = list(pa.coeffs), list(pb.coeffs)
        size = max(len(la), len(lb))
        la += [0] * (size - len(la))
        lb += [0] * (size - len(lb))
        for x, y in zip(la, lb):
            if x == 0 and y == 0:
                continue
            if x == 0 or y == 0:
                return None
            r = Fraction(y) / Fraction(x)
            if lam is None:
                lam = r
            elif r != lam:
                return None
    return lam


def self_test(n: int) -> dict:
    """Compare the constructed equation with the reference one (n = 2, 3)."""
    built = spectral_equation_build(n)
    reference = spectral_equation_build(n, form="reference")
    lam = proportional((built.D, built.N), (reference.D, reference.N))
    return {"n": n, "identical_up_to_scale": lam is not None,
            "scale": lam, "constructed": (built.D, built.N),
            "reference": (reference.D, reference.N)}


def spectral_roots(eq: SpectralEquation, count: int, step: float = 0.05) -> list[SpectralRoot]:
    """First ``count`` positive roots of ``eq``, each bracketed on the
    pole-free form and refined to 1e-12 in kappa."""
    if count < 1:
        raise ValueError("count must be >= 1")
    roots = []
    a = step
    ga = eq.cleared(a)
    while len(roots) < count:
        b = a + step
        gb = eq.cleared(b)
        if ga == 0:
            r = a
        elif ga * gb < 0:
            r = optimize.brentq(eq.cleared, a, b, xtol=ROOT_TOL, rtol=4 * np.finfo(float).eps)
        else:
            a, ga = b, gb
            continue
        _check_between_poles(eq, r)
        roots.append(SpectralRoot(len(roots) + 1, r, (r / eq.c) ** 2))
        a, ga = b, gb
    return roots


def _check_between_poles(eq: SpectralEquation, r: float):
    """A root must sit strictly inside a tangent cell and f must change
    sign across it."""
    cell = math.floor(r / math.pi + 0.5)
    lo, hi = (cell - 0.5) * math.pi, (cell + 0.5) * math.pi
    if not lo < r < hi:
        raise ArithmeticError(f"root {r} coincides with a pole of tan")
    d = min(1e-6, 0.5 * (r - lo), 0.5 * (hi - r))
    if eq(r - d) * eq(r + d) > 0:
        raise ArithmeticError(f"no sign change of f across {r}")


def numerov_crosscheck(roots: list[SpectralRoot], n: int, mu=1, h: float = 1e-3) -> list[SpectralRoot]:
    """Attach shooting eigenvalues of the confining piece to each root."""
    from .catalog import catalog_get
    from .schrodinger import shoot_eigen

    spec = catalog_get("32", n=n, mu=mu)
    piece = spec.piece_named("middle")
    top = roots[-1].E * 1.02 + 1.0
    states = shoot_eigen(spec, piece, (0.0, top), len(roots), h=h)
    out = []
    for root, st in zip(roots, states):
        rel = abs(root.E - st.energy) / abs(st.energy)
        out.append(SpectralRoot(root.m, root.kappa, root.E,
                                {"E_numerov": st.energy, "rel_diff": rel, "nodes": st.nodes}))
    return out


def write_spectrum_csv(fh, n: int, roots: list[SpectralRoot]):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "m", "kappa_m", "E_m", "E_m_numerov", "rel_diff"])
    for r in roots:
        En = r.extra.get("E_numerov", float("nan"))
        rd = r.extra.get("rel_diff", float("nan"))
        w.writerow([n, r.m, f"{r.kappa:.11e}", f"{r.E:.11e}", f"{En:.11e}", f"{rd:.11e}"])
