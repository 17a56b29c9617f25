"""Numerov integration and bracketed eigenvalue shooting on one domain piece.

Solves -psi'' + V psi = E psi. At a double-pole endpoint with tail
l(l+1)/(x-x0)^2 the solution starts on the regular Frobenius branch
(x-x0)^(l+1) (1 + a1 s + a2 s^2 + a3 s^3) at an inset eps = h^(2/3).
Far ends are cut off and given a Dirichlet start.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numba
import numpy as np
from scipy import integrate, optimize

from .darboux import schrodinger_residual
from .exactrat import RationalFunction
from .potential import DomainPiece, Endpoint, PotentialSpec

RESCALE_AT = 1e150


@dataclass
class Grid:
    x: np.ndarray
    h: float
    piece: DomainPiece
    inset_lo: float = 0.0
    inset_hi: float = 0.0

    @property
    def n(self) -> int:
        return len(self.x)


@dataclass
class NumerovResult:
    x: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray
    rescales: int = 0


@dataclass
class BoundState:
    energy: float
    x: np.ndarray
    psi: np.ndarray
    nodes: int
    norm: float
    index: int = 0
    extra: dict = field(default_factory=dict)


def make_grid(piece: DomainPiece, h: float = 1e-3, cutoff: float = 60.0,
              eps: Optional[float] = None) -> Grid:
    """Uniform grid inside ``piece``; pole ends are inset by eps, infinite
    ends truncated ``cutoff`` away from the opposite end (or from 0)."""
    eps = h ** (2.0 / 3.0) if eps is None else eps
    lo, hi = piece.lo, piece.hi
    a = lo.x + eps if not lo.infinite else None
    b = hi.x - eps if not hi.infinite else None
    if a is None and b is None:
        a, b = -cutoff, cutoff
    elif a is None:
        a = b - cutoff
    elif b is None:
        b = a + cutoff
    n = int(round((b - a) / h)) + 1
    x = np.linspace(a, b, n)
    return Grid(x, x[1] - x[0], piece,
                eps if not lo.infinite else 0.0, eps if not hi.infinite else 0.0)


@numba.njit(cache=True, nogil=True)
def _numerov(f, h, y0, y1):
    n = f.shape[0]
    y = np.empty(n)
    y[0] = y0
    y[1] = y1
    c = h * h / 12.0
    rescales = 0
    for i in range(1, n - 1):
        y[i + 1] = (2.0 * y[i] * (1.0 + 5.0 * c * f[i]) - y[i - 1] * (1.0 - c * f[i - 1])) \
            / (1.0 - c * f[i + 1])
        if abs(y[i + 1]) > 1e150:
            for j in range(i + 2):
                y[j] *= 1e-150
            rescales += 1
    return y, rescales


def _derivative(y, f, h):
    """Fourth-order Numerov-consistent first derivative (second order at ends)."""
    g = y * (1.0 - h * h * f / 6.0)
    d = np.empty_like(y)
    d[1:-1] = (g[2:] - g[:-2]) / (2 * h)
    d[0] = (-3 * y[0] + 4 * y[1] - y[2]) / (2 * h)
    d[-1] = (3 * y[-1] - 4 * y[-2] + y[-3]) / (2 * h)
    return d


def frobenius(end: Endpoint, E: float, side: int, terms: int = 4) -> tuple[float, list]:
    """Exponent l+1 and coefficients [1, a1, a2, a3] of the regular branch in
    s = side*(x - x0) > 0."""
    l = end.l
    lau = list(end.laurent) + [0.0] * 6
    # Laurent of V - E in s: coefficient of s^j is side^j v_j
    w = {j: lau[j + 2] * side ** j for j in range(-2, 4)}
    w[0] -= E
    a = [1.0]
    for m in range(1, terms):
        s = sum(w[j - 2] * a[m - j] for j in range(1, m + 1))
        a.append(s / (m * (2 * l + 1 + m)))
    return l + 1, a


def _series(end, E, side, s):
    p, a = frobenius(end, E, side)
    return s ** p * sum(c * s ** m for m, c in enumerate(a))


def numerov_integrate(V: PotentialSpec, E: float, grid: Grid, start: str = "indicial-left",
                      k: Optional[float] = None, _Vx=None) -> NumerovResult:
    """Integrate across the grid from the named end.

    ``start``: 'indicial-left' / 'indicial-right' (regular branch at a pole,
    Dirichlet at an infinite end), or 'plane-wave' (sin(k(x - x_0)) from the
    left, k = sqrt(E) unless given).
    """
    x, h = grid.x, grid.h
    Vx = V.V(x) if _Vx is None else _Vx
    f = Vx - E
    if start == "plane-wave":
        k = math.sqrt(E) if k is None else k
        y, r = _numerov(f, h, math.sin(0.0), math.sin(k * h))
        return NumerovResult(x, y, _derivative(y, f, h), r)
    if start == "indicial-left":
        y0, y1 = _start_values(grid.piece.lo, E, +1, grid.inset_lo, h)
        y, r = _numerov(f, h, y0, y1)
        return NumerovResult(x, y, _derivative(y, f, h), r)
    if start == "indicial-right":
        y0, y1 = _start_values(grid.piece.hi, E, -1, grid.inset_hi, h)
        y, r = _numerov(f[::-1].copy(), h, y0, y1)
        y = y[::-1].copy()
        return NumerovResult(x, y, _derivative(y, f, h), r)
    raise ValueError(f"unknown start {start!r}")


def _start_values(end: Endpoint, E, side, eps, h):
    if end.infinite or not end.laurent:
        return 0.0, 1e-30
    return _series(end, E, side, eps), _series(end, E, side, eps + h)


# ---------------------------------------------------------------------------
# shooting


def _matching_index(grid: Grid, Vx: np.ndarray) -> int:
    lo, hi = 2, grid.n - 2
    seg = Vx[lo:hi]
    if not np.all(np.isfinite(seg)) or np.ptp(seg) == 0:
        return grid.n // 2
    return lo + int(np.argmin(seg))


def _prufer(y, dy, i, from_left: bool) -> float:
    """Prufer angle at node i, counting zeros from the starting end."""
    if from_left:
        seg = y[: i + 1]
    else:
        seg = y[i:]
    s = np.sign(seg[seg != 0])
    zeros = int(np.count_nonzero(s[1:] != s[:-1]))
    phase = math.atan2(y[i], dy[i]) % math.pi
    return math.pi * zeros + phase if from_left else phase - math.pi * zeros


class Shooter:
    """Monotone mismatch G(E) = theta_L - theta_R at the matching point.

    The number of eigenvalues below E is floor(G/pi) + 1; the m-th
    eigenvalue is the root of G - (m-1) pi.
    """

    def __init__(self, V: PotentialSpec, piece: DomainPiece, h: float = 1e-3,
                 cutoff: float = 60.0, grid: Optional[Grid] = None):
        self.V = V
        self.grid = grid if grid is not None else make_grid(piece, h, cutoff)
        self.Vx = V.V(self.grid.x)
        self.im = _matching_index(self.grid, self.Vx)

    def solutions(self, E):
        u = numerov_integrate(self.V, E, self.grid, "indicial-left", _Vx=self.Vx)
        v = numerov_integrate(self.V, E, self.grid, "indicial-right", _Vx=self.Vx)
        return u, v

    def mismatch(self, E) -> float:
        u, v = self.solutions(E)
        return _prufer(u.psi, u.dpsi, self.im, True) - _prufer(v.psi, v.dpsi, self.im, False)

    def count_below(self, E) -> int:
        return int(math.floor(self.mismatch(E) / math.pi)) + 1

    def level(self, m: int, lo: float, hi: float, rtol: float = 1e-12) -> float:
        g = lambda E: self.mismatch(E) - (m - 1) * math.pi
        return optimize.brentq(g, lo, hi, xtol=1e-14, rtol=max(rtol, 4.5e-16), maxiter=200)

    def state(self, E: float, index: int = 0) -> BoundState:
        u, v = self.solutions(E)
        i = self.im
        scale = (u.psi[i] * v.psi[i] + u.dpsi[i] * v.dpsi[i]) / (v.psi[i] ** 2 + v.dpsi[i] ** 2)
        psi = np.concatenate([u.psi[: i + 1], scale * v.psi[i + 1:]])
        norm2 = integrate.simpson(psi ** 2, x=self.grid.x)
        norm2 += _inset_norm(self.grid.piece.lo, self.grid.inset_lo, psi[0])
        norm2 += _inset_norm(self.grid.piece.hi, self.grid.inset_hi, psi[-1])
        norm = math.sqrt(norm2)
        psi = psi / norm
        first = psi[np.nonzero(np.abs(psi) > 1e-8 * np.max(np.abs(psi)))[0][0]]
        psi = psi * np.sign(first)
        interior = psi[np.abs(psi) > 1e-10 * np.max(np.abs(psi))]
        nodes = int(np.count_nonzero(np.sign(interior[1:]) != np.sign(interior[:-1])))
        return BoundState(E, self.grid.x, psi, nodes, norm, index)


def _inset_norm(end: Endpoint, eps: float, psi_edge: float) -> float:
    """Integral of psi^2 over the skipped inset, from the leading power."""
    if end.infinite or eps == 0:
        return 0.0
    p = end.l + 1
    return psi_edge ** 2 * eps / (2 * p + 1)


def shoot_eigen(V: PotentialSpec, piece: DomainPiece, bracket: tuple[float, float],
                count: int, h: float = 1e-3, cutoff: float = 60.0) -> list[BoundState]:
    """Up to ``count`` lowest eigenstates with energies inside ``bracket``."""
    sh = Shooter(V, piece, h, cutoff)
    lo, hi = bracket
    n_lo, n_hi = sh.count_below(lo), sh.count_below(hi)
    states = []
    for m in range(n_lo + 1, min(n_lo + count, n_hi) + 1):
        E = sh.level(m, lo, hi)
        states.append(sh.state(E, m))
    return states


# ---------------------------------------------------------------------------
# zero-energy state of family (32)


def zero_energy_wavefunction(n: int, mu) -> RationalFunction:
    """x^n/(mu + x^(2n+1)), the inverse of the last seed."""
    x = RationalFunction.x()
    return x ** n / (Fraction(mu) + x ** (2 * n + 1))


def zero_energy_state(V: PotentialSpec, mu=None, n=None, h: float = 1e-3,
                      xmax: float = 60.0) -> BoundState:
    """Normalized E = 0 state on x > 0 of family (32); n = 1 is rejected
    because its E = 0 solution x/(mu + x^3) is not normalizable."""
    n = V.params.get("n") if n is None else n
    mu = V.params.get("mu") if mu is None else mu
    if n == 1:
        raise ValueError("n = 1: the E = 0 solution decays only like 1/x^2 and is not "
                         "normalizable; the ground state is the E = -1/c^2 level instead")
    psi = zero_energy_wavefunction(n, mu)
    residual = schrodinger_residual(psi, V.evaluator, 0)
    if not residual.is_zero():
        raise ArithmeticError("E = 0 Schrodinger residual is not identically zero")
    f = lambda s: float(psi(s)) ** 2
    norm2 = integrate.quad(f, 0, 1, epsabs=1e-14)[0] + integrate.quad(f, 1, np.inf, epsabs=1e-14)[0]
    norm = math.sqrt(norm2)
    x = np.arange(h, xmax + h / 2, h)
    num = np.polyval(psi.num.float_coeffs()[::-1], x)
    den = np.polyval(psi.den.float_coeffs()[::-1], x)
    return BoundState(0.0, x, num / den / norm, 0, norm, 1, {"residual_exact_zero": True})


def write_wavefunction_csv(fh, x, psi, dpsi=None):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x", "psi", "dpsi"])
    if dpsi is None:
        dpsi = np.gradient(psi, x)
    for row in zip(x, psi, dpsi):
        w.writerow([f"{v:.11e}" for v in row])
