"""Half-line S-matrices: closed forms, a numeric extractor and Levinson spans.

Conventions. On a piece bounded by a double pole at x0 and open to infinity,
distance from the pole is r = |x - x0|, and a scattering state behaves as

    psi ~ exp(-i k r) - S(k) exp(+i k r),   S = exp(2 i delta).

The numeric extractor integrates from the pole on the regular branch and
matches to Riccati-Bessel functions of the integer far-tail order, using the
tail center (no 1/r^3 term) as origin, then shifts back to r.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy import special

from .exactrat import Poly
from .potential import DomainPiece, Endpoint, PotentialSpec
from .schrodinger import _numerov, _start_values, shoot_eigen

UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class ScatteringSample:
    k: float
    S: complex
    delta: float
    piece: str = ""


@dataclass
class LevinsonSpan:
    delta0: float
    delta_inf: float
    span: float
    ledger: dict = field(default_factory=dict)
    k: Optional[np.ndarray] = None
    delta: Optional[np.ndarray] = None

    @property
    def ledger_total(self) -> float:
        return float(sum(self.ledger.values()))


@dataclass(frozen=True)
class TransmissionSample:
    k: float
    t: complex
    r: complex


# ---------------------------------------------------------------------------
# exact Riccati-Bessel polynomials


def chain_plane_wave_poly(n: int) -> list[Poly]:
    """Coefficients a_m(w) with (D - n/x)...(D - 1/x) exp(i k x) =
    exp(i k x) * sum_m a_m(w) x^(-m), w = i k; each a_m is an integer
    polynomial in w of degree n - m."""
    a = [Poly([1])]
    w = Poly([0, 1])
    for j in range(1, n + 1):
        out = [Poly([0])] * (len(a) + 1)
        for m, c in enumerate(a):
            out[m] = out[m] + w * c                      # D acting on exp
            out[m + 1] = out[m + 1] - (m + j) * c        # D on x^-m, then -j/x
        a = out
    return a


def pole_polynomial(n: int) -> tuple[Poly, Poly]:
    """Real and imaginary parts (Qr, Qi) of Q(z) = c^n q(-c, i z / c), where
    q(x, w) = sum_m a_m(w) x^(-m). Both are integer polynomials in z = kc."""
    a = chain_plane_wave_poly(n)
    re = [Fraction(0)] * (n + 1)
    im = [Fraction(0)] * (n + 1)
    unit = [(1, 0), (0, 1), (-1, 0), (0, -1)]  # i^j
    for m, c in enumerate(a):
        sign = (-1) ** m
        for j, coef in enumerate(c.coeffs):
            ur, ui = unit[j % 4]
            re[j] += sign * coef * ur
            im[j] += sign * coef * ui
    return Poly(re), Poly(im)


def _fval(p: Poly, z):
    return np.polyval(p.float_coeffs()[::-1] or [0.0], z)


# ---------------------------------------------------------------------------
# closed forms

PIECES = ("10-right", "10-left", "32-right", "32-left", "22-left", "36-left", "centrifugal")


def analytic_smatrix(piece: str, k, c: float = 1.0, n: Optional[int] = None):
    """Closed-form S(k) for the named piece.

    ``piece`` is one of '10-right', '10-left', '32-right' (needs n),
    '22-left', '36-left' (the reference n = 3 left-piece formula),
    '32-left' (general n, from the pole polynomial) or 'centrifugal' (n(n+1)/x^2).
    ``k`` may be complex (for the bound-state pole probe) or an array.
    """
    if c <= 0:
        raise ValueError("c must be > 0")
    z = np.asarray(k) * c
    if piece == "10-right":
        return (1 - 1j * z) / (1 + 1j * z)
    if piece == "10-left":
        return (1 + 1j * z) / (1 - 1j * z)
    if piece == "22-left":
        return (z ** 2 - 3j * z - 3) / (-z ** 2 - 3j * z + 3)
    if piece == "36-left":
        num = 42 * z ** 2 + 105 - 1j * (7 * z ** 3 - 105 * z)
        return num / np.conj(num) if np.isrealobj(z) else num / (42 * z ** 2 + 105 + 1j * (7 * z ** 3 - 105 * z))
    if n is None:
        raise ValueError(f"piece {piece!r} needs n")
    if piece == "32-right":
        return (-1) ** (n + 1) * np.ones_like(z, dtype=complex) if np.ndim(z) else complex((-1) ** (n + 1))
    if piece == "centrifugal":
        return (-1) ** n * np.ones_like(z, dtype=complex) if np.ndim(z) else complex((-1) ** n)
    if piece == "32-left":
        qr, qi = pole_polynomial(n)
        Q = _fval(qr, z) + 1j * _fval(qi, z)
        Qc = _fval(qr, z) - 1j * _fval(qi, z)
        return (-1) ** (n + 1) * Q / Qc
    raise ValueError(f"unsupported piece {piece!r}; expected one of {PIECES}")


def reflection_phase_fix(k: float, c: float) -> complex:
    """Ratio a/b in a exp(ikx) + b exp(-ikx) fixed by a node of the
    intertwined wave at x = -c (first-step chain of family (10))."""
    if k <= 0 or c <= 0:
        raise ValueError("k and c must be > 0")
    return -(1 - 1j * k * c) / (1 + 1j * k * c) * np.exp(2j * k * c)


def delta_from_S(S: complex, anchor: float = 0.0) -> float:
    """Phase shift on the branch closest to ``anchor``."""
    d = 0.5 * math.atan2(S.imag, S.real)
    return d + math.pi * round((anchor - d) / math.pi)


# ---------------------------------------------------------------------------
# numeric extraction


def _integer_l(strength: float) -> int:
    l = 0.5 * (-1 + math.sqrt(1 + 4 * strength))
    if abs(l - round(l)) > 1e-9:
        raise ValueError(f"far tail strength {strength} is not l(l+1) with integer l")
    return int(round(l))


def _riccati(l: int, z):
    """(j_hat, y_hat) = (z j_l(z), z y_l(z))."""
    return z * special.spherical_jn(l, z), z * special.spherical_yn(l, z)


def _pole_and_tail(piece: DomainPiece) -> tuple[Endpoint, Endpoint, int]:
    if piece.lo.infinite and not piece.hi.infinite:
        return piece.hi, piece.lo, -1
    if piece.hi.infinite and not piece.lo.infinite:
        return piece.lo, piece.hi, +1
    raise ValueError("piece needs exactly one pole end and one infinite end")


def _outward_solution(V: PotentialSpec, piece: DomainPiece, E: float, rmax: float,
                      h: float):
    pole, _, side = _pole_and_tail(piece)
    eps = h ** (2.0 / 3.0)
    n = int(math.ceil((rmax - eps) / h)) + 1
    r = eps + h * np.arange(n)
    x = pole.x + side * r
    f = V.V(x) - E
    y0, y1 = _start_values(pole, E, side, eps, h)
    y, _ = _numerov(f, h, y0, y1)
    return r, y


def numeric_phase_shift(V: PotentialSpec, piece, k: float, R: float = 40.0,
                        h: float = 1e-3, piece_id: str = "") -> ScatteringSample:
    """S(k) on a half-line piece by Riccati-Bessel matching at r = R and R + Delta.

    ``piece`` is a DomainPiece or a side name ('left' / 'right').
    """
    if k <= 0:
        raise ValueError("k must be > 0")
    if isinstance(piece, str):
        piece_id = piece_id or f"{V.family}-{piece}"
        piece = V.piece_named(piece)
    pole, tail, side = _pole_and_tail(piece)
    l = _integer_l(tail.strength)
    # tail center measured as distance from the pole
    d = side * (tail.center - pole.x)
    # pick R so that at least a few wavelengths lie beyond the near zone
    R = max(R, 6 * math.pi / k)
    delta_r = 0.25 * math.pi / k
    last_err = None
    for attempt in range(3):
        Ra = R * (1 + 0.137 * attempt)
        r, y = _outward_solution(V, piece, k * k, Ra + delta_r + 4 * h, h)
        i1 = int(round((Ra - r[0]) / h))
        i2 = int(round((Ra + delta_r - r[0]) / h))
        z = k * (r[[i1, i2]] - d)
        jh, yh = _riccati(l, z)
        M = np.array([[jh[0], yh[0]], [jh[1], yh[1]]])
        if abs(np.linalg.det(M)) < 1e-8 * np.max(np.abs(M)) ** 2:
            last_err = "singular matching system"
            continue
        alpha, beta = np.linalg.solve(M, y[[i1, i2]])
        S_tail = np.exp(-1j * l * math.pi) * (alpha - 1j * beta) / (alpha + 1j * beta)
        S = complex(S_tail * np.exp(-2j * k * d))
        return ScatteringSample(k, S, delta_from_S(S), piece_id)
    raise RuntimeError(f"phase-shift matching failed after 3 attempts: {last_err}")


def phase_table(V: PotentialSpec, piece, ks: Sequence[float], R: float = 40.0,
                h: float = 1e-3, anchor: float = 0.0) -> list[ScatteringSample]:
    """Samples over ``ks`` with delta unwrapped from the largest k down,
    anchored at ``anchor`` there."""
    ks = np.sort(np.asarray(ks, dtype=float))
    samples = [numeric_phase_shift(V, piece, float(k), R, h) for k in ks]
    deltas = _unwrap_from_top([s.S for s in samples], anchor)
    return [ScatteringSample(s.k, s.S, d, s.piece) for s, d in zip(samples, deltas)]


def _unwrap_from_top(S: Sequence[complex], anchor: float) -> np.ndarray:
    raw = 0.5 * np.angle(np.asarray(S))
    out = np.empty_like(raw)
    out[-1] = raw[-1] + math.pi * round((anchor - raw[-1]) / math.pi)
    for i in range(len(raw) - 2, -1, -1):
        d = raw[i] + math.pi * round((out[i + 1] - raw[i]) / math.pi)
        if abs(d - out[i + 1]) > math.pi / 2 - 1e-9:
            raise ArithmeticError(f"unwrap jump at k index {i}; refine the k-grid")
        out[i] = d
    return out


def write_phase_csv(fh, samples: Sequence[ScatteringSample]):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["k", "Re S", "Im S", "delta_unwrapped", "piece_id"])
    for s in samples:
        w.writerow([f"{s.k:.11e}", f"{s.S.real:.11e}", f"{s.S.imag:.11e}",
                    f"{s.delta:.11e}", s.piece])


# ---------------------------------------------------------------------------
# Levinson bookkeeping


def k_grid(kmin: float = 0.05, kmax: float = 20.0, num: int = 60) -> np.ndarray:
    return np.geomspace(kmin, kmax, num)


def _extrapolate_to_zero(s, f) -> float:
    """Value at s = 0 of the interpolating polynomial through (s_i, f_i)."""
    return float(np.polynomial.polynomial.polyfit(s, f, len(s) - 1)[0])


def levinson_span(V: PotentialSpec, piece, ks: Optional[Sequence[float]] = None,
                  bound_states: Optional[int] = None, R: float = 40.0,
                  h: float = 2e-3) -> LevinsonSpan:
    """Numeric span delta(0) - delta(inf) with the bound-state / tail ledger.

    Bound states are counted by shooting below zero; a normalizable E = 0
    state (family (32), n >= 2, right piece) counts as a full bound state.
    """
    if isinstance(piece, str):
        piece = V.piece_named(piece)
    pole, tail, _ = _pole_and_tail(piece)
    l_long = _integer_l(tail.strength)
    l_short = pole.l
    ks = k_grid() if ks is None else np.asarray(ks, dtype=float)
    samples = phase_table(V, piece, ks, R, h, anchor=-l_short * math.pi / 2)
    k = np.array([s.k for s in samples])
    d = np.array([s.delta for s in samples])
    delta0 = _extrapolate_to_zero(k[:3], d[:3])
    delta_inf = _extrapolate_to_zero(1 / k[-3:], d[-3:])
    if bound_states is None:
        bound_states = count_bound_states(V, piece)
    ledger = {"bound_states": bound_states * math.pi,
              "long_tail": -l_long * math.pi / 2,
              "short_tail": l_short * math.pi / 2}
    return LevinsonSpan(float(delta0), float(delta_inf), float(delta0 - delta_inf),
                        ledger, k, d)


def count_bound_states(V: PotentialSpec, piece: DomainPiece) -> int:
    """Levels below zero plus a normalizable zero-energy state where known."""
    xs = np.linspace(piece.lo.x if not piece.lo.infinite else piece.hi.x - 50,
                     piece.hi.x if not piece.hi.infinite else piece.lo.x + 50, 20001)[1:-1]
    vmin = float(np.min(V.V(xs)))
    count = 0
    if vmin < 0:
        count = len(shoot_eigen(V, piece, (vmin - 1, -1e-9), 50, h=2e-3))
    n = V.params.get("n")
    if V.family in ("22", "32") and n and n >= 2 and piece.hi.infinite:
        count += 1
    return count


# ---------------------------------------------------------------------------
# reflectionless sech^2 family


def _transmission_factor(W_plus: float, W_minus: float, k: float) -> complex:
    """t_new / t_old for one Darboux step with asymptotic W' values."""
    return (W_plus + 1j * k) / (W_minus + 1j * k)


def sech_transmission_analytic(n: int, k: float) -> complex:
    """Product over the cosh^j seeds (W' = -j tanh x) of the step factors."""
    t = 1.0 + 0j
    for j in range(1, n + 1):
        t *= _transmission_factor(-j, j, k)
    return t


def whole_line_scatter(V, k: float, L: float = 20.0, h: float = 1e-3) -> tuple[complex, complex]:
    """(t, r) for a potential decaying on both sides, from a purely
    transmitted wave exp(ikx) at x = L integrated back to x = -L."""
    n = int(round(2 * L / h)) + 1
    x = np.linspace(-L, L, n)
    h = x[1] - x[0]
    f = (V(x) - k * k)[::-1].copy()
    yr, _ = _numerov(f, h, math.cos(k * x[-1]), math.cos(k * x[-2]))
    yi, _ = _numerov(f, h, math.sin(k * x[-1]), math.sin(k * x[-2]))
    y = (yr + 1j * yi)[::-1]
    # decompose at two points near -L: A e^{ikx} + B e^{-ikx}
    i2 = int(round(0.25 * math.pi / k / h)) or 1
    xa, xb = x[0], x[i2]
    M = np.array([[np.exp(1j * k * xa), np.exp(-1j * k * xa)],
                  [np.exp(1j * k * xb), np.exp(-1j * k * xb)]])
    A, B = np.linalg.solve(M, y[[0, i2]])
    return complex(1 / A), complex(B / A)


def sech_transmission(n: int, k: float, check: bool = True, L: float = 20.0,
                      h: float = 1e-3) -> TransmissionSample:
    """t(k) for -n(n+1) cosh^-2 x; with ``check`` the reflection amplitude is
    recomputed numerically and must stay below 1e-6."""
    if n < 1 or k <= 0:
        raise ValueError("need n >= 1 and k > 0")
    t = sech_transmission_analytic(n, k)
    r = 0j
    if check:
        V = lambda x: -n * (n + 1) / np.cosh(x) ** 2
        t_num, r = whole_line_scatter(V, k, L, h)
        if abs(r) >= 1e-6:
            raise ArithmeticError(f"|r| = {abs(r):.3e} for n={n}, k={k}")
    return TransmissionSample(k, t, r)
