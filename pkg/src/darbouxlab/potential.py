"""Potential instances: evaluator plus domain pieces and tail data."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .analytic import Expr
from .exactrat import Poly, RationalFunction, laurent_at, rf_real_poles

CHARACTERS = ("scattering-with-bound-state", "confining", "purely-repulsive", "whole-line")


def centrifugal_l(strength: float) -> float:
    """Larger root of l(l+1) = strength (strength >= -1/4)."""
    return 0.5 * (-1.0 + math.sqrt(max(1.0 + 4.0 * strength, 0.0)))


@dataclass(frozen=True)
class Endpoint:
    """A piece boundary: a double pole, or a far-field end at +-inf.

    ``strength`` is the coefficient s of s/(x-x0)^2 near a pole, or of s/x^2
    at infinity. ``center`` is the far-field point about which the tail has
    no 1/x^3 term. ``laurent`` lists [v_-2, v_-1, v_0, ...] at a pole.
    """

    x: float
    strength: float = 0.0
    laurent: tuple = ()
    center: float = 0.0
    exact: object = None

    @property
    def infinite(self) -> bool:
        return math.isinf(self.x)

    @property
    def l(self) -> float:
        return centrifugal_l(self.strength)


@dataclass(frozen=True)
class DomainPiece:
    lo: Endpoint
    hi: Endpoint
    character: str

    @property
    def interval(self) -> tuple[float, float]:
        return (self.lo.x, self.hi.x)

    @property
    def bounded(self) -> bool:
        return not (self.lo.infinite or self.hi.infinite)

    def contains(self, x: float) -> bool:
        return self.lo.x < x < self.hi.x


@dataclass
class PotentialSpec:
    family: str
    params: dict
    evaluator: object  # RationalFunction or Expr
    pieces: list = field(default_factory=list)
    tails: dict = field(default_factory=dict)
    notes: str = ""

    @property
    def rational(self) -> bool:
        return isinstance(self.evaluator, RationalFunction)

    def V(self, x):
        """Float evaluation, vectorized."""
        if self.rational:
            num = np.asarray(self.evaluator.num.float_coeffs()[::-1] or [0.0])
            den = np.asarray(self.evaluator.den.float_coeffs()[::-1])
            x = np.asarray(x, dtype=float)
            return np.polyval(num, x) / np.polyval(den, x)
        return self.evaluator(np.asarray(x, dtype=float) if np.ndim(x) else float(x))

    __call__ = V

    def piece(self, which) -> DomainPiece:
        """Select a piece by index or by a point inside it."""
        if isinstance(which, int):
            return self.pieces[which]
        for p in self.pieces:
            if p.contains(float(which)):
                return p
        raise ValueError(f"no piece contains {which}")

    def piece_named(self, side: str) -> DomainPiece:
        """'right' = unbounded to +inf, 'left' = unbounded to -inf, 'middle' = bounded."""
        for p in self.pieces:
            if side == "right" and p.hi.infinite and not p.lo.infinite:
                return p
            if side == "left" and p.lo.infinite and not p.hi.infinite:
                return p
            if side == "middle" and p.bounded:
                return p
            if side == "whole" and p.lo.infinite and p.hi.infinite:
                return p
        raise ValueError(f"{self.family}: no {side} piece")


def cauchy_bound(p: Poly) -> Fraction:
    lead = abs(p.lead)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def far_tail(rf: RationalFunction) -> tuple[float, float]:
    """(strength, center) of the 1/x^2 far tail of a rational function.

    With V = s/x^2 + t/x^3 + ..., the center is t/(2s).
    """
    n, d = rf.num.degree, rf.den.degree
    if rf.is_zero() or d - n > 2:
        return 0.0, 0.0
    if d - n < 2:
        raise ValueError("potential does not decay like 1/x^2 at infinity")
    # series of x^2 V in y = 1/x: reversed coefficient lists
    nt = list(reversed(rf.num.coeffs))
    dt = list(reversed(rf.den.coeffs))
    # x^2 V = (x^{n+2}/x^d) * Nt(y)/Dt(y) = Nt(y)/Dt(y) since d = n + 2
    c0 = nt[0] / dt[0]
    n1 = nt[1] if len(nt) > 1 else 0
    d1 = dt[1] if len(dt) > 1 else 0
    c1 = (n1 - d1 * c0) / dt[0]
    s, t = c0, c1
    return float(s), float(t / (2 * s)) if s != 0 else 0.0


def classify(V, lo: float, hi: float) -> str:
    if not (math.isinf(lo) or math.isinf(hi)):
        return "confining"
    if math.isinf(lo) and math.isinf(hi):
        return "whole-line"
    if math.isinf(hi):
        xs = lo + np.geomspace(1e-6, 1e4, 4000)
    else:
        xs = hi - np.geomspace(1e-6, 1e4, 4000)
    return "purely-repulsive" if np.all(V(xs) >= 0) else "scattering-with-bound-state"


def rational_pieces(rf: RationalFunction) -> tuple[list[DomainPiece], dict]:
    """Pieces between the real poles of a rational potential, with tail data."""
    spec_V = PotentialSpec("tmp", {}, rf)
    poles = []
    if rf.den.degree >= 1:
        b = cauchy_bound(rf.den) + 1
        poles = rf_real_poles(rf, (-b, b))
    s_inf, center = far_tail(rf)
    tails = {math.inf: s_inf, -math.inf: s_inf}
    ends = [Endpoint(-math.inf, s_inf, center=center)]
    for r, mult in poles:
        lau = tuple(laurent_at(rf, r, order=4, pole_order=mult))
        strength = lau[0] if mult == 2 else math.nan
        ends.append(Endpoint(float(r), strength, lau, exact=r if isinstance(r, Fraction) else None))
        tails[float(r)] = strength
    ends.append(Endpoint(math.inf, s_inf, center=center))
    pieces = [DomainPiece(a, b, classify(spec_V.V, a.x, b.x)) for a, b in zip(ends, ends[1:])]
    return pieces, tails


def numeric_laurent(V, x0: float, side: int, strength: Optional[float] = None,
                    width: float = 0.3, degree: int = 10) -> tuple:
    """Laurent coefficients [v_-2, v_-1, ...] at a double pole from a
    polynomial fit of (x-x0)^2 V on one side; ``strength`` pins v_-2."""
    t = 0.5 * (1 - np.cos(np.linspace(0, np.pi, 60)))
    s = side * (1e-3 + width * t)
    g = s ** 2 * V(x0 + s)
    if strength is not None:
        # fit (g - strength)/s with one degree less
        coef = np.polynomial.polynomial.polyfit(s, (g - strength) / s, degree - 1)
        return (float(strength),) + tuple(float(c) for c in coef[:5])
    coef = np.polynomial.polynomial.polyfit(s, g, degree)
    return tuple(float(c) for c in coef[:6])


def spec_from_rational(family: str, params: dict, rf: RationalFunction, notes: str = "") -> PotentialSpec:
    pieces, tails = rational_pieces(rf)
    return PotentialSpec(family, params, rf, pieces, tails, notes)


def spec_from_expr(family: str, params: dict, expr: Expr,
                   poles: Sequence[tuple[float, float]] = (), lo: float = -math.inf,
                   hi: float = math.inf, characters: Optional[Sequence[str]] = None,
                   notes: str = "") -> PotentialSpec:
    """Pieces for a non-rational potential from known double poles
    ``[(x0, strength), ...]`` restricted to (lo, hi)."""
    spec = PotentialSpec(family, params, expr, notes=notes)
    ends = [Endpoint(lo, 0.0)] if math.isinf(lo) else []
    for x0, s in poles:
        ends.append(Endpoint(float(x0), float(s)))
    if math.isinf(hi):
        ends.append(Endpoint(hi, 0.0))
    pieces = []
    for i, (a, b) in enumerate(zip(ends, ends[1:])):
        if not a.infinite:
            a = Endpoint(a.x, a.strength, numeric_laurent(spec.V, a.x, +1, a.strength))
        if not b.infinite:
            b = Endpoint(b.x, b.strength, numeric_laurent(spec.V, b.x, -1, b.strength))
        ch = characters[i] if characters else classify(spec.V, a.x, b.x)
        pieces.append(DomainPiece(a, b, ch))
    spec.pieces = pieces
    spec.tails = {e.x: e.strength for e in ends}
    return spec
