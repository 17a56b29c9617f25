"""Darboux (factorization) steps: superpotentials, partner potentials,
intertwiners, second solutions and multi-step chains.

Convention: for a seed phi at energy E0, W' = -phi'/phi, the intertwiner is
A = D + W' (so A phi = 0) and the partner is V1 = W'^2 + W'' + E0.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy import integrate, optimize

from .analytic import Const, DomainError, Expr, Jet3, X
from .exactrat import Poly, RationalFunction, rf_to_dict
from .potential import PotentialSpec, spec_from_expr, spec_from_rational

Function = Union[RationalFunction, Expr]

SEED_TOL = 1e-8


class SeedError(ValueError):
    """A seed does not solve its source Schrodinger equation."""


def rational_to_expr(rf: RationalFunction) -> Expr:
    def horner(p: Poly) -> Expr:
        acc: Expr = Const(Fraction(0))
        for c in reversed(p.coeffs):
            acc = acc * X + Const(c)
        return acc
    return horner(rf.num) / horner(rf.den)


def _to_expr(f) -> Expr:
    if isinstance(f, RationalFunction):
        return rational_to_expr(f)
    if isinstance(f, (int, Fraction, float, complex)):
        return Const(f)
    return f


def _is_rational(*fs) -> bool:
    return all(isinstance(f, (RationalFunction, int, Fraction)) for f in fs)


def _default_grid(f: Expr, n: int = 50) -> np.ndarray:
    pts = []
    for x in np.linspace(-4.9, 4.9, 4 * n):
        try:
            v = f.jet(float(x), 2)
        except (DomainError, ZeroDivisionError, FloatingPointError):
            continue
        if all(np.isfinite(complex(u)) for u in v) and abs(v[0]) > 1e-12:
            pts.append(x)
    return np.asarray(pts[:: max(1, len(pts) // n)])


def schrodinger_residual(phi: Function, V: Function, E) -> Function:
    """-phi'' + (V - E) phi, exact for rational inputs."""
    if _is_rational(phi, V, E):
        phi = phi if isinstance(phi, RationalFunction) else RationalFunction(phi)
        return -phi.derive().derive() + (V - Fraction(E)) * phi
    p = _to_expr(phi)
    return -p.derivative().derivative() + (_to_expr(V) - E) * p


@dataclass(frozen=True)
class SeedSolution:
    phi: Function
    E0: object
    V0: Function = field(default_factory=lambda: RationalFunction(0))
    grid: Optional[Sequence[float]] = None

    def residual(self) -> float:
        """0 exactly for a valid rational seed; otherwise the largest relative
        Schrodinger residual on the grid."""
        res = schrodinger_residual(self.phi, self.V0, self.E0)
        if isinstance(res, RationalFunction):
            return 0.0 if res.is_zero() else math.inf
        phi = _to_expr(self.phi)
        grid = self.grid if self.grid is not None else _default_grid(phi)
        worst = 0.0
        for x in grid:
            j = phi.jet(float(x), 2)
            scale = abs(j[2]) + abs(complex(_to_expr(self.V0)(float(x))) * j[0]) + \
                abs(complex(self.E0) * j[0]) + 1e-300
            worst = max(worst, abs(complex(res(float(x)))) / scale)
        return worst

    def validate(self, tol: float = SEED_TOL) -> float:
        r = self.residual()
        if not r <= tol:
            raise SeedError(f"seed residual {r:.3e} exceeds {tol:.1e}")
        return r


@dataclass(frozen=True)
class DarbouxStep:
    W1: Function  # W'
    E0: object
    seed: Optional[SeedSolution] = None

    @property
    def rational(self) -> bool:
        return isinstance(self.W1, RationalFunction) and _is_rational(self.E0)


def superpotential(seed: SeedSolution) -> Function:
    """W' = -phi'/phi."""
    phi = seed.phi
    if isinstance(phi, (int, Fraction)):
        phi = RationalFunction(phi)
    if isinstance(phi, RationalFunction):
        if phi.is_zero():
            raise ValueError("seed is identically zero")
        return -phi.derive() / phi
    if isinstance(phi, Const) and phi.c == 0:
        raise ValueError("seed is identically zero")
    return -phi.derivative() / phi


def make_step(seed: SeedSolution) -> DarbouxStep:
    return DarbouxStep(superpotential(seed), seed.E0, seed)


def partner_function(step: DarbouxStep) -> Function:
    W = step.W1
    if step.rational:
        return W * W + W.derive() + Fraction(step.E0)
    W = _to_expr(W)
    return W * W + W.derivative() + step.E0


def partner_potential(step: DarbouxStep, **expr_pieces) -> PotentialSpec:
    """V1 = W'^2 + W'' + E0 as a PotentialSpec; poles of a rational V1 become
    piece boundaries. ``expr_pieces`` go to :func:`spec_from_expr`."""
    V1 = partner_function(step)
    if isinstance(V1, RationalFunction):
        return spec_from_rational("partner", {"E0": step.E0}, V1)
    return spec_from_expr("partner", {"E0": step.E0}, V1, **expr_pieces)


def intertwine(step: DarbouxStep, psi: Function) -> Function:
    """A psi = psi' + W' psi; exact when both are rational."""
    if _is_rational(psi) and isinstance(step.W1, RationalFunction):
        psi = psi if isinstance(psi, RationalFunction) else RationalFunction(psi)
        return psi.derive() + step.W1 * psi
    p = _to_expr(psi)
    return p.derivative() + _to_expr(step.W1) * p


def cokernel(step: DarbouxStep) -> Function:
    """A^dagger applied to 1/phi, i.e. -(1/phi)' + W'/phi; vanishes identically."""
    phi = step.seed.phi
    if isinstance(phi, RationalFunction) and isinstance(step.W1, RationalFunction):
        inv = 1 / phi
        return -inv.derive() + step.W1 * inv
    inv = 1 / _to_expr(phi)
    return -inv.derivative() + _to_expr(step.W1) * inv


# ---------------------------------------------------------------------------
# second solution


def _monomial(rf: RationalFunction):
    """(c, m) with rf = c x^m, or None."""
    for p in (rf.num, rf.den):
        nz = [i for i, c in enumerate(p.coeffs) if c != 0]
        if len(nz) != 1:
            return None
    i = next(i for i, c in enumerate(rf.num.coeffs) if c != 0)
    j = next(i for i, c in enumerate(rf.den.coeffs) if c != 0)
    return rf.num.coeffs[i] / rf.den.coeffs[j], i - j


class QuadratureSecondSolution:
    """psi2(x) = psi1(x) * int_{x0}^{x} psi1^-2, evaluated by adaptive quadrature."""

    def __init__(self, psi1: Expr, x0: float, tol: float = 1e-10):
        self.psi1, self.x0, self.tol = psi1, float(x0), tol
        self._v0 = complex(psi1(self.x0))
        if self._v0 == 0:
            raise ZeroDivisionError(f"psi1 vanishes at x0={x0}")

    def _integral(self, x: float) -> float:
        _check_no_zero(self.psi1, self.x0, x)
        f = lambda s: 1.0 / float(self.psi1(s)) ** 2
        val, _ = integrate.quad(f, self.x0, x, epsabs=self.tol, epsrel=1e-12, limit=200)
        return val

    def __call__(self, x: float) -> float:
        return float(self.psi1(float(x))) * self._integral(float(x))

    def jet(self, x: float) -> Jet3:
        # I' = psi1^-2 makes the psi1' terms cancel in psi2''
        x = float(x)
        I = self._integral(x)
        p0, p1, p2, p3 = (float(v) for v in self.psi1.jet(x, 3))
        return Jet3(x, p0 * I, p1 * I + 1 / p0, p2 * I, p3 * I + p2 / p0 ** 2)


def _check_no_zero(f: Expr, a: float, b: float, samples: int = 400):
    xs = np.linspace(a, b, samples)
    v = np.real(np.asarray(f(xs), dtype=complex))
    zero = np.nonzero(v == 0)[0]
    if zero.size:
        raise ZeroDivisionError(f"psi1 has a zero at x={xs[zero[0]]}")
    flips = np.nonzero(np.sign(v[:-1]) != np.sign(v[1:]))[0]
    if flips.size:
        i = flips[0]
        r = optimize.brentq(lambda s: float(f(s)), xs[i], xs[i + 1])
        raise ZeroDivisionError(f"psi1 has a zero at x={r}")


def second_solution(psi1: Function, x0=None, method: str = "closed-form-monomial"):
    """Second solution at the same energy with Wronskian psi1 psi2' - psi1' psi2 = 1.

    ``closed-form-monomial`` needs psi1 = c x^m; with ``x0=None`` the
    integration constant is dropped. ``numeric-quadrature`` works for any
    expression and requires a start point x0.
    """
    if method == "closed-form-monomial":
        rf = psi1 if isinstance(psi1, RationalFunction) else RationalFunction(psi1)
        mono = _monomial(rf)
        if mono is None:
            raise ValueError("closed form needs a monomial psi1")
        c, m = mono
        # int c^-2 x^-2m = x^(1-2m) / ((1-2m) c^2); m integer so 1-2m != 0
        x = RationalFunction.x()
        F = (x ** (1 - 2 * m)) * Fraction(1, (1 - 2 * m)) / (c * c)
        if x0 is not None:
            x0 = Fraction(x0)
            if x0 == 0 and 1 - 2 * m < 0:
                raise ZeroDivisionError("psi1 has a zero at x=0")
            F = F - F(x0)
        return rf * F
    if method == "numeric-quadrature":
        if x0 is None:
            raise ValueError("numeric quadrature needs x0")
        return QuadratureSecondSolution(_to_expr(psi1), x0)
    raise ValueError(f"unknown method {method!r}")


def wronskian(f, g, x: float) -> complex:
    jf = _jet_of(f, x)
    jg = _jet_of(g, x)
    return jf[0] * jg[1] - jf[1] * jg[0]


def _jet_of(f, x):
    if isinstance(f, QuadratureSecondSolution):
        j = f.jet(x)
        return (j.f, j.f1)
    j = _to_expr(f).jet(float(x), 1)
    return (j[0], j[1])


# ---------------------------------------------------------------------------
# chains


@dataclass
class DarbouxChain:
    V0: Function
    steps: list = field(default_factory=list)
    potentials: list = field(default_factory=list)  # V after each step

    @property
    def final(self) -> Function:
        return self.potentials[-1] if self.potentials else self.V0

    def apply(self, psi: Function) -> Function:
        """A_n ... A_1 psi."""
        for step in self.steps:
            psi = intertwine(step, psi)
        return psi

    def to_dict(self) -> dict:
        def enc(f):
            if isinstance(f, RationalFunction):
                return {"rational": rf_to_dict(f)}
            return {"expr": repr(f)}
        return {"V0": enc(_as_rf_if_const(self.V0)),
                "steps": [{"W1": enc(s.W1), "E0": str(s.E0)} for s in self.steps]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _as_rf_if_const(f):
    return RationalFunction(f) if isinstance(f, (int, Fraction)) else f


def chain_build(V0, seeds: Sequence, tol: float = SEED_TOL, final_spec: bool = True):
    """Apply Darboux steps for ``seeds`` = [(phi, E0), ...] starting at V0.

    Each seed is validated against the running potential. Returns
    ``(chain, spec)``; the spec is ``None`` when ``final_spec`` is false.
    """
    V = _as_rf_if_const(V0)
    chain = DarbouxChain(V)
    for i, item in enumerate(seeds, start=1):
        phi, E0 = item if isinstance(item, tuple) else (item.phi, item.E0)
        seed = SeedSolution(phi, E0, V)
        try:
            seed.validate(tol)
        except SeedError as err:
            raise SeedError(f"step {i}: {err}") from None
        step = make_step(seed)
        V = partner_function(step)
        chain.steps.append(step)
        chain.potentials.append(V)
    spec = None
    if final_spec:
        if isinstance(V, RationalFunction):
            spec = spec_from_rational("chain", {"steps": len(chain.steps)}, V)
        else:
            spec = PotentialSpec("chain", {"steps": len(chain.steps)}, V)
    return chain, spec


def chain_smatrix_compose(S_prev, W1_inf: float) -> Callable[[complex], complex]:
    """S_hat(k) = S_prev(k) (W'(inf) + ik)/(W'(inf) - ik)."""
    prev = S_prev if callable(S_prev) else (lambda k, s=S_prev: s)

    def S(k):
        if math.isinf(W1_inf):
            return prev(k)
        return prev(k) * (W1_inf + 1j * k) / (W1_inf - 1j * k)
    return S
