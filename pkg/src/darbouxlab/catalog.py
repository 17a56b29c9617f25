"""Registry of the potential families reachable from V = 0."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import optimize

from . import analytic as an
from .analytic import X
from .darboux import SeedSolution, chain_build, make_step, partner_function
from .exactrat import BiRational, Poly, RationalFunction, isolate_real_roots, t_poly
from .potential import PotentialSpec, spec_from_expr, spec_from_rational

PHI = (1 + math.sqrt(5)) / 2

FAMILIES = {
    "5": {"params": {"seed": ["cos", "x", "cosh", "sinh"]},
          "formula": "first-step partners of V=0: 2sec^2, 2/x^2, -2cosh^-2, 2sinh^-2"},
    "10": {"params": {"mu": "rational > 0"}, "formula": "6x(x^3-2mu)/(x^3+mu)^2"},
    "22": {"params": {"mu": "rational > 0"},
           "formula": "(2/x^2)(6x^10-18mu x^5+mu^2)/(x^5+mu)^2"},
    "32": {"params": {"n": "integer >= 1", "mu": "rational > 0"},
           "formula": "((n+1)(n+2)x^(4n+2)-6mu n(n+1)x^(2n+1)+mu^2 n(n-1))"
                      "/(x^2(mu+x^(2n+1))^2)"},
    "37": {"params": {"n": "integer >= 0"}, "formula": "n(n+1)/x^2"},
    "38": {"params": {"n": "integer >= 0"}, "formula": "n(n+1)sec^2 x"},
    "39": {"params": {"n": "integer >= 0"}, "formula": "-n(n+1)cosh^-2 x"},
    "40": {"params": {"n": "integer >= 0"}, "formula": "n(n+1)sinh^-2 x"},
    "41": {"params": {"a": "real", "b": "real"}, "formula": "(a+b cos x)/sin^2 x"},
    "42": {"params": {}, "formula": "(3/4)/sin^2 x"},
    "44": {"params": {}, "formula": "(7/4-2cos x)/sin^2 x"},
}


def _mu(mu) -> Fraction:
    m = Fraction(str(mu)) if isinstance(mu, float) else Fraction(mu)
    if m <= 0:
        raise ValueError("mu must be > 0")
    return m


def _n(n, lo: int) -> int:
    if int(n) != n or n < lo:
        raise ValueError(f"n must be an integer >= {lo}")
    return int(n)


def family32_rational(n: int, mu) -> RationalFunction:
    n, mu = _n(n, 1), _mu(mu)
    x = RationalFunction.x()
    m = 2 * n + 1
    num = (n + 1) * (n + 2) * x ** (2 * m) - 6 * mu * n * (n + 1) * x ** m + mu * mu * n * (n - 1)
    return num / (x ** 2 * (mu + x ** m) ** 2)


def family32_bivariate(n: int) -> BiRational:
    """Family (32) with mu kept symbolic as the second variable."""
    mu = t_poly([0, 1])
    m = 2 * n + 1
    num = Poly([0] * (2 * m) + [(n + 1) * (n + 2)]) \
        - Poly([0] * m + [Poly([0, 6 * n * (n + 1)])]) \
        + Poly([Poly([0, 0, n * (n - 1)])])
    den = Poly([0, 0, 1]) * (Poly([mu] + [0] * (m - 1) + [1]) ** 2)
    return BiRational(num, den)


def eq10(mu) -> RationalFunction:
    mu = _mu(mu)
    x = RationalFunction.x()
    return 6 * x * (x ** 3 - 2 * mu) / (x ** 3 + mu) ** 2


def eq22(mu) -> RationalFunction:
    mu = _mu(mu)
    x = RationalFunction.x()
    return 2 / x ** 2 * (6 * x ** 10 - 18 * mu * x ** 5 + mu * mu) / (x ** 5 + mu) ** 2


def seeds32(n: int, mu) -> list:
    """Seeds x, x^2, ..., x^n then mu/x^n + x^(n+1), all at E = 0."""
    x = RationalFunction.x()
    mu = _mu(mu)
    return [(x ** j, 0) for j in range(1, n + 1)] + [(mu / x ** n + x ** (n + 1), 0)]


def _sec2(n):
    return n * (n + 1) / an.cos(X) ** 2


def catalog_get(family, **params) -> PotentialSpec:
    family = str(family)
    if family == "5":
        seed = params.get("seed", "x")
        sub = {"cos": ("38", 1), "x": ("37", 1), "cosh": ("39", 1), "sinh": ("40", 1)}
        if seed not in sub:
            raise ValueError(f"seed must be one of {list(sub)}")
        fam, n = sub[seed]
        spec = catalog_get(fam, n=n)
        spec.family, spec.params = "5", {"seed": seed}
        return spec
    if family in ("10", "22", "32"):
        mu = _mu(params.get("mu", 1))
        n = {"10": 1, "22": 2}.get(family) or _n(params.get("n", 1), 1)
        rf = family32_rational(n, mu)
        spec = spec_from_rational(family, {"n": n, "mu": mu}, rf)
        spec.params["c"] = float(mu) ** (1.0 / (2 * n + 1))
        return spec
    if family == "37":
        n = _n(params.get("n", 0), 0)
        x = RationalFunction.x()
        rf = RationalFunction(0) if n == 0 else n * (n + 1) / x ** 2
        return spec_from_rational("37", {"n": n}, rf)
    if family == "38":
        n = _n(params.get("n", 1), 0)
        h = math.pi / 2
        s = n * (n + 1)
        return spec_from_expr("38", {"n": n}, _sec2(n), poles=[(-h, s), (h, s)],
                              lo=-h, hi=h, characters=["confining"],
                              notes="period pi; fundamental cell shown")
    if family == "39":
        n = _n(params.get("n", 1), 0)
        return spec_from_expr("39", {"n": n}, -n * (n + 1) / an.cosh(X) ** 2,
                              characters=["whole-line"])
    if family == "40":
        n = _n(params.get("n", 1), 0)
        if n == 0:
            return spec_from_expr("40", {"n": 0}, an.Const(0.0), characters=["whole-line"])
        return spec_from_expr("40", {"n": n}, n * (n + 1) / an.sinh(X) ** 2,
                              poles=[(0.0, n * (n + 1))],
                              characters=["purely-repulsive", "purely-repulsive"])
    if family in ("41", "42", "44"):
        a, b = {"42": (0.75, 0.0), "44": (1.75, -2.0)}.get(
            family, (float(params.get("a", 0.75)), float(params.get("b", 0.0))))
        expr = (a + b * an.cos(X)) / an.sin(X) ** 2
        return spec_from_expr(family, {"a": a, "b": b}, expr,
                              poles=[(0.0, a + b), (math.pi, a - b)], lo=0.0, hi=math.pi,
                              characters=["confining"])
    raise ValueError(f"unknown family {family!r}")


def regenerate(family, **params) -> RationalFunction:
    """Rational family rebuilt by a Darboux chain from V = 0."""
    family = str(family)
    if family == "5":
        x = RationalFunction.x()
        return chain_build(0, [(x, 0)], final_spec=False)[0].final
    if family == "37":
        n = _n(params.get("n", 0), 0)
        x = RationalFunction.x()
        return chain_build(0, [(x ** j, 0) for j in range(1, n + 1)], final_spec=False)[0].final
    n = {"10": 1, "22": 2}.get(family) or _n(params.get("n", 1), 1)
    chain, _ = chain_build(0, seeds32(n, params.get("mu", 1)), final_spec=False)
    return chain.final


# ---------------------------------------------------------------------------
# golden-ratio extrema of family (10)


@dataclass(frozen=True)
class GoldenExtrema:
    mu: float
    x_max: float
    x_min: float
    V_max: float
    V_min: float
    phi: float = PHI
    cube_error: float = 0.0
    value_error: float = 0.0
    note: str = ""


def golden_extrema(mu) -> GoldenExtrema:
    """Positive-x critical points of family (10), labeled by curvature."""
    mu = _mu(mu)
    V = eq10(mu)
    dV = V.derive()
    d2V = dV.derive()
    b = 10 * (1 + float(mu) ** (1 / 3))
    roots = isolate_real_roots(dV.num.monic(), Fraction(1, 10**6), Fraction(b).limit_denominator())
    crit = []
    for r in roots:
        # polish on the float derivative
        r = float(r)
        f = lambda s: dV(s)
        lo, hi = r * (1 - 1e-9), r * (1 + 1e-9)
        if f(lo) * f(hi) < 0:
            r = optimize.brentq(f, lo, hi, xtol=1e-15)
        crit.append((r, V(r), d2V(r)))
    maxima = [c for c in crit if c[2] < 0]
    minima = [c for c in crit if c[2] > 0]
    if len(maxima) != 1 or len(minima) != 1:
        raise RuntimeError(f"expected one maximum and one minimum, got {crit}")
    (xM, VM, _), (xm, Vm, _) = maxima[0], minima[0]
    m = float(mu)
    cubes = {"max": 2 + 3 * PHI, "min": 2 - 3 / PHI}
    cube_err = max(abs(xM ** 3 / m - cubes["max"]), abs(xm ** 3 / m - cubes["min"]))
    values = golden_values(m)
    val_err = max(abs(VM - values["cube_2+3phi"]), abs(Vm - values["cube_2-3/phi"]))
    note = ("curvature labels: cube 2+3*Phi is the local maximum and cube 2-3/Phi the "
            "local minimum; the reference formula names them the other way round")
    return GoldenExtrema(m, xM, xm, VM, Vm, PHI, cube_err, val_err, note)


def golden_values(mu: float = 1.0) -> dict:
    """Closed-form potential values at the two critical cubes, with the
    Phi -> -1/Phi map giving the second from the first; scaled by mu^(-2/3)."""
    def value(p):
        return 2 * p * np.cbrt(2 + 3 * p) / (1 + p) ** 2
    s = mu ** (-2.0 / 3.0)
    return {"cube_2+3phi": s * value(PHI), "cube_2-3/phi": s * value(-1 / PHI)}


# ---------------------------------------------------------------------------
# trigonometric partner (44) built from the unphysical seed of (42)


def trig_seed() -> an.Expr:
    """sqrt(sin x) cot(x/2), energy 1/4 in (3/4)/sin^2 x."""
    return an.sqrt(an.sin(X)) * an.cos(X / 2) / an.sin(X / 2)


def trig_grid(n: int = 200) -> np.ndarray:
    return np.linspace(0.1, math.pi - 0.1, n)


def trig_partner_build(grid=None) -> PotentialSpec:
    grid = trig_grid() if grid is None else grid
    V42 = catalog_get("42")
    seed = SeedSolution(trig_seed(), Fraction(1, 4), V42.evaluator, grid=grid)
    seed.validate(1e-10)
    step = make_step(seed)
    V1 = partner_function(step)
    closed = catalog_get("44")
    dev = float(np.max(np.abs(V1(grid) - closed.V(grid))))
    spec = catalog_get("44")
    spec.evaluator = V1
    spec.family = "44-from-42"
    spec.notes = f"max deviation from (7/4-2cos x)/sin^2 x on grid: {dev:.3e}"
    spec.params = dict(spec.params, seed_energy=Fraction(1, 4), max_deviation=dev,
                       superpotential=step.W1)
    return spec


def eigen_residual(psi: an.Expr, spec: PotentialSpec, E, grid) -> float:
    """max |-psi'' + (V - E) psi| on the grid."""
    worst = 0.0
    for x in grid:
        j = psi.jet(float(x), 2)
        worst = max(worst, abs(-j[2] + (spec.V(float(x)) - E) * j[0]))
    return float(worst)


def listing() -> dict:
    """Family ids with parameter schemas (for the CLI)."""
    return FAMILIES
