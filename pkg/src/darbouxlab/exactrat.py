"""Exact univariate polynomials and rational functions over Q.

Coefficients are :class:`fractions.Fraction`; a :class:`Poly` may also carry
polynomial coefficients (a polynomial in a second variable ``t``), which is
enough for the time-dependent KdV candidates.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable, Sequence


class PoleError(ZeroDivisionError):
    """Evaluation at a zero of the denominator."""

    def __init__(self, location):
        super().__init__(f"pole at x = {location}")
        self.location = location


def _frac(c):
    if isinstance(c, (Fraction, Poly)):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient {c!r}")


def _is_zero(c) -> bool:
    return c == 0 if not isinstance(c, Poly) else c.is_zero()


class Poly:
    """Polynomial with ascending coefficients ``coeffs[i] * x**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    # construction helpers
    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, n: int, c=1) -> "Poly":
        return cls([0] * n + [c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    @property
    def bivariate(self) -> bool:
        return any(isinstance(c, Poly) for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            cs = f"({c})" if isinstance(c, Poly) else str(c)
            terms.append(cs if i == 0 else f"{cs}*x" + (f"^{i}" if i > 1 else ""))
        return " + ".join(terms)

    # ring operations
    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(_add(self[i], other[i]) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = _add(out[i + j], _mul(a, b))
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Poly":
        return Poly(_mul(c, a) for a in self.coeffs)

    def derive(self) -> "Poly":
        return Poly(_mul(Fraction(i), c) for i, c in enumerate(self.coeffs) if i > 0)

    def map_coeffs(self, f) -> "Poly":
        return Poly(f(c) for c in self.coeffs)

    # field operations (Fraction coefficients only)
    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 1)
        inv = 1 / other.lead
        dv = other.degree
        for i in range(len(rem) - 1, dv - 1, -1):
            c = rem[i] * inv
            if c == 0:
                continue
            q[i - dv] = c
            for j, b in enumerate(other.coeffs):
                rem[i - dv + j] -= c * b
        return Poly(q), Poly(rem[:dv] if dv > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(_as_poly(other))[0]

    def __mod__(self, other):
        return self.divmod(_as_poly(other))[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lead)

    def content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients."""
        if self.is_zero():
            return Fraction(1)
        num = 0
        den = 1
        for c in self.coeffs:
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "Poly":
        p = self.scale(1 / self.content())
        return -p if p.lead < 0 else p

    def __call__(self, x):
        return self.at(x)

    def at(self, x):
        """Horner evaluation; bivariate coefficients stay symbolic in t."""
        acc = Fraction(0) if isinstance(x, Fraction) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * other + Poly([c])
        return acc

    def float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]


def _as_poly(o):
    if isinstance(o, Poly):
        return o
    if isinstance(o, (int, Fraction)):
        return Poly([o])
    return NotImplemented


def _add(a, b):
    if isinstance(a, Poly) or isinstance(b, Poly):
        return _as_poly(a) + _as_poly(b)
    return a + b


def _mul(a, b):
    if isinstance(a, Poly) or isinstance(b, Poly):
        return _as_poly(a) * _as_poly(b)
    return a * b


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm, on primitive parts to curb growth."""
    while not b.is_zero():
        a, b = b, (a % b)
        if not b.is_zero():
            b = b.primitive()
    return a.monic() if not a.is_zero() else a


def square_free_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: returns [(f_i, i)] with p = c * prod f_i**i, f_i square-free."""
    if p.degree < 1:
        return []
    out = []
    a = poly_gcd(p, p.derive())
    b = p // a
    c = p.derive() // a
    d = c - b.derive()
    i = 1
    while b.degree >= 1:
        f = poly_gcd(b, d)
        b = b // f
        c = d // f
        d = c - b.derive()
        if f.degree >= 1:
            out.append((f.monic(), i))
        i += 1
    return out


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derive()]
    while not seq[-1].is_zero():
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r)
    return seq


def _sign_changes(seq: Sequence[Poly], x) -> int:
    signs = [s for s in (_sgn(q.at(x)) for q in seq) if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def count_real_roots(p: Poly, lo, hi) -> int:
    """Distinct roots of square-free p in the half-open interval (lo, hi]."""
    seq = sturm_sequence(p)
    return _sign_changes(seq, Fraction(lo)) - _sign_changes(seq, Fraction(hi))


def _rational_roots(p: Poly) -> list[Fraction]:
    """Rational roots of a polynomial via the rational-root theorem."""
    if p.is_zero() or p.degree < 1:
        return []
    q = p.primitive()
    roots = []
    k = 0
    while _is_zero(q[k]):
        k += 1
    if k:
        roots.append(Fraction(0))
    ints = [int(c) for c in q.coeffs[k:]]
    a0, an = abs(ints[0]), abs(ints[-1])
    if len(ints) == 1:
        return roots
    for num in _divisors(a0):
        for den in _divisors(an):
            for s in (1, -1):
                r = Fraction(s * num, den)
                if r not in roots and q.at(r) == 0:
                    roots.append(r)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    if n > 10**12:
        return [1]
    small = [d for d in range(1, int(math.isqrt(n)) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def isolate_real_roots(p: Poly, lo, hi, tol: float = 1e-12) -> list:
    """Roots of square-free p in [lo, hi]; exact Fractions when rational, else
    floats bisected to ``tol`` inside Sturm-isolated brackets."""
    lo, hi = Fraction(lo), Fraction(hi)
    exact = [r for r in _rational_roots(p) if lo <= r <= hi]
    rest = p
    for r in exact:
        rest = rest // Poly([-r, 1])
    found: list = list(exact)
    if rest.degree >= 1:
        seq = sturm_sequence(rest)
        found.extend(_bisect_sturm(rest, seq, lo - Fraction(1, 10**9), hi, tol))
    return sorted(found, key=float)


def _bisect_sturm(p, seq, lo, hi, tol):
    n = _sign_changes(seq, lo) - _sign_changes(seq, hi)
    if n == 0:
        return []
    if n == 1:
        return [_bisect_single(p, lo, hi, tol)]
    mid = (lo + hi) / 2
    if p.at(mid) == 0:
        return _bisect_sturm(p, seq, lo, mid - Fraction(1, 10**15), tol) + [mid] + \
            _bisect_sturm(p, seq, mid, hi, tol)
    return _bisect_sturm(p, seq, lo, mid, tol) + _bisect_sturm(p, seq, mid, hi, tol)


def _bisect_single(p, lo, hi, tol):
    flo = _sgn(p.at(lo))
    if _sgn(p.at(hi)) == 0:
        return hi
    a, b = float(lo), float(hi)
    fc = p.float_coeffs()

    def f(x):
        acc = 0.0
        for c in reversed(fc):
            acc = acc * x + c
        return acc
    # exact bisection until the bracket is float-sized, then float bisection
    while hi - lo > Fraction(1, 2**20):
        mid = (lo + hi) / 2
        s = _sgn(p.at(mid))
        if s == 0:
            return mid
        if s == flo:
            lo = mid
        else:
            hi = mid
    a, b = float(lo), float(hi)
    while b - a > tol:
        m = 0.5 * (a + b)
        s = _sgn(f(m))
        if s == 0:
            return m
        if s == flo:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


class RationalFunction:
    """num/den in canonical form: gcd-reduced, monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, normalize: bool = True):
        num = num if isinstance(num, Poly) else Poly([num])
        den = Poly([1]) if den is None else (den if isinstance(den, Poly) else Poly([den]))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if normalize:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    @classmethod
    def from_coeffs(cls, num: Sequence, den: Sequence = (1,)) -> "RationalFunction":
        return cls(Poly(num), Poly(den))

    @classmethod
    def x(cls) -> "RationalFunction":
        return cls(Poly.x())

    def normalize(self) -> "RationalFunction":
        return RationalFunction(self.num, self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return False
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction(({self.num}) / ({self.den}))"

    def __add__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, normalize=False)

    def __sub__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_rf(other) / self

    def __pow__(self, n: int):
        if n >= 0:
            return RationalFunction(self.num ** n, self.den ** n)
        return 1 / (self ** (-n))

    def derive(self) -> "RationalFunction":
        return rf_derive(self)

    def __call__(self, x):
        return rf_eval(self, x)

    def compose(self, other: "RationalFunction") -> "RationalFunction":
        """self(other(x)), exact."""
        def horner(p: Poly):
            acc = RationalFunction(0)
            for c in reversed(p.coeffs):
                acc = acc * other + RationalFunction(Poly([c]))
            return acc
        return horner(self.num) / horner(self.den)

    def real_poles(self, lo, hi):
        return rf_real_poles(self, (lo, hi))

    def to_json(self) -> str:
        return json.dumps(rf_to_dict(self))

    @classmethod
    def from_json(cls, s: str) -> "RationalFunction":
        return rf_from_dict(json.loads(s))


def _as_rf(o):
    if isinstance(o, RationalFunction):
        return o
    if isinstance(o, (int, Fraction, Poly)):
        return RationalFunction(o)
    return NotImplemented


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return Poly(), Poly([1])
    g = poly_gcd(num, den)
    if g.degree > 0:
        num, den = num // g, den // g
    lc = den.lead
    return num.scale(1 / lc), den.scale(1 / lc)


def rf_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    ops = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown op {op!r}")
    return ops[op](b)


def rf_derive(a: RationalFunction) -> RationalFunction:
    return RationalFunction(a.num.derive() * a.den - a.num * a.den.derive(), a.den * a.den)


def rf_eval(a: RationalFunction, x):
    """Exact for int/Fraction input, float otherwise."""
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        d = a.den.at(x)
        if d == 0:
            raise PoleError(x)
        return a.num.at(x) / d
    x = float(x)
    d = _horner_float(a.den, x)
    if d == 0.0:
        raise PoleError(x)
    return _horner_float(a.num, x) / d


def _horner_float(p: Poly, x: float) -> float:
    acc = 0.0
    for c in reversed(p.coeffs):
        acc = acc * x + float(c)
    return acc


def rf_real_poles(a: RationalFunction, interval, tol: float = 1e-12) -> list[tuple[object, int]]:
    """Real zeros of the (reduced) denominator in [lo, hi] with multiplicities."""
    lo, hi = interval
    if not lo < hi:
        raise ValueError("empty interval")
    lo, hi = _frac(lo), _frac(hi)
    out = []
    for factor, mult in square_free_decomposition(a.den):
        for r in isolate_real_roots(factor, lo, hi, tol):
            out.append((r, mult))
    return sorted(out, key=lambda t: float(t[0]))


def rf_to_dict(a: RationalFunction) -> dict:
    return {"numerator": [str(c) for c in a.num.coeffs],
            "denominator": [str(c) for c in a.den.coeffs]}


def rf_from_dict(d: dict) -> RationalFunction:
    return RationalFunction(Poly(Fraction(c) for c in d["numerator"]),
                            Poly(Fraction(c) for c in d["denominator"]))


def taylor_shift(p: Poly, r: float) -> list[float]:
    """Float coefficients of p(r + s) in powers of s."""
    c = [float(v) for v in p.coeffs]
    n = len(c)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            c[j] += r * c[j + 1]
    return c


def laurent_at(a: RationalFunction, r, order: int, pole_order: int) -> list[float]:
    """Float Laurent coefficients [v_{-p}, ..., v_{order}] of a at x = r,
    where p = ``pole_order``."""
    num = taylor_shift(a.num, float(r))
    den = taylor_shift(a.den, float(r))
    # denominator has a zero of exact order pole_order at r; drop round-off residue
    den = den[pole_order:]
    m = order + pole_order + 1
    num = (num + [0.0] * m)[:m]
    den = (den + [0.0] * m)[:m]
    out = []
    for k in range(m):
        s = num[k] - sum(den[j] * out[k - j] for j in range(1, k + 1))
        out.append(s / den[0])
    return out


# ---------------------------------------------------------------------------
# rational functions of x whose coefficients are polynomials in t


class BiRational:
    """N(x,t)/D(x,t) with N, D polynomials in x over Q[t].

    No gcd reduction is attempted; identity checks compare cross products.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        num = _lift(num)
        den = _lift(den if den is not None else Poly([1]))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _cancel_x_powers(num, den)

    @classmethod
    def from_rational(cls, r: RationalFunction) -> "BiRational":
        return cls(r.num, r.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        other = _as_bi(other)
        return (self.num * other.den - other.num * self.den).is_zero()

    def __add__(self, other):
        other = _as_bi(other)
        if self.den == other.den:
            return BiRational(self.num + other.num, self.den)
        return BiRational(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return BiRational(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_bi(other))

    def __rsub__(self, other):
        return _as_bi(other) - self

    def __mul__(self, other):
        other = _as_bi(other)
        return BiRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_bi(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        return BiRational(self.num * other.den, self.den * other.num)

    def dx(self) -> "BiRational":
        return BiRational(self.num.derive() * self.den - self.num * self.den.derive(),
                          self.den * self.den)

    def dt(self) -> "BiRational":
        dn = _dt(self.num)
        dd = _dt(self.den)
        return BiRational(dn * self.den - self.num * dd, self.den * self.den)

    def subs(self, x_map: Poly, t_map: Poly) -> "BiRational":
        """Substitute x -> x_map (poly in x, Fraction coeffs) and t -> t_map (poly in t)."""
        return BiRational(_subs(self.num, x_map, t_map), _subs(self.den, x_map, t_map))

    def at_t(self, t) -> RationalFunction:
        """Specialize t to a rational number."""
        t = Fraction(t)
        return RationalFunction(self.num.map_coeffs(lambda c: c.at(t)),
                                self.den.map_coeffs(lambda c: c.at(t)))

    def evaluate(self, x: float, t: float) -> float:
        n = _horner_float(self.num.map_coeffs(lambda c: Fraction(_horner_float(c, t))), x)
        d = _horner_float(self.den.map_coeffs(lambda c: Fraction(_horner_float(c, t))), x)
        if d == 0:
            raise PoleError((x, t))
        return n / d

    def __repr__(self):
        return f"BiRational(({self.num}) / ({self.den}))"


def _lift(p) -> Poly:
    """Coerce to a polynomial in x whose coefficients are Polys in t."""
    if isinstance(p, RationalFunction):
        raise TypeError("use BiRational.from_rational")
    if not isinstance(p, Poly):
        p = Poly([p])
    return Poly([c if isinstance(c, Poly) else Poly([c]) for c in p.coeffs])


def _as_bi(o):
    if isinstance(o, BiRational):
        return o
    if isinstance(o, RationalFunction):
        return BiRational.from_rational(o)
    return BiRational(_lift(o))


def _dt(p: Poly) -> Poly:
    return Poly([c.derive() for c in p.coeffs])


def _subs(p: Poly, x_map: Poly, t_map: Poly) -> Poly:
    acc = Poly()
    xm = _lift(x_map)
    for c in reversed(p.coeffs):
        ct = c.compose(t_map) if not c.is_zero() else Poly()
        acc = acc * xm + Poly([ct])
    return acc


def _cancel_x_powers(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return Poly(), _lift(Poly([1]))
    k = 0
    while k < len(num.coeffs) and k < len(den.coeffs) and \
            num.coeffs[k].is_zero() and den.coeffs[k].is_zero():
        k += 1
    if k:
        num, den = Poly(num.coeffs[k:]), Poly(den.coeffs[k:])
    return num, den


def t_poly(coeffs: Sequence) -> Poly:
    """Polynomial in t, ascending coefficients."""
    return Poly(coeffs)
