"""Small expression trees with truncated-Taylor ("jet") evaluation.

Expressions are built from ``X`` with the usual operators and the functions
below. :func:`jet_eval` returns the value and first three derivatives;
internally any order is available, which lets a :class:`Deriv` node (used for
superpotentials ``-phi'/phi``) stay exact without symbolic differentiation.

With a rational input point and an expression free of transcendental
functions the arithmetic stays in :class:`fractions.Fraction`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

TAN_POLE_TOL = 1e-12


class DomainError(ValueError):
    """Evaluation outside the domain of an expression (pole, bad power base)."""


@dataclass(frozen=True)
class Jet3:
    x: float
    f: float
    f1: float
    f2: float
    f3: float

    def as_tuple(self):
        return (self.f, self.f1, self.f2, self.f3)


class Expr:
    """Immutable expression node; subclasses implement ``_taylor``."""

    def __add__(self, o):
        return Add(self, as_expr(o))

    def __radd__(self, o):
        return Add(as_expr(o), self)

    def __sub__(self, o):
        return Add(self, Neg(as_expr(o)))

    def __rsub__(self, o):
        return Add(as_expr(o), Neg(self))

    def __mul__(self, o):
        return Mul(self, as_expr(o))

    def __rmul__(self, o):
        return Mul(as_expr(o), self)

    def __truediv__(self, o):
        return Div(self, as_expr(o))

    def __rtruediv__(self, o):
        return Div(as_expr(o), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, p):
        return Pow(self, Fraction(p))

    def __call__(self, x):
        """Value only; vectorized over numpy arrays."""
        if isinstance(x, (list, tuple)):
            x = np.asarray(x, dtype=float)
        return self.taylor(x, 0)[0]

    def taylor(self, x, order: int) -> list:
        """Normalized Taylor coefficients f^(k)(x)/k!, k = 0..order."""
        return self._taylor(x, order)

    def jet(self, x, order: int = 3) -> list:
        """Derivatives f^(k)(x), k = 0..order."""
        c = self._taylor(x, order)
        return [c[k] * math.factorial(k) for k in range(order + 1)]

    def derivative(self) -> "Expr":
        return Deriv(self)

    def _taylor(self, x, order):  # pragma: no cover - abstract
        raise NotImplementedError


class Var(Expr):
    def _taylor(self, x, order):
        one = Fraction(1) if isinstance(x, Fraction) else 1.0
        out = [x] + [0 * one] * order
        if order >= 1:
            out[1] = one if np.ndim(x) == 0 else np.ones_like(x)
        if np.ndim(x) and order >= 2:
            out[2:] = [np.zeros_like(x)] * (order - 1)
        return out

    def __repr__(self):
        return "x"


class Const(Expr):
    def __init__(self, c):
        self.c = c

    def _taylor(self, x, order):
        c = self.c
        if np.ndim(x):
            kind = complex if isinstance(c, complex) else float
            c = np.full(np.shape(x), kind(c), dtype=kind)
            return [c] + [np.zeros_like(c)] * order
        if isinstance(c, complex):
            pass
        elif isinstance(x, Fraction) and isinstance(c, (int, Fraction)):
            c = Fraction(c)
        else:
            c = float(c)
        return [c] + [0 * c] * order

    def __repr__(self):
        return str(self.c)


class Add(Expr):
    def __init__(self, a, b):
        self.a, self.b = a, b

    def _taylor(self, x, order):
        return [u + v for u, v in zip(self.a._taylor(x, order), self.b._taylor(x, order))]

    def __repr__(self):
        return f"({self.a} + {self.b})"


class Neg(Expr):
    def __init__(self, a):
        self.a = a

    def _taylor(self, x, order):
        return [-u for u in self.a._taylor(x, order)]

    def __repr__(self):
        return f"-({self.a})"


class Mul(Expr):
    def __init__(self, a, b):
        self.a, self.b = a, b

    def _taylor(self, x, order):
        return _mul(self.a._taylor(x, order), self.b._taylor(x, order))

    def __repr__(self):
        return f"({self.a} * {self.b})"


class Div(Expr):
    def __init__(self, a, b):
        self.a, self.b = a, b

    def _taylor(self, x, order):
        return _div(self.a._taylor(x, order), self.b._taylor(x, order), x)

    def __repr__(self):
        return f"({self.a} / {self.b})"


class Pow(Expr):
    """Power with rational exponent; fractional exponents need a positive base."""

    def __init__(self, a, p: Fraction):
        self.a, self.p = a, Fraction(p)

    def _taylor(self, x, order):
        a = self.a._taylor(x, order)
        p = self.p
        if p.denominator == 1:
            n = int(p)
            one = [a[0] * 0 + 1] + [a[0] * 0] * order
            out = one
            for _ in range(abs(n)):
                out = _mul(out, a)
            return out if n >= 0 else _div(one, out, x)
        if np.any(np.asarray(a[0]) <= 0):
            raise DomainError(f"non-positive base for power {p} at x={x}")
        pf = float(p)
        a0 = a[0]
        y = [np.power(a0, pf) if np.ndim(a0) else float(a0) ** pf]
        for k in range(1, order + 1):
            s = sum(((pf + 1) * j - k) * a[j] * y[k - j] for j in range(1, k + 1))
            y.append(s / (k * a0))
        return y

    def __repr__(self):
        return f"({self.a})^({self.p})"


class Func(Expr):
    NAMES = ("sin", "cos", "tan", "sinh", "cosh", "tanh", "exp")

    def __init__(self, name: str, a: Expr):
        if name not in self.NAMES:
            raise ValueError(f"unsupported function {name}")
        self.name, self.a = name, a

    def _taylor(self, x, order):
        a = self.a._taylor(x, order)
        a = [u if not isinstance(u, Fraction) else float(u) for u in a]
        name = self.name
        if name == "exp":
            return _exp(a, order)
        if name in ("sin", "cos", "tan"):
            s, c = _sincos(a, order, hyperbolic=False)
            if name == "tan":
                if np.any(np.abs(np.asarray(c[0])) < TAN_POLE_TOL):
                    raise DomainError(f"tan pole at x={x}")
                return _div(s, c, x)
            return s if name == "sin" else c
        s, c = _sincos(a, order, hyperbolic=True)
        if name == "tanh":
            return _div(s, c, x)
        return s if name == "sinh" else c

    def __repr__(self):
        return f"{self.name}({self.a})"


class Deriv(Expr):
    """d/dx of an expression, evaluated from one extra Taylor order."""

    def __init__(self, a: Expr):
        self.a = a

    def _taylor(self, x, order):
        c = self.a._taylor(x, order + 1)
        return [(k + 1) * c[k + 1] for k in range(order + 1)]

    def __repr__(self):
        return f"D[{self.a}]"


def _mul(a, b):
    n = len(a)
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n)]


def _div(a, b, x):
    b0 = b[0]
    if np.any(np.asarray(b0) == 0):
        raise DomainError(f"division by zero at x={x}")
    c = []
    for k in range(len(a)):
        s = a[k] - sum(b[j] * c[k - j] for j in range(1, k + 1))
        c.append(s / b0)
    return c


def _exp(a, order):
    e = [np.exp(a[0])]
    for k in range(1, order + 1):
        e.append(sum(j * a[j] * e[k - j] for j in range(1, k + 1)) / k)
    return e


def _sincos(a, order, hyperbolic):
    if hyperbolic:
        s, c = [np.sinh(a[0])], [np.cosh(a[0])]
    else:
        s, c = [np.sin(a[0])], [np.cos(a[0])]
    sign = 1.0 if hyperbolic else -1.0
    for k in range(1, order + 1):
        s.append(sum(j * a[j] * c[k - j] for j in range(1, k + 1)) / k)
        c.append(sign * sum(j * a[j] * s[k - j] for j in range(1, k + 1)) / k)
    return s, c


def as_expr(o) -> Expr:
    if isinstance(o, Expr):
        return o
    if isinstance(o, (int, float, complex, Fraction)):
        return Const(o)
    raise TypeError(f"cannot make an expression from {o!r}")


X = Var()


def sin(e):
    return Func("sin", as_expr(e))


def cos(e):
    return Func("cos", as_expr(e))


def tan(e):
    return Func("tan", as_expr(e))


def sinh(e):
    return Func("sinh", as_expr(e))


def cosh(e):
    return Func("cosh", as_expr(e))


def tanh(e):
    return Func("tanh", as_expr(e))


def exp(e):
    return Func("exp", as_expr(e))


def sqrt(e):
    return Pow(as_expr(e), Fraction(1, 2))


def jet_eval(e: Expr, x) -> Jet3:
    f = e.jet(x, 3)
    if not isinstance(x, Fraction):
        f = [complex(v) if np.iscomplexobj(v) else float(v) for v in f]
        if not all(np.isfinite(v) for v in f):
            raise DomainError(f"non-finite jet at x={x}")
    return Jet3(x, *f)


def jet_check_fd(e: Expr, x: float, h: float) -> float:
    """Largest deviation of f1..f3 from central differences of the next-lower
    jet slot, relative to the jet's overall magnitude."""
    j0 = e.jet(x, 3)
    jp = e.jet(x + h, 3)
    jm = e.jet(x - h, 3)
    for pt in (x - 3 * h, x + 3 * h):
        e.jet(pt, 0)
    scale = max(1.0, *(abs(float(v)) for v in j0))
    dev = 0.0
    for k in (1, 2, 3):
        fd = (jp[k - 1] - jm[k - 1]) / (2 * h)
        dev = max(dev, abs(fd - j0[k]) / scale)
    return float(dev)
