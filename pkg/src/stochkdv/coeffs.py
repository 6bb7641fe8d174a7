"""Time-dependent coefficient functions closed under differentiation and integration.

Every formula in the solver needs exact derivatives, antiderivatives and
definite integrals of the coefficients (drift, diffusion, noise amplitude),
so coefficients are drawn from a small symbolic family instead of arbitrary
callables: constants, monomials ``c*t**n`` (n a nonnegative integer),
exponentials ``c*exp(a*t)``, plus sums and scalar multiples.  Products and
squares that leave the family fall back to adaptive Simpson quadrature with
absolute tolerance 1e-12.

Textual syntax (used by configuration files)::

    const(c)    pow(c,n)    exp(c,a)    k*f    f+g    (f)
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CoeffFn",
    "Const",
    "Power",
    "Exp",
    "Sum",
    "Scale",
    "NumericFn",
    "multiply",
    "product",
    "parse",
    "constant_value",
]

_QUAD_TOL = 1e-12


class CoeffFn:
    """Base class for symbolic time coefficients.  Immutable."""

    def __call__(self, t):
        raise NotImplementedError

    def derivative(self) -> "CoeffFn":
        raise NotImplementedError

    def antiderivative(self) -> "CoeffFn":
        raise NotImplementedError

    def integrate(self, a: float, b: float) -> float:
        """Exact definite integral over [a, b] via the closed-form antiderivative."""
        if a > b:
            raise ValueError(f"misordered integration interval: a={a} > b={b}")
        F = self.antiderivative()
        return float(F(b) - F(a))

    def square(self) -> "CoeffFn":
        """f**2, symbolic when representable, else a quadrature-backed fallback."""
        sq = multiply(self, self)
        if sq is not None:
            return sq
        return NumericFn(lambda t: self(t) ** 2, f"({self.text()})^2")

    def text(self) -> str:
        """Canonical textual form; ``parse(f.text()) == f``."""
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}<{self.text()}>"


def _fmt(x: float) -> str:
    return repr(float(x))


@dataclass(frozen=True)
class Const(CoeffFn):
    c: float

    def __call__(self, t):
        return self.c + 0.0 * t

    def derivative(self):
        return Const(0.0)

    def antiderivative(self):
        return Power(self.c, 1)

    def text(self):
        return f"const({_fmt(self.c)})"


@dataclass(frozen=True)
class Power(CoeffFn):
    """c * t**n with n a nonnegative integer (avoids singularities at t=0)."""

    c: float
    n: int

    def __post_init__(self):
        if self.n < 0 or int(self.n) != self.n:
            raise ValueError(f"pow exponent must be a nonnegative integer, got {self.n}")

    def __call__(self, t):
        return self.c * t ** self.n

    def derivative(self):
        if self.n == 0:
            return Const(0.0)
        return Power(self.c * self.n, self.n - 1)

    def antiderivative(self):
        return Power(self.c / (self.n + 1), self.n + 1)

    def text(self):
        return f"pow({_fmt(self.c)},{self.n})"


@dataclass(frozen=True)
class Exp(CoeffFn):
    """c * exp(a*t)."""

    c: float
    a: float

    def __call__(self, t):
        return self.c * np.exp(self.a * t)

    def derivative(self):
        if self.a == 0.0:
            return Const(0.0)
        return Exp(self.c * self.a, self.a)

    def antiderivative(self):
        if self.a == 0.0:
            return Power(self.c, 1)
        return Exp(self.c / self.a, self.a)

    def text(self):
        return f"exp({_fmt(self.c)},{_fmt(self.a)})"


@dataclass(frozen=True)
class Sum(CoeffFn):
    terms: tuple

    def __init__(self, terms):
        flat = []
        for f in terms:
            if isinstance(f, Sum):
                flat.extend(f.terms)
            else:
                flat.append(f)
        object.__setattr__(self, "terms", tuple(flat))

    def __call__(self, t):
        out = 0.0 * t
        for f in self.terms:
            out = out + f(t)
        return out

    def derivative(self):
        return Sum(tuple(f.derivative() for f in self.terms))

    def antiderivative(self):
        return Sum(tuple(f.antiderivative() for f in self.terms))

    def text(self):
        return " + ".join(f.text() for f in self.terms)


@dataclass(frozen=True)
class Scale(CoeffFn):
    k: float
    f: CoeffFn

    def __call__(self, t):
        return self.k * self.f(t)

    def derivative(self):
        return Scale(self.k, self.f.derivative())

    def antiderivative(self):
        return Scale(self.k, self.f.antiderivative())

    def text(self):
        inner = self.f.text()
        if isinstance(self.f, Sum):
            inner = f"({inner})"
        return f"{_fmt(self.k)}*{inner}"


class NumericFn(CoeffFn):
    """Pointwise-evaluable function outside the symbolic family.

    Supports eval and definite integration (adaptive Simpson, abs tol 1e-12);
    it is the return type of squares/products with no closed form.
    """

    def __init__(self, fn, label: str):
        self._fn = fn
        self._label = label

    def __call__(self, t):
        return self._fn(t)

    def integrate(self, a: float, b: float) -> float:
        if a > b:
            raise ValueError(f"misordered integration interval: a={a} > b={b}")
        if a == b:
            return 0.0
        return _adaptive_simpson(self._fn, float(a), float(b), _QUAD_TOL)

    def text(self):
        return self._label

    def derivative(self):
        raise TypeError("numeric fallback functions have no symbolic derivative")

    def antiderivative(self):
        raise TypeError("numeric fallback functions have no symbolic antiderivative")


def _adaptive_simpson(fn, a, b, tol):
    m = 0.5 * (a + b)
    fa, fm, fb = fn(a), fn(m), fn(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _asr(fn, a, b, fa, fm, fb, whole, tol, 50)


def _asr(fn, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = fn(lm), fn(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return _asr(fn, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + _asr(
        fn, m, b, fm, frm, fb, right, tol / 2.0, depth - 1
    )


def multiply(f: CoeffFn, g: CoeffFn):
    """Symbolic product f*g, or None if it leaves the closed family."""
    if isinstance(f, Scale):
        r = multiply(f.f, g)
        return None if r is None else Scale(f.k, r)
    if isinstance(g, Scale):
        return multiply(g, f)
    if isinstance(f, Sum):
        parts = [multiply(t, g) for t in f.terms]
        if any(p is None for p in parts):
            return None
        return Sum(tuple(parts))
    if isinstance(g, Sum):
        return multiply(g, f)
    if isinstance(f, Const):
        return Scale(f.c, g) if not isinstance(g, Const) else Const(f.c * g.c)
    if isinstance(g, Const):
        return multiply(g, f)
    if isinstance(f, Power) and isinstance(g, Power):
        return Power(f.c * g.c, f.n + g.n)
    if isinstance(f, Exp) and isinstance(g, Exp):
        return Exp(f.c * g.c, f.a + g.a)
    if isinstance(f, Power) and isinstance(g, Exp):
        if f.n == 0:
            return Exp(f.c * g.c, g.a)
        if g.a == 0.0:
            return Power(f.c * g.c, f.n)
        return None
    if isinstance(f, Exp) and isinstance(g, Power):
        return multiply(g, f)
    return None


def product(f: CoeffFn, g: CoeffFn) -> CoeffFn:
    """f*g, symbolic when possible, quadrature-backed otherwise."""
    p = multiply(f, g)
    if p is not None:
        return p
    return NumericFn(lambda t: f(t) * g(t), f"({f.text()})*({g.text()})")


def constant_value(f: CoeffFn):
    """The constant value of f, or None if f actually depends on t."""
    if isinstance(f, Const):
        return f.c
    if isinstance(f, Power):
        return f.c if f.n == 0 else None
    if isinstance(f, Exp):
        return f.c if f.a == 0.0 else None
    if isinstance(f, Scale):
        v = constant_value(f.f)
        return None if v is None else f.k * v
    if isinstance(f, Sum):
        vals = [constant_value(t) for t in f.terms]
        if any(v is None for v in vals):
            return None
        return float(sum(vals))
    return None


# --- textual syntax ---------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<name>const|pow|exp)"
    r"|(?P<punct>[(),*+]))"
)


def _tokenize(text: str):
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ValueError(f"bad coefficient syntax near {rest!r}")
        pos = m.end()
        if m.lastgroup == "num":
            tokens.append(("num", float(m.group("num"))))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name")))
        else:
            tokens.append((m.group("punct"), m.group("punct")))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, kind=None):
        tok = self.peek()
        if tok[0] is None:
            raise ValueError("unexpected end of coefficient expression")
        if kind is not None and tok[0] != kind:
            raise ValueError(f"expected {kind!r}, found {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        terms = [self.term()]
        while self.peek()[0] == "+":
            self.take("+")
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self):
        if self.peek()[0] == "num":
            k = self.take("num")[1]
            self.take("*")
            return Scale(k, self.factor())
        return self.factor()

    def factor(self):
        kind, val = self.peek()
        if kind == "(":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return inner
        if kind != "name":
            raise ValueError(f"expected a coefficient function, found {val!r}")
        name = self.take("name")[1]
        self.take("(")
        args = [self.take("num")[1]]
        while self.peek()[0] == ",":
            self.take(",")
            args.append(self.take("num")[1])
        self.take(")")
        if name == "const":
            if len(args) != 1:
                raise ValueError("const() takes one argument")
            return Const(args[0])
        if name == "pow":
            if len(args) != 2:
                raise ValueError("pow() takes two arguments")
            c, n = args
            if n < 0 or int(n) != n:
                raise ValueError(f"pow exponent must be a nonnegative integer, got {n}")
            return Power(c, int(n))
        if len(args) != 2:
            raise ValueError("exp() takes two arguments")
        return Exp(args[0], args[1])


def parse(text: str) -> CoeffFn:
    """Parse the textual coefficient syntax into a CoeffFn."""
    parser = _Parser(_tokenize(text))
    f = parser.expr()
    if parser.peek()[0] is not None:
        raise ValueError(f"trailing input in coefficient expression: {text!r}")
    return f
