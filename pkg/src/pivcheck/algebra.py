"""Exact arithmetic over the rationals: scalars, univariate polynomials and
rational functions.

Scalars are ``gmpy2.mpq`` (always stored in lowest terms with a positive
denominator).  :class:`Poly` is a dense, immutable coefficient tuple in
ascending order; :class:`RatFn` is a reduced quotient of two polynomials with
a monic denominator, so equality of rational functions is structural.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational as _RationalABC

import gmpy2
from gmpy2 import mpq

__all__ = [
    "Rational",
    "Poly",
    "RatFn",
    "PoleError",
    "to_rational",
    "format_rational",
    "poly_arith",
    "poly_gcd",
    "poly_derivative",
    "ratfn_arith",
    "ratfn_derivative",
    "eval_at",
    "bareiss_det",
]

Rational = type(mpq(0))

_ZERO = mpq(0)
_ONE = mpq(1)


class PoleError(ZeroDivisionError):
    """Raised when a rational function is evaluated at a zero of its denominator."""


def to_rational(value) -> mpq:
    """Convert ints, Fractions, mpq and strings ("3/7", "0.7", "-2") exactly.

    Decimal strings are read as exact decimal fractions, never through a
    binary float.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, (Fraction, _RationalABC)):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            return mpq(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {value!r} as a rational") from exc
    if isinstance(value, float):
        # exact binary value; callers wanting decimal semantics pass a string
        return mpq(Fraction(value))
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rational(q) -> str:
    q = to_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _trim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


class Poly:
    """Dense univariate polynomial with rational coefficients.

    ``coeffs[i]`` is the coefficient of ``var**i``.  The zero polynomial has an
    empty coefficient tuple and :attr:`degree` ``None``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, Poly):
            object.__setattr__(self, "coeffs", coeffs.coeffs)
            return
        if not isinstance(coeffs, (list, tuple)):
            coeffs = [coeffs]
        c = _trim([to_rational(x) for x in coeffs])
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def _raw(cls, c: list) -> Poly:
        # c must hold mpq values; it is trimmed in place
        p = object.__new__(cls)
        object.__setattr__(p, "coeffs", tuple(_trim(c)))
        return p

    @classmethod
    def monomial(cls, k: int, c=1) -> Poly:
        if k < 0:
            raise ValueError("negative exponent")
        return cls._raw([_ZERO] * k + [to_rational(c)])

    @classmethod
    def constant(cls, c) -> Poly:
        return cls._raw([to_rational(c)])

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- structure --------------------------------------------------------
    @property
    def degree(self) -> int | None:
        """Degree, or ``None`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def lead(self) -> mpq:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int) -> mpq:
        if i < 0:
            raise IndexError("negative exponent")
        return self.coeffs[i] if i < len(self.coeffs) else _ZERO

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, RatFn):
            return other == self
        try:
            other = to_rational(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == ((other,) if other else ())

    def __hash__(self):
        return hash(self.coeffs)

    def parity(self) -> int | None:
        """+1 if even, -1 if odd, 0 for the zero polynomial, None if mixed."""
        even = any(c for c in self.coeffs[0::2])
        odd = any(c for c in self.coeffs[1::2])
        if even and odd:
            return None
        if odd:
            return -1
        return 1 if even else 0

    # -- ring operations --------------------------------------------------
    @staticmethod
    def _coerce(x) -> Poly:
        if isinstance(x, Poly):
            return x
        return Poly.constant(to_rational(x))

    def __add__(self, other):
        if isinstance(other, RatFn):
            return NotImplemented
        b = Poly._coerce(other).coeffs
        a = self.coeffs
        if len(a) < len(b):
            a, b = b, a
        c = list(a)
        for i, y in enumerate(b):
            c[i] = c[i] + y
        return Poly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-x for x in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, RatFn):
            return NotImplemented
        return self + (-Poly._coerce(other))

    def __rsub__(self, other):
        return Poly._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RatFn):
            return NotImplemented
        if not isinstance(other, Poly):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw([])
        if len(a) == 1:
            return other.scale(a[0])
        if len(b) == 1:
            return self.scale(b[0])
        c = [_ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                c[i + j] += x * y
        return Poly._raw(c)

    __rmul__ = __mul__

    def scale(self, s) -> Poly:
        s = to_rational(s)
        if not s:
            return Poly._raw([])
        return Poly._raw([x * s for x in self.coeffs])

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.constant(1), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other):
        other = Poly._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        b = other.coeffs
        r = list(self.coeffs)
        db = len(b) - 1
        if len(r) <= db:
            return Poly._raw([]), Poly._raw(r)
        inv = 1 / b[-1]
        q = [_ZERO] * (len(r) - db)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if not c:
                continue
            c = c * inv
            q[k - db] = c
            off = k - db
            for i in range(db):
                if b[i]:
                    r[off + i] -= c * b[i]
            r[k] = _ZERO
        return Poly._raw(q), Poly._raw(r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> Poly:
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> Poly:
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        inv = 1 / lc
        return Poly._raw([x * inv for x in self.coeffs])

    # -- calculus / evaluation --------------------------------------------
    def derivative(self) -> Poly:
        return Poly._raw([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x0):
        if isinstance(x0, (int, str, Fraction)):
            x0 = to_rational(x0)
        acc = _ZERO if isinstance(x0, Rational) else 0 * x0
        for c in reversed(self.coeffs):
            acc = acc * x0 + c
        return acc

    def reflect(self) -> Poly:
        """The polynomial ``p(-t)``."""
        return Poly._raw([-c if i % 2 else c for i, c in enumerate(self.coeffs)])

    # -- display / serialization ------------------------------------------
    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> Poly:
        return cls([to_rational(x) for x in data])

    def pretty(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mag = format_rational(abs(c))
            if i == 0:
                body = mag
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == "1" else f"{mag}*{mono}"
            terms.append(("-" if c < 0 else "+", body))
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({self.pretty()})"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor of two polynomials (not both zero)."""
    a, b = Poly._coerce(a), Poly._coerce(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return Poly.constant(1)
    if len(a) < len(b):
        a, b = b, a
    a, b = a.monic(), b.monic()
    while b:
        a, b = b, (a % b).monic()
    return a


def poly_arith(a: Poly, b, op: str) -> Poly:
    """``op`` in {add, sub, mul, scale}; for ``scale`` ``b`` is a rational."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_derivative(p: Poly) -> Poly:
    return p.derivative()


class RatFn:
    """Reduced quotient ``num/den`` of polynomials; ``den`` is monic."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        num, den = Poly._coerce(num), Poly._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = num, Poly.constant(1)
        elif not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lead
        if lc != 1:
            inv = 1 / lc
            num, den = num.scale(inv), den.scale(inv)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def _make(cls, num: Poly, den: Poly) -> RatFn:
        # num/den already coprime with monic den
        f = object.__new__(cls)
        object.__setattr__(f, "num", num)
        object.__setattr__(f, "den", den)
        return f

    def __setattr__(self, name, value):
        raise AttributeError("RatFn is immutable")

    @staticmethod
    def _coerce(x) -> RatFn:
        if isinstance(x, RatFn):
            return x
        return RatFn._make(Poly._coerce(x), Poly.constant(1))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        try:
            other = RatFn._coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self):
        return RatFn._make(-self.num, self.den)

    def __add__(self, other):
        try:
            other = RatFn._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.num, self.den
        c, d = other.num, other.den
        if a.is_zero():
            return other
        if c.is_zero():
            return self
        if b.is_constant() and d.is_constant():
            return RatFn._make(a + c, b)
        # Henrici: only the common factor of the denominators can cancel
        g = poly_gcd(b, d)
        if g.is_constant():
            return RatFn._make(a * d + c * b, b * d)
        bg, dg = b.exact_div(g), d.exact_div(g)
        t = a * dg + c * bg
        if t.is_zero():
            return RatFn._make(t, Poly.constant(1))
        g2 = poly_gcd(t, g)
        if not g2.is_constant():
            t, g = t.exact_div(g2), g.exact_div(g2)
        return RatFn._normalized(t, bg * g * dg)

    @staticmethod
    def _normalized(num: Poly, den: Poly) -> RatFn:
        lc = den.lead
        if lc != 1:
            inv = 1 / lc
            num, den = num.scale(inv), den.scale(inv)
        return RatFn._make(num, den)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = RatFn._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RatFn._coerce(other) - self

    def __mul__(self, other):
        try:
            other = RatFn._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.num, self.den
        c, d = other.num, other.den
        if a.is_zero() or c.is_zero():
            return RatFn._make(Poly._raw([]), Poly.constant(1))
        g1 = poly_gcd(a, d)
        g2 = poly_gcd(c, b)
        if not g1.is_constant():
            a, d = a.exact_div(g1), d.exact_div(g1)
        if not g2.is_constant():
            c, b = c.exact_div(g2), b.exact_div(g2)
        return RatFn._normalized(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> RatFn:
        if self.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFn._normalized(self.den, self.num)

    def __truediv__(self, other):
        try:
            other = RatFn._coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFn._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        # powers of coprime polynomials stay coprime
        return RatFn._make(self.num ** k, self.den ** k)

    def derivative(self) -> RatFn:
        n, d = self.num, self.den
        if d.is_constant():
            return RatFn._make(n.derivative(), d)
        return RatFn(n.derivative() * d - n * d.derivative(), d * d)

    def reflect(self) -> RatFn:
        """The rational function ``f(-t)``."""
        return RatFn._normalized(self.num.reflect(), self.den.reflect())

    def __call__(self, x0):
        x0 = to_rational(x0)
        dv = self.den(x0)
        if not dv:
            raise PoleError(f"pole at t = {format_rational(x0)}")
        return self.num(x0) / dv

    def parity(self) -> int | None:
        """Parity of ``f`` under t -> -t (+1 even, -1 odd, 0 zero, None mixed)."""
        pn, pd = self.num.parity(), self.den.parity()
        if pn is None or pd is None:
            return None
        return pn * pd

    def to_json(self) -> dict:
        """Jointly scaled so every coefficient is an integer, their overall gcd
        is 1 and the denominator's leading coefficient is positive."""
        coeffs = self.num.coeffs + self.den.coeffs
        m = lcm(*(int(c.denominator) for c in coeffs))
        ints = [int(c * m) for c in coeffs]
        g = 0
        for v in ints:
            g = gmpy2.gcd(g, v)
        g = int(g) or 1
        k = len(self.num.coeffs)
        return {"num": [str(v // g) for v in ints[:k]],
                "den": [str(v // g) for v in ints[k:]]}

    @classmethod
    def from_json(cls, data) -> RatFn:
        return cls(Poly.from_json(data["num"]), Poly.from_json(data["den"]))

    def pretty(self, var: str = "t") -> str:
        if self.den.is_constant():
            return self.num.pretty(var)
        return f"({self.num.pretty(var)})/({self.den.pretty(var)})"

    def __repr__(self):
        return f"RatFn({self.pretty()})"


def ratfn_arith(a: RatFn, b: RatFn, op: str) -> RatFn:
    """``op`` in {add, sub, mul, div}; result normalized."""
    if op == "add":
        return RatFn._coerce(a) + b
    if op == "sub":
        return RatFn._coerce(a) - b
    if op == "mul":
        return RatFn._coerce(a) * b
    if op == "div":
        return RatFn._coerce(a) / b
    raise ValueError(f"unknown rational-function operation {op!r}")


def ratfn_derivative(f: RatFn) -> RatFn:
    return RatFn._coerce(f).derivative()


def eval_at(f, x0):
    """Exact value of a Poly or RatFn at the rational point ``x0``."""
    x0 = to_rational(x0)
    if isinstance(f, (Poly, RatFn)):
        return f(x0)
    raise TypeError(f"cannot evaluate {type(f).__name__}")


def bareiss_det(matrix) -> Poly:
    """Determinant of a square matrix of polynomials by fraction-free
    (Bareiss) elimination; every division in the elimination is exact."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("bareiss_det needs a square matrix")
    if n == 0:
        return Poly.constant(1)
    M = [[Poly._coerce(x) for x in row] for row in matrix]
    sign = 1
    prev = Poly.constant(1)
    for k in range(n - 1):
        if M[k][k].is_zero():
            for i in range(k + 1, n):
                if not M[i][k].is_zero():
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return Poly._raw([])
        pivot = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            row_i, row_k = M[i], M[k]
            for j in range(k + 1, n):
                num = row_i[j] * pivot - mik * row_k[j]
                row_i[j] = num.exact_div(prev) if not prev.is_constant() else num.scale(1 / prev.lead)
            row_i[k] = Poly._raw([])
        prev = pivot
    det = M[n - 1][n - 1]
    return det if sign > 0 else -det
