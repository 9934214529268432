"""Generalized Hermite polynomials H_{m,n}, their rational real form, the
closed form of alpha_n through them, and the Hankel-determinant constant.

``H_{m,n}(x)`` is the m x m determinant of the polynomials ``P_s``.  Its
argument in the closed forms is ``t / c`` with ``c^2 = -3/2``.  Because every
H_{m,n} has parity ``(-1)^(mn)``, the product ``c^(mn) H_{m,n}(t/c)`` is a
polynomial with rational coefficients; that "real form" is what gets
compared against the moment-side quantities.  The parity is asserted when
each polynomial is built, never assumed.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from math import factorial

from gmpy2 import mpq

from .algebra import Poly, RatFn, bareiss_det
from .moments import RecurrenceTable, hankel_det, weight_moments

__all__ = [
    "C_SQUARED",
    "GenHermite",
    "ParityError",
    "p_s",
    "gen_hermite",
    "real_form",
    "theorem2_alpha",
    "barnes_g",
    "hankel_constant",
    "hankel_formula_check",
    "leading_coeff_checks",
]

C_SQUARED = mpq(-3, 2)


class ParityError(ArithmeticError):
    pass


def p_s(s: int) -> Poly:
    """``P_s(x) = sum over i + 2j = s of x^i / (6^j i! j!)``; zero for s < 0."""
    if s < 0:
        return Poly()
    c = [mpq(0)] * (s + 1)
    for j in range(s // 2 + 1):
        i = s - 2 * j
        c[i] = mpq(1, 6 ** j * factorial(i) * factorial(j))
    return Poly(c)


def real_form(H: Poly, mn: int) -> Poly:
    """``c^(mn) H(t/c)`` for an H of parity (-1)^(mn): a_j -> a_j (-3/2)^j."""
    c = [mpq(0)] * (mn + 1)
    for k, a in enumerate(H.coeffs):
        if not a:
            continue
        if (mn - k) % 2:
            raise ParityError(f"coefficient of x^{k} breaks parity (-1)^{mn}")
        j = (mn - k) // 2
        c[k] = a * C_SQUARED ** j
    return Poly(c)


@dataclass(frozen=True)
class GenHermite:
    m: int
    n: int
    H: Poly
    Hreal: Poly


def gen_hermite(m: int, n: int) -> GenHermite:
    if m < 0 or n < 0:
        raise ValueError("m and n must be non-negative")
    H = bareiss_det([[p_s(n - i + j) for j in range(m)] for i in range(m)])
    mn = m * n
    if H.degree != mn:
        raise ArithmeticError(f"H_{{{m},{n}}} has degree {H.degree}, expected {mn}")
    return GenHermite(m, n, H, real_form(H, mn))


def theorem2_alpha(K: int, n: int) -> RatFn:
    """``-1/2 d/dt log(Hreal_{2K,n+1} / Hreal_{2K,n})``.

    The powers of c relating Hreal to H(t/c) are constants and vanish under
    the logarithmic derivative.
    """
    if K < 1 or n < 0:
        raise ValueError("need K >= 1 and n >= 0")
    hi = gen_hermite(2 * K, n + 1).Hreal
    lo = gen_hermite(2 * K, n).Hreal
    return (RatFn(hi.derivative(), hi) - RatFn(lo.derivative(), lo)) * mpq(-1, 2)


_G_TABLE = [mpq(1), mpq(1)]  # index k holds G(k); index 0 unused
_G_LOCK = threading.Lock()


def barnes_g(k: int) -> mpq:
    """Barnes G at a positive integer: G(1) = 1, G(k+1) = (k-1)! G(k)."""
    if k < 1:
        raise ValueError("barnes_g is defined here for positive integers only")
    if k < len(_G_TABLE):
        return _G_TABLE[k]
    with _G_LOCK:
        while len(_G_TABLE) <= k:
            j = len(_G_TABLE) - 1  # extend from G(j)
            _G_TABLE.append(_G_TABLE[j] * factorial(j - 1))
    return _G_TABLE[k]


def hankel_constant(K: int, n: int) -> mpq:
    """``G(2K+n+1) / (2^(n(n-1)/2) G(2K+1))``: D̂_n = constant * Hreal_{2K,n}."""
    return barnes_g(2 * K + n + 1) / (mpq(2) ** (n * (n - 1) // 2) * barnes_g(2 * K + 1))


def hankel_formula_check(K: int, n: int, tbl: RecurrenceTable | None = None) -> tuple:
    """Compare D̂_n with the closed form; returns ``(passed, constant)``."""
    if tbl is not None:
        if tbl.K != K:
            raise ValueError("table was built for a different K")
        if n > tbl.n_max + 1:
            raise ValueError(f"n = {n} beyond the table")
        D = tbl.Dhat[n]
    else:
        D = hankel_det(weight_moments(K, max(2 * n - 2, 0)), n)
    const = hankel_constant(K, n)
    return D == gen_hermite(2 * K, n).Hreal.scale(const), const


def leading_coeff_checks(K: int, n: int) -> bool:
    """lead(D̂_n) = prod_{i<n} i!/2^i and lead(H_{2K,n}) = G(2K+1) G(n+1) / G(2K+n+1)."""
    D = hankel_det(weight_moments(K, max(2 * n - 2, 0)), n)
    want_D = mpq(1)
    for i in range(n):
        want_D *= mpq(factorial(i), 2 ** i)
    H = gen_hermite(2 * K, n).H
    want_H = barnes_g(2 * K + 1) * barnes_g(n + 1) / barnes_g(2 * K + n + 1)
    return D.degree == 2 * K * n and D.lead == want_D and H.lead == want_H
