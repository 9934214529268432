"""Exact moments, Hankel determinants and recurrence coefficients for the
weight ``w(x; t) = exp(-x^2) (x - t)^(2K)``.

Every moment is stored divided by ``sqrt(pi)``, so all quantities here are
polynomials or rational functions of ``t`` over the rationals.

Orthogonal polynomials are carried in the fraction-free form
``Q_n = d_n * p_n`` where ``d_n`` is built from the procedure's own inner
products (``d_{n+1} = L[Q_n^2] / d_n``).  With that scaling the three-term
recurrence

    Q_{n+1} = (d_{n+1} d_n x Q_n - L[x Q_n^2] Q_n - d_{n+1}^2 Q_{n-1}) / d_n^2

only ever divides polynomials exactly, and no gcd is needed until the final
coefficients are formed.  ``d_n`` is never taken from a determinant, so the
Hankel determinants computed by :func:`hankel_det` remain an independent
check on it.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from gmpy2 import mpq

from .algebra import Poly, RatFn, bareiss_det

__all__ = [
    "MomentSet",
    "RecurrenceTable",
    "LadderCoeffs",
    "FreudCheck",
    "gaussian_moment",
    "weight_moments",
    "hankel_det",
    "recurrence_table",
    "alpha_via_logderiv",
    "alpha_via_p1",
    "beta_via_hankel",
    "orthopoly",
    "inner_product",
    "ladder_coeffs",
    "freud_and_f1_check",
]


@lru_cache(maxsize=None)
def gaussian_moment(m: int) -> mpq:
    """``(1/sqrt(pi)) * integral of x^m exp(-x^2)`` over the real line."""
    if m < 0:
        raise ValueError("moment index must be non-negative")
    if m % 2:
        return mpq(0)
    acc = mpq(1)
    for k in range(1, m, 2):
        acc *= k
    return acc / 2 ** (m // 2)


@dataclass(frozen=True)
class MomentSet:
    K: int
    J: int
    q: tuple  # q[j] is a Poly in t

    def __post_init__(self):
        if len(self.q) != self.J + 1:
            raise ValueError("MomentSet needs J + 1 moments")


def _shift_power(m: int) -> list:
    """Coefficients (in y, each a Poly in t) of ``(y - t)^m``."""
    return [Poly.monomial(m - l, comb(m, l) * (-1) ** (m - l)) for l in range(m + 1)]


def weight_moments(K: int, J: int) -> MomentSet:
    """Normalized moments ``q_j(t)`` for j = 0..J of ``exp(-x^2) (x-t)^(2K)``."""
    if K < 0 or J < 0:
        raise ValueError("K and J must be non-negative")
    shift = _shift_power(2 * K)
    q = []
    for j in range(J + 1):
        acc = Poly()
        for l, c in enumerate(shift):
            g = gaussian_moment(j + l)
            if g:
                acc = acc + c.scale(g)
        q.append(acc)
    return MomentSet(K, J, tuple(q))


def hankel_det(ms: MomentSet, n: int) -> Poly:
    """``D̂_n = det(q_{i+j})`` for i, j < n; the empty determinant is 1."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n and ms.J < 2 * n - 2:
        raise ValueError(f"hankel_det({n}) needs moments up to {2 * n - 2}, have {ms.J}")
    return bareiss_det([[ms.q[i + j] for j in range(n)] for i in range(n)])


# -- polynomials in y whose coefficients are Polys in t ----------------------

def _ymul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Poly()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def _functional(coeffs: list, moments) -> Poly:
    acc = Poly()
    for j, c in enumerate(coeffs):
        if not c.is_zero():
            m = moments(j)
            if m:
                acc = acc + c * m
    return acc


def _gauss(coeffs: list) -> Poly:
    """Gaussian functional ``G[f] = (1/sqrt(pi)) ∫ f(y) exp(-y^2) dy``."""
    acc = Poly()
    for j, c in enumerate(coeffs):
        g = gaussian_moment(j)
        if g and not c.is_zero():
            acc = acc + c.scale(g)
    return acc


@dataclass(frozen=True, eq=False)
class RecurrenceTable:
    """Exact per-n data for one multiplicity ``gamma = 2K``.

    ``Dhat`` runs over n = 0..n_max+1 (computed by Bareiss elimination);
    ``h``, ``alpha``, ``beta``, ``r`` over n = 0..n_max; ``p1`` over
    n = 0..n_max+1.  ``Q`` and ``d`` hold the fraction-free orthogonal
    polynomials of the Stieltjes run, ``p_n = Q[n] / d[n]``.
    """

    K: int
    n_max: int
    moments: MomentSet
    Dhat: tuple
    h: tuple
    alpha: tuple
    beta: tuple
    r: tuple
    p1: tuple
    Q: tuple
    d: tuple

    @property
    def gamma(self) -> int:
        return 2 * self.K

    def L(self, coeffs: list) -> Poly:
        """Moment functional of the weight applied to a y-polynomial."""
        q = self.moments.q
        if len(coeffs) > len(q):
            raise ValueError("not enough moments for this functional")
        return _functional(coeffs, lambda j: q[j])

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "n_max": self.n_max,
            "Dhat": [p.to_json() for p in self.Dhat[: self.n_max + 1]],
            "alpha": [f.to_json() for f in self.alpha],
            "beta": [f.to_json() for f in self.beta],
            "r": [f.to_json() for f in self.r],
        }


def recurrence_table(K: int, n_max: int) -> RecurrenceTable:
    """Run the exact Stieltjes procedure over Q(t) for ``gamma = 2K``."""
    if K < 0:
        raise ValueError("K must be non-negative")
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    ms = weight_moments(K, 2 * n_max + 3)
    q = ms.q

    def L(coeffs):
        return _functional(coeffs, lambda j: q[j])

    one = Poly.constant(1)
    Q = [[one]]
    d = [one]
    N, M = [], []
    prev = []  # Q_{-1}
    for n in range(n_max + 1):
        Qn = Q[n]
        sq = _ymul(Qn, Qn)
        Nn = L(sq)
        Mn = L([Poly()] + sq)
        if Nn.is_zero():
            raise ArithmeticError(f"degenerate moment functional at n = {n}")
        N.append(Nn)
        M.append(Mn)
        d_next = Nn.exact_div(d[n])
        d2 = d[n] * d[n]
        nxt = [Poly()] * (n + 2)
        lead = d_next * d[n]
        for i, c in enumerate(Qn):
            nxt[i + 1] = nxt[i + 1] + lead * c
            nxt[i] = nxt[i] - Mn * c
        if prev:
            dd = d_next * d_next
            for i, c in enumerate(prev):
                nxt[i] = nxt[i] - dd * c
        nxt = [c.exact_div(d2) for c in nxt]
        if nxt[-1] != d_next:
            raise ArithmeticError("Stieltjes recurrence lost monicity")
        prev = Qn
        Q.append(nxt)
        d.append(d_next)

    h = tuple(RatFn(d[n + 1], d[n]) for n in range(n_max + 1))
    alpha = tuple(RatFn(M[n], N[n]) for n in range(n_max + 1))
    beta = (RatFn(0),) + tuple(RatFn(d[n + 1] * d[n - 1], d[n] * d[n]) for n in range(1, n_max + 1))
    r = tuple(2 * beta[n] - (n + K) for n in range(n_max + 1))
    p1 = (RatFn(0),) + tuple(RatFn(Q[n][n - 1], d[n]) for n in range(1, n_max + 2))
    Dhat = tuple(hankel_det(ms, n) for n in range(n_max + 2))
    return RecurrenceTable(
        K=K, n_max=n_max, moments=ms, Dhat=Dhat, h=h, alpha=alpha, beta=beta,
        r=r, p1=p1, Q=tuple(tuple(x) for x in Q), d=tuple(d),
    )


def _check_n(tbl: RecurrenceTable, n: int, lo: int = 0):
    if not lo <= n <= tbl.n_max:
        raise ValueError(f"n = {n} outside {lo}..{tbl.n_max}")


def alpha_via_logderiv(tbl: RecurrenceTable, n: int) -> RatFn:
    """``-(d/dt h_n) / (2 h_n)``."""
    _check_n(tbl, n)
    h = tbl.h[n]
    return -h.derivative() / (2 * h)


def alpha_via_p1(tbl: RecurrenceTable, n: int) -> RatFn:
    """Difference of consecutive sub-leading coefficients."""
    _check_n(tbl, n)
    return tbl.p1[n] - tbl.p1[n + 1]


def beta_via_hankel(tbl: RecurrenceTable, n: int) -> RatFn:
    _check_n(tbl, n, 1)
    D = tbl.Dhat
    return RatFn(D[n + 1] * D[n - 1], D[n] * D[n])


def orthopoly(tbl: RecurrenceTable, n: int) -> list:
    """Coefficients (ascending in x) of the monic ``p_n``, each a RatFn in t."""
    if not 0 <= n <= tbl.n_max + 1:
        raise ValueError(f"n = {n} outside 0..{tbl.n_max + 1}")
    return [RatFn(c, tbl.d[n]) for c in tbl.Q[n]]


def inner_product(tbl: RecurrenceTable, m: int, n: int) -> RatFn:
    """``L[p_m p_n]`` (normalized by sqrt(pi))."""
    return RatFn(tbl.L(_ymul(list(tbl.Q[m]), list(tbl.Q[n]))), tbl.d[m] * tbl.d[n])


@dataclass(frozen=True)
class LadderCoeffs:
    n: int
    order: int
    a_coeffs: tuple
    b_coeffs: tuple


def _cauchy_kernel(tbl: RecurrenceTable, m: int, n: int, order: int) -> list:
    """``G[Q_m Q_n (y-t)^(2K-1) y^j]`` for j < order (Gaussian functional)."""
    base = _ymul(_ymul(list(tbl.Q[m]), list(tbl.Q[n])), _shift_power(2 * tbl.K - 1))
    return [_gauss([Poly()] * j + base) for j in range(order)]


def ladder_coeffs(tbl: RecurrenceTable, n: int, order: int = 3) -> LadderCoeffs:
    """Laurent coefficients of z^-1 .. z^-order in the ladder functions a_n, b_n.

    For ``n = 0`` the b-coefficients vanish (``p_{-1} = 0``).
    """
    _check_n(tbl, n)
    if order < 1:
        raise ValueError("order must be at least 1")
    zero = RatFn(0)
    if tbl.K == 0:
        return LadderCoeffs(n, order, (zero,) * order, (zero,) * order)
    gam = 2 * tbl.K
    d = tbl.d
    Nn = d[n] * d[n + 1]  # L[Q_n^2]
    a = tuple(RatFn(v.scale(gam), Nn) for v in _cauchy_kernel(tbl, n, n, order))
    if n == 0:
        b = (zero,) * order
    else:
        dn2 = d[n] * d[n]  # h_{n-1} d_n d_{n-1}
        b = tuple(RatFn(v.scale(gam), dn2) for v in _cauchy_kernel(tbl, n, n - 1, order))
    return LadderCoeffs(n, order, a, b)


@dataclass(frozen=True)
class FreudCheck:
    n: int
    f1_residual: Poly
    freud_residual: Poly

    @property
    def passed(self) -> bool:
        return self.f1_residual.is_zero() and self.freud_residual.is_zero()


def freud_and_f1_check(tbl: RecurrenceTable, n: int) -> FreudCheck:
    """Check the diagonal (C_{n,n} = 0) and Freud (C_{n,n-1} = n) relations.

    Both sides are multiplied through by the Stieltjes scalings so the
    residuals are polynomials in t.
    """
    _check_n(tbl, n, 1)
    K = tbl.K
    Qn, Qm = list(tbl.Q[n]), list(tbl.Q[n - 1])
    sq = _ymul(Qn, Qn)
    cross = _ymul(Qn, Qm)
    two_y = [Poly(), Poly.constant(2)]
    if K:
        kern = _shift_power(2 * K - 1)
        f1_rhs = _gauss(_ymul(sq, kern)).scale(2 * K)
        fr_rhs = _gauss(_ymul(cross, kern)).scale(2 * K)
    else:
        f1_rhs = fr_rhs = Poly()
    f1 = tbl.L(_ymul(two_y, sq)) - f1_rhs
    freud = tbl.L(_ymul(two_y, cross)) - fr_rhs - (tbl.d[n] * tbl.d[n]).scale(n)
    return FreudCheck(n, f1, freud)
