"""Exact verification of the difference, Toda and Painlevé identities
satisfied by the recurrence coefficients for even multiplicity.

Each check builds ``lhs - rhs`` as a normalized rational function of ``t``
and passes iff its numerator is the zero polynomial.  Independently, the
same expression is evaluated in Q at a handful of rational probe points from
point values of the ingredients, which exercises a different arithmetic path.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from gmpy2 import mpq

from .algebra import PoleError, Poly, RatFn, format_rational
from .moments import RecurrenceTable, ladder_coeffs

__all__ = [
    "IDENTITIES",
    "VerificationReport",
    "verify_s1",
    "verify_s2",
    "verify_toda",
    "verify_toda_molecule",
    "verify_r_chain",
    "verify_piv",
    "verify_piv_canonical",
    "verify_ladder_expansions",
    "verify_table",
    "hermite_limit_check",
    "piv_parameters",
]

# identity id -> human-readable statement carried into reports
IDENTITIES = {
    "S1_DIFF": "beta[n+1] + beta[n] = n + 1/2 + gamma/2 + alpha[n]*(t - alpha[n])",
    "S2_DIFF": "(t - alpha[n])*(beta[n+1] - beta[n] - 1/2) = beta[n+1]*alpha[n+1] - beta[n]*alpha[n-1]",
    "TODA_BETA": "d/dt beta[n] = 2*beta[n]*(alpha[n-1] - alpha[n])",
    "TODA_ALPHA": "d/dt alpha[n] = 2*(beta[n] - beta[n+1]) + 1",
    "TODA_MOLECULE": "d2/dt2 log Dhat[n] = 4*Dhat[n+1]*Dhat[n-1]/Dhat[n]^2 - 2n",
    "R_SUM": "(r[n+1] + r[n])/2 = (t - alpha[n])*alpha[n]",
    "R_SQUARE": "r[n]^2 = 2*(n + r[n] + gamma/2)*alpha[n]*alpha[n-1] + gamma^2/4",
    "R_BACKSTEP": "alpha[n-1] = alpha[n] + (d/dt r[n]) / (2*(n + r[n] + gamma/2))",
    "R_FLOW": "d/dt alpha[n] = r[n] - r[n+1]",
    "R_ELIM": "r[n] = alpha[n]*(t - alpha[n]) + (d/dt alpha[n])/2",
    "PIV": ("alpha'' = alpha'^2/(2 alpha) + 6 alpha^3 - 8 t alpha^2 "
            "+ 2 (t^2 - gamma - 2n - 1) alpha - gamma^2/(2 alpha)"),
    "PIV_CANONICAL": ("y'' = y'^2/(2y) + 3/2 y^3 + 4 s y^2 + 2 (s^2 - a) y + b/y, "
                      "y(s) = 2 alpha[n](-s), a = 2n + 1 + gamma, b = -2 gamma^2"),
    "LADDER_A": "a_n(z) ~ 2 alpha/z + (gamma + 2 t alpha)/z^2 + (gamma t + gamma alpha + 2 t^2 alpha)/z^3",
    "LADDER_B": "b_n(z) ~ (2 beta - n)/z + t (2 beta - n)/z^2 + (gamma beta + t^2 (2 beta - n))/z^3",
}

_T = RatFn(Poly([0, 1]))
N_PROBES = 5


@dataclass
class VerificationReport:
    identity_id: str
    K: int
    n: int
    status: str  # "pass", "fail" or "skipped"
    residual: Poly | None = None
    witness: tuple | None = None
    probes: list = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def residual_degree(self):
        if self.residual is None:
            return None
        return self.residual.degree

    @property
    def max_abs_residual_at_probes(self):
        if not self.probes:
            return None
        return max(abs(v) for _, v in self.probes)

    def to_json(self) -> dict:
        mx = self.max_abs_residual_at_probes
        return {
            "identity": self.identity_id,
            "statement": IDENTITIES[self.identity_id],
            "K": self.K,
            "n": self.n,
            "status": self.status,
            "residual": None if self.residual is None else self.residual.to_json(),
            "residual_degree": self.residual_degree,
            "max_abs_residual_at_probes": None if mx is None else format_rational(mx),
            "witness": None if self.witness is None else {
                "t0": format_rational(self.witness[0]),
                "value": format_rational(self.witness[1]),
            },
            "note": self.note,
        }

    def csv_row(self) -> list:
        mx = self.max_abs_residual_at_probes
        return [self.identity_id, self.K, self.n, self.status,
                "" if self.residual_degree is None else self.residual_degree,
                "" if mx is None else format_rational(mx)]


class _Exact:
    """Symbolic ingredient access; derivatives cached."""

    def __init__(self, tbl: RecurrenceTable):
        self.tbl = tbl
        self.t = _T
        self._cache = {}

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def alpha(self, n, k=0):
        if k == 0:
            return self.tbl.alpha[n]
        return self._get(("a", n, k), lambda: self.alpha(n, k - 1).derivative())

    def beta(self, n, k=0):
        if k == 0:
            return self.tbl.beta[n]
        return self._get(("b", n, k), lambda: self.beta(n, k - 1).derivative())

    def r(self, n, k=0):
        if k == 0:
            return self.tbl.r[n]
        return self._get(("r", n, k), lambda: self.r(n, k - 1).derivative())

    def Dhat(self, n, k=0):
        if k == 0:
            return RatFn(self.tbl.Dhat[n])
        return self._get(("D", n, k), lambda: self.Dhat(n, k - 1).derivative())


class _AtPoint:
    """Point values in Q of the same ingredients, at ``t = t0``."""

    def __init__(self, exact: _Exact, t0):
        self.exact = exact
        self.t = mpq(t0)

    def __getattr__(self, name):
        fn = getattr(self.exact, name)
        return lambda n, k=0: fn(n, k)(self.t)


def _probe_points(key: str):
    rng = random.Random(key)
    while True:
        yield mpq(rng.randint(-30, 30), rng.randint(1, 12))


def _spot_check(expr, ex: _Exact, key: str) -> list:
    probes = []
    for t0 in _probe_points(key):
        try:
            v = expr(_AtPoint(ex, t0))
        except PoleError:
            continue
        except ZeroDivisionError:
            continue
        probes.append((t0, mpq(v)))
        if len(probes) == N_PROBES:
            return probes
    return probes  # pragma: no cover


def _report(identity, tbl, n, residual: Poly, ex, expr, note="") -> VerificationReport:
    probes = _spot_check(expr, ex, f"{identity}:{tbl.K}:{n}") if expr else []
    status = "pass" if residual.is_zero() else "fail"
    if status == "fail" and residual.parity() is None:
        note = (note + "; " if note else "") + "residual has mixed parity"
    return VerificationReport(identity, tbl.K, n, status, residual,
                              probes[0] if probes else None, probes, note)


def _skipped(identity, tbl, n, why) -> VerificationReport:
    return VerificationReport(identity, tbl.K, n, "skipped", note=why)


def _need(tbl, n, lo, hi, identity):
    if not lo <= n <= hi:
        raise ValueError(f"{identity} needs {lo} <= n <= {hi}, got n = {n}")


def _numerator(v) -> Poly:
    return RatFn._coerce(v).num


def _run(identity, tbl, n, ex, expr, note=""):
    return _report(identity, tbl, n, _numerator(expr(ex)), ex, expr, note)


# -- difference equations --------------------------------------------------

def _s1(n, K):
    return lambda v: (v.beta(n + 1) + v.beta(n) - (mpq(2 * n + 1, 2) + K)
                      - v.alpha(n) * (v.t - v.alpha(n)))


def _s2(n):
    return lambda v: ((v.t - v.alpha(n)) * (v.beta(n + 1) - v.beta(n) - mpq(1, 2))
                      - (v.beta(n + 1) * v.alpha(n + 1) - v.beta(n) * v.alpha(n - 1)))


def verify_s1(tbl: RecurrenceTable, n: int, _ex=None) -> VerificationReport:
    _need(tbl, n, 0, tbl.n_max - 1, "S1_DIFF")
    return _run("S1_DIFF", tbl, n, _ex or _Exact(tbl), _s1(n, tbl.K))


def verify_s2(tbl: RecurrenceTable, n: int, _ex=None) -> VerificationReport:
    if n == 0:
        raise ValueError("S2_DIFF is undefined at n = 0 (alpha[-1] does not exist)")
    _need(tbl, n, 1, tbl.n_max - 1, "S2_DIFF")
    return _run("S2_DIFF", tbl, n, _ex or _Exact(tbl), _s2(n))


# -- Toda flow ---------------------------------------------------------------

def verify_toda(tbl: RecurrenceTable, n: int, _ex=None) -> list:
    """Both Toda equations that apply at ``n`` (the beta flow needs n >= 1,
    the alpha flow needs n + 1 <= n_max)."""
    ex = _ex or _Exact(tbl)
    out = []
    if 1 <= n <= tbl.n_max:
        expr = lambda v: v.beta(n, 1) - 2 * v.beta(n) * (v.alpha(n - 1) - v.alpha(n))
        out.append(_run("TODA_BETA", tbl, n, ex, expr))
    if 0 <= n <= tbl.n_max - 1:
        expr = lambda v: v.alpha(n, 1) - 2 * (v.beta(n) - v.beta(n + 1)) - 1
        out.append(_run("TODA_ALPHA", tbl, n, ex, expr))
    if not out:
        raise ValueError(f"no Toda equation applies at n = {n}")
    return out


def verify_toda_molecule(tbl: RecurrenceTable, n: int, _ex=None) -> VerificationReport:
    """Bilinear form on the Hankel determinants, with the exp(n t^2) factor
    expanded so only D̂ appears."""
    _need(tbl, n, 1, tbl.n_max, "TODA_MOLECULE")
    D = tbl.Dhat
    Dn, D1, D2 = D[n], D[n].derivative(), D[n].derivative().derivative()
    residual = D2 * Dn - D1 * D1 - (D[n + 1] * D[n - 1]).scale(4) + (Dn * Dn).scale(2 * n)

    def expr(v):
        d0, d1, d2 = v.Dhat(n), v.Dhat(n, 1), v.Dhat(n, 2)
        return (d2 * d0 - d1 * d1) / (d0 * d0) - 4 * v.Dhat(n + 1) * v.Dhat(n - 1) / (d0 * d0) + 2 * n

    return _report("TODA_MOLECULE", tbl, n, residual, _ex or _Exact(tbl), expr)


# -- the r_n chain ------------------------------------------------------------

def verify_r_chain(tbl: RecurrenceTable, n: int, _ex=None) -> list:
    """All r-chain identities at ``n``; those referring to alpha[n-1] are
    reported as skipped at n = 0 rather than dropped."""
    ex = _ex or _Exact(tbl)
    K, top = tbl.K, tbl.n_max
    out = []
    if n < top:
        out.append(_run("R_SUM", tbl, n, ex,
                        lambda v: (v.r(n + 1) + v.r(n)) / 2 - (v.t - v.alpha(n)) * v.alpha(n)))
    if n == 0:
        out.append(_skipped("R_SQUARE", tbl, 0, "references alpha[-1]"))
        out.append(_skipped("R_BACKSTEP", tbl, 0, "references alpha[-1]; n + r[0] + gamma/2 = 0"))
    else:
        out.append(_run("R_SQUARE", tbl, n, ex,
                        lambda v: v.r(n) ** 2 - 2 * (n + v.r(n) + K) * v.alpha(n) * v.alpha(n - 1) - K * K))
        if (n + ex.r(n) + K).is_zero():
            raise ZeroDivisionError(f"n + r[n] + gamma/2 vanishes identically at n = {n}")
        out.append(_run("R_BACKSTEP", tbl, n, ex,
                        lambda v: v.alpha(n - 1) - v.alpha(n) - v.r(n, 1) / (2 * (n + v.r(n) + K))))
    if n < top:
        out.append(_run("R_FLOW", tbl, n, ex, lambda v: v.alpha(n, 1) - (v.r(n) - v.r(n + 1))))
    out.append(_run("R_ELIM", tbl, n, ex,
                    lambda v: v.r(n) - v.alpha(n) * (v.t - v.alpha(n)) - v.alpha(n, 1) / 2))
    return out


# -- Painlevé IV --------------------------------------------------------------

def piv_parameters(K: int, n: int) -> tuple:
    """Canonical (a, b) for ``y = 2 alpha_n(-s)``: a = 2n+1+gamma, b = -2 gamma^2."""
    gam = 2 * K
    return 2 * n + 1 + gam, -2 * gam * gam


def _cleared_piv(f: RatFn, c3, c2: Poly, c1: Poly, cm1) -> Poly:
    """Numerator of ``y'' - [y'^2/(2y) + c3 y^3 + c2 y^2 + c1 y + cm1/y]``
    after multiplying by ``2 y B^4`` where ``y = A/B``."""
    A, B = f.num, f.den
    A1, B1 = A.derivative(), B.derivative()
    A2, B2 = A1.derivative(), B1.derivative()
    W = A1 * B - A * B1
    Y2 = (A2 * B - A * B2) * B - (B1 * W).scale(2)  # y'' * B^3
    A2_, B2_ = A * A, B * B
    return ((A * Y2).scale(2) - W * W
            - (A2_ * A2_).scale(2 * c3)
            - (c2 * A2_ * A * B).scale(2)
            - (c1 * A2_ * B2_).scale(2)
            - (B2_ * B2_).scale(2 * mpq(cm1)))


def _piv_guard(tbl, n, identity):
    _need(tbl, n, 0, tbl.n_max, identity)
    if tbl.K == 0 or tbl.alpha[n].is_zero():
        raise ValueError("PIV check undefined for gamma=0 (alpha_n vanishes identically)")


def verify_piv(tbl: RecurrenceTable, n: int, _ex=None) -> VerificationReport:
    _piv_guard(tbl, n, "PIV")
    K = tbl.K
    gam = 2 * K
    t = Poly([0, 1])
    residual = _cleared_piv(tbl.alpha[n], 6, t.scale(-8),
                            (t * t - (gam + 2 * n + 1)).scale(2), mpq(-gam * gam, 2))

    def expr(v):
        a, a1, a2 = v.alpha(n), v.alpha(n, 1), v.alpha(n, 2)
        return a2 - (a1 * a1 / (2 * a) + 6 * a ** 3 - 8 * v.t * a * a
                     + 2 * (v.t * v.t - gam - 2 * n - 1) * a - mpq(gam * gam) / (2 * a))

    note = "n = 0 checked as well (alpha_0 is defined there)" if n == 0 else ""
    return _report("PIV", tbl, n, residual, _ex or _Exact(tbl), expr, note)


def verify_piv_canonical(tbl: RecurrenceTable, n: int, _ex=None) -> VerificationReport:
    _piv_guard(tbl, n, "PIV_CANONICAL")
    a, b = piv_parameters(tbl.K, n)
    s = Poly([0, 1])
    y = (2 * tbl.alpha[n]).reflect()
    residual = _cleared_piv(y, mpq(3, 2), s.scale(4), (s * s - a).scale(2), b)

    def expr(v):
        # y(s) = 2 alpha(-s): y' = -2 alpha'(-s), y'' = 2 alpha''(-s); probe s = -t
        sv = -v.t
        y0, y1, y2 = 2 * v.alpha(n), -2 * v.alpha(n, 1), 2 * v.alpha(n, 2)
        return y2 - (y1 * y1 / (2 * y0) + mpq(3, 2) * y0 ** 3 + 4 * sv * y0 * y0
                     + 2 * (sv * sv - a) * y0 + mpq(b) / y0)

    note = f"(a, b) = ({a}, {b})"
    return _report("PIV_CANONICAL", tbl, n, residual, _ex or _Exact(tbl), expr, note)


# -- ladder expansions ----------------------------------------------------------

def _ladder_closed_forms(v, n, K):
    gam = 2 * K
    a, b, t = v.alpha(n), v.beta(n), v.t
    c = 2 * b - n
    return ([2 * a, gam + 2 * t * a, gam * t + gam * a + 2 * t * t * a],
            [c, t * c, gam * b + t * t * c])


def verify_ladder_expansions(tbl: RecurrenceTable, n: int, order: int = 3, _ex=None) -> list:
    if order < 3:
        raise ValueError("ladder expansions are checked through z^-3 (order >= 3)")
    _need(tbl, n, 0, tbl.n_max, "LADDER_A")
    ex = _ex or _Exact(tbl)
    lc = ladder_coeffs(tbl, n, order)
    closed_a, closed_b = _ladder_closed_forms(ex, n, tbl.K)
    out = []
    for ident, got, want in (("LADDER_A", lc.a_coeffs, closed_a), ("LADDER_B", lc.b_coeffs, closed_b)):
        residual, note = Poly(), ""
        for j, (g, w) in enumerate(zip(got, want)):
            diff = g - w
            if not diff.is_zero():
                residual, note = diff.num, f"first mismatch at z^-{j + 1}"
                break
        side = 0 if ident == "LADDER_A" else 1

        def expr(v, got=got, side=side):
            want_pt = _ladder_closed_forms(v, n, tbl.K)[side]
            return max((abs(g(v.t) - w) for g, w in zip(got, want_pt)), default=mpq(0))

        out.append(_report(ident, tbl, n, residual, ex, expr, note))
    return out


# -- whole-table driver -------------------------------------------------------------

def verify_table(tbl: RecurrenceTable, n_top: int | None = None) -> list:
    """Every applicable check for n = 0..n_top, one report per (identity, n),
    sorted by (identity, n)."""
    top = tbl.n_max if n_top is None else min(n_top, tbl.n_max)
    ex = _Exact(tbl)
    out = []
    for n in range(top + 1):
        if n < tbl.n_max:
            out.append(verify_s1(tbl, n, ex))
        if n == 0:
            out.append(_skipped("S2_DIFF", tbl, 0, "references alpha[-1]"))
        elif n < tbl.n_max:
            out.append(verify_s2(tbl, n, ex))
        if n >= 1 or n < tbl.n_max:
            out.extend(verify_toda(tbl, n, ex))
        if n >= 1:
            out.append(verify_toda_molecule(tbl, n, ex))
        out.extend(verify_r_chain(tbl, n, ex))
        if tbl.K:
            out.append(verify_piv(tbl, n, ex))
            out.append(verify_piv_canonical(tbl, n, ex))
        out.extend(verify_ladder_expansions(tbl, n, 3, ex))
    order = list(IDENTITIES)
    out.sort(key=lambda r: (order.index(r.identity_id), r.n))
    return out


def hermite_limit_check(tbl: RecurrenceTable) -> bool:
    """gamma = 0: alpha_n = 0 and beta_n = n/2 identically."""
    if tbl.K != 0:
        raise ValueError("the Hermite limit applies to K = 0 only")
    return (all(a.is_zero() for a in tbl.alpha)
            and all(b == mpq(n, 2) for n, b in enumerate(tbl.beta)))
