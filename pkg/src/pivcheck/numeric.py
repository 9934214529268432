"""High-precision recurrence coefficients for ``exp(-x^2) |x - t|^gamma`` with
any real ``gamma >= 0``.

The inner product is a composite quadrature split at ``x = t``.  The two
panels touching ``t`` use Gauss-Jacobi rules carrying ``|x - t|^gamma`` as
their weight, so the algebraic endpoint behaviour of non-integer ``gamma`` is
integrated exactly and no graded mesh is needed.  The remaining panels, out to
a truncation radius where the Gaussian tail is negligible, use Gauss-Legendre.
Orthogonalization is the Stieltjes procedure on that discrete measure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
from mpmath import mp, mpf

from .algebra import Rational, to_rational

__all__ = [
    "NumericConfig",
    "NumericRecurrence",
    "DifferenceCheck",
    "PivCheck",
    "to_mpf",
    "quadrature_rule",
    "hp_inner_product",
    "numeric_recurrence",
    "numeric_verify_difference",
    "numeric_piv_checks",
    "numeric_verify_piv",
    "cross_check_even",
]

GUARD_DIGITS = 20


@dataclass(frozen=True)
class NumericConfig:
    """Precision and quadrature layout.

    ``quad_nodes`` (Gauss-Legendre nodes per outer panel) and ``jacobi_nodes``
    (nodes on each panel touching ``x = t``) default to values scaled with
    the precision.  ``truncation_radius`` defaults to the smallest radius
    whose Gaussian tail stays below ``10^-(precision_digits + 10)``.
    """

    precision_digits: int = 60
    quad_nodes: int | None = None
    jacobi_nodes: int | None = None
    panel_width: str = "1"
    truncation_radius: str | None = None
    fd_step: str = "1e-6"
    n_max: int = 8

    def __post_init__(self):
        if self.precision_digits < 30:
            raise ValueError("precision_digits must be at least 30")
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")
        if float(self.panel_width) <= 0:
            raise ValueError("panel_width must be positive")

    @property
    def working_digits(self) -> int:
        return self.precision_digits + GUARD_DIGITS

    @property
    def gl_nodes(self) -> int:
        return self.quad_nodes or int(math.ceil(0.5 * self.working_digits)) + 10

    @property
    def gj_nodes(self) -> int:
        return self.jacobi_nodes or int(math.ceil(0.5 * self.working_digits)) + 10

    def max_power(self, gamma: float) -> float:
        # highest power of |x| met by the Stieltjes sums
        return gamma + 2 * self.n_max + 3

    def radius(self, gamma: float, t: float) -> float:
        target = (self.precision_digits + 10) * math.log(10)
        p = self.max_power(gamma)
        if self.truncation_radius is not None:
            R = float(self.truncation_radius)
            if _log_tail(R, abs(t), p) > -target:
                raise ValueError(f"truncation_radius {R} leaves a tail above 1e-{self.precision_digits + 10}")
            return R
        R = 6.0
        for _ in range(60):
            R_new = math.sqrt(max(target + p * math.log(R + abs(t)) - math.log(2 * R), 1.0))
            if abs(R_new - R) < 1e-9:
                break
            R = R_new
        return math.ceil(R * 4) / 4 + 0.25


def _log_tail(R: float, at: float, p: float) -> float:
    # log of exp(-R^2) (R + |t|)^p / (2R), an upper estimate of the tail integral
    return -R * R + p * math.log(R + at) - math.log(2 * R)


def to_mpf(value) -> mpf:
    """Convert rationals exactly and decimal strings at the current precision."""
    if isinstance(value, mpf):
        return +value
    if isinstance(value, str):
        return mpf(value.strip())
    if isinstance(value, Rational):
        return mpf(int(value.numerator)) / int(value.denominator)
    if isinstance(value, int):
        return mpf(value)
    return to_mpf(to_rational(value))


@lru_cache(maxsize=64)
def _rule(kind: str, n: int, beta: str, dps: int):
    with mp.workdps(dps):
        if kind == "jacobi":
            return mp.gauss_quadrature(n, "jacobi", 0, mpf(beta))
        return mp.gauss_quadrature(n, "legendre")


def quadrature_rule(gamma, t, cfg: NumericConfig) -> tuple:
    """Nodes and weights (weight function included) for ``exp(-x^2)|x-t|^gamma``.

    Must be called inside a context at ``cfg.working_digits``.
    """
    g, tt = to_mpf(gamma), to_mpf(t)
    if g < 0:
        raise ValueError("gamma must be non-negative")
    dps = mp.dps
    L = to_mpf(cfg.panel_width)
    R = mpf(cfg.radius(float(g), float(tt)))
    xs, ws = [], []

    uj, wj = _rule("jacobi", cfg.gj_nodes, mpmath.nstr(g, dps + 5), dps)
    scale = (L / 2) ** (g + 1)
    for u, w in zip(uj, wj):
        s = L * (1 + u) / 2
        for x in (tt + s, tt - s):
            xs.append(x)
            ws.append(scale * w * mp.exp(-x * x))

    ug, wg = _rule("legendre", cfg.gl_nodes, "0", dps)

    def panels(a, b):
        if b <= a:
            return
        k = int(mp.ceil((b - a) / L))
        edges = [a + (b - a) * i / k for i in range(k + 1)]
        for lo, hi in zip(edges, edges[1:]):
            half, mid = (hi - lo) / 2, (hi + lo) / 2
            for u, w in zip(ug, wg):
                x = mid + half * u
                xs.append(x)
                ws.append(half * w * abs(x - tt) ** g * mp.exp(-x * x))

    panels(tt + L, max(R, tt + L))
    panels(min(-R, tt - L), tt - L)
    return xs, ws


def hp_inner_product(f, g, gamma, t, cfg: NumericConfig | None = None) -> mpf:
    """``∫ f(x) g(x) exp(-x^2) |x - t|^gamma dx`` to the configured precision."""
    cfg = cfg or NumericConfig()
    with mp.workdps(cfg.working_digits):
        xs, ws = quadrature_rule(gamma, t, cfg)
        return mp.fsum(w * f(x) * g(x) for x, w in zip(xs, ws))


@dataclass
class NumericRecurrence:
    gamma: mpf
    t: mpf
    alpha: list
    beta: list
    h: list
    diagnostics: dict = field(default_factory=dict)

    def to_json(self, digits: int) -> dict:
        s = lambda v: mpmath.nstr(v, digits, strip_zeros=False)
        return {"gamma": s(self.gamma), "t": s(self.t),
                "alpha": [s(a) for a in self.alpha], "beta": [s(b) for b in self.beta]}


def _stieltjes(xs, ws, n_max: int):
    N = len(xs)
    p_prev, p = [mpf(0)] * N, [mpf(1)] * N
    alpha, beta, h = [], [], []
    for n in range(n_max + 1):
        wp = [w * v for w, v in zip(ws, p)]
        hn = mp.fsum(a * b for a, b in zip(wp, p))
        if n and hn <= 0:
            raise ArithmeticError(f"loss of positivity at n = {n}: precision exhausted")
        an = mp.fsum(a * b * x for a, b, x in zip(wp, p, xs)) / hn
        bn = hn / h[-1] if n else mpf(0)
        if n and bn <= 0:
            raise ArithmeticError(f"beta[{n}] is not positive: precision exhausted")
        alpha.append(an)
        beta.append(bn)
        h.append(hn)
        p_prev, p = p, [(x - an) * v - bn * u for x, v, u in zip(xs, p, p_prev)]
    return alpha, beta, h


def numeric_recurrence(gamma, t, cfg: NumericConfig | None = None) -> NumericRecurrence:
    """alpha_n, beta_n for n = 0..cfg.n_max at the point ``t``."""
    cfg = cfg or NumericConfig()
    with mp.workdps(cfg.working_digits):
        g, tt = to_mpf(gamma), to_mpf(t)
        if g < 0:
            raise ValueError("gamma must be non-negative")
        xs, ws = quadrature_rule(g, tt, cfg)
        alpha, beta, h = _stieltjes(xs, ws, cfg.n_max)
        diag = {
            "nodes": len(xs),
            "radius": cfg.radius(float(g), float(tt)),
            "working_digits": cfg.working_digits,
            "min_beta": mpmath.nstr(min(beta[1:]), 10) if len(beta) > 1 else None,
        }
        return NumericRecurrence(g, tt, alpha, beta, h, diag)


@dataclass
class DifferenceCheck:
    gamma: mpf
    t: mpf
    s1: list   # index n = 0..n_max-1
    s2: list   # index n; entry 0 is None (alpha[-1] undefined)
    threshold: mpf

    @property
    def max_residual(self) -> mpf:
        vals = [abs(v) for v in self.s1] + [abs(v) for v in self.s2 if v is not None]
        return max(vals) if vals else mpf(0)

    @property
    def passed(self) -> bool:
        return self.max_residual < self.threshold


def numeric_verify_difference(gamma, t, n_max: int | None = None,
                              cfg: NumericConfig | None = None) -> DifferenceCheck:
    """Absolute residuals of both difference equations for n < n_max."""
    cfg = cfg or NumericConfig()
    if n_max is not None and n_max != cfg.n_max:
        cfg = _replace(cfg, n_max=n_max)
    rec = numeric_recurrence(gamma, t, cfg)
    with mp.workdps(cfg.working_digits):
        a, b, g, tt = rec.alpha, rec.beta, rec.gamma, rec.t
        s1, s2 = [], [None]
        for n in range(cfg.n_max):
            s1.append(b[n + 1] + b[n] - n - mpf(1) / 2 - g / 2 - a[n] * (tt - a[n]))
            if n >= 1:
                s2.append((tt - a[n]) * (b[n + 1] - b[n] - mpf(1) / 2)
                          - (b[n + 1] * a[n + 1] - b[n] * a[n - 1]))
        thr = mpf(10) ** (-(cfg.precision_digits // 2))
    return DifferenceCheck(g, tt, s1, s2, thr)


@dataclass
class PivCheck:
    n: int
    alpha: mpf
    d1: mpf
    d2: mpf
    residual: mpf
    step: mpf
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.residual) < self.tolerance


def _replace(cfg: NumericConfig, **kw) -> NumericConfig:
    from dataclasses import replace
    return replace(cfg, **kw)


def numeric_piv_checks(gamma, t, cfg: NumericConfig | None = None, ns=None,
                       tolerance: float = 1e-8, step=None) -> list:
    """Painlevé IV residuals for each n in ``ns`` (default 0..n_max).

    Derivatives in t: central differences at steps h and 2h combined by
    Richardson extrapolation (fourth order), from five recurrence builds.
    """
    cfg = cfg or NumericConfig()
    ns = list(range(cfg.n_max + 1)) if ns is None else list(ns)
    if ns and max(ns) > cfg.n_max:
        cfg = _replace(cfg, n_max=max(ns))
    with mp.workdps(cfg.working_digits):
        g, tt = to_mpf(gamma), to_mpf(t)
        h = to_mpf(step if step is not None else cfg.fd_step)
        runs = {k: numeric_recurrence(g, tt + k * h, cfg).alpha for k in (-2, -1, 0, 1, 2)}
        small = mpf(10) ** (-(cfg.precision_digits // 4))
        out = []
        for n in ns:
            a = {k: v[n] for k, v in runs.items()}
            a0 = a[0]
            if abs(a0) < small:
                raise ValueError(
                    f"|alpha_{n}(t)| is ~0 at t = {mpmath.nstr(tt, 8)}; PIV divides by alpha, "
                    "choose a probe point away from t = 0")
            d1h = (a[1] - a[-1]) / (2 * h)
            d1H = (a[2] - a[-2]) / (4 * h)
            d2h = (a[1] - 2 * a0 + a[-1]) / (h * h)
            d2H = (a[2] - 2 * a0 + a[-2]) / (4 * h * h)
            d1 = (4 * d1h - d1H) / 3
            d2 = (4 * d2h - d2H) / 3
            rhs = (d1 * d1 / (2 * a0) + 6 * a0 ** 3 - 8 * tt * a0 ** 2
                   + 2 * (tt * tt - g - 2 * n - 1) * a0 - g * g / (2 * a0))
            out.append(PivCheck(n, a0, d1, d2, d2 - rhs, h, tolerance))
        return out


def numeric_verify_piv(gamma, t, n: int, cfg: NumericConfig | None = None,
                       tolerance: float = 1e-8) -> PivCheck:
    return numeric_piv_checks(gamma, t, cfg, [n], tolerance)[0]


def cross_check_even(K: int, t_samples, cfg: NumericConfig | None = None, tables=None) -> mpf:
    """Largest |numeric - exact| over alpha_n, beta_n, n <= n_max, t in t_samples."""
    from .moments import recurrence_table

    cfg = cfg or NumericConfig()
    if K < 1:
        raise ValueError("K must be at least 1")
    tbl = tables or recurrence_table(K, cfg.n_max)
    worst = mpf(0)
    for t0 in t_samples:
        t0 = to_rational(t0)
        rec = numeric_recurrence(2 * K, t0, cfg)
        with mp.workdps(cfg.working_digits):
            for n in range(cfg.n_max + 1):
                for got, exact in ((rec.alpha[n], tbl.alpha[n]), (rec.beta[n], tbl.beta[n])):
                    dev = abs(got - to_mpf(exact(t0)))
                    worst = max(worst, dev)
    return worst
