"""Command-line entry point: ``pivcheck <command> [options]``.

Exit status: 0 when every check passes, 1 when a verification fails (the
report is still written), 2 for usage or configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import mpmath
from mpmath import mp

from . import __version__
from .algebra import format_rational, to_rational
from .ensemble import exact_dn, exact_partition, mc_dn, mc_partition
from .genhermite import gen_hermite, hankel_formula_check, theorem2_alpha
from .identities import verify_table
from .moments import recurrence_table, weight_moments
from .numeric import (NumericConfig, cross_check_even, numeric_piv_checks,
                      numeric_recurrence, numeric_verify_difference, to_mpf)

EXACT_COMMANDS = {"moments", "recurrence", "verify", "genhermite", "hankel"}
VERIFY_COLUMNS = ["identity", "K", "n", "status", "residual_degree", "max_abs_residual_at_probes"]


class UsageError(Exception):
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"environment variable {name} must be an integer, got {raw!r}")


def _gamma_arg(text: str):
    try:
        g = to_rational(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"invalid gamma {text!r}")
    if g < 0:
        raise argparse.ArgumentTypeError("gamma must be non-negative")
    return g


def _rational_arg(text: str):
    try:
        return to_rational(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"invalid rational {text!r}")


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", type=Path, help="write the report to this file")
    common.add_argument("--out-dir", type=Path,
                        help="write the report into this directory, named by the config hash")
    common.add_argument("--prec", type=int, default=None,
                        help="working decimal digits (numeric pipeline only)")

    p = argparse.ArgumentParser(prog="pivcheck", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"pivcheck {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("moments", parents=[common], help="normalized moments q_j(t)")
    s.add_argument("--K", type=_nonneg, required=True)
    s.add_argument("--J", type=_nonneg, default=6)

    s = sub.add_parser("recurrence", parents=[common], help="exact recurrence table")
    s.add_argument("--K", type=_nonneg, required=True)
    s.add_argument("--n-max", type=_nonneg, default=8)

    s = sub.add_parser("verify", parents=[common], help="exact identity checks")
    s.add_argument("--K", type=_nonneg, required=True)
    s.add_argument("--n-max", type=_nonneg, default=8)

    s = sub.add_parser("genhermite", parents=[common], help="generalized Hermite polynomial")
    s.add_argument("--m", type=_nonneg, required=True)
    s.add_argument("--n", type=_nonneg, required=True)

    s = sub.add_parser("hankel", parents=[common], help="Hankel determinant closed form")
    s.add_argument("--K", type=_nonneg, required=True)
    s.add_argument("--n", type=_nonneg, required=True)

    s = sub.add_parser("numeric", parents=[common], help="high-precision pipeline, any gamma >= 0")
    s.add_argument("--gamma", type=_gamma_arg, required=True)
    s.add_argument("--t", type=_rational_arg, required=True)
    s.add_argument("--n", type=_nonneg, default=6, help="largest n")
    s.add_argument("--piv", action="store_true")
    s.add_argument("--diff", action="store_true")

    s = sub.add_parser("mc", parents=[common], help="Monte Carlo estimates")
    s.add_argument("--n", type=_nonneg, required=True)
    s.add_argument("--K", type=_nonneg, required=True)
    s.add_argument("--t", type=_rational_arg, default=None)
    s.add_argument("--samples", type=int, default=1_000_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--partition", action="store_true")

    s = sub.add_parser("suite", parents=[common], help="full verification matrix")
    s.add_argument("--K-max", type=_nonneg, default=3)
    s.add_argument("--n-top", type=_nonneg, default=6)
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--skip-numeric", action="store_true")
    return p


def _resolved_config(args) -> dict:
    cfg = {}
    for k, v in sorted(vars(args).items()):
        if k in ("out", "out_dir", "format", "workers"):
            continue
        if k == "prec":
            if args.command not in ("numeric", "suite"):
                continue
            v = _default_prec(args)
        if hasattr(v, "numerator") and not isinstance(v, (bool, int)):
            v = format_rational(v)
        cfg[k] = v
    return cfg


def _envelope(args, body: dict) -> dict:
    return {"tool": "pivcheck", "version": __version__, "config": _resolved_config(args), **body}


# -- commands: each returns (document, csv rows, csv header, ok) -------------

def cmd_moments(args):
    ms = weight_moments(args.K, args.J)
    records = [{"j": j, "q": q.to_json()} for j, q in enumerate(ms.q)]
    rows = [[r["j"], " ".join(r["q"])] for r in records]
    return {"K": args.K, "J": args.J, "moments": records}, rows, ["j", "q"], True


def cmd_recurrence(args):
    tbl = recurrence_table(args.K, args.n_max)
    doc = tbl.to_json()
    rows = []
    for n in range(args.n_max + 1):
        row = [n, " ".join(doc["Dhat"][n])]
        for key in ("alpha", "beta", "r"):
            row += [" ".join(doc[key][n]["num"]), " ".join(doc[key][n]["den"])]
        rows.append(row)
    header = ["n", "Dhat", "alpha_num", "alpha_den", "beta_num", "beta_den", "r_num", "r_den"]
    return {"table": doc}, rows, header, True


def _verify_reports(K: int, n_max: int, n_top: int | None = None) -> list:
    return [r.to_json() for r in verify_table(recurrence_table(K, n_max), n_top)]


def _verify_rows(reports):
    return [[r[c] if r[c] is not None else "" for c in VERIFY_COLUMNS] for r in reports]


def _summary(reports) -> dict:
    counts = {"pass": 0, "fail": 0, "skipped": 0}
    for r in reports:
        counts[r["status"]] += 1
    return counts


def cmd_verify(args):
    reports = _verify_reports(args.K, args.n_max)
    summ = _summary(reports)
    return ({"reports": reports, "summary": summ}, _verify_rows(reports), VERIFY_COLUMNS,
            summ["fail"] == 0)


def cmd_genhermite(args):
    gh = gen_hermite(args.m, args.n)
    doc = {"m": args.m, "n": args.n, "H": gh.H.to_json(), "Hreal": gh.Hreal.to_json()}
    return doc, [[args.m, args.n, " ".join(doc["H"]), " ".join(doc["Hreal"])]], ["m", "n", "H", "Hreal"], True


def cmd_hankel(args):
    ok, const = hankel_formula_check(args.K, args.n)
    doc = {"K": args.K, "n": args.n, "constant": format_rational(const),
           "status": "pass" if ok else "fail"}
    return doc, [[args.K, args.n, doc["constant"], doc["status"]]], ["K", "n", "constant", "status"], ok


def _default_prec(args) -> int:
    return args.prec if args.prec is not None else _env_int("PIVCHECK_PREC", 60)


def cmd_numeric(args):
    digits = _default_prec(args)
    if digits < 30:
        raise UsageError("--prec must be at least 30")
    cfg = NumericConfig(precision_digits=digits, n_max=args.n)
    rec = numeric_recurrence(args.gamma, args.t, cfg)
    fmt = lambda v: mpmath.nstr(v, digits, strip_zeros=False) if v is not None else None
    doc = {"gamma": format_rational(args.gamma), "t": format_rational(args.t),
           "alpha": [fmt(a) for a in rec.alpha], "beta": [fmt(b) for b in rec.beta],
           "residuals": {}}
    ok = True
    if args.diff:
        chk = numeric_verify_difference(args.gamma, args.t, None, cfg)
        doc["residuals"]["s1"] = [fmt(v) for v in chk.s1]
        doc["residuals"]["s2"] = [fmt(v) for v in chk.s2]
        doc["residuals"]["diff_threshold"] = fmt(chk.threshold)
        ok &= chk.passed
    if args.piv:
        checks = numeric_piv_checks(args.gamma, args.t, cfg)
        doc["residuals"]["piv"] = [fmt(c.residual) for c in checks]
        ok &= all(c.passed for c in checks)
    g = args.gamma
    if g.denominator == 1 and g.numerator % 2 == 0 and g > 0:
        # even multiplicity: the exact pipeline supplies reference values
        tbl = recurrence_table(int(g.numerator) // 2, args.n)
        with mp.workdps(cfg.working_digits):
            dev = max(max(abs(a - to_mpf(tbl.alpha[n](args.t))), abs(b - to_mpf(tbl.beta[n](args.t))))
                      for n, (a, b) in enumerate(zip(rec.alpha, rec.beta)))
        doc["exact"] = {"alpha": [format_rational(tbl.alpha[n](args.t)) for n in range(args.n + 1)],
                        "beta": [format_rational(tbl.beta[n](args.t)) for n in range(args.n + 1)],
                        "max_deviation": mpmath.nstr(dev, 10)}
    doc["status"] = "pass" if ok else "fail"
    rows = []
    for n in range(args.n + 1):
        row = [n, doc["alpha"][n], doc["beta"][n]]
        res = doc["residuals"]
        row.append(res["s1"][n] if "s1" in res and n < len(res["s1"]) else "")
        row.append(res["s2"][n] if "s2" in res and n < len(res["s2"]) and res["s2"][n] else "")
        row.append(res["piv"][n] if "piv" in res else "")
        rows.append(row)
    return doc, rows, ["n", "alpha", "beta", "s1", "s2", "piv"], ok


def cmd_mc(args):
    workers = _env_int("PIVCHECK_WORKERS", 1)
    try:
        if args.partition:
            est = mc_partition(args.n, args.K, args.samples, args.seed, workers)
            exact = exact_partition(args.n, args.K)
        else:
            if args.t is None:
                raise UsageError("mc needs --t unless --partition is given")
            est = mc_dn(args.n, args.K, args.t, args.samples, args.seed, workers)
            exact = exact_dn(args.n, args.K, args.t)
    except ValueError as exc:
        raise UsageError(str(exc))
    z = est.z_score(exact)
    doc = {"estimate": repr(est.mean), "std_error": repr(est.std_error),
           "exact": format_rational(exact), "z_score": repr(z),
           "seed": est.seed, "samples": est.samples}
    row = [doc["estimate"], doc["std_error"], doc["exact"], doc["z_score"], est.seed, est.samples]
    return doc, [row], ["estimate", "std_error", "exact", "z_score", "seed", "samples"], abs(z) <= 3


def _suite_exact(K: int, n_top: int) -> dict:
    tbl = recurrence_table(K, n_top + 1)
    reports = [r.to_json() for r in verify_table(tbl, n_top)]
    extra = []
    for n in range(n_top + 1):
        ok = theorem2_alpha(K, n) == tbl.alpha[n]
        extra.append({"identity": "HERMITE_ALPHA", "K": K, "n": n, "status": "pass" if ok else "fail"})
    for n in range(min(n_top, 5) + 1):
        ok, const = hankel_formula_check(K, n, tbl)
        extra.append({"identity": "HANKEL_FORMULA", "K": K, "n": n,
                      "status": "pass" if ok else "fail", "constant": format_rational(const)})
    return {"reports": reports, "extra": extra}


def _suite_numeric(digits: int) -> list:
    out = []
    cfg = NumericConfig(precision_digits=digits, n_max=6)
    for g, t in (("3/2", "4/5"), ("3", "6/5"), ("1/2", "1/2")):
        chk = numeric_verify_difference(g, t, None, cfg)
        out.append({"identity": "NUMERIC_DIFF", "gamma": g, "t": t,
                    "status": "pass" if chk.passed else "fail",
                    "max_residual": mpmath.nstr(chk.max_residual, 5)})
        piv = numeric_piv_checks(g, t, cfg)
        worst = max(abs(c.residual) for c in piv)
        out.append({"identity": "NUMERIC_PIV", "gamma": g, "t": t,
                    "status": "pass" if all(c.passed for c in piv) else "fail",
                    "max_residual": mpmath.nstr(worst, 5)})
    dev = cross_check_even(1, ["-1", "1/2", "3"], NumericConfig(precision_digits=digits, n_max=6))
    out.append({"identity": "NUMERIC_EXACT_BRIDGE", "gamma": "2", "t": "-1,1/2,3",
                "status": "pass" if dev < mpmath.mpf(10) ** (-(digits - 15)) else "fail",
                "max_residual": mpmath.nstr(dev, 5)})
    return out


def cmd_suite(args):
    workers = args.workers if args.workers is not None else _env_int("PIVCHECK_WORKERS", 1)
    Ks = list(range(1, args.K_max + 1))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_suite_exact, Ks, [args.n_top] * len(Ks)))
    else:
        parts = [_suite_exact(K, args.n_top) for K in Ks]
    reports = [r for p in parts for r in p["reports"]]
    extra = [r for p in parts for r in p["extra"]]
    reports.sort(key=lambda r: (r["identity"], r["K"], r["n"]))
    extra.sort(key=lambda r: (r["identity"], r["K"], r["n"]))
    numeric = [] if args.skip_numeric else _suite_numeric(_default_prec(args))
    summ = _summary(reports + extra + numeric)
    rows = _verify_rows(reports)
    rows += [[e["identity"], e["K"], e["n"], e["status"], "", ""] for e in extra]
    rows += [[e["identity"], f"gamma={e['gamma']}", f"t={e['t']}", e["status"], "", e["max_residual"]]
             for e in numeric]
    doc = {"reports": reports, "closed_forms": extra, "numeric": numeric, "summary": summ}
    return doc, rows, VERIFY_COLUMNS, summ["fail"] == 0


COMMANDS = {
    "moments": cmd_moments,
    "recurrence": cmd_recurrence,
    "verify": cmd_verify,
    "genhermite": cmd_genhermite,
    "hankel": cmd_hankel,
    "numeric": cmd_numeric,
    "mc": cmd_mc,
    "suite": cmd_suite,
}


def render(doc: dict, rows, header, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write(text: str, args, cfg_doc: dict) -> None:
    if args.out is not None:
        args.out.write_text(text)
    if args.out_dir is not None:
        digest = hashlib.sha256(json.dumps(cfg_doc, sort_keys=True).encode()).hexdigest()[:16]
        args.out_dir.mkdir(parents=True, exist_ok=True)
        path = args.out_dir / f"{args.command}-{digest}.{args.format}"
        if path.exists():
            print(f"report {path} already exists; left untouched", file=sys.stderr)
        else:
            path.write_text(text)
    if args.out is None and args.out_dir is None:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in EXACT_COMMANDS and args.prec is not None:
            raise UsageError(f"--prec does not apply to the exact command {args.command!r}")
        body, rows, header, ok = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"pivcheck: error: {exc}", file=sys.stderr)
        return 2
    doc = _envelope(args, body)
    _write(render(doc, rows, header, args.format), args, doc["config"])
    if "summary" in body:
        s = body["summary"]
        print(f"{args.command}: {s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped",
              file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
