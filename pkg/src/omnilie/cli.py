"""Command-line front end.  Every command prints one JSON report.

Exit codes: 0 success / true, 1 property failure / false / failed precondition,
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import grammar as G
from .dirac import (
    BMapD,
    ZStructure,
    dirac_from_eform,
    involutivity_check_D,
    involutivity_check_J,
    isotropy_check_D,
    isotropy_check_J,
    jacobi_check,
    maximality_check_D,
    rigidity_system,
)
from .errors import DegeneracyError, DegreeError, DimensionError, PreconditionError, RangeError, RankError
from .forms import EForm, wedge
from .gauge import GenForm
from .jet import JForm, jd, jiota, jlie, jwedge, membership_check
from .multicontact import corank_at, kernel_at_point, nu_from_distribution, same_span
from .omni import OmniSection, dorfman, jacobiator, plus_pairing, twisted_dorfman
from .properties import SUITES, SuiteConfig, default_suites, prng_info, run_suite

COMMANDS = (
    "d", "wedge", "iota", "lie", "dorfman", "pair", "twist", "jacobiator", "member",
    "isotropic", "involutive", "dirac-from-form", "rigidity", "jacobi", "multicontact", "verify",
)
ARITY = {
    "d": (1, 1), "wedge": (2, 2), "iota": (2, 2), "lie": (2, 2), "dorfman": (2, 2), "pair": (2, 2),
    "twist": (3, 3), "jacobiator": (3, 4), "member": (1, 1), "isotropic": (1, 1), "involutive": (1, 1),
    "dirac-from-form": (1, 1), "rigidity": (0, 0), "jacobi": (1, 1), "multicontact": (0, 1), "verify": (0, 0),
}
USAGE_ERRORS = (G.GrammarError, DimensionError, DegreeError, RankError, RangeError, DegeneracyError, IndexError)


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="omnilie", description="Exact calculus on higher omni-Lie algebroids.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("operands", nargs="*", help="objects in the text grammar")
    p.add_argument("--m", type=int, help="chart dimension (default: inferred from operands)")
    p.add_argument("--r", type=int, help="bundle rank (default: inferred from operands)")
    p.add_argument("--n", type=int, help="form degree for verify/rigidity")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--max-deg", type=int, default=2, help="polynomial degree bound for random inputs")
    p.add_argument("--deg", type=int, default=0, help="coefficient degree bound for rigidity")
    p.add_argument("--suite", action="append", help="verify only these suites (repeatable)")
    p.add_argument("--sweep", action="store_true", help="verify over m in {1,2}, r in {1,2}, n in 1..m+1")
    p.add_argument("--points", help="rational points, e.g. '0,0,0; 1/2,1,-1'")
    p.add_argument("--distribution", help="dist(...) generating a distribution")
    p.add_argument("--pretty", action="store_true", help="indented output")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings (not deterministic)")
    p.add_argument("--in", dest="infile", help="read operands from a file, one per non-empty line")
    p.add_argument("--out", help="write the report to this path instead of stdout")
    return p


def _shape(args, texts) -> tuple[int, int]:
    m, r = 1, 1
    for t in texts:
        tm, tr = G.infer_shape(t)
        m, r = max(m, tm), max(r, tr)
    return (args.m or m), (args.r or r)


def _parse(text: str, m: int, r: int, want=None):
    obj = G.parse_any(text, m, r)
    if want is not None and not isinstance(obj, want):
        names = want.__name__ if isinstance(want, type) else "/".join(w.__name__ for w in want)
        raise UsageError(f"expected {names}, got {type(obj).__name__}: {text!r}")
    return obj


def _witness_json(w):
    if w is None:
        return None
    if isinstance(w, tuple):
        return [_witness_json(x) for x in w]
    if isinstance(w, list):
        return [_witness_json(x) for x in w]
    if isinstance(w, (int, str, bool)):
        return w
    return repr(w)


def _check_json(res) -> dict:
    """Witnesses of the frame checks are index tuples; reported 1-based like the text syntax."""
    w = res.witness
    if isinstance(w, tuple) and all(isinstance(i, int) for i in w):
        w = [i + 1 for i in w]
    return {"value": bool(res), "witness": _witness_json(w)}


def run(args) -> tuple[dict, int]:
    texts = list(args.operands)
    if args.infile:
        texts += [ln.strip() for ln in Path(args.infile).read_text().splitlines() if ln.strip()]
    lo, hi = ARITY[args.command]
    if not lo <= len(texts) <= hi:
        raise UsageError(f"{args.command} takes {lo}..{hi} operands, got {len(texts)}")
    m, r = _shape(args, texts + [t for t in (args.distribution,) if t])
    report = {"command": args.command, "operands": texts, "m": m, "r": r}
    cmd = args.command
    code = 0

    if cmd == "d":
        x = _parse(texts[0], m, r, (JForm, EForm))
        report["result"] = repr(jd(x) if isinstance(x, JForm) else x.d())
    elif cmd == "wedge":
        w = G.parse_form(texts[0], m, r, scalar=True)
        x = _parse(texts[1], m, r, (JForm, EForm))
        report["result"] = repr(jwedge(w, x) if isinstance(x, JForm) else wedge(w, x))
    elif cmd in ("iota", "lie"):
        from .forms import Derivation

        dd = _parse(texts[0], m, r, Derivation)
        mu = _parse(texts[1], m, r, JForm)
        report["result"] = repr(jiota(dd, mu) if cmd == "iota" else jlie(dd, mu))
    elif cmd in ("dorfman", "pair"):
        e1, e2 = (_parse(t, m, r, OmniSection) for t in texts)
        report["result"] = repr(dorfman(e1, e2) if cmd == "dorfman" else plus_pairing(e1, e2))
    elif cmd == "twist":
        omega = _parse(texts[0], m, r, JForm)
        e1, e2 = (_parse(t, m, r, OmniSection) for t in texts[1:])
        report["result"] = repr(twisted_dorfman(omega, e1, e2))
    elif cmd == "jacobiator":
        es = [_parse(t, m, r, OmniSection) for t in texts[:3]]
        omega = _parse(texts[3], m, r, JForm) if len(texts) == 4 else None
        jac = jacobiator(*es, omega=omega)
        report["result"] = repr(jac)
        report["vanishes"] = jac.is_zero()
        code = 0 if jac.is_zero() else 1
    elif cmd == "member":
        g = _parse(texts[0], m, r, GenForm)
        res = membership_check(g)
        report["result"] = {
            "value": res.ok,
            "lambda": repr(res.lam) if res.lam is not None else None,
            "witness": [
                {"kind": k, "frame": None if a is None else a + 1, "args": [i + 1 for i in S],
                 "expected": [G.format_poly(p) for p in exp], "actual": [G.format_poly(p) for p in act]}
                for k, a, S, exp, act in res.witness
            ],
        }
        code = 0 if res.ok else 1
    elif cmd in ("isotropic", "involutive", "jacobi"):
        x = _parse(texts[0], m, r, (BMapD, ZStructure))
        if cmd == "jacobi":
            if not isinstance(x, ZStructure):
                raise UsageError("jacobi takes a zstruct")
            res = jacobi_check(x)
        elif isinstance(x, ZStructure):
            res = isotropy_check_J(x) if cmd == "isotropic" else involutivity_check_J(x)
        else:
            res = isotropy_check_D(x) if cmd == "isotropic" else involutivity_check_D(x)
        report["result"] = _check_json(res)
        if cmd == "isotropic" and isinstance(x, BMapD) and res:
            report["result"]["maximal"] = bool(maximality_check_D(x))
        if cmd == "involutive" and isinstance(x, BMapD):
            report["result"]["direct_route"] = res.detail["direct"]
            report["result"]["form"] = repr(res.detail["form"])
        code = 0 if res else 1
    elif cmd == "dirac-from-form":
        nu = _parse(texts[0], m, r, EForm)
        B = dirac_from_eform(nu)
        iso, inv = isotropy_check_D(B), involutivity_check_D(B)
        report["result"] = {"bmap": G.format_bmap(B), "isotropic": bool(iso), "involutive": bool(inv)}
        code = 0 if iso and inv else 1
    elif cmd == "rigidity":
        if args.m is None or args.r is None or args.n is None:
            raise UsageError("rigidity needs --m, --r and --n")
        if not 1 < args.n < args.m + 1:
            raise RangeError(f"rigidity needs 1 < n < m+1, got n={args.n}, m={args.m}")
        sys_ = rigidity_system(args.m, args.r, args.n, args.deg)
        report.update(n=args.n, deg=args.deg)
        report["result"] = {
            "solution_dim": sys_.solution_dim, "unknowns": sys_.unknowns,
            "equations": sys_.equations, "rank": sys_.rank,
        }
        code = 0 if sys_.solution_dim == 0 else 1
    elif cmd == "multicontact":
        if not args.points:
            raise UsageError("multicontact needs --points")
        pts = G.parse_points(args.points, m)
        rows = []
        if args.distribution:
            D = G.parse_dist(args.distribution, m)
            for p in pts:
                q = nu_from_distribution(D, p)
                ker = kernel_at_point(q.form, p)
                rows.append({
                    "point": G.format_point(p), "nu_D": G.format_form(q.form),
                    "complement": [i + 1 for i in q.complement], "kernel": [G.format_point(v) for v in ker],
                    "roundtrip": same_span(ker, D.at(p)),
                })
            code = 0 if all(row["roundtrip"] for row in rows) else 1
        else:
            if not texts:
                raise UsageError("multicontact needs a form or --distribution")
            w = G.parse_form(texts[0], m, 1)
            for p in pts:
                c = corank_at(w, p)
                rows.append({
                    "point": G.format_point(p), "kernel": [G.format_point(v) for v in kernel_at_point(w, p)],
                    "corank": c, "multicontact": c == w.k,
                })
            code = 0 if all(row["multicontact"] for row in rows) else 1
        report["result"] = rows
    elif cmd == "verify":
        return _verify(args, report)
    return report, code


def _verify(args, report) -> tuple[dict, int]:
    names = args.suite or default_suites()
    unknown = [nm for nm in names if nm not in SUITES]
    if unknown:
        raise UsageError(f"unknown suites: {', '.join(unknown)}")
    if args.sweep:
        configs = [(m, r, n) for m in (1, 2) for r in (1, 2) for n in range(1, m + 2)]
    else:
        configs = [(args.m or 2, args.r or 1, 1 if args.n is None else args.n)]
    runs = []
    ok = True
    for m, r, n in configs:
        cfg = SuiteConfig(m, r, n, args.seed, args.trials, args.max_deg)
        outcomes = [run_suite(nm, cfg) for nm in names]
        ok = ok and all(o.ok for o in outcomes)
        runs.append({"m": m, "r": r, "n": n, "suites": [o.to_json(args.timing) for o in outcomes]})
    report.pop("m")
    report.pop("r")
    report.update(prng=prng_info(SuiteConfig(1, 1, 1, args.seed)), trials=args.trials, max_deg=args.max_deg)
    report["runs"] = runs
    report["ok"] = ok
    return report, 0 if ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        report, code = run(args)
    except PreconditionError as exc:
        report, code = {"command": args.command, "error": {"kind": "precondition", "message": str(exc)}}, 1
    except (UsageError, *USAGE_ERRORS) as exc:
        err = {"kind": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, G.ParseError):
            err.update(line=exc.line, col=exc.col, expected=exc.expected)
        if isinstance(exc, G.SemanticError):
            err["fragment"] = exc.fragment
        report, code = {"command": args.command, "error": err}, 2
    if args.timing:
        report["timing_s"] = round(time.perf_counter() - t0, 3)
    text = json.dumps(report, indent=2 if args.pretty else None, sort_keys=False) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
