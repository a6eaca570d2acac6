"""Command line interface.

Exit codes: 0 success, 1 a check failed, 2 usage error (including unknown
presets), 3 a search budget was exceeded or the case is unsupported.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import counting, genericity, liedata, oracle
from .appendix import AppendixCheckFailed, reduce_mod_p, verify_so5_appendix
from .exactcore import QuadNum, format_poly
from .matgroups import TooLarge, UnsupportedPreset
from .rootsys import UnsupportedType, load
from .subposet import cartan_type, enumerate_levis, enumerate_pseudo_levis, is_isolated

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def load_schemas() -> dict:
    """JSON schemas for the ``--json`` output of each subcommand."""
    from importlib import resources
    return json.loads(resources.files("isogreen").joinpath("schemas.json").read_text())["commands"]


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        print(text)


def _group(name: str):
    try:
        return load(name)
    except UnsupportedType as exc:
        raise UsageError(str(exc)) from exc


def _cache(args) -> liedata.TableCache:
    threads = args.threads or int(os.environ.get("ISOGREEN_THREADS", "1"))
    extra = {}
    if getattr(args, "samples", None):
        try:
            extra["samples"] = tuple(int(x) for x in args.samples.split(","))
        except ValueError as exc:
            raise UsageError(f"bad --q list: {args.samples}") from exc
    if getattr(args, "holdout", None):
        extra["holdout"] = None if args.holdout == "none" else int(args.holdout)
    return liedata.TableCache(args.cache or liedata.default_cache_path(), refit=args.refit, threads=threads,
                              **extra)


def _fmt_subsystem(rs, psi) -> dict:
    return {"type": cartan_type(rs, psi), "roots": sorted(psi), "isolated": is_isolated(rs, psi)}


# ---------------------------------------------------------------------------
# subcommands


def cmd_subsystems(args) -> int:
    rs, W, _ = _group(args.group)
    poset = enumerate_levis(rs) if args.kind == "levi" else enumerate_pseudo_levis(rs)
    items = [_fmt_subsystem(rs, psi) for psi in poset.elements]
    if args.kind == "isolated":
        items = [x for x in items if x["isolated"]]
    text = "\n".join(f"{x['type']:<10} isolated={x['isolated']!s:<5} roots={x['roots']}" for x in items)
    _emit(args, {"group": args.group, "kind": args.kind, "subsystems": items}, text)
    return EXIT_OK


def cmd_mobius(args) -> int:
    rs, _, _ = _group(args.group)
    poset = enumerate_levis(rs) if args.kind == "levi" else enumerate_pseudo_levis(rs)
    rows = [dict(_fmt_subsystem(rs, psi), mu=poset.mobius(psi, poset.top)) for psi in poset.elements]
    text = "\n".join(f"mu({r['type']}, top) = {r['mu']}  roots={r['roots']}" for r in rows)
    _emit(args, {"group": args.group, "kind": args.kind, "mobius_to_top": rows}, text)
    return EXIT_OK


def _parse_tuple(text: str):
    """``"a,b;c,d"`` with entries ``x`` or ``x+y*r6`` (meaning x + y sqrt 6)."""
    out = []
    for part in text.split(";"):
        vec = []
        for entry in part.split(","):
            entry = entry.strip().replace(" ", "")
            if "r6" in entry:
                head, _, tail = entry.rpartition("*r6")
                if "+" in head[1:] or "-" in head[1:]:
                    k = max(head.rfind("+"), head.rfind("-"))
                    a, b = head[:k], head[k:]
                else:
                    a, b = "0", head
                vec.append(QuadNum(Fraction(a or 0), Fraction(b or 1), 6))
            else:
                vec.append(Fraction(entry))
        out.append(vec)
    return out


def cmd_check_generic(args) -> int:
    rs, W, _ = _group(args.group)
    if args.search:
        tup = genericity.search_generic(rs, W, args.punctures, field=args.field, seed=args.seed)
        payload = {"group": args.group, "tuple": [[str(x) for x in v] for v in tup], "generic": True}
        _emit(args, payload, "generic tuple: " + "; ".join(",".join(str(x) for x in v) for v in tup))
        return EXIT_OK
    if not args.tuple:
        raise UsageError("give --tuple or --search")
    try:
        tup = _parse_tuple(args.tuple)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse tuple: {exc}") from exc
    if any(len(v) != rs.ambient for v in tup):
        raise UsageError(f"each element needs {rs.ambient} ambient coordinates")
    rep = genericity.is_generic(tup, rs, W, central_check=not args.no_central_check)
    payload = {"group": args.group, "generic": rep.verdict, "reason": rep.reason,
               "witness_levi": sorted(rep.witness[0]) if rep.witness else None}
    _emit(args, payload, f"generic: {rep.verdict}" + (f" ({rep.reason})" if rep.reason else ""))
    return EXIT_OK if rep.verdict else EXIT_CHECK


def cmd_liedata_fit(args) -> int:
    rs, W, _ = _group(args.group)
    cache = _cache(args)
    side = enumerate_pseudo_levis(rs)
    from .subposet import w_orbits
    rows = []
    for orb in w_orbits(side, W).orbits:
        rep = orb[0]
        try:
            data = cache.classes(args.group, rep)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        for c in data:
            rows.append({"levi": cartan_type(rs, rep), "roots": sorted(rep), "class": c.label,
                         "green": format_poly(c.green), "centOrder": format_poly(c.centOrder),
                         "dimCent": c.dimCent})
    text = "\n".join(f"{r['levi']:<10} {r['class']:<14} Q = {r['green']:<24} |C| = {r['centOrder']}"
                     for r in rows)
    _emit(args, {"group": args.group, "classes": rows}, text)
    return EXIT_OK


def cmd_count(args) -> int:
    _group(args.group)
    try:
        params = counting.CountingParams(args.genus, args.punctures, args.group)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cache = _cache(args)
    if args.what == "charvar":
        p = counting.additive_charvar_count(None, params, cache)
        _emit(args, {"group": args.group, "genus": args.genus, "punctures": args.punctures,
                     "charvar": format_poly(p)}, format_poly(p))
        return EXIT_OK
    if args.decompose:
        dec = counting.decompose(params, cache)
        direct = counting.multiplicity_generic(params, cache)
        payload = {"group": args.group, "genus": args.genus, "punctures": args.punctures,
                   "total": format_poly(dec.total), "validity": dec.validity,
                   "matches_type_sum": dec.total == direct,
                   "perIsolated": [{"isolated": t.label, "roots": sorted(t.isolated),
                                    "contribution": format_poly(t.contribution),
                                    "charVarCount": format_poly(t.charVarCount), "gammaE": t.gammaE,
                                    "nE": format_poly(t.nE.poly), "zE": format_poly(t.zE.poly),
                                    "genericFound": t.genericFound} for t in dec.perIsolated]}
        text = "\n".join([f"{t.label}: {format_poly(t.contribution)}" for t in dec.perIsolated]
                         + [f"total: {format_poly(dec.total)}"])
        _emit(args, payload, text)
        return EXIT_OK if dec.total == direct else EXIT_CHECK
    p = counting.multiplicity_generic(params, cache)
    pos = counting.positivity_report(p)
    _emit(args, {"group": args.group, "genus": args.genus, "punctures": args.punctures,
                 "multiplicity": format_poly(p), "leading_law": counting.leading_law(params, p),
                 "nonnegative": pos.nonnegative}, format_poly(p))
    return EXIT_OK


def _scan_payload(rep: oracle.ScanReport) -> dict:
    return {"group": rep.group, "q": rep.q, "s_field": rep.s_field, "punctures": rep.ell,
            "s_tuple": rep.s_tuple, "agreement": rep.agreement,
            "cases": [{"flags": c.flags, "indecomposable": c.indecomposable, "solvable": c.solvable,
                       "solvable_linear": c.solvable_linear, "stabilizer_order": c.stabilizer_order,
                       "witness_roots": c.witness_roots} for c in rep.cases]}


def cmd_oracle(args) -> int:
    _group(args.group)
    if args.what == "scan-theorem":
        rep = oracle.theorem_equivalence_scan(args.group, args.q, args.punctures, args.s_field)
        text = "\n".join(f"{c.flags}: indecomposable={c.indecomposable} solvable={c.solvable}"
                         for c in rep.cases) + f"\nagreement: {rep.agreement:.0%}"
        _emit(args, _scan_payload(rep), text)
        return EXIT_OK if rep.agreement == 1 else EXIT_CHECK
    if args.what == "green":
        rows = []
        rs, _, _ = load(args.group)
        for c in liedata.classes_at(args.group, frozenset(range(rs.n_roots)), args.q):
            u = oracle.over(args.group, args.q).element_from_params(
                liedata._ordered_positive(rs, frozenset(range(rs.n_roots)))[0], c.rep_params)
            rows.append({"class": c.label, "signature": c.signature, "fixed_flags": oracle.green_fixed_points(args.group, args.q, u)})
        _emit(args, {"group": args.group, "q": args.q, "green": rows},
              "\n".join(f"{r['class']:<14} {str(r['signature']):<16} {r['fixed_flags']}" for r in rows))
        return EXIT_OK
    if args.what == "multiplicity":
        if args.theta:
            r = len(load(args.group)[0].lattice)
            vals = [int(x) for x in args.theta.replace(";", ",").split(",")]
            if len(vals) % r:
                raise UsageError(f"--theta needs a multiple of {r} exponents")
            exps = [tuple(vals[k:k + r]) for k in range(0, len(vals), r)]
        else:
            exps = oracle.find_generic_char_tuple(args.group, args.q, args.punctures)
        generic = oracle.is_generic_char_tuple(exps, args.group, args.q)
        m = oracle.direct_multiplicity(args.group, args.q, exps, args.genus)
        _emit(args, {"group": args.group, "q": args.q, "theta": exps, "generic": generic,
                     "multiplicity": str(m)}, str(m))
        return EXIT_OK
    if args.what == "analogue57":
        try:
            rep = oracle.verify_analogue_5_7(args.group, args.q, args.punctures)
        except oracle.NoValidTheta as exc:
            _emit(args, {"group": args.group, "q": args.q, "outcome": "NoValidTheta", "reason": str(exc)},
                  f"NoValidTheta: {exc}")
            return EXIT_BUDGET
        _emit(args, {"group": args.group, "q": args.q, "punctures": args.punctures, "theta": rep.theta,
                     "orbits": rep.lhs, "weighted_fixed_points": str(rep.rhs), "burnside": str(rep.burnside),
                     "equal": rep.equal, "strict_violations": len(rep.strict_violations)},
              f"orbits={rep.lhs} weighted={rep.rhs} equal={rep.equal}")
        return EXIT_OK if rep.equal else EXIT_CHECK
    if args.what == "indecomposable":
        if args.so5_appendix:
            flags, _, t = reduce_mod_p(args.q)
            rep = oracle.is_abs_indecomposable("SO5", flags, args.q, args.q)
            st = oracle.stabilizer("SO5", flags, args.q)
            t_in = any(np.array_equal(x, t) for x in st)
            _emit(args, {"verdict": rep.verdict, "stabilizer_order": rep.stabilizer_order,
                         "t_in_stabilizer": t_in,
                         "witness_roots": sorted(rep.witness_roots) if rep.witness_roots is not None else None},
                  f"indecomposable={rep.verdict} |Stab|={rep.stabilizer_order} t in Stab: {t_in}")
            return EXIT_OK
        if not args.flags:
            raise UsageError("give --flags i,j,k (flag indices) or --so5-appendix")
        reps, _ = oracle._flag_table(args.group, args.q)
        idx = [int(x) for x in args.flags.split(",")]
        if any(not 0 <= i < len(reps) for i in idx):
            raise UsageError(f"flag indices must lie in [0, {len(reps)})")
        rep = oracle.is_abs_indecomposable(args.group, [reps[i] for i in idx], args.q, args.s_field)
        _emit(args, {"verdict": rep.verdict, "stabilizer_order": rep.stabilizer_order},
              f"indecomposable={rep.verdict} |Stab|={rep.stabilizer_order}")
        return EXIT_OK
    raise UsageError(f"unknown oracle command {args.what}")


def cmd_verify_so5_appendix(args) -> int:
    rep = verify_so5_appendix()
    payload = {"passed": rep.passed, "checks": [c.__dict__ for c in rep.checks]}
    text = "\n".join(f"[{'PASS' if c.passed else 'FAIL'}] ({c.step}) {c.name}" + (f": {c.detail}" if c.detail else "")
                     for c in rep.checks)
    _emit(args, payload, text)
    return EXIT_OK if rep.passed else EXIT_CHECK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="isogreen", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON output")
    common.add_argument("--cache", help="liedata cache file (default $ISOGREEN_CACHE or ./liedata-cache.json)")
    common.add_argument("--threads", type=int, default=0, help="worker processes for fitting")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--refit", action="store_true", help="ignore cached class tables")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("subsystems", parents=[common])
    s.add_argument("--group", required=True)
    s.add_argument("--kind", choices=["pseudo-levi", "levi", "isolated"], default="pseudo-levi")
    s.set_defaults(func=cmd_subsystems)

    s = sub.add_parser("mobius", parents=[common])
    s.add_argument("--group", required=True)
    s.add_argument("--kind", choices=["pseudo-levi", "levi"], default="pseudo-levi")
    s.set_defaults(func=cmd_mobius)

    s = sub.add_parser("check-generic", parents=[common])
    s.add_argument("--group", required=True)
    s.add_argument("--tuple", help='ambient coordinates, e.g. "1/2,-1/2;1,-1;3,-3"; use x+y*r6 for sqrt 6')
    s.add_argument("--search", action="store_true", help="search for a generic tuple instead")
    s.add_argument("--punctures", type=int, default=3)
    s.add_argument("--field", default="Q", help="Q or q6 for the search")
    s.add_argument("--no-central-check", action="store_true", help="skip the sum-in-centre condition")
    s.set_defaults(func=cmd_check_generic)

    s = sub.add_parser("liedata", parents=[common])
    s.add_argument("action", choices=["fit"])
    s.add_argument("--group", required=True)
    s.add_argument("--q", dest="samples", default=None, help="sample fields, e.g. 3,5,7,9,11")
    s.add_argument("--holdout", default=None, help="held-out q for re-verification, or none")
    s.set_defaults(func=cmd_liedata_fit)

    s = sub.add_parser("count", parents=[common])
    s.add_argument("what", choices=["multiplicity", "charvar"])
    s.add_argument("--group", required=True)
    s.add_argument("--genus", type=int, default=0)
    s.add_argument("--punctures", type=int, default=3)
    s.add_argument("--decompose", action="store_true")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("oracle", parents=[common])
    s.add_argument("what", choices=["scan-theorem", "green", "multiplicity", "analogue57", "indecomposable"])
    s.add_argument("--group", default="SL2")
    s.add_argument("--q", type=int, default=3)
    s.add_argument("--punctures", type=int, default=3)
    s.add_argument("--genus", type=int, default=0)
    s.add_argument("--s-field", type=int, default=None, help="field for the semisimple tuple and stabilizers")
    s.add_argument("--theta", help="torus character exponents, comma separated, rank entries per character")
    s.add_argument("--flags", help="flag indices for indecomposable")
    s.add_argument("--so5-appendix", action="store_true", help="reduce the worked SO5 example mod q")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("verify-so5-appendix", parents=[common])
    s.set_defaults(func=cmd_verify_so5_appendix)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (oracle.SearchBudgetExceeded, oracle.ExtensionBudgetExceeded, genericity.SearchExhausted,
            genericity.BudgetExceeded, TooLarge, UnsupportedPreset, liedata.UnsupportedLeviType) as exc:
        print(f"unsupported or over budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (AppendixCheckFailed, counting.NonPolynomialResult, counting.DecompositionMismatch,
            liedata.InterpolationMismatch, oracle.NonIntegralResult) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
