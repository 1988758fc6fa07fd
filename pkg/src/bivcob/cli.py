"""Command-line interface.

Exit codes: 0 success, 1 an identity or axiom failed, 2 usage error.
Output depends only on the flags.
"""
import argparse
import json
import sys

from . import acceptance
from .bivariant.checks import ALL_CHECKS, TRANSFORM_CHECKS, run_check, theory_for
from .chern import (
    ChernVector,
    character_series,
    chern_twist,
    h_series,
    nilpotent_algebra,
    todd_inverse_series,
)
from .exactalg.ring import QQ
from .exactalg.syntax import parse_rational
from .fgl import (
    TwistData,
    additive_specialization,
    law_by_name,
    multiplicative_specialization,
    twist,
    universal_fgl,
)
from .spaces import MAX_HRR_D, MAX_HRR_N, grr_check

MAX_CAP = 9  # universal law at degree 8 builds in well under a second
MAX_RANK = 4
LAWS = ("universal", "additive", "multiplicative")


class UsageError(Exception):
    pass


def _emit(obj, text, as_json):
    if as_json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(text)


def _cap(value, lo=1, hi=MAX_CAP, what="cap"):
    if not lo <= value <= hi:
        raise UsageError(f"{what} must be between {lo} and {hi}")
    return value


def _law(args):
    _cap(args.cap)
    if args.law == "universal" and args.cap < 2:
        raise UsageError("the universal law needs cap >= 2")
    beta = None if args.beta is None else parse_rational(args.beta)
    return law_by_name(args.law, args.cap, beta)


def _tau(text):
    try:
        bs = [parse_rational(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"bad tau list {text!r}: {exc}")
    if not bs or bs[0] != 1:
        raise UsageError("tau must start with 1")
    return bs


# -- fgl -------------------------------------------------------------------------


def cmd_fgl(args):
    if args.action == "universal":
        _cap(args.degree, 1, MAX_CAP - 1, "degree")
        law = universal_fgl(args.degree)
        _emit(law.to_json(), f"F = {law.F}", args.json)
        return 0
    if args.action == "specialize":
        _cap(args.degree, 1, MAX_CAP - 1, "degree")
        U = universal_fgl(args.degree)
        if args.to == "additive":
            hom = additive_specialization(U.ring)
        else:
            beta = None if args.beta is None else parse_rational(args.beta)
            hom = multiplicative_specialization(U.ring, beta=beta)
        law = U.specialize(hom, name=args.to)
        _emit(law.to_json(), f"F = {law.F}", args.json)
        return 0
    law = _law(args)
    if args.action == "inverse":
        s = law.inverse
        _emit({"law": law.name, "cap": law.cap, "inverse": s.to_json()}, f"iota(x) = {s}", args.json)
    elif args.action == "difference":
        s = law.difference
        _emit({"law": law.name, "cap": law.cap, "difference": s.to_json()}, f"F_(x, y) = {s}", args.json)
    elif args.action == "log":
        if law.ring.domain != "QQ":
            law = law.tensor_q()
        s = law.log()
        _emit({"law": law.name, "cap": law.cap, "log": s.to_json()}, f"log(x) = {s}", args.json)
    elif args.action == "twist":
        if args.tau is None:
            raise UsageError("fgl twist needs --tau")
        bs = _tau(args.tau)
        if law.ring.domain != "QQ":
            law = law.tensor_q()
        cap = min(law.cap, len(bs))
        t = TwistData.from_b(bs, QQ, cap)
        out = twist(law, t)
        obj = {"tau": t.to_json(), "law": out.to_json()}
        _emit(obj, f"g(x) = {t.g}\nF_tau = {out.F}", args.json)
    return 0


# -- chern -----------------------------------------------------------------------


def cmd_chern(args):
    _cap(args.rank, 1, MAX_RANK, "rank")
    if args.action == "h-series":
        law = _law(args)
        if not 1 <= args.index <= args.rank:
            raise UsageError("need 1 <= index <= rank")
        s = h_series(law, args.rank, args.index, minus=args.minus)
        name = "H_minus" if args.minus else "H"
        obj = {"law": law.name, "rank": args.rank, "index": args.index, "minus": args.minus, "series": s.to_json()}
        _emit(obj, f"{name}^{args.index} = {s}", args.json)
    elif args.action == "twist":
        law = _law(args)
        roots = [f"u{i}" for i in range(1, args.rank + 1)]
        A = nilpotent_algebra(law.ring, roots + ["w"], law.cap + 1, cap=law.cap)
        E = ChernVector(law, A, roots=[A.gen(u) for u in roots])
        out = chern_twist(E, A.gen("w"))
        obj = {"law": law.name, "bundle": E.to_json(), "twisted": out.to_json()}
        text = "\n".join(f"c{i}(E (x) L) = {c}" for i, c in enumerate(out.classes, 1))
        _emit(obj, text, args.json)
    elif args.action == "todd":
        bs = _tau(args.tau or "1,1/2,1/12,0,-1/720")
        _cap(args.cap)
        t = TwistData.from_b(bs, QQ, min(args.cap + 1, len(bs)))
        s = todd_inverse_series(t, args.rank)
        _emit({"tau": [str(b) for b in bs], "rank": args.rank, "series": s.to_json()}, f"Td^-1 = {s}", args.json)
    elif args.action == "character":
        _cap(args.cap)
        s = character_series(args.rank, args.cap)
        _emit({"rank": args.rank, "series": s.to_json()}, f"ch = {s}", args.json)
    return 0


# -- hrr -------------------------------------------------------------------------


def cmd_hrr(args):
    if not 0 <= args.n <= MAX_HRR_N or abs(args.d) > MAX_HRR_D:
        raise UsageError(f"need 0 <= n <= {MAX_HRR_N} and |d| <= {MAX_HRR_D}")
    r = grr_check(args.n, args.d)
    text = (
        f"chi(P^{r['n']}, O({r['d']})): K-side {r['k_side']} = CH-side {r['ch_side']} = "
        f"binomial {r['binomial']}: {'agree' if r['agree'] else 'DISAGREE'}"
    )
    _emit(r, text, args.json)
    return 0 if r["agree"] else 1


# -- bivariant -------------------------------------------------------------------


def _budget(args):
    if not 1 <= args.max_size <= 6:
        raise UsageError("max-size must be between 1 and 6")
    if not 0 <= args.max_fiber <= 6:
        raise UsageError("max-fiber must be between 0 and 6")
    if args.trials < 0:
        raise UsageError("trials must be non-negative")
    return {"max_size": args.max_size, "max_fiber": args.max_fiber, "trials": args.trials, "seed": args.seed}


def _report_line(r):
    status = "pass" if r["passed"] else "FAIL"
    return (
        f"{r['check']} [{r['theory']}]: {status} "
        f"({r['exhaustive_cases']} exhaustive, {r['random_trials']} random, seed {r['seed']})"
    )


def _run_reports(names, theory_factory, budget, as_json):
    reports = [run_check(n, theory_factory(), **budget) for n in names]
    if as_json:
        print(json.dumps(reports, indent=2, sort_keys=True))
    else:
        for r in reports:
            print(_report_line(r))
            if r["counterexample"] is not None:
                print("  counterexample: " + json.dumps(r["counterexample"], sort_keys=True))
    return 0 if all(r["passed"] for r in reports) else 1


def cmd_bivariant(args):
    budget = _budget(args)
    if args.action == "check":
        names = ALL_CHECKS if args.axiom == "all" else (args.axiom,)
        try:
            theory_for(args.mutate)
        except KeyError as exc:
            raise UsageError(str(exc.args[0]))
        return _run_reports(names, lambda: theory_for(args.mutate), budget, args.json)
    names = TRANSFORM_CHECKS if args.op == "all" else (f"transform-{args.op}",)
    return _run_reports(names, lambda: theory_for(None), budget, args.json)


# -- selftest --------------------------------------------------------------------


def cmd_selftest(args):
    results = acceptance.run_suite(twice=args.twice)
    if args.json:
        print(acceptance.as_json(results))
    else:
        print(acceptance.render(results[:-1]), end="")
        last = results[-1]
        status = {True: "PASS", False: "FAIL", None: "INFO"}[last["passed"]]
        print(f"criterion 9 {status} {last['name']}: {last['detail']}")
    return 0 if all(r["passed"] is not False for r in results) else 1


# -- parser ----------------------------------------------------------------------


def _add_law_flags(p, cap=5):
    p.add_argument("--law", choices=LAWS, default="universal")
    p.add_argument("--cap", type=int, default=cap, help="truncation degree (universal: W + 1)")
    p.add_argument("--beta", help="rational value of beta for the multiplicative law")


def build_parser():
    parser = argparse.ArgumentParser(prog="bivcob", description="Formal group laws, Chern classes and bivariant checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    fgl = sub.add_parser("fgl", help="formal group laws")
    fgl.add_argument("action", choices=["universal", "inverse", "difference", "log", "specialize", "twist"])
    fgl.add_argument("--degree", type=int, default=3, help="Lazard weight W for universal/specialize")
    fgl.add_argument("--to", choices=["additive", "multiplicative"], default="multiplicative")
    fgl.add_argument("--tau", help="comma-separated b-values, e.g. 1,1/2,1/12")
    _add_law_flags(fgl)
    fgl.add_argument("--json", action="store_true")
    fgl.set_defaults(func=cmd_fgl)

    ch = sub.add_parser("chern", help="Chern class calculus")
    ch.add_argument("action", choices=["h-series", "twist", "todd", "character"])
    ch.add_argument("--rank", type=int, default=2)
    ch.add_argument("--index", type=int, default=1)
    ch.add_argument("--minus", action="store_true", help="use the difference law (untwisting)")
    ch.add_argument("--tau", help="comma-separated b-values for todd")
    _add_law_flags(ch, cap=4)
    ch.add_argument("--json", action="store_true")
    ch.set_defaults(func=cmd_chern)

    hrr = sub.add_parser("hrr", help="Riemann-Roch on projective space")
    hrr.add_argument("--n", type=int, required=True)
    hrr.add_argument("--d", type=int, required=True)
    hrr.add_argument("--json", action="store_true")
    hrr.set_defaults(func=cmd_hrr)

    biv = sub.add_parser("bivariant", help="bivariant axioms on finite sets")
    biv.add_argument("action", choices=["check", "transform"])
    biv.add_argument("--axiom", choices=["all"] + list(ALL_CHECKS), default="all")
    biv.add_argument("--op", choices=["all", "product", "pushforward", "pullback", "theta"], default="all")
    biv.add_argument("--max-size", type=int, default=4)
    biv.add_argument("--max-fiber", type=int, default=3)
    biv.add_argument("--trials", type=int, default=1000)
    biv.add_argument("--seed", type=int, default=42)
    biv.add_argument("--mutate", choices=["product", "pullback"], help="corrupt one operation")
    biv.add_argument("--json", action="store_true")
    biv.set_defaults(func=cmd_bivariant)

    st = sub.add_parser("selftest", help="run the acceptance suite")
    st.add_argument("--twice", action="store_true", help="rerun in-process and compare reports")
    st.add_argument("--json", action="store_true")
    st.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"bivcob: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
