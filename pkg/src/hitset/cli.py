"""Command-line interface.

Chains are read from ``--chain PATH`` (``-`` or omitted: standard input), so
``hitset construct ... | hitset profile`` works. Exit status: 0 on success,
1 when a check reports a violation, 2 on invalid input or usage.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import constructors as cons
from . import verifiers as ver
from .chain import Chain
from .errors import HitsetError
from .extremal import t_alpha, t_prod, t_profile
from .hitting import expected_hitting_times
from .mixing import DEFAULT_CAP, cesaro_mixing_time, mixing_report
from .samplers import random_chain
from .sim import DEFAULT_STEP_CAP, simulate_hitting, simulate_occupation


class InputError(HitsetError):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, allow_nan=False)


def _read_chain(path: str) -> Chain:
    try:
        if path in (None, "-"):
            data = json.load(sys.stdin)
        else:
            with open(path) as fh:
                data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read chain: {exc}") from None
    return Chain.from_dict(data)


def _states(chain: Chain, text: str):
    if text is None:
        raise InputError("missing state set")
    items = [s.strip() for s in text.split(",") if s.strip()]
    return chain.state_set(items)


def _labels(chain: Chain, s) -> list:
    return [chain.labels[x] if chain.labels else x for x in s.states]


# -- commands ---------------------------------------------------------------


def cmd_stationary(args, out):
    c = _read_chain(args.chain)
    if args.format == "csv":
        out.write("state,pi\n")
        for x, w in enumerate(c.pi):
            out.write(f"{c.labels[x] if c.labels else x},{w:.17g}\n")
    else:
        out.write(_dump({"labels": c.labels, "pi": c.pi.tolist()}) + "\n")
    return 0


def cmd_hit(args, out):
    c = _read_chain(args.chain)
    hv = expected_hitting_times(c, _states(c, args.target))
    if args.format == "csv":
        out.write("state,expected_hitting_time\n")
        for x, v in enumerate(hv.h):
            out.write(f"{c.labels[x] if c.labels else x},{v:.17g}\n")
    else:
        out.write(_dump({"target": _labels(c, hv.target), "h": hv.h.tolist()}) + "\n")
    return 0


def cmd_profile(args, out):
    prof = t_profile(_read_chain(args.chain))
    if args.format == "csv":
        out.write(prof.to_csv())
    else:
        out.write(_dump({"breakpoints": [list(b) for b in prof.breakpoints]}) + "\n")
    return 0


def cmd_talpha(args, out):
    c = _read_chain(args.chain)
    w = t_alpha(c, args.alpha)
    out.write(_dump({"alpha": w.alpha, "value": w.value, "set": _labels(c, w.set),
                     "measure": w.set.measure,
                     "start": c.labels[w.start] if c.labels else w.start}) + "\n")
    return 0


def cmd_tprod(args, out):
    out.write(_dump({"t_prod": t_prod(_read_chain(args.chain))}) + "\n")
    return 0


def cmd_mix(args, out):
    rep = mixing_report(_read_chain(args.chain), args.cap).to_dict()
    out.write(_dump({"t_mix": rep["t_mix"], "worst_tv_at_t": rep["worst_tv_at_t"]}) + "\n")
    return 0


def cmd_ces(args, out):
    t = cesaro_mixing_time(_read_chain(args.chain), args.cap)
    out.write(_dump({"t_ces": t if isinstance(t, int) else t.to_json()}) + "\n")
    return 0


def _safe_function(expr: str):
    env = {k: getattr(math, k) for k in dir(math) if not k.startswith("_")}
    env.update(min=min, max=max, abs=abs)
    code = compile(expr, "<expr>", "eval")
    for name in code.co_names:
        if name not in env and name != "a":
            raise InputError(f"name {name!r} not allowed in --expr")
    return lambda a: float(eval(code, {"__builtins__": {}}, {**env, "a": a}))


def cmd_construct(args, out):
    kind = args.kind
    if kind == "three-state":
        chain = cons.three_state_tight(args.alpha, args.eps)
    elif kind == "two-state":
        chain = cons.two_state_counterexample(args.gamma, args.N)
    elif kind == "lshaped":
        try:
            with open(args.spec) as fh:
                spec = cons.HittableStepSpec.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read spec: {exc}") from None
        chain = cons.l_shaped_from_spec(spec).chain
    else:
        spec = cons.dyadic_discretize(_safe_function(args.expr), args.n, bigN=args.N,
                                      normalize=args.normalize)
        chain = cons.l_shaped_from_spec(spec).chain
    out.write(_dump(chain.to_dict()) + "\n")
    return 0


def _emit(reports, out) -> int:
    bad = 0
    for r in reports:
        out.write(_dump(r.to_dict()) + "\n")
        bad += not r.holds
    return 1 if bad else 0


def _summarize(reports, out) -> int:
    summary = {}
    for r in reports:
        s = summary.setdefault(r.name, {"name": r.name, "checked": 0, "applicable": 0,
                                        "violations": 0, "min_slack": None})
        s["checked"] += 1
        if r.applicable:
            s["applicable"] += 1
            if s["min_slack"] is None or r.slack < s["min_slack"]:
                s["min_slack"] = r.slack
        if not r.holds:
            s["violations"] += 1
            out.write(_dump(r.to_dict()) + "\n")
    for name in sorted(summary):
        out.write(_dump(summary[name]) + "\n")
    return 1 if any(s["violations"] for s in summary.values()) else 0


def cmd_check(args, out):
    kind = args.kind
    if kind == "all":
        rng = np.random.default_rng(args.seed)
        if args.random:
            if args.states < 2:
                raise InputError("--states must be at least 2")
            reports = []
            for _ in range(args.random):
                reports += ver.all_checks(random_chain(args.states, rng), rng)
        else:
            reports = ver.all_checks(_read_chain(args.chain), rng)
        return _summarize(reports, out)
    c = _read_chain(args.chain)
    if kind == "star":
        reports = ver.check_star(c, args.alpha, args.beta)
    elif kind == "ratio":
        reports = [ver.check_ratio_bound(c, _states(c, args.a), _states(c, args.c))]
    elif kind == "dist":
        d = ver.auxiliary_decomposition(c, _states(c, args.a), _states(c, args.c))
        reports = [ver.check_dist_inequality(c, d)] + ver.check_dist_chain(c, d)
    elif kind == "occupation":
        d = ver.auxiliary_decomposition(c, _states(c, args.a), _states(c, args.c))
        reports = [ver.check_occupation_identity(c, d, _states(c, args.s))]
    elif kind == "lemma42":
        reports = [ver.check_lemma_4_2(c, _states(c, args.a), _states(c, args.b),
                                       _states(c, args.c), args.T)]
    else:
        reports = [ver.check_prop_4_1(c)]
    return _emit(reports, out)


def cmd_simulate(args, out):
    c = _read_chain(args.chain)
    if args.target is not None:
        est = simulate_hitting(c, args.start, _states(c, args.target), args.samples,
                               args.seed, args.step_cap)
    elif args.avoid is not None and args.count is not None:
        start = np.zeros(c.n)
        start[c.index(args.start)] = 1.0
        est = simulate_occupation(c, start, _states(c, args.avoid), _states(c, args.count),
                                  args.samples, args.seed, args.step_cap)
    else:
        raise InputError("simulate needs --target, or both --avoid and --count")
    out.write(_dump(est.to_dict()) + "\n")
    return 0


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hitset", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_chain(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--chain", default="-", help="chain JSON file ('-' for stdin)")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.set_defaults(func=func)
        return p

    with_chain("stationary", cmd_stationary, "stationary distribution")
    p = with_chain("hit", cmd_hit, "expected hitting times of a set")
    p.add_argument("--target", required=True, help="comma-separated states")
    with_chain("profile", cmd_profile, "the step function alpha -> T(alpha)")
    p = with_chain("talpha", cmd_talpha, "T(alpha) with its witness")
    p.add_argument("--alpha", type=float, required=True)
    with_chain("tprod", cmd_tprod, "max of pi(A) E_x[tau_A]")
    for name, func, help in (("mix", cmd_mix, "mixing time"),
                             ("ces", cmd_ces, "Cesaro mixing time")):
        p = with_chain(name, func, help)
        p.add_argument("--cap", type=int, default=DEFAULT_CAP)

    p = sub.add_parser("construct", help="print an example chain as JSON")
    p.set_defaults(func=cmd_construct)
    csub = p.add_subparsers(dest="kind", required=True)
    q = csub.add_parser("three-state")
    q.add_argument("--alpha", type=float, required=True)
    q.add_argument("--eps", type=float, required=True)
    q = csub.add_parser("two-state")
    q.add_argument("--gamma", type=float, required=True)
    q.add_argument("--N", type=float, required=True)
    q = csub.add_parser("lshaped")
    q.add_argument("--spec", required=True, help="spec JSON file")
    q = csub.add_parser("dyadic")
    q.add_argument("--expr", required=True, help="f as an expression in a, e.g. 'min(1/a, 5)'")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--N", type=float, default=None)
    q.add_argument("--normalize", action="store_true", help="divide f by f(1/2)")

    p = sub.add_parser("check", help="verify inequalities; exit 1 on a violation")
    p.set_defaults(func=cmd_check)
    ksub = p.add_subparsers(dest="kind", required=True)

    def check(name, *sets):
        q = ksub.add_parser(name)
        q.add_argument("--chain", default="-")
        for s in sets:
            q.add_argument(f"--{s}", required=True, help="comma-separated states")
        return q

    q = check("star")
    q.add_argument("--alpha", type=float, required=True)
    q.add_argument("--beta", type=float, required=True)
    check("ratio", "a", "c")
    check("dist", "a", "c")
    check("occupation", "a", "c", "s")
    q = check("lemma42", "a", "b", "c")
    q.add_argument("--T", type=float, required=True)
    check("prop41")
    q = check("all")
    q.add_argument("--random", type=int, default=0, help="number of random chains")
    q.add_argument("--states", type=int, default=6)
    q.add_argument("--seed", type=int, default=0)

    p = with_chain("simulate", cmd_simulate, "Monte Carlo hitting or occupation time")
    p.add_argument("--start", required=True)
    p.add_argument("--target")
    p.add_argument("--avoid")
    p.add_argument("--count")
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step-cap", type=int, default=DEFAULT_STEP_CAP)
    return parser


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except HitsetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
