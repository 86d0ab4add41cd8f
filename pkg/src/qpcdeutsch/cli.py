"""Command-line front end emitting plot-ready CSV/JSON.

Exit codes: 0 success, 1 self-check failure, 2 usage or validation error,
3 degenerate result (no conditioning events in a Monte-Carlo run).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import asymptotics as asy
from . import function_space as fs
from . import selfcheck
from .combinatorics import profile_multiplicities
from .ftm import (outcome_distribution, pr_constant_indication,
                  pr_constant_subspace)
from .inference import posterior_table
from .montecarlo import ExperimentConfig, run_experiment

EXIT_OK = 0
EXIT_SELFCHECK = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3

DEFAULT_PRECISION = 12

# name -> (subcommand, overrides)
PRESETS = {
    "fig1": ("worstcase", {"samples": 101}),
    "fig2": ("posterior", {"n": 8, "m": 2, "kmax": 7, "algorithm": "both"}),
    "fig3": ("posterior", {"n": 16, "m": 2, "kmax": 15, "algorithm": "both"}),
    "fig4": ("posterior", {"n": 16, "m": 8, "kmax": 15, "algorithm": "both"}),
    "fig5": ("posterior", {"n": 24, "m": 24, "kmax": 23, "algorithm": "both"}),
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    destination: str | None = None
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")
        if not 3 <= self.precision <= 17:
            raise UsageError("precision must be between 3 and 17")

    def num(self, x) -> str:
        return f"{float(x):.{self.precision}g}"

    def jnum(self, x) -> float:
        return float(self.num(x))

    def write(self, text: str) -> None:
        if self.destination in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(self.destination, "w", newline="") as fh:
                fh.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _exact(x: Fraction | None):
    if x is None:
        return None
    return {"numerator": str(x.numerator), "denominator": str(x.denominator)}


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required")


def _output(args) -> OutputSpec:
    return OutputSpec(args.format, args.out, args.precision)


def cmd_dist(args) -> int:
    _require(args, "function", "m")
    out = _output(args)
    f = fs.FunctionSpec.parse(args.function, args.m)
    dist = outcome_distribution(f)
    if out.format == "csv":
        rows = [(a, b, out.num(p), c.value) for a, b, p, c in dist.rows()]
        out.write(_csv(["alpha", "beta", "probability", "class"], rows))
    else:
        out.write(_json({
            "function": list(f.values),
            "n_domain": f.n_domain,
            "m_range": f.m_range,
            "probabilities": [[out.jnum(p) for p in row]
                              for row in dist.probabilities],
            "class_totals": {c.value: out.jnum(p)
                             for c, p in dist.class_totals.items()},
            "outcomes": [{"alpha": a, "beta": b, "probability": out.jnum(p),
                          "class": c.value} for a, b, p, c in dist.rows()],
        }))
    return EXIT_OK


def cmd_inspect(args) -> int:
    _require(args, "function", "m")
    out = _output(args)
    f = fs.FunctionSpec.parse(args.function, args.m)
    info = {
        "function": list(f.values),
        "n_domain": f.n_domain,
        "m_range": f.m_range,
        "constant": fs.is_constant(f),
        "row_sums": list(fs.row_sums(f)),
        "row_profile": list(fs.row_profile(f).counts),
        "pr_constant_subspace": _exact(pr_constant_subspace(f)),
        "pr_constant_indication": _exact(pr_constant_indication(f)),
    }
    if out.format == "json":
        out.write(_json(info))
    else:
        rows = [(k, v if not isinstance(v, (list, dict)) else json.dumps(v))
                for k, v in info.items()]
        out.write(_csv(["field", "value"], rows))
    return EXIT_OK


def cmd_posterior(args) -> int:
    _require(args, "n", "m", "kmax")
    out = _output(args)
    quantum = args.algorithm in ("quantum", "both")
    classical = args.algorithm in ("classical", "both")
    if args.n < 1 or args.m < 1 or args.kmax < 1:
        raise UsageError("--n, --m and --kmax must be positive")
    if classical and args.kmax > args.n:
        raise UsageError(
            f"--kmax {args.kmax} exceeds --n {args.n} for the classical column")
    rows = posterior_table(args.n, args.m, args.kmax, quantum, classical)

    def dec(x):
        return "" if x is None else out.num(x)

    if out.format == "csv":
        header = ["k"] + [c for c, on in (("quantum", quantum),
                                          ("classical", classical)) if on]
        body = []
        for r in rows:
            line = [r.k]
            if quantum:
                line.append(dec(r.quantum))
            if classical:
                line.append(dec(r.classical))
            body.append(line)
        out.write(_csv(header, body))
    else:
        out.write(_json({
            "n_domain": args.n,
            "m_range": args.m,
            "kmax": args.kmax,
            "rows": [{
                "k": r.k,
                "quantum": None if r.quantum is None else out.jnum(r.quantum),
                "quantum_exact": _exact(r.quantum),
                "classical": None if r.classical is None else out.jnum(r.classical),
                "classical_exact": _exact(r.classical),
            } for r in rows],
        }))
    return EXIT_OK


def cmd_worstcase(args) -> int:
    out = _output(args)
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    curve = asy.figure1_curve(args.samples)
    meta = {"samples": args.samples,
            "crossing_eta": out.jnum(asy.crossing_point()),
            "crossing_tolerance": asy.CROSSING_TOL}
    if out.format == "csv":
        rows = [(out.num(c.eta), out.num(c.quantum_eps), out.num(c.classical_eps))
                for c in curve]
        out.write(_csv(["eta", "quantum_eps", "classical_eps"], rows))
        if out.destination in (None, "-"):
            sys.stderr.write(json.dumps(meta) + "\n")
        else:
            with open(out.destination + ".meta.json", "w") as fh:
                fh.write(_json(meta))
    else:
        out.write(_json({
            "metadata": meta,
            "rows": [{"eta": out.jnum(c.eta), "quantum_eps": out.jnum(c.quantum_eps),
                      "classical_eps": out.jnum(c.classical_eps)} for c in curve],
        }))
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    _require(args, "n", "m", "k")
    out = _output(args)
    try:
        config = ExperimentConfig(args.n, args.m, args.k, args.trials, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    est = run_experiment(config, workers=args.workers)
    report = {
        "config": {"n_domain": config.n_domain, "m_range": config.m_range,
                   "k": config.k_target, "trials": config.trials,
                   "seed": config.seed},
        "conditioning_events": est.conditioning_events,
        "constant_and_conditioned": est.constant_and_conditioned,
        "not_constant_verdicts": est.not_constant_verdicts,
        "fail_outcomes": est.fail_outcomes,
        "error_outcomes": est.error_outcomes,
        "total_outcomes": est.total_outcomes,
        "estimate": None if est.estimate is None else out.jnum(est.estimate),
        "std_error": None if est.std_error is None else out.jnum(est.std_error),
        "exact_posterior": out.jnum(est.exact),
        "exact_posterior_rational": _exact(est.exact),
        "fail_frequency": out.jnum(est.fail_frequency),
        "agreement": est.agrees(),
        "fail_agreement": est.fail_agrees(config.m_range),
    }
    if out.format == "json":
        out.write(_json(report))
    else:
        flat = {k: v for k, v in report.items() if not isinstance(v, dict)}
        flat.update(report["config"])
        flat["exact_posterior_rational"] = str(est.exact)
        out.write(_csv(list(flat), [list(flat.values())]))
    if not est.defined:
        print("no trial produced the required number of constant indications; "
              "estimate undefined", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_profiles(args) -> int:
    _require(args, "n", "m")
    out = _output(args)
    if args.n < 1 or args.m < 1:
        raise UsageError("--n and --m must be positive")
    pms = profile_multiplicities(args.n, args.m)
    header = [f"j{l}" for l in range(args.n + 1)] + ["count"]
    if out.format == "csv":
        out.write(_csv(header, [list(pm.profile.counts) + [pm.count] for pm in pms]))
    else:
        out.write(_json([{"profile": list(pm.profile.counts), "count": str(pm.count)}
                         for pm in pms]))
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    return EXIT_OK if selfcheck.run(args.level, sys.stdout) else EXIT_SELFCHECK


def _add_output(p, default_format="csv"):
    p.add_argument("--format", choices=["csv", "json"], default=default_format)
    p.add_argument("--out", metavar="PATH", default=None,
                   help="output file (default: standard output)")
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                   help="significant digits, 3..17 (default 12)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpcdeutsch",
        description="Generalized Deutsch algorithm: measurement statistics "
                    "and posterior probabilities of constancy.")
    parser.add_argument("--config", metavar="PATH",
                        help="key=value file supplying defaults for flags")
    parser.add_argument("--cap", type=int, default=None,
                        help=f"enumeration cap on M**N (default {fs.ENUMERATION_CAP})")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("dist", help="outcome distribution of one function")
    p.add_argument("function", nargs="?", help='comma-separated values, e.g. "0,1,0"')
    p.add_argument("--m", type=int)
    _add_output(p)
    p.set_defaults(handler=cmd_dist)

    p = sub.add_parser("inspect", help="row structure and exact likelihoods of a function")
    p.add_argument("function", nargs="?")
    p.add_argument("--m", type=int)
    _add_output(p, "json")
    p.set_defaults(handler=cmd_inspect)

    p = sub.add_parser("posterior", help="posterior table Pr(const|k), k=1..kmax")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--kmax", "--k", dest="kmax", type=int)
    p.add_argument("--algorithm", choices=["quantum", "classical", "both"],
                   default="both")
    _add_output(p)
    p.set_defaults(handler=cmd_posterior)

    p = sub.add_parser("worstcase", help="large-N worst-case error curves")
    p.add_argument("--samples", type=int, default=101)
    _add_output(p)
    p.set_defaults(handler=cmd_worstcase)

    p = sub.add_parser("montecarlo", help="simulate the k-indication protocol")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--trials", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    _add_output(p, "json")
    p.set_defaults(handler=cmd_montecarlo)

    p = sub.add_parser("profiles", help="row profiles with multiplicities")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    _add_output(p)
    p.set_defaults(handler=cmd_profiles)

    p = sub.add_parser("selfcheck", help="run invariant suites")
    p.add_argument("level", nargs="?", choices=["fast", "full"], default="fast")
    p.set_defaults(handler=cmd_selfcheck)

    for name, (target, overrides) in PRESETS.items():
        p = sub.add_parser(name, help=f"alias for {target} with the {name} settings")
        _add_output(p)
        p.set_defaults(handler=None, preset=name)
    return parser


def read_config(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.lstrip("-").replace("-", "_")] = value
    return values


def _apply_config(parser, argv, config: dict) -> None:
    """Install config values as defaults on the selected subcommand."""
    probe, _ = parser.parse_known_args(argv)
    if probe.command is None:
        return
    subparsers = next(a for a in parser._actions
                      if isinstance(a, argparse._SubParsersAction))
    targets = [parser, subparsers.choices[probe.command]]
    for target in targets:
        for action in target._actions:
            if action.dest in config:
                raw = config[action.dest]
                value = action.type(raw) if action.type else raw
                if action.choices is not None and value not in action.choices:
                    raise UsageError(f"config value {action.dest}={raw!r} is not "
                                     f"one of {list(action.choices)}")
                target.set_defaults(**{action.dest: value})


def _expand_preset(args) -> argparse.Namespace:
    target, overrides = PRESETS[args.preset]
    handlers = {"posterior": cmd_posterior, "worstcase": cmd_worstcase}
    ns = argparse.Namespace(**vars(args))
    for key, value in overrides.items():
        setattr(ns, key, value)
    ns.handler = handlers[target]
    return ns


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv)
        if known.config:
            _apply_config(parser, argv, read_config(known.config))
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help()
            return EXIT_USAGE
        if args.cap is not None:
            fs.ENUMERATION_CAP = args.cap
        if getattr(args, "preset", None):
            args = _expand_preset(args)
        return args.handler(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"qpcdeutsch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except fs.ResourceLimitError as exc:
        print(f"qpcdeutsch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
