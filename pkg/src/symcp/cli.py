"""Command line: ``symcp run``, ``symcp gen`` and ``symcp verify``."""
from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional, Sequence

from .bench import AisInstance, InstanceParseError, dumps, gen_coloring, gen_concert_hall, load
from .engine import ConfigError
from .harness import (EXIT_BUDGET, EXIT_OK, EXIT_USAGE, RUN_METHODS, SUITES, OracleBoundExceeded, RunConfig,
                      run_trials, to_csv, to_json, verify)


def parse_gen(text: str) -> tuple[str, dict]:
    """``coloring:n=12,max_part=4`` -> ("coloring", {"n": 12, "max_part": 4})."""
    family, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        if not eq:
            raise ConfigError(f"bad generator parameter {item!r}, expected key=value")
        try:
            params[key.strip()] = int(value)
        except ValueError:
            raise ConfigError(f"generator parameter {key!r} must be an integer") from None
    return family.strip(), params


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symcp", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="solve instances and print one record per run")
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--instance", help="instance file")
    src.add_argument("--gen", help="generator, e.g. ais:n=11, coloring:n=12,max_part=8 or concert:n=8,m=2")
    r.add_argument("--family", choices=("ais", "coloring", "concert"),
                   help="required with --instance when the file kind should be checked")
    r.add_argument("--method", choices=RUN_METHODS, default="none")
    r.add_argument("--value-order", choices=("lex", "antilex", "random"), default="lex")
    r.add_argument("--symmetry", help="all-interval group element to post statically (id, rev, inv, inv_rev)")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--cutoff", type=int, help="branches per restart (restarts only)")
    r.add_argument("--time-limit", type=float, default=600.0, help="seconds per run")
    r.add_argument("--count-all", action="store_true", help="count every solution (all-interval series)")
    r.add_argument("--trials", type=int, default=1, help="independent runs with seeds seed, seed+1, ...")
    r.add_argument("--format", choices=("csv", "json"), default="csv")

    g = sub.add_parser("gen", help="write a generated instance to stdout or a file")
    g.add_argument("generator", help="e.g. coloring:n=12,max_part=8")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")

    v = sub.add_parser("verify", help="oracle-backed verification suites (JSON report)")
    v.add_argument("suite", choices=tuple(SUITES))
    v.add_argument("--ais", default="5,6,7", help="comma-separated series lengths")
    v.add_argument("--toys", type=int, default=50, help="number of random piecewise toy problems")
    v.add_argument("--seed", type=int, default=0)
    return p


def _cmd_run(args) -> int:
    if args.trials < 1:
        raise ConfigError("--trials must be at least 1")
    if args.gen:
        family, params = parse_gen(args.gen)
        path = None
    else:
        family = args.family or load(args.instance).kind
        params, path = {}, args.instance
    cfg = RunConfig(family=family, method=args.method, instance_path=path, gen=params,
                    value_order=args.value_order, seed=args.seed, cutoff=args.cutoff,
                    time_limit=args.time_limit, count_all=args.count_all, symmetry=args.symmetry)
    records = run_trials(cfg, args.trials)
    sys.stdout.write(to_csv(records) if args.format == "csv" else to_json(records) + "\n")
    return EXIT_BUDGET if any(r.cutoff for r in records) else EXIT_OK


def _cmd_gen(args) -> int:
    family, params = parse_gen(args.generator)
    rng = random.Random(args.seed)
    try:
        if family == "ais":
            inst = AisInstance(params.get("n", 11))
        elif family == "coloring":
            inst = gen_coloring(params.get("n", 12), params.get("max_part", 8), rng)
        elif family == "concert":
            inst = gen_concert_hall(params.get("n", 8), params.get("m", 2), params.get("max_part", 8), rng)
        else:
            raise ConfigError(f"unknown family {family!r}")
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    text = dumps(inst)
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_verify(args) -> int:
    params = {}
    if args.suite in ("observations", "properness"):
        params["ais_ns"] = _int_list(args.ais)
    if args.suite in ("observations", "sbds-soundness"):
        params["toys"] = args.toys
        params["seed"] = args.seed
    report = verify(args.suite, **params)
    json.dump({"suite": args.suite, "checks": report,
               "passed": all(c["verdict"] == "pass" for c in report)}, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK if all(c["verdict"] == "pass" for c in report) else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "gen": _cmd_gen, "verify": _cmd_verify}[args.command]
    try:
        return handler(args)
    except (ConfigError, InstanceParseError, OracleBoundExceeded, OSError) as exc:
        print(f"symcp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
