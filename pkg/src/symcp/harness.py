"""Batch runs and oracle-backed verification suites."""
from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from . import oracle
from .bench import (AisInstance, ColoringInstance, Instance, ais_model, build_model,
                    gen_coloring, gen_concert_hall, gen_toy, load, model_factory)
from .engine import DEFAULT_TIME_LIMIT, ConfigError, Search, search, search_with_restarts
from .static import ais_sets, static_strategy
from .symmetry import AIS_NAMES, ais_group, class_counts

RUN_METHODS = ("static-lex", "static-antilex", "static-random", "restarts", "dynamic", "sbds-pair", "none")
CSV_COLUMNS = ("family", "instance", "method", "value_order", "seed", "opt", "proved", "branches",
               "backtracks", "restarts", "time_s")
RESTART_GROWTH = 1.5

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3


class OracleBoundExceeded(ValueError):
    pass


@dataclass
class RunConfig:
    family: str  # ais | coloring | concert
    method: str
    instance_path: Optional[str] = None
    gen: dict = field(default_factory=dict)  # generator parameters when no path is given
    value_order: str = "lex"
    seed: int = 0
    cutoff: Optional[int] = None
    time_limit: float = DEFAULT_TIME_LIMIT
    count_all: bool = False
    symmetry: Optional[str] = None  # explicit AIS group element for static posting

    def validate(self) -> None:
        if self.method not in RUN_METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if (self.method == "restarts") != (self.cutoff is not None):
            raise ConfigError("a branch cutoff is required with restarts and only with restarts")
        if self.cutoff is not None and self.cutoff <= 0:
            raise ConfigError("cutoff must be positive")
        if self.value_order not in ("lex", "antilex", "random"):
            raise ConfigError(f"unknown value order {self.value_order!r}")
        if self.family not in ("ais", "coloring", "concert"):
            raise ConfigError(f"unknown family {self.family!r}")
        if self.symmetry is not None and (self.family != "ais" or self.symmetry not in AIS_NAMES):
            raise ConfigError("--symmetry names an all-interval group element: " + ", ".join(AIS_NAMES))
        if self.count_all and self.family != "ais":
            raise ConfigError("count-all is for satisfaction problems (ais)")


@dataclass
class RunRecord:
    family: str
    instance: str
    method: str
    value_order: str
    seed: int
    opt: Optional[int]
    proved: bool
    branches: int
    backtracks: int
    restarts: int
    time_s: float
    cutoff: bool = False

    def row(self) -> dict:
        d = asdict(self)
        d.pop("cutoff")
        return d


def make_instance(cfg: RunConfig) -> Instance:
    if cfg.instance_path:
        inst = load(cfg.instance_path)
        if inst.kind != cfg.family:
            raise ConfigError(f"instance is {inst.kind!r}, not {cfg.family!r}")
        return inst
    g = dict(cfg.gen)
    rng = random.Random(cfg.seed)
    if cfg.family == "ais":
        return AisInstance(int(g.get("n", 11)))
    if cfg.family == "coloring":
        return gen_coloring(int(g.get("n", 12)), int(g.get("max_part", 8)), rng)
    return gen_concert_hall(int(g.get("n", 8)), int(g.get("m", 2)), int(g.get("max_part", 8)), rng)


def _instance_label(cfg: RunConfig, inst: Instance) -> str:
    if cfg.instance_path:
        return cfg.instance_path
    params = ",".join(f"{k}={v}" for k, v in sorted(cfg.gen.items()))
    return f"{inst.kind}:{params}" if params else inst.kind


def run(cfg: RunConfig, inst: Optional[Instance] = None) -> RunRecord:
    cfg.validate()
    inst = inst or make_instance(cfg)
    label = _instance_label(cfg, inst)
    optimize = not isinstance(inst, AisInstance)
    method = cfg.method
    if method == "restarts":
        res = search_with_restarts(model_factory(inst, cfg.value_order), cfg.cutoff, cfg.seed,
                                   optimize=optimize, growth=RESTART_GROWTH if optimize else 1.0,
                                   time_limit=cfg.time_limit)
        stats = res.stats
        found = res.best is not None
        proved = stats.proved_optimal if optimize else found
        cut = stats.cutoff
    else:
        if method.startswith("static-"):
            kind = method.split("-", 1)[1]
            if isinstance(inst, AisInstance):
                model = ais_model(inst.n, "static", cfg.symmetry or kind, value_order=cfg.value_order,
                                  seed=cfg.seed)
            else:
                model = build_model(inst, "static", static_strategy(kind, cfg.seed), cfg.value_order, cfg.seed)
        else:
            core = "sbds" if method == "sbds-pair" else method
            model = build_model(inst, core, None, cfg.value_order, cfg.seed)
        s = Search(model, None, cfg.time_limit)
        if optimize:
            res = s.run("all", optimize=True)
        else:
            res = s.run("all" if cfg.count_all else "first")
        stats = res.stats
        cut = stats.cutoff
        found = bool(res.solutions)
        proved = stats.proved_optimal if optimize else (not cut and (found or cfg.count_all))
    if optimize:
        value = stats.best_objective
        # the colouring objective is maximised as minus the colour count
        opt = -value if (value is not None and isinstance(inst, ColoringInstance)) else value
    elif cfg.count_all:
        opt = stats.solutions
    else:
        opt = None
    return RunRecord(inst.kind, label, method, cfg.value_order, cfg.seed, opt, bool(proved), stats.branches,
                     stats.backtracks, stats.restarts, round(stats.wall_time, 6), cut)


def run_trials(cfg: RunConfig, trials: int) -> list[RunRecord]:
    """Independent runs with seeds ``seed, seed+1, ...`` in trial order."""
    out = []
    for t in range(trials):
        c = RunConfig(**{**asdict(cfg), "seed": cfg.seed + t})
        out.append(run(c))
    return out


def to_csv(records: Sequence[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def to_json(records: Sequence[RunRecord]) -> str:
    return json.dumps([r.row() for r in records], indent=2)


def from_csv(text: str) -> list[dict]:
    """Parse CSV output back into typed rows (used to check CSV and JSON agree)."""
    rows = []
    for r in csv.DictReader(io.StringIO(text)):
        rows.append({
            "family": r["family"], "instance": r["instance"], "method": r["method"],
            "value_order": r["value_order"], "seed": int(r["seed"]),
            "opt": int(r["opt"]) if r["opt"] != "" else None, "proved": r["proved"] == "True",
            "branches": int(r["branches"]), "backtracks": int(r["backtracks"]),
            "restarts": int(r["restarts"]), "time_s": float(r["time_s"]),
        })
    return rows


# -- verification -------------------------------------------------------------------

AIS_ORACLE_MAX = 10
TOY_MAX_VARS = 8
TOY_MAX_VALUES = 4


def desk_suite(family: str, count: int = 20, seed: int = 0) -> list[Instance]:
    """Seeded desk-scale instances: colouring graphs with 6..12 vertices, concert
    problems with 4..10 applications and 1..3 halls, blocks of at most 4."""
    out = []
    for k in range(seed, seed + count):
        rng = random.Random(k)
        if family == "coloring":
            out.append(gen_coloring(rng.randint(6, 12), 4, rng))
        elif family == "concert":
            out.append(gen_concert_hall(rng.randint(4, 10), rng.randint(1, 3), 4, rng))
        else:
            raise ConfigError(f"no desk suite for {family!r}")
    return out


def _check_ais(n: int) -> None:
    if not 3 <= n <= AIS_ORACLE_MAX:
        raise OracleBoundExceeded(f"all-interval oracle handles 3 <= n <= {AIS_ORACLE_MAX}")


def toy_instances(count: int, seed: int = 0) -> list[ColoringInstance]:
    out = []
    for k in range(count):
        rng = random.Random(seed * 100003 + k)
        out.append(gen_toy(rng.randint(3, TOY_MAX_VARS), rng.randint(2, TOY_MAX_VALUES), rng))
    return out


def _one_per_class(table, found) -> tuple[bool, str]:
    found = list(found)
    if len(set(found)) != len(found):
        return False, "duplicate solutions"
    members = set().union(*table.values()) if table else set()
    if any(f not in members for f in found):
        return False, "non-solution returned"
    counts = class_counts(table, found)
    bad = {k: v for k, v in counts.items() if v != 1}
    return not bad, f"{len(table)} classes, {len(found)} found" + (f", off: {len(bad)}" if bad else "")


def _verdict(prop: str, inst: str, ok: bool, detail: str = "") -> dict:
    return {"property": prop, "instance": inst, "verdict": "pass" if ok else "fail", "detail": detail}


def verify_observations(ais_ns: Sequence[int] = (5, 6, 7), toys: int = 50, seed: int = 0) -> list[dict]:
    """Soundness/completeness of every symmetry of the breaking set, coverage
    of every solution by some symmetry, and one solution per class from the
    forced rule."""
    report = []
    for n in ais_ns:
        _check_ais(n)
        table = oracle.ais_classes(n)
        sols = oracle.ais_solutions(n)
        sets = ais_sets(n)
        for name in AIS_NAMES:
            got = search(ais_model(n, "static", name), "all").solutions
            ok, detail = _one_per_class(table, [s[:n] for s in got])
            report.append(_verdict(f"sound-complete[{name}]", f"ais{n}", ok, detail))
        uncovered = [a for a in sols if not any(sets[g].check(a) for g in AIS_NAMES)]
        report.append(_verdict("covered-by-some-symmetry", f"ais{n}", not uncovered,
                               f"{len(sols)} solutions, {len(uncovered)} uncovered"))
        got = search(ais_model(n, "dynamic"), "all").solutions
        ok, detail = _one_per_class(table, [s[:n] for s in got])
        report.append(_verdict("forced-rule-one-per-class", f"ais{n}", ok, detail))
    for k, inst in enumerate(toy_instances(toys, seed)):
        sols = oracle.coloring_solutions(inst)
        table = oracle.piecewise_classes(inst, sols)
        got = search(build_model(inst, "dynamic"), "all").solutions
        ok, detail = _one_per_class(table, got)
        report.append(_verdict("forced-rule-one-per-class", f"toy{k}", ok, detail))
    return report


def verify_properness(ais_ns: Sequence[int] = (5, 6, 7)) -> list[dict]:
    report = []
    for n in ais_ns:
        _check_ais(n)
        group = list(ais_group(n).values())
        for name in AIS_NAMES:
            got = [s[:n] for s in search(ais_model(n, "static", name), "all").solutions]
            report.append(_verdict(f"proper[{name}]", f"ais{n}", oracle.is_proper(got, group),
                                   f"{len(got)} survivors"))
    return report


def verify_sbds_soundness(toys: int = 50, seed: int = 0) -> list[dict]:
    report = []
    for k, inst in enumerate(toy_instances(toys, seed)):
        sols = oracle.coloring_solutions(inst)
        table = oracle.piecewise_classes(inst, sols)
        got = search(build_model(inst, "sbds"), "all").solutions
        valid = set(sols)
        counts = class_counts(table, [g for g in got if g in valid])
        ok = all(g in valid for g in got) and all(v >= 1 for v in counts.values())
        report.append(_verdict("sbds-at-least-one-per-class", f"toy{k}", ok,
                               f"{len(table)} classes, {len(got)} found"))
    return report


SUITES = {
    "observations": verify_observations,
    "properness": verify_properness,
    "sbds-soundness": verify_sbds_soundness,
}


def verify(suite: str, **params) -> list[dict]:
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return SUITES[suite](**params)
