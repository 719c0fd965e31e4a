"""Benchmark models: all-interval series, piecewise graph colouring and
concert-hall scheduling, with generators and a plain-text instance format.

Instance file grammar (one item per line, decimal integers, ``\\n`` endings)::

    <kind> <n> <m>
    vars <b_0> <b_1> ... <b_a>        variable block cut points, 0 .. n
    vals <c_0> <c_1> ... <c_b>        value block cut points over the sorted value list
    <payload>

``kind`` is ``ais`` (``m`` = 0, no payload), ``coloring`` (``m`` = number of
colours, values ``1..m``; payload ``edges <k>`` then ``k`` lines ``u v`` with
``u < v``) or ``concert`` (``m`` = halls, values ``1..m+1``; payload
``apps <n>`` then ``n`` lines ``start end offer``).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .constraints import AbsDiff, AcceptedProfit, AllDifferent, HallClash, Ne, NValue, View
from .dynamic import GroupForcedRule, watch_piecewise
from .engine import ConfigError, InOrder, Model, SmallestDomain, Store
from .sbds import SbdsListener, sbds_pair_generators
from .static import ais_sets, ais_static_choice, build_piecewise_set, static_strategy
from .symmetry import PiecewisePartitions, ais_group


class InstanceParseError(ValueError):
    pass


METHODS = ("none", "static", "dynamic", "sbds", "restarts")


@dataclass(frozen=True)
class AisInstance:
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n >= 2")

    kind = "ais"


@dataclass(frozen=True)
class ColoringInstance:
    n: int
    edges: tuple[tuple[int, int], ...]
    var_bounds: tuple[int, ...]
    colors: int
    val_bounds: Optional[tuple[int, ...]] = None  # default: one block of all colours

    kind = "coloring"

    @property
    def partitions(self) -> PiecewisePartitions:
        values = tuple(range(1, self.colors + 1))
        return PiecewisePartitions.from_boundaries(self.var_bounds, self.val_bounds or (0, self.colors), values)


@dataclass(frozen=True)
class ConcertHallInstance:
    apps: tuple[tuple[int, int, int], ...]  # (start, end, offer), half-open [start, end)
    halls: int
    var_bounds: tuple[int, ...]

    kind = "concert"

    @property
    def n(self) -> int:
        return len(self.apps)

    @property
    def reject(self) -> int:
        return self.halls + 1

    @property
    def partitions(self) -> PiecewisePartitions:
        values = tuple(range(1, self.halls + 2))
        return PiecewisePartitions.from_boundaries(self.var_bounds, (0, self.halls, self.halls + 1), values)

    def overlapping(self) -> list[tuple[int, int]]:
        out = []
        for i in range(self.n):
            si, ei, _ = self.apps[i]
            for j in range(i + 1, self.n):
                sj, ej, _ = self.apps[j]
                if si < ej and sj < ei:
                    out.append((i, j))
        return out


Instance = Union[AisInstance, ColoringInstance, ConcertHallInstance]


# -- generators ------------------------------------------------------------------

def _block_bounds(n: int, max_part: int, rng: random.Random) -> tuple[int, ...]:
    bounds = [0]
    while bounds[-1] < n:
        bounds.append(min(n, bounds[-1] + rng.randint(1, max_part)))
    return tuple(bounds)


def gen_coloring(n: int, max_part: int = 8, rng: Optional[random.Random] = None) -> ColoringInstance:
    """Blocks of at most ``max_part`` vertices; each block is a clique or
    independent, and each pair of blocks fully joined or not, with p = 1/2."""
    if n < 1:
        raise ValueError("n >= 1")
    rng = rng or random.Random(0)
    bounds = _block_bounds(n, max_part, rng)
    blocks = [range(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]
    edges = []
    for a, pa in enumerate(blocks):
        if rng.random() < 0.5:
            edges.extend((u, v) for u in pa for v in pa if u < v)
        for pb in blocks[a + 1:]:
            if rng.random() < 0.5:
                edges.extend((u, v) for u in pa for v in pb)
    return ColoringInstance(n, tuple(sorted(edges)), bounds, n)


def gen_toy(n: int, k: int, rng: Optional[random.Random] = None, max_part: int = 3) -> ColoringInstance:
    """Small satisfaction problem: a block-structured graph to colour with
    ``k`` colours cut into random interchangeable blocks."""
    rng = rng or random.Random(0)
    base = gen_coloring(n, max_part, rng)
    return ColoringInstance(n, base.edges, base.var_bounds, k, _block_bounds(k, k, rng))


def gen_concert_hall(n: int, m: int, max_part: int = 8, rng: Optional[random.Random] = None,
                     horizon: int = 24, max_len: int = 8, max_offer: int = 100) -> ConcertHallInstance:
    """Blocks of identical applications (same start, end and offer)."""
    if n < 1 or m < 1:
        raise ValueError("n, m >= 1")
    rng = rng or random.Random(0)
    bounds = _block_bounds(n, max_part, rng)
    apps = []
    for i in range(len(bounds) - 1):
        start = rng.randrange(horizon)
        end = start + rng.randint(1, max_len)
        offer = rng.randint(1, max_offer)
        apps.extend([(start, end, offer)] * (bounds[i + 1] - bounds[i]))
    return ConcertHallInstance(tuple(apps), m, bounds)


# -- serialization -------------------------------------------------------------------

def dumps(inst: Instance) -> str:
    if isinstance(inst, AisInstance):
        return f"ais {inst.n} 0\nvars 0 {inst.n}\nvals 0 {inst.n}\n"
    if isinstance(inst, ColoringInstance):
        lines = [f"coloring {inst.n} {inst.colors}",
                 "vars " + " ".join(map(str, inst.var_bounds)),
                 "vals " + " ".join(map(str, inst.val_bounds or (0, inst.colors))),
                 f"edges {len(inst.edges)}"]
        lines += [f"{u} {v}" for u, v in inst.edges]
        return "\n".join(lines) + "\n"
    if isinstance(inst, ConcertHallInstance):
        lines = [f"concert {inst.n} {inst.halls}",
                 "vars " + " ".join(map(str, inst.var_bounds)),
                 f"vals 0 {inst.halls} {inst.halls + 1}",
                 f"apps {inst.n}"]
        lines += [f"{s} {e} {o}" for s, e, o in inst.apps]
        return "\n".join(lines) + "\n"
    raise TypeError(type(inst))


def _ints(tokens: Sequence[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise InstanceParseError(f"line {lineno}: expected integers, got {' '.join(tokens)!r}") from None


def loads(text: str) -> Instance:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 3:
        raise InstanceParseError("truncated instance")

    def tagged(k: int, tag: str) -> list[int]:
        parts = lines[k].split()
        if not parts or parts[0] != tag:
            raise InstanceParseError(f"line {k + 1}: expected {tag!r}")
        return _ints(parts[1:], k + 1)

    head = lines[0].split()
    if len(head) != 3:
        raise InstanceParseError("line 1: expected '<kind> <n> <m>'")
    kind = head[0]
    n, m = _ints(head[1:], 1)
    var_bounds = tuple(tagged(1, "vars"))
    val_bounds = tuple(tagged(2, "vals"))
    if not var_bounds or var_bounds[0] != 0 or var_bounds[-1] != n or list(var_bounds) != sorted(set(var_bounds)):
        raise InstanceParseError("line 2: bad variable block cut points")
    try:
        if kind == "ais":
            return AisInstance(n)
        if kind == "coloring":
            (k,) = tagged(3, "edges")
            if len(lines) != 4 + k:
                raise InstanceParseError(f"expected {k} edge lines")
            edges = []
            for i in range(k):
                uv = _ints(lines[4 + i].split(), 5 + i)
                if len(uv) != 2 or not 0 <= uv[0] < uv[1] < n:
                    raise InstanceParseError(f"line {5 + i}: bad edge")
                edges.append((uv[0], uv[1]))
            if not val_bounds or val_bounds[0] != 0 or val_bounds[-1] != m \
                    or list(val_bounds) != sorted(set(val_bounds)):
                raise InstanceParseError("line 3: bad value block cut points")
            vb = None if val_bounds == (0, m) else val_bounds
            return ColoringInstance(n, tuple(edges), var_bounds, m, vb)
        if kind == "concert":
            if val_bounds != (0, m, m + 1):
                raise InstanceParseError(f"line 3: concert values must be 'vals 0 {m} {m + 1}'")
            (k,) = tagged(3, "apps")
            if k != n or len(lines) != 4 + k:
                raise InstanceParseError(f"expected {n} application lines")
            apps = []
            for i in range(k):
                t = _ints(lines[4 + i].split(), 5 + i)
                if len(t) != 3 or t[1] <= t[0]:
                    raise InstanceParseError(f"line {5 + i}: bad application")
                apps.append(tuple(t))
            return ConcertHallInstance(tuple(apps), m, var_bounds)
    except ValueError as exc:
        if isinstance(exc, InstanceParseError):
            raise
        raise InstanceParseError(str(exc)) from None
    raise InstanceParseError(f"unknown kind {kind!r}")


def save(inst: Instance, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps(inst))


def load(path) -> Instance:
    with open(path) as fh:
        return loads(fh.read())


# -- models -------------------------------------------------------------------------

def ais_model(n: int, method: str = "none", symmetry: str = "id", branching: Optional[str] = None,
              value_order: str = "lex", seed: int = 0, patch: bool = True) -> Model:
    """All-interval series: ``x_i`` in 0..n-1 at store ids ``0..n-1``,
    differences ``d_i = |x_{i+1} - x_i|`` at ids ``n..2n-2``.

    ``branching="diff"`` branches on the differences from the last one to the
    first, ``"x"`` on the series in order. The default is ``"diff"``, except
    for SBDS: the group acts on the series only, so SBDS needs ``"x"``.
    """
    if branching is None:
        branching = "x" if method == "sbds" else "diff"
    if method == "sbds" and branching != "x":
        raise ConfigError("SBDS on the all-interval series needs branching='x'")
    s = Store()
    xs = s.new_vars(n, 0, n - 1, "x")
    ds = s.new_vars(n - 1, 1, n - 1, "d")
    s.post(AllDifferent(xs))
    s.post(AllDifferent(ds))
    for i in range(n - 1):
        s.post(AbsDiff(ds[i], xs[i + 1], xs[i]))
    listeners = []
    if method == "static":
        for c in ais_sets(n)[ais_static_choice(symmetry, seed)].constraints:
            s.post(c)
    elif method == "dynamic":
        sets = {name: sb.constraints for name, sb in ais_sets(n).items()}
        listeners.append(GroupForcedRule(sets, patch=patch))
    elif method == "sbds":
        listeners.append(SbdsListener([g for g in ais_group(n).values() if not g.is_identity]))
    elif method != "none":
        raise ConfigError(f"method {method!r} not available for the all-interval series")
    if branching == "diff":
        brancher = InOrder(ds[::-1] + xs, value_order, seed)
    elif branching == "x":
        brancher = InOrder(xs, value_order, seed)
    else:
        raise ConfigError(f"unknown branching {branching!r}")
    return Model(s, xs + ds, xs, brancher, listeners, info={"family": "ais", "n": n, "method": method})


def _piecewise_extras(s: Store, parts: PiecewisePartitions, method: str, selector, patch: bool,
                      value_order: str):
    listeners = []
    chosen = None
    if method == "static":
        chosen = selector(parts)
        build_piecewise_set(parts, chosen, store=s).post(s)
    elif method == "dynamic":
        listeners.append(watch_piecewise(s, parts, patch=patch, value_order=value_order))
    elif method == "sbds":
        listeners.append(SbdsListener(sbds_pair_generators(parts)))
    elif method != "none":
        raise ConfigError(f"unknown method {method!r}")
    return listeners, chosen


def coloring_model(inst: ColoringInstance, method: str = "none", selector=None,
                   value_order: str = "lex", seed: int = 0, patch: bool = True) -> Model:
    """Vertices ``0..n-1`` take colours ``1..colors``; the objective maximised
    is minus the number of colours used."""
    s = Store()
    xs = s.new_vars(inst.n, 1, inst.colors, "x")
    for u, v in inst.edges:
        s.post(Ne(View(u), View(v)))
    z = s.new_var(1, inst.colors, name="ncolors")
    s.post(NValue(xs, z))
    listeners, chosen = _piecewise_extras(s, inst.partitions, method, selector or static_strategy("lex"), patch,
                                         value_order)
    return Model(s, xs, xs, SmallestDomain(xs, value_order, seed), listeners, objective=View(z, -1, 0),
                 info={"family": "coloring", "method": method, "symmetry": chosen})


def concert_model(inst: ConcertHallInstance, method: str = "none", selector=None,
                  value_order: str = "lex", seed: int = 0, patch: bool = True) -> Model:
    """``x_i`` = hall of application ``i`` (1..m) or ``m+1`` when rejected."""
    s = Store()
    xs = s.new_vars(inst.n, 1, inst.reject, "x")
    for i, j in inst.overlapping():
        s.post(HallClash(i, j, inst.reject))
    p = s.new_var(0, sum(o for _, _, o in inst.apps), name="profit")
    s.post(AcceptedProfit(xs, [o for _, _, o in inst.apps], inst.reject, p))
    listeners, chosen = _piecewise_extras(s, inst.partitions, method, selector or static_strategy("lex"), patch,
                                         value_order)
    return Model(s, xs, xs, SmallestDomain(xs, value_order, seed), listeners, objective=View(p),
                 info={"family": "concert", "method": method, "symmetry": chosen})


def build_model(inst: Instance, method: str = "none", symmetry_selector=None, value_order: str = "lex",
                seed: int = 0, **kw) -> Model:
    """One ready-to-search model.  For ``restarts`` use :func:`model_factory`."""
    if method == "restarts":
        raise ConfigError("restarts need a model factory, see model_factory()")
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}")
    if isinstance(inst, AisInstance):
        sym = symmetry_selector if isinstance(symmetry_selector, str) else "id"
        return ais_model(inst.n, method, sym, value_order=value_order, seed=seed, **kw)
    if isinstance(inst, ColoringInstance):
        return coloring_model(inst, method, symmetry_selector, value_order, seed, **kw)
    if isinstance(inst, ConcertHallInstance):
        return concert_model(inst, method, symmetry_selector, value_order, seed, **kw)
    raise ConfigError(f"unsupported instance {type(inst).__name__}")


def model_factory(inst: Instance, value_order: str = "lex", **kw):
    """``factory(seed, restart)`` posting a uniformly random symmetry of the
    breaking set on every call."""
    if isinstance(inst, AisInstance):
        names = ("id", "rev", "inv", "inv_rev")

        def make(seed: int, restart: int) -> Model:
            rng = random.Random(f"{seed}:{restart}")
            return ais_model(inst.n, "static", rng.choice(names), value_order=value_order, seed=seed, **kw)
        return make

    def make(seed: int, restart: int) -> Model:
        rng = random.Random(f"{seed}:{restart}")
        selector = static_strategy("random", rng.randrange(2**31))
        return build_model(inst, "static", selector, value_order, seed=rng.randrange(2**31), **kw)
    return make
