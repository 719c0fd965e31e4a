"""Finite-domain store, propagation loop and depth-first search.

Domains are Python integers used as bitsets: bit ``k`` of ``dom[v]`` set means
value ``base[v] + k`` is still possible.  Every change to a backtrackable
variable is recorded on a trail so that restoring a decision level gives back
the exact domains of that level.
"""
from __future__ import annotations

import random
import time
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional, Sequence

# event masks
DOM = 1
BND = 2
FIX = 4

DEFAULT_TIME_LIMIT = 600.0


class Failure(Exception):
    """Raised when a domain becomes empty or a constraint is violated."""


class CutoffReached(Exception):
    """Branch or time budget exhausted."""


class ConfigError(ValueError):
    pass


def mask_values(mask: int, base: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(base + low.bit_length() - 1)
        mask ^= low
    return out


class Store:
    """Trailed variable store with a two-priority propagation queue."""

    def __init__(self) -> None:
        self.dom: list[int] = []
        self.base: list[int] = []
        self.names: list[str] = []
        self.sticky_var: list[bool] = []
        self._stamp: list[int] = []
        self.watch: list[list[tuple[int, int]]] = []
        self.props: list = []
        self.active: list[bool] = []
        self.queued: list[bool] = []
        self._queues = (deque(), deque())
        self._running = -1
        self._running_idem = False
        self.trail: list[tuple[int, int]] = []
        self._prop_trail: list[int] = []
        self._marks: list[tuple[int, int, int]] = []
        self._epoch = 0
        self._next_epoch = 1
        self.monotone: list[int] = []
        self.propagations = 0

    # -- variables ---------------------------------------------------------
    def new_var(self, lo: int, hi: Optional[int] = None, name: str = "",
                values: Optional[Iterable[int]] = None, backtrackable: bool = True) -> int:
        if values is not None:
            vals = sorted(set(values))
            if not vals:
                raise ValueError("empty domain")
            base = vals[0]
            mask = 0
            for v in vals:
                mask |= 1 << (v - base)
        else:
            if hi is None or hi < lo:
                raise ValueError("empty domain")
            base = lo
            mask = (1 << (hi - lo + 1)) - 1
        self.dom.append(mask)
        self.base.append(base)
        self.names.append(name or f"v{len(self.dom) - 1}")
        self.sticky_var.append(not backtrackable)
        self._stamp.append(-1)
        self.watch.append([])
        return len(self.dom) - 1

    def new_vars(self, count: int, lo: int, hi: int, prefix: str = "x") -> list[int]:
        return [self.new_var(lo, hi, name=f"{prefix}{i}") for i in range(count)]

    @property
    def num_vars(self) -> int:
        return len(self.dom)

    @property
    def level(self) -> int:
        return len(self._marks)

    def min(self, v: int) -> int:
        d = self.dom[v]
        return self.base[v] + (d & -d).bit_length() - 1

    def max(self, v: int) -> int:
        return self.base[v] + self.dom[v].bit_length() - 1

    def size(self, v: int) -> int:
        return self.dom[v].bit_count()

    def is_fixed(self, v: int) -> bool:
        d = self.dom[v]
        return d & (d - 1) == 0

    def value(self, v: int) -> int:
        if not self.is_fixed(v):
            raise ValueError(f"{self.names[v]} is not fixed")
        return self.min(v)

    def contains(self, v: int, val: int) -> bool:
        k = val - self.base[v]
        return k >= 0 and (self.dom[v] >> k) & 1 == 1

    def values(self, v: int) -> list[int]:
        return mask_values(self.dom[v], self.base[v])

    def value_mask(self, v: int, vals: Iterable[int]) -> int:
        base = self.base[v]
        m = 0
        for val in vals:
            k = val - base
            if k >= 0:
                m |= 1 << k
        return m

    def snapshot(self) -> tuple[int, ...]:
        return tuple(self.dom)

    def snapshot_values(self) -> list[Optional[int]]:
        """Value of every variable, ``None`` where not fixed."""
        return [self.min(v) if self.is_fixed(v) else None for v in range(len(self.dom))]

    # -- modification ------------------------------------------------------
    def _set(self, v: int, new: int) -> bool:
        old = self.dom[v]
        if new == old:
            return False
        if new == 0:
            raise Failure(self.names[v])
        if not self.sticky_var[v] and self._stamp[v] != self._epoch:
            self.trail.append((v, old))
            self._stamp[v] = self._epoch
        self.dom[v] = new
        ev = DOM
        if (old & -old) != (new & -new) or old.bit_length() != new.bit_length():
            ev |= BND
        if new & (new - 1) == 0:
            ev |= FIX
        # an idempotent propagator is not woken by its own changes
        running = self._running if self._running_idem else -1
        queued = self.queued
        for pid, m in self.watch[v]:
            if m & ev and not queued[pid] and pid != running:
                queued[pid] = True
                self._queues[self.props[pid].priority].append(pid)
        return True

    def restrict(self, v: int, mask: int) -> bool:
        return self._set(v, self.dom[v] & mask)

    def remove(self, v: int, val: int) -> bool:
        k = val - self.base[v]
        if k < 0:
            return False
        return self._set(v, self.dom[v] & ~(1 << k))

    def assign(self, v: int, val: int) -> bool:
        k = val - self.base[v]
        if k < 0 or not (self.dom[v] >> k) & 1:
            raise Failure(self.names[v])
        return self._set(v, 1 << k)

    def set_min(self, v: int, val: int) -> bool:
        k = val - self.base[v]
        if k <= 0:
            return False
        return self._set(v, self.dom[v] & ~((1 << k) - 1))

    def set_max(self, v: int, val: int) -> bool:
        k = val - self.base[v]
        if k < 0:
            raise Failure(self.names[v])
        return self._set(v, self.dom[v] & ((1 << (k + 1)) - 1))

    # -- propagators -------------------------------------------------------
    def post(self, prop, monotone: bool = False) -> int:
        """Register ``prop`` and queue it.  Runs no propagation by itself.

        A monotone post survives backtracking; after every restore such
        propagators are re-queued so that they act on the restored domains.
        """
        pid = len(self.props)
        self.props.append(prop)
        self.active.append(True)
        self.queued.append(False)
        for v, m in prop.subscriptions():
            self.watch[v].append((pid, m))
        if monotone or any(self.sticky_var[v] for v, _ in prop.subscriptions()):
            self.monotone.append(pid)
        if not monotone:
            self._prop_trail.append(pid)
        self.schedule(pid)
        return pid

    def schedule(self, pid: int) -> None:
        if not self.queued[pid] and self.active[pid]:
            self.queued[pid] = True
            self._queues[self.props[pid].priority].append(pid)

    def schedule_all(self) -> None:
        for pid in range(len(self.props)):
            self.schedule(pid)

    def _drop(self, pid: int) -> None:
        prop = self.props[pid]
        self.active[pid] = False
        for v, _ in prop.subscriptions():
            self.watch[v] = [w for w in self.watch[v] if w[0] != pid]
        if pid in self.monotone:
            self.monotone.remove(pid)
        # reuse the slots of trailing dead propagators
        while self.props and not self.active[-1]:
            self.props.pop()
            self.active.pop()
            self.queued.pop()

    def propagate(self) -> bool:
        """Run queued propagators to a fixpoint.  False on failure."""
        fast, slow = self._queues
        props = self.props
        queued = self.queued
        try:
            while fast or slow:
                pid = fast.popleft() if fast else slow.popleft()
                queued[pid] = False
                self._running = pid
                self._running_idem = getattr(props[pid], "idempotent", False)
                self.propagations += 1
                props[pid].propagate(self)
            self._running = -1
            return True
        except Failure:
            self._running = -1
            self._clear_queue()
            return False

    def _clear_queue(self) -> None:
        for q in self._queues:
            for pid in q:
                self.queued[pid] = False
            q.clear()

    # -- levels ------------------------------------------------------------
    def push(self) -> None:
        self._marks.append((len(self.trail), len(self._prop_trail), self._epoch))
        self._epoch = self._next_epoch
        self._next_epoch += 1

    def pop(self) -> None:
        trail_len, prop_len, epoch = self._marks.pop()
        self._clear_queue()
        trail = self.trail
        dom = self.dom
        while len(trail) > trail_len:
            v, old = trail.pop()
            dom[v] = old
        while len(self._prop_trail) > prop_len:
            self._drop(self._prop_trail.pop())
        self._epoch = epoch
        for pid in self.monotone:
            self.schedule(pid)


@dataclass
class SearchStats:
    branches: int = 0
    backtracks: int = 0
    restarts: int = 0
    solutions: int = 0
    best_objective: Optional[int] = None
    proved_optimal: bool = False
    wall_time: float = 0.0
    cutoff: bool = False

    def merged(self, other: "SearchStats") -> "SearchStats":
        return replace(self, branches=self.branches + other.branches,
                       backtracks=self.backtracks + other.backtracks,
                       solutions=self.solutions + other.solutions,
                       wall_time=self.wall_time + other.wall_time)


class SearchListener:
    """Hooks into search.  All methods are optional no-ops."""

    def on_start(self, search: "Search") -> None:
        pass

    def on_fixpoint(self, search: "Search") -> bool:
        """Return True if new propagators were posted."""
        return False

    def on_left(self, search: "Search", var: int, val: int) -> None:
        pass

    def on_right(self, search: "Search", var: int, val: int) -> None:
        pass

    def on_solution(self, search: "Search", solution: tuple[int, ...]) -> bool:
        """Return True if new propagators were posted."""
        return False


VALUE_ORDERS = ("lex", "antilex", "random")


def pick_value(store: Store, var: int, order: str, rng: random.Random) -> int:
    if order == "lex":
        return store.min(var)
    if order == "antilex":
        return store.max(var)
    if order == "random":
        return rng.choice(store.values(var))
    raise ConfigError(f"unknown value order {order!r}")


class InOrder:
    """Branch on the first unfixed variable of a fixed sequence."""

    def __init__(self, variables: Sequence[int], value_order: str = "lex", seed: int = 0):
        self.variables = list(variables)
        self.value_order = value_order
        self.rng = random.Random(seed)

    def __call__(self, store: Store) -> Optional[tuple[int, int]]:
        dom = store.dom
        for v in self.variables:
            d = dom[v]
            if d & (d - 1):
                return v, pick_value(store, v, self.value_order, self.rng)
        return None


class SmallestDomain(InOrder):
    """Smallest current domain first, ties to the lowest position."""

    def __call__(self, store: Store) -> Optional[tuple[int, int]]:
        dom = store.dom
        best = -1
        best_size = 1 << 30
        for v in self.variables:
            s = dom[v].bit_count()
            if 1 < s < best_size:
                best, best_size = v, s
                if s == 2:
                    break
        if best < 0:
            return None
        return best, pick_value(store, best, self.value_order, self.rng)


@dataclass
class Model:
    store: Store
    decision_vars: list[int]
    output_vars: list[int]
    brancher: Callable[[Store], Optional[tuple[int, int]]]
    listeners: list[SearchListener] = field(default_factory=list)
    objective: Optional[object] = None  # a view to maximize
    info: dict = field(default_factory=dict)

    def solution(self) -> tuple[int, ...]:
        return tuple(self.store.value(v) for v in self.output_vars)


@dataclass
class SearchResult:
    status: str  # "solution", "exhausted", "cutoff"
    solutions: list[tuple[int, ...]]
    stats: SearchStats
    best: Optional[tuple[int, ...]] = None


class ObjectiveBound:
    """objective >= threshold, with a threshold that only grows."""

    priority = 0

    def __init__(self, view) -> None:
        self.view = view
        self.threshold: Optional[int] = None

    def subscriptions(self):
        return [(self.view.var, BND)]

    def propagate(self, store: Store) -> None:
        if self.threshold is not None:
            self.view.set_min(store, self.threshold)


class Search:
    """Depth-first binary search: ``x = v`` on the left, ``x != v`` on the right."""

    def __init__(self, model: Model, max_branches: Optional[int] = None,
                 time_limit: Optional[float] = DEFAULT_TIME_LIMIT) -> None:
        self.model = model
        self.store = model.store
        self.max_branches = max_branches
        self.time_limit = time_limit
        self.stats = SearchStats()
        self.decisions: list[tuple[int, int]] = []
        self._t0 = 0.0
        self._bound: Optional[ObjectiveBound] = None

    def post(self, constraint, monotone: bool = False) -> int:
        return self.store.post(constraint, monotone=monotone)

    def _fixpoint(self) -> bool:
        store = self.store
        if not store.propagate():
            return False
        listeners = self.model.listeners
        while listeners:
            again = False
            for lst in listeners:
                try:
                    if lst.on_fixpoint(self):
                        again = True
                except Failure:
                    store._clear_queue()
                    return False
            if not again:
                break
            if not store.propagate():
                return False
        return True

    def _check_budget(self) -> None:
        if self.max_branches is not None and self.stats.branches >= self.max_branches:
            raise CutoffReached("branches")
        if self.time_limit is not None and (self.stats.branches & 63) == 0:
            if time.perf_counter() - self._t0 > self.time_limit:
                raise CutoffReached("time")

    def run(self, mode: str = "first", optimize: bool = False) -> SearchResult:
        """Explore the tree.

        ``mode`` is ``"first"`` (stop at the first solution) or ``"all"``.
        With ``optimize`` every solution tightens ``objective > value`` for the
        rest of search (branch and bound, maximisation).
        """
        if mode not in ("first", "all"):
            raise ConfigError(f"unknown mode {mode!r}")
        model = self.model
        store = self.store
        stats = self.stats
        self._t0 = time.perf_counter()
        solutions: list[tuple[int, ...]] = []
        best = None
        if optimize:
            if model.objective is None:
                raise ConfigError("model has no objective")
            self._bound = ObjectiveBound(model.objective)
            store.post(self._bound, monotone=True)
        for lst in model.listeners:
            lst.on_start(self)
        decisions = self.decisions
        brancher = model.brancher
        status = "exhausted"
        base_level = store.level
        ok = self._fixpoint()
        try:
            while True:
                if ok:
                    choice = brancher(store)
                    if choice is None:
                        sol = model.solution()
                        stats.solutions += 1
                        solutions.append(sol)
                        if optimize:
                            value = model.objective.value(store)
                            stats.best_objective = value
                            best = sol
                            self._bound.threshold = value + 1
                        posted = False
                        for lst in model.listeners:
                            posted |= bool(lst.on_solution(self, sol))
                        if mode == "first" and not optimize:
                            status = "solution"
                            break
                        ok = False
                        continue
                    self._check_budget()
                    var, val = choice
                    stats.branches += 1
                    store.push()
                    decisions.append((var, val))
                    try:
                        for lst in model.listeners:
                            lst.on_left(self, var, val)
                        store.assign(var, val)
                        ok = self._fixpoint()
                    except Failure:
                        store._clear_queue()
                        ok = False
                    if not ok:
                        stats.backtracks += 1
                else:
                    if not decisions:
                        break
                    var, val = decisions.pop()
                    store.pop()
                    self._check_budget()
                    stats.branches += 1
                    try:
                        for lst in model.listeners:
                            lst.on_right(self, var, val)
                        store.remove(var, val)
                        ok = self._fixpoint()
                    except Failure:
                        store._clear_queue()
                        ok = False
                    if not ok:
                        stats.backtracks += 1
        except CutoffReached:
            status = "cutoff"
            stats.cutoff = True
        while store.level > base_level:
            store.pop()
        decisions.clear()
        stats.wall_time = time.perf_counter() - self._t0
        if optimize:
            stats.proved_optimal = status == "exhausted" and best is not None
            if status == "exhausted" and best is not None:
                status = "solution"
        elif status == "exhausted" and solutions:
            status = "solution"
        return SearchResult(status, solutions, stats, best)


def search(model: Model, mode: str = "first", max_branches: Optional[int] = None,
           time_limit: Optional[float] = DEFAULT_TIME_LIMIT) -> SearchResult:
    return Search(model, max_branches, time_limit).run(mode)


def branch_and_bound_max(model: Model, max_branches: Optional[int] = None,
                         time_limit: Optional[float] = DEFAULT_TIME_LIMIT) -> SearchResult:
    """Maximise ``model.objective``; ``stats.proved_optimal`` is False on cutoff."""
    return Search(model, max_branches, time_limit).run("all", optimize=True)


def search_with_restarts(model_factory: Callable[[int, int], Model], cutoff_branches: int,
                         seed: int = 0, optimize: bool = False, growth: float = 1.0,
                         time_limit: Optional[float] = DEFAULT_TIME_LIMIT,
                         max_restarts: Optional[int] = None) -> SearchResult:
    """Run search on a fresh model per restart, each capped at ``cutoff_branches``.

    In satisfaction mode the first solution ends the run.  With ``optimize``
    the best objective found so far is carried into every new model as a
    lower bound, the per-restart cutoff is multiplied by ``growth`` after each
    restart, and optimality is proved by the first restart that finishes its
    tree.
    """
    if cutoff_branches <= 0:
        raise ConfigError("cutoff_branches must be positive")
    if optimize and growth <= 1.0:
        raise ConfigError("optimisation with restarts needs growth > 1")
    t0 = time.perf_counter()
    total = SearchStats()
    best = None
    best_value = None
    cutoff = float(cutoff_branches)
    restart = 0
    while True:
        remaining = None
        if time_limit is not None:
            remaining = time_limit - (time.perf_counter() - t0)
            if remaining <= 0:
                total.cutoff = True
                break
        model = model_factory(seed, restart)
        s = Search(model, max_branches=int(cutoff), time_limit=remaining)
        if optimize:
            if best_value is not None:
                bound = ObjectiveBound(model.objective)
                bound.threshold = best_value + 1
                model.store.post(bound, monotone=True)
            res = s.run("all", optimize=True)
        else:
            res = s.run("first")
        total.branches += res.stats.branches
        total.backtracks += res.stats.backtracks
        total.solutions += res.stats.solutions
        if optimize and res.best is not None:
            best, best_value = res.best, res.stats.best_objective
        if not optimize and res.solutions:
            best = res.solutions[0]
            break
        if res.status != "cutoff":
            # tree finished: optimum proved (or no solution exists)
            total.proved_optimal = optimize and best is not None
            break
        if remaining is not None and res.stats.wall_time >= remaining:
            total.cutoff = True
            break
        restart += 1
        total.restarts = restart
        if max_restarts is not None and restart > max_restarts:
            total.cutoff = True
            break
        cutoff *= growth
    total.best_objective = best_value
    total.wall_time = time.perf_counter() - t0
    if best is not None:
        status = "solution"
    else:
        status = "cutoff" if total.cutoff else "exhausted"
    return SearchResult(status, [best] if best is not None else [], total, best)
