"""Posting symmetries of a breaking set dynamically with the forced-symmetry rule.

An entailed candidate constraint is posted (for good, it survives
backtracking) only when every symmetry it would rule out is already
inconsistent with the current domains.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .constraints import Constraint, D, E, Le, LexLeq, View
from .engine import Search, SearchListener, Store
from .static import gcc_constraints, occurrence_vars, signature, signature_geq
from .symmetry import PiecewisePartitions, PiecewiseSymmetry, Symmetry


class InternalError(RuntimeError):
    pass


@dataclass
class EliminationEvent:
    constraint: Constraint
    eliminated: frozenset
    posted: bool


@dataclass
class ForcedRuleState:
    posted: list[Constraint] = field(default_factory=list)
    events: list[EliminationEvent] = field(default_factory=list)


class GroupForcedRule(SearchListener):
    """Forced rule over an explicitly listed group (e.g. the 4 AIS symmetries).

    ``sets`` maps a symmetry name to that symmetry's breaking constraints.
    Structurally equal constraints coming from different symmetries are
    merged, so a candidate knows every symmetry whose set contains it.
    ``commit`` also posts the rest of a symmetry's set once it is the only
    consistent one left.
    """

    def __init__(self, sets: dict[str, Sequence[Constraint]], patch: bool = True, commit: bool = True):
        self.names = list(sets)
        self.pool: dict = {}
        self.owners: dict = {}
        self.members: dict[str, list] = {}
        for name, cons in sets.items():
            keys = []
            for c in cons:
                k = c.key()
                self.pool.setdefault(k, c)
                self.owners.setdefault(k, set()).add(name)
                keys.append(k)
            self.members[name] = keys
        self.consistent = set(self.names)
        self.posted_keys: set = set()
        self.patch = patch
        self.commit = commit
        self.state = ForcedRuleState()

    def _inconsistent_now(self, s: Store, name: str) -> bool:
        return any(self.pool[k].entailment(s) is D for k in self.members[name])

    def _post(self, search: Search, key) -> None:
        c = self.pool[key]
        self.posted_keys.add(key)
        self.consistent &= self.owners[key]
        self.state.posted.append(c)
        search.post(c, monotone=True)

    def on_fixpoint(self, search: Search) -> bool:
        s = search.store
        posted = False
        for key, c in self.pool.items():
            if key in self.posted_keys:
                continue
            owners = self.owners[key]
            if not owners & self.consistent:
                continue
            if c.entailment(s) is not E:
                continue
            eliminated = self.consistent - owners
            ok = all(self._inconsistent_now(s, g) for g in eliminated)
            self.state.events.append(EliminationEvent(c, frozenset(eliminated), ok))
            if ok:
                self._post(search, key)
                posted = True
        if self.commit and len(self.consistent) == 1:
            (only,) = self.consistent
            for key in self.members[only]:
                if key not in self.posted_keys:
                    self._post(search, key)
                    posted = True
        return posted

    def choose_symmetry(self, solution_values) -> str:
        for name in self.names:
            if name in self.consistent and all(self.pool[k].check(solution_values) for k in self.members[name]):
                return name
        raise InternalError("no consistent symmetry satisfied by the solution")

    def on_solution(self, search: Search, solution) -> bool:
        if not self.patch:
            return False
        values = search.store.snapshot_values()
        name = self.choose_symmetry(values)
        posted = False
        for key in self.members[name]:
            if key not in self.posted_keys:
                self._post(search, key)
                posted = True
        return posted


def _closure_add(rel: set, a: int, b: int, universe: Sequence[int]) -> None:
    """Add ``a -> b`` to a transitively closed relation."""
    before = [x for x in universe if (x, a) in rel] + [a]
    after = [y for y in universe if (b, y) in rel] + [b]
    for x in before:
        for y in after:
            rel.add((x, y))


class PiecewiseForcedRule(SearchListener):
    """Forced rule for piecewise variable/value interchangeability.

    Consistent symmetries are the total orders extending the committed
    precedences.  ``x_i < x_j`` entailed within a variable block commits
    ``i -> j`` and posts ``x_i <= x_j``; a strictly greater signature of
    ``d`` over ``e`` within a value block commits ``d -> e`` and posts the
    non-strict signature ordering.
    """

    def __init__(self, parts: PiecewisePartitions, occ: Sequence[dict[int, int]], patch: bool = True,
                 value_order: str = "lex"):
        self.parts = parts
        self.occ = list(occ)
        self.patch = patch
        # the patch breaks ties the way the value heuristic would
        self.tie = -1 if value_order == "antilex" else 1
        self.var_rel = [set() for _ in parts.var_parts]
        self.val_rel = [set() for _ in parts.val_parts]
        self.state = ForcedRuleState()

    @staticmethod
    def strictly_greater(s: Store, xs: Sequence[View], ys: Sequence[View]) -> bool:
        """Is ``xs >lex ys`` entailed?"""
        for x, y in zip(xs, ys):
            if x.min(s) > y.max(s):
                return True
            if x.fixed(s) and y.fixed(s) and x.value(s) == y.value(s):
                continue
            return False
        return False

    def _commit_var(self, search: Search, block: int, i: int, j: int) -> None:
        _closure_add(self.var_rel[block], i, j, self.parts.var_parts[block])
        c = Le(View(i), View(j))
        self.state.posted.append(c)
        search.post(c, monotone=True)

    def _commit_val(self, search: Search, block: int, d: int, e: int) -> None:
        _closure_add(self.val_rel[block], d, e, self.parts.val_parts[block])
        c = signature_geq(self.occ, d, e)
        self.state.posted.append(c)
        search.post(c, monotone=True)

    def on_fixpoint(self, search: Search) -> bool:
        s = search.store
        posted = False
        for b, p in enumerate(self.parts.var_parts):
            rel = self.var_rel[b]
            for i in p:
                imax = s.max(i)
                for j in p:
                    if i != j and imax < s.min(j) and (i, j) not in rel:
                        if (j, i) in rel:
                            continue  # cannot happen: x_j <= x_i is posted
                        self._commit_var(search, b, i, j)
                        posted = True
        for b, q in enumerate(self.parts.val_parts):
            if len(q) < 2:
                continue
            rel = self.val_rel[b]
            sigs = {d: signature(self.occ, d) for d in q}
            for d in q:
                for e in q:
                    if d != e and (d, e) not in rel and (e, d) not in rel \
                            and self.strictly_greater(s, sigs[d], sigs[e]):
                        self._commit_val(search, b, d, e)
                        posted = True
        return posted

    def _extension(self, members: Sequence[int], rel: set, rank) -> tuple[int, ...]:
        indeg = {m: 0 for m in members}
        for a, b in rel:
            indeg[b] += 1
        heap = [(rank(m), m) for m in members if indeg[m] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            _, m = heapq.heappop(heap)
            order.append(m)
            for a, b in rel:
                if a == m:
                    indeg[b] -= 1
                    if indeg[b] == 0:
                        heapq.heappush(heap, (rank(b), b))
        if len(order) != len(members):
            raise InternalError("committed precedences are cyclic")
        return tuple(order)

    def choose_symmetry(self, values) -> PiecewiseSymmetry:
        """Total orders extending the commitments and satisfied by ``values``."""
        var_orders = tuple(self._extension(p, self.var_rel[b], lambda i: (values[i], self.tie * i))
                           for b, p in enumerate(self.parts.var_parts))
        sig = {d: tuple(values[o[d]] for o in self.occ) for d in self.parts.values}
        val_orders = tuple(self._extension(q, self.val_rel[b], lambda d: (tuple(-c for c in sig[d]), self.tie * d))
                           for b, q in enumerate(self.parts.val_parts))
        return PiecewiseSymmetry(self.parts, var_orders, val_orders)

    def on_solution(self, search: Search, solution) -> bool:
        if not self.patch:
            return False
        values = search.store.snapshot_values()
        psym = self.choose_symmetry(values)
        posted = False
        for b, order in enumerate(psym.var_orders):
            for i, j in zip(order, order[1:]):
                if (i, j) not in self.var_rel[b]:
                    self._commit_var(search, b, i, j)
                    posted = True
        for b, order in enumerate(psym.val_orders):
            for d, e in zip(order, order[1:]):
                if (d, e) not in self.val_rel[b]:
                    self._commit_val(search, b, d, e)
                    posted = True
        return posted


def watch_piecewise(store: Store, parts: PiecewisePartitions, patch: bool = True,
                    occ: Optional[list[dict[int, int]]] = None, value_order: str = "lex") -> PiecewiseForcedRule:
    """Create occurrence counters, post the Gcc channels (shared by every
    symmetry of the set, so they eliminate nothing) and return the listener."""
    if occ is None:
        occ = occurrence_vars(store, parts)
        for c in gcc_constraints(parts, occ):
            store.post(c)
    return PiecewiseForcedRule(parts, occ, patch, value_order)
