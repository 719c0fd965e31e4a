"""Symmetry breaking during search with a set of generators.

After the left branch ``var = val`` under the decisions ``A`` is exhausted,
for every generator ``g`` the right branch gets ``g(A) -> g(var != val)``.
"""
from __future__ import annotations

from typing import Sequence

from .constraints import Constraint
from .engine import DOM, Search, SearchListener, Store
from .symmetry import PiecewisePartitions, Symmetry, piecewise_generators


class SbdsNogood(Constraint):
    """``AND(x_i == v_i) -> x != v``, undone with the node that posted it."""

    def __init__(self, lits: Sequence[tuple[int, int]], var: int, val: int):
        self.lits = tuple(lits)
        self.var = var
        self.val = val

    def scope(self):
        out = [x for x, _ in self.lits]
        if self.var not in out:
            out.append(self.var)
        return out

    def subscriptions(self):
        return [(v, DOM) for v in self.scope()]

    def key(self):
        return ("sbds", self.lits, self.var, self.val)

    def __repr__(self):
        cond = " & ".join(f"x{x}=={v}" for x, v in self.lits) or "true"
        return f"({cond}) -> x{self.var}!={self.val}"

    def check(self, values):
        return not all(values[x] == v for x, v in self.lits) or values[self.var] != self.val

    def propagate(self, s: Store) -> None:
        open_lit = None
        n_open = 0
        for x, v in self.lits:
            if not s.contains(x, v):
                return  # condition false
            if not s.is_fixed(x):
                n_open += 1
                open_lit = (x, v)
        if n_open == 0:
            s.remove(self.var, self.val)
        elif n_open == 1 and s.is_fixed(self.var) and s.min(self.var) == self.val:
            s.remove(*open_lit)


def sbds_pair_generators(parts: PiecewisePartitions) -> list[Symmetry]:
    """Swap each pair of consecutive variables / values inside every block."""
    return piecewise_generators(parts)


def on_right_branch(store: Store, decisions: Sequence[tuple[int, int]], var: int, val: int,
                    generators: Sequence[Symmetry], post=None) -> list[Constraint]:
    """Post the symmetric nogoods for a refuted ``var = val`` under ``decisions``.

    Returns what was posted (unconditional removals come back as nogoods with
    an empty condition).
    """
    post = post or store.post
    out = []
    for g in generators:
        x, v = g.var(var), g.val(val)
        lits = []
        dead = False
        for y, w in decisions:
            gy, gw = g.var(y), g.val(w)
            if not store.contains(gy, gw):
                dead = True
                break
            if not store.is_fixed(gy):
                lits.append((gy, gw))
        if dead or (x == var and v == val and not lits):
            continue
        if not store.contains(x, v):
            continue
        ng = SbdsNogood(lits, x, v)
        if lits:
            post(ng)
        else:
            store.remove(x, v)
        out.append(ng)
    return out


class SbdsListener(SearchListener):
    def __init__(self, generators: Sequence[Symmetry]):
        self.generators = list(generators)
        self.posted = 0

    def on_right(self, search: Search, var: int, val: int) -> None:
        got = on_right_branch(search.store, search.decisions, var, val, self.generators,
                              post=lambda c: search.post(c))
        self.posted += len(got)
