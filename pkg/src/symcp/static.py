"""Symmetries of symmetry-breaking sets, and the static posting strategies."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from .constraints import Constraint, Const, Eq, Gcc, Implies, Le, LexLeq, Lt, View
from .engine import ConfigError, Store
from .symmetry import (AIS_NAMES, PiecewisePartitions, PiecewiseSymmetry, Symmetry, ais_group,
                       sample_piecewise)


@dataclass
class SymBreakSet:
    family: str  # "ais" or "piecewise"
    symmetry: Union[Symmetry, PiecewiseSymmetry]
    constraints: list[Constraint]
    occ: Optional[list[dict[int, int]]] = field(default=None, repr=False)

    def post(self, store: Store, monotone: bool = False) -> list[int]:
        return [store.post(c, monotone=monotone) for c in self.constraints]

    def check(self, values) -> bool:
        return all(c.check(values) for c in self.constraints)


# -- all-interval series -----------------------------------------------------

def ais_base_set(n: int) -> list[Constraint]:
    """The reversal / inversion / combined breaking constraints for length ``n``.

    Variables are 0-based: ``x0 < x{n-1}``; ``x0`` in the lower half of the
    values (ties on the middle value broken by ``x1``); and the first half of
    the series lex-below the reversed inverted second half.
    """
    if n < 3:
        raise ValueError("all-interval series symmetry breaking needs n >= 3")
    top = n - 1
    x = [View(i) for i in range(n)]
    out: list[Constraint] = [Lt(x[0], x[top])]
    if top % 2 == 0:
        mid = top // 2
        out.append(Le(x[0], Const(mid)))
        out.append(Implies(Eq(x[0], Const(mid)), Lt(x[1], Const(mid))))
    else:
        out.append(Le(x[0], Const((top - 1) // 2)))
    k = (n + 1) // 2
    out.append(LexLeq(x[:k], [top - x[top - i] for i in range(k)]))
    return out


def build_ais_set(g: Symmetry, n: Optional[int] = None) -> SymBreakSet:
    n = g.n if n is None else n
    return SymBreakSet("ais", g, [c.apply(g) for c in ais_base_set(n)])


def ais_sets(n: int) -> dict[str, SymBreakSet]:
    return {name: build_ais_set(g) for name, g in ais_group(n).items()}


# -- piecewise interchangeability -------------------------------------------------

def occurrence_vars(store: Store, parts: PiecewisePartitions) -> list[dict[int, int]]:
    """One counter per (variable block, value)."""
    occ = []
    for i, p in enumerate(parts.var_parts):
        occ.append({d: store.new_var(0, len(p), name=f"occ{i}_{d}") for d in parts.values})
    return occ


def gcc_constraints(parts: PiecewisePartitions, occ: Sequence[dict[int, int]]) -> list[Constraint]:
    vals = parts.values
    return [Gcc(p, vals, [occ[i][d] for d in vals]) for i, p in enumerate(parts.var_parts)]


def signature(occ: Sequence[dict[int, int]], d: int) -> list[View]:
    return [View(o[d]) for o in occ]


def signature_geq(occ, d: int, e: int) -> LexLeq:
    """signature(d) >=lex signature(e)."""
    return LexLeq(signature(occ, e), signature(occ, d))


def build_piecewise_set(parts: PiecewisePartitions, psym: PiecewiseSymmetry, store: Optional[Store] = None,
                        occ: Optional[list[dict[int, int]]] = None) -> SymBreakSet:
    """Ordering chains in ``psym``'s variable order, the Gcc channels, and
    non-increasing signature chains in ``psym``'s value order."""
    if occ is None:
        if store is None:
            raise ValueError("need a store to create occurrence counters")
        occ = occurrence_vars(store, parts)
    cons: list[Constraint] = []
    for order in psym.var_orders:
        for a, b in zip(order, order[1:]):
            cons.append(Le(View(a), View(b)))
    cons.extend(gcc_constraints(parts, occ))
    for order in psym.val_orders:
        for d, e in zip(order, order[1:]):
            cons.append(signature_geq(occ, d, e))
    return SymBreakSet("piecewise", psym, cons, occ)


# -- strategies -------------------------------------------------------------------

STATIC_KINDS = ("lex", "antilex", "random")


def static_strategy(kind: str, seed: int = 0) -> Callable[[PiecewisePartitions], PiecewiseSymmetry]:
    """Selector for the symmetry whose breaking set is posted statically."""
    if kind == "lex":
        return PiecewiseSymmetry.identity
    if kind == "antilex":
        return PiecewiseSymmetry.reversal
    if kind == "random":
        rng = random.Random(seed)
        return lambda parts: sample_piecewise(parts, rng)
    raise ConfigError(f"unknown static strategy {kind!r}")


def ais_static_choice(kind: str, seed: int = 0) -> str:
    """Map a strategy (or an explicit group element name) to an AIS group element."""
    if kind in AIS_NAMES:
        return kind
    if kind == "lex":
        return "id"
    if kind == "antilex":
        return "inv_rev"
    if kind == "random":
        return random.Random(seed).choice(AIS_NAMES)
    raise ConfigError(f"unknown static strategy {kind!r}")
