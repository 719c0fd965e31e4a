"""Symmetries acting on assignments: variable permutations and value maps.

The action is fixed once for the whole package::

    result[sigma(i)] = theta(assignment[i])

Symmetric variables are always the first ``len(var_perm)`` variables of a
model; anything beyond them is left untouched.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union


class GroupTooLarge(RuntimeError):
    pass


class UnrepresentableSymmetry(ValueError):
    pass


@dataclass(frozen=True)
class AffineMap:
    """``v -> scale * v + offset`` with ``scale`` in {+1, -1}."""

    scale: int = 1
    offset: int = 0

    def __post_init__(self):
        if self.scale not in (1, -1):
            raise ValueError("scale must be +1 or -1")

    def __call__(self, v: int) -> int:
        return self.scale * v + self.offset

    @property
    def is_identity(self) -> bool:
        return self.scale == 1 and self.offset == 0

    def inverse(self) -> "AffineMap":
        return AffineMap(self.scale, -self.scale * self.offset)

    def after(self, other: "ValueMap") -> "ValueMap":
        """``self o other``."""
        if isinstance(other, AffineMap):
            return AffineMap(self.scale * other.scale, self.scale * other.offset + self.offset)
        if self.is_identity:
            return other
        raise UnrepresentableSymmetry("cannot compose an affine map with an explicit permutation")


@dataclass(frozen=True)
class PermMap:
    """Explicit value permutation; values not listed are fixed."""

    pairs: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def of(mapping: Mapping[int, int]) -> "PermMap":
        items = tuple(sorted((a, b) for a, b in mapping.items() if a != b))
        if sorted(a for a, _ in items) != sorted(b for _, b in items):
            raise ValueError("not a permutation")
        return PermMap(items)

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self.pairs)

    def __call__(self, v: int) -> int:
        for a, b in self.pairs:
            if a == v:
                return b
        return v

    @property
    def is_identity(self) -> bool:
        return not self.pairs

    def inverse(self) -> "PermMap":
        return PermMap(tuple(sorted((b, a) for a, b in self.pairs)))

    def after(self, other: "ValueMap") -> "ValueMap":
        if isinstance(other, AffineMap):
            if other.is_identity:
                return self
            if self.is_identity:
                return other
            raise UnrepresentableSymmetry("cannot compose an explicit permutation with an affine map")
        keys = {a for a, _ in self.pairs} | {a for a, _ in other.pairs}
        return PermMap.of({k: self(other(k)) for k in keys})


ValueMap = Union[AffineMap, PermMap]
IDENTITY_MAP = AffineMap()


@dataclass(frozen=True)
class Symmetry:
    var_perm: tuple[int, ...]
    val_map: ValueMap = IDENTITY_MAP
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if sorted(self.var_perm) != list(range(len(self.var_perm))):
            raise ValueError("var_perm is not a permutation")

    @staticmethod
    def identity(n: int) -> "Symmetry":
        return Symmetry(tuple(range(n)), IDENTITY_MAP, "id")

    @property
    def n(self) -> int:
        return len(self.var_perm)

    @property
    def is_identity(self) -> bool:
        return self.val_map.is_identity and all(i == j for i, j in enumerate(self.var_perm))

    def var(self, i: int) -> int:
        return self.var_perm[i] if i < len(self.var_perm) else i

    def val(self, v: int) -> int:
        return self.val_map(v)

    def __call__(self, assignment: Sequence[int]) -> tuple[int, ...]:
        return apply_to_assignment(self, assignment)

    def __repr__(self) -> str:
        return f"Symmetry({self.name or self.var_perm!r}, {self.val_map!r})"


def apply_to_assignment(g: Symmetry, assignment: Sequence[int]) -> tuple[int, ...]:
    out = list(assignment)
    theta = g.val_map
    for i, j in enumerate(g.var_perm):
        out[j] = theta(assignment[i])
    return tuple(out)


def compose(g: Symmetry, h: Symmetry) -> Symmetry:
    """``g o h``: act with ``h`` first, then ``g``."""
    if g.n != h.n:
        raise ValueError("symmetries act on different variable sets")
    perm = tuple(g.var_perm[h.var_perm[i]] for i in range(g.n))
    name = f"{g.name}*{h.name}" if g.name and h.name else ""
    return Symmetry(perm, g.val_map.after(h.val_map), name)


def invert(g: Symmetry) -> Symmetry:
    inv = [0] * g.n
    for i, j in enumerate(g.var_perm):
        inv[j] = i
    return Symmetry(tuple(inv), g.val_map.inverse(), f"{g.name}^-1" if g.name else "")


# -- all-interval series group ---------------------------------------------

AIS_NAMES = ("id", "rev", "inv", "inv_rev")


def ais_group(n: int) -> dict[str, Symmetry]:
    """Identity, reversal, value inversion ``v -> n-1-v`` and their product."""
    ident = Symmetry.identity(n)
    rev = Symmetry(tuple(range(n - 1, -1, -1)), IDENTITY_MAP, "rev")
    inv = Symmetry(tuple(range(n)), AffineMap(-1, n - 1), "inv")
    inv_rev = compose(inv, rev)
    inv_rev = Symmetry(inv_rev.var_perm, inv_rev.val_map, "inv_rev")
    return {"id": ident, "rev": rev, "inv": inv, "inv_rev": inv_rev}


# -- piecewise interchangeability ------------------------------------------

@dataclass(frozen=True)
class PiecewisePartitions:
    """Variables ``0..n-1`` and a value list, each cut into interchangeable blocks."""

    var_parts: tuple[tuple[int, ...], ...]
    val_parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        flat = [i for p in self.var_parts for i in p]
        if flat != list(range(len(flat))):
            raise ValueError("variable partitions must cover 0..n-1 in order")
        if any(len(p) == 0 for p in self.var_parts) or any(len(q) == 0 for q in self.val_parts):
            raise ValueError("empty partition")
        vals = [v for q in self.val_parts for v in q]
        if len(set(vals)) != len(vals):
            raise ValueError("value partitions overlap")

    @staticmethod
    def from_boundaries(p: Sequence[int], q: Sequence[int], values: Sequence[int]) -> "PiecewisePartitions":
        """``p``/``q`` are strictly increasing cut points starting at 0 and ending at the size."""
        for cuts, size in ((p, p[-1] if p else 0), (q, len(values))):
            if list(cuts) != sorted(set(cuts)) or cuts[0] != 0 or cuts[-1] != size:
                raise ValueError(f"bad boundaries {cuts!r}")
        var_parts = tuple(tuple(range(p[i], p[i + 1])) for i in range(len(p) - 1))
        val_parts = tuple(tuple(values[q[j]:q[j + 1]]) for j in range(len(q) - 1))
        return PiecewisePartitions(var_parts, val_parts)

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.var_parts)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(v for q in self.val_parts for v in q)

    def var_block(self, i: int) -> int:
        for k, p in enumerate(self.var_parts):
            if i in p:
                return k
        raise KeyError(i)

    def val_block(self, v: int) -> int:
        for k, q in enumerate(self.val_parts):
            if v in q:
                return k
        raise KeyError(v)


@dataclass(frozen=True)
class PiecewiseSymmetry:
    """One ordering per variable block and one per value block.

    ``var_orders[i]`` lists the members of variable block ``i`` in the order
    the ordering chain visits them; the induced permutation sends the k-th
    member of the block to ``var_orders[i][k]``.  Value orders likewise.
    """

    partitions: PiecewisePartitions
    var_orders: tuple[tuple[int, ...], ...]
    val_orders: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for p, o in zip(self.partitions.var_parts, self.var_orders):
            if sorted(o) != sorted(p):
                raise ValueError("variable order leaves its block")
        for q, o in zip(self.partitions.val_parts, self.val_orders):
            if sorted(o) != sorted(q):
                raise ValueError("value order leaves its block")

    @staticmethod
    def identity(parts: PiecewisePartitions) -> "PiecewiseSymmetry":
        return PiecewiseSymmetry(parts, parts.var_parts, parts.val_parts)

    @staticmethod
    def reversal(parts: PiecewisePartitions) -> "PiecewiseSymmetry":
        return PiecewiseSymmetry(parts, tuple(p[::-1] for p in parts.var_parts),
                                 tuple(q[::-1] for q in parts.val_parts))

    def as_symmetry(self) -> Symmetry:
        perm = [0] * self.partitions.n
        for p, o in zip(self.partitions.var_parts, self.var_orders):
            for a, b in zip(p, o):
                perm[a] = b
        mapping = {}
        for q, o in zip(self.partitions.val_parts, self.val_orders):
            mapping.update(zip(q, o))
        return Symmetry(tuple(perm), PermMap.of(mapping))


def sample_piecewise(parts: PiecewisePartitions, rng: random.Random) -> PiecewiseSymmetry:
    """Uniform draw from the product of the within-block symmetric groups."""
    var_orders = []
    for p in parts.var_parts:
        o = list(p)
        rng.shuffle(o)
        var_orders.append(tuple(o))
    val_orders = []
    for q in parts.val_parts:
        o = list(q)
        rng.shuffle(o)
        val_orders.append(tuple(o))
    return PiecewiseSymmetry(parts, tuple(var_orders), tuple(val_orders))


def piecewise_generators(parts: PiecewisePartitions) -> list[Symmetry]:
    """Transpositions of consecutive members inside every block."""
    n = parts.n
    gens = []
    for p in parts.var_parts:
        for a, b in zip(p, p[1:]):
            perm = list(range(n))
            perm[a], perm[b] = b, a
            gens.append(Symmetry(tuple(perm), IDENTITY_MAP, f"swap_x{a}_x{b}"))
    for q in parts.val_parts:
        for a, b in zip(q, q[1:]):
            gens.append(Symmetry(tuple(range(n)), PermMap.of({a: b, b: a}), f"swap_{a}_{b}"))
    return gens


# -- orbit oracle ------------------------------------------------------------

def orbit(point: tuple[int, ...], generators: Sequence[Symmetry], bound: int = 10**5) -> set[tuple[int, ...]]:
    seen = {point}
    todo = deque([point])
    work = 0
    while todo:
        a = todo.popleft()
        for g in generators:
            work += 1
            if work > bound:
                raise GroupTooLarge(f"orbit closure exceeded {bound} applications")
            b = apply_to_assignment(g, a)
            if b not in seen:
                seen.add(b)
                todo.append(b)
    return seen


def symmetry_classes(solutions: Iterable[Sequence[int]], generators: Sequence[Symmetry],
                     bound: int = 10**5) -> dict[tuple[int, ...], frozenset]:
    """Orbits of ``solutions`` under the group generated by ``generators``.

    Keys are the lexicographically least orbit member.  The whole orbit is
    returned even if some members are absent from ``solutions``.
    """
    table: dict[tuple[int, ...], frozenset] = {}
    placed: set[tuple[int, ...]] = set()
    budget = bound
    for s in solutions:
        s = tuple(s)
        if s in placed:
            continue
        orb = orbit(s, generators, budget)
        budget -= len(orb) * max(1, len(generators))
        if budget < 0:
            raise GroupTooLarge(f"closure exceeded {bound} applications")
        placed |= orb
        table[min(orb)] = frozenset(orb)
    return table


def class_counts(table: Mapping[tuple[int, ...], frozenset], subset: Iterable[Sequence[int]]) -> dict:
    """How many members of ``subset`` fall into each class."""
    where = {}
    for rep, members in table.items():
        for m in members:
            where[m] = rep
    counts = {rep: 0 for rep in table}
    for s in subset:
        rep = where.get(tuple(s))
        if rep is None:
            raise KeyError(f"{s} is in no class")
        counts[rep] += 1
    return counts
