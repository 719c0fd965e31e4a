"""Brute-force reference answers, written without the solver so they can check it."""
from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .bench import ColoringInstance, ConcertHallInstance
from .symmetry import Symmetry, ais_group, apply_to_assignment, piecewise_generators, symmetry_classes


def ais_solutions(n: int) -> list[tuple[int, ...]]:
    out = []
    want = set(range(1, n))
    for p in itertools.permutations(range(n)):
        if {abs(p[i + 1] - p[i]) for i in range(n - 1)} == want:
            out.append(p)
    return out


def ais_classes(n: int) -> dict:
    gens = [g for g in ais_group(n).values() if not g.is_identity]
    return symmetry_classes(ais_solutions(n), gens)


def is_coloring(inst: ColoringInstance, a: Sequence[int]) -> bool:
    return all(a[u] != a[v] for u, v in inst.edges)


def coloring_solutions(inst: ColoringInstance) -> list[tuple[int, ...]]:
    colors = range(1, inst.colors + 1)
    return [a for a in itertools.product(colors, repeat=inst.n) if is_coloring(inst, a)]


def chromatic_number(inst: ColoringInstance) -> int:
    """Smallest k admitting a proper colouring, by plain backtracking."""
    adj = [set() for _ in range(inst.n)]
    for u, v in inst.edges:
        adj[u].add(v)
        adj[v].add(u)

    def colourable(k: int) -> bool:
        col = [0] * inst.n

        def place(i: int) -> bool:
            if i == inst.n:
                return True
            used = {col[j] for j in adj[i] if j < i}
            top = max(col[:i], default=0)
            for c in range(1, min(k, top + 1) + 1):  # new colours only in increasing order
                if c not in used:
                    col[i] = c
                    if place(i + 1):
                        return True
            col[i] = 0
            return False
        return place(0)

    k = 1 if inst.n else 0
    while not colourable(k):
        k += 1
    return k


def concert_optimum(inst: ConcertHallInstance) -> int:
    """Largest total offer of a clash-free assignment of applications to halls."""
    n, m = inst.n, inst.halls
    clash = [set() for _ in range(n)]
    for i, j in inst.overlapping():
        clash[i].add(j)
        clash[j].add(i)
    offers = [o for _, _, o in inst.apps]
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + offers[i]
    hall = [0] * n
    best = 0

    def go(i: int, acc: int) -> None:
        nonlocal best
        if acc + suffix[i] <= best:
            return
        if i == n:
            best = acc
            return
        for h in range(1, m + 1):
            if all(hall[j] != h for j in clash[i] if j < i):
                hall[i] = h
                go(i + 1, acc + offers[i])
        hall[i] = 0
        go(i + 1, acc)

    go(0, 0)
    return best


def piecewise_classes(inst: ColoringInstance, solutions: Iterable[Sequence[int]], bound: int = 10**7) -> dict:
    return symmetry_classes(solutions, piecewise_generators(inst.partitions), bound)


def is_proper(survivors: Iterable[Sequence[int]], group: Sequence[Symmetry]) -> bool:
    """No non-identity symmetry fixes a surviving assignment."""
    for a in survivors:
        a = tuple(a)
        for g in group:
            if not g.is_identity and apply_to_assignment(g, a) == a:
                return False
    return True
