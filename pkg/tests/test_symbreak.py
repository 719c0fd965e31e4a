"""Static sets, the forced rule and SBDS against brute-force symmetry classes."""
import random

import pytest

from symcp import oracle
from symcp.bench import ColoringInstance, ais_model, build_model, gen_toy
from symcp.constraints import Lt, View
from symcp.engine import Search, search
from symcp.harness import toy_instances
from symcp.sbds import SbdsNogood, on_right_branch
from symcp.static import ais_base_set, ais_sets, ais_static_choice, build_piecewise_set, static_strategy
from symcp.symmetry import AIS_NAMES, PiecewiseSymmetry, ais_group, class_counts

SERIES = (3, 7, 4, 6, 5, 0, 10, 1, 9, 2, 8)


def one_per_class(table, found):
    found = [tuple(f) for f in found]
    assert len(set(found)) == len(found)
    counts = class_counts(table, found)
    assert sum(counts.values()) == len(found), "returned a non-solution"
    return all(v == 1 for v in counts.values())


def test_breaking_set_keeps_only_reversed_inverted_series():
    g = ais_group(11)
    variants = {"a": SERIES, "b": g["rev"](SERIES), "c": g["inv"](SERIES), "d": g["inv_rev"](SERIES)}
    sets = ais_sets(11)
    keep = {name: [k for k, a in variants.items() if sets[name].check(a)] for name in AIS_NAMES}
    assert keep["id"] == ["d"]
    assert keep["rev"] == ["c"]
    assert keep["inv_rev"] == ["a"]
    assert keep["inv"] == ["b"]


def test_base_set_shape():
    cons = ais_base_set(11)
    assert [type(c).__name__ for c in cons] == ["Lt", "Le", "Implies", "LexLeq"]
    assert len(ais_base_set(6)) == 3  # no middle value for even n
    with pytest.raises(ValueError):
        ais_base_set(2)


@pytest.mark.parametrize("n", [5, 6, 7, 8])
@pytest.mark.parametrize("name", AIS_NAMES)
def test_every_symmetry_of_the_set_is_sound_and_complete(n, name):
    table = oracle.ais_classes(n)
    got = [s[:n] for s in search(ais_model(n, "static", name), "all").solutions]
    assert one_per_class(table, got)
    assert oracle.is_proper(got, list(ais_group(n).values()))


@pytest.mark.parametrize("n", [5, 6, 7])
def test_some_symmetry_admits_every_solution(n):
    sets = ais_sets(n)
    for a in oracle.ais_solutions(n):
        assert any(sets[g].check(a) for g in AIS_NAMES)


def test_static_choices():
    assert ais_static_choice("lex") == "id" and ais_static_choice("antilex") == "inv_rev"
    assert ais_static_choice("random", 4) == ais_static_choice("random", 4)
    assert {ais_static_choice("random", s) for s in range(40)} == set(AIS_NAMES)


def test_piecewise_static_set_is_complete():
    for seed in range(15):
        inst = gen_toy(random.Random(seed).randint(3, 7), 3, random.Random(seed))
        table = oracle.piecewise_classes(inst, oracle.coloring_solutions(inst))
        for kind in ("lex", "antilex", "random"):
            got = search(build_model(inst, "static", static_strategy(kind, seed)), "all").solutions
            assert one_per_class(table, got), (seed, kind)


def test_piecewise_set_contents():
    inst = ColoringInstance(3, ((0, 2),), (0, 2, 3), 2)
    m = build_model(inst, "none")
    sb = build_piecewise_set(inst.partitions, PiecewiseSymmetry.identity(inst.partitions), store=m.store)
    names = [type(c).__name__ for c in sb.constraints]
    assert names == ["Le", "Gcc", "Gcc", "LexLeq"]


# -- forced rule ------------------------------------------------------------------

class Scripted:
    def __init__(self, script, rest):
        self.script, self.rest = script, rest

    def __call__(self, s):
        for v, val in self.script:
            if not s.is_fixed(v):
                return v, val
        return self.rest(s)


def test_forced_rule_trace():
    m = ais_model(11, "dynamic")
    m.brancher = Scripted([(0, 10), (10, 5)], m.brancher)
    res = search(m)
    rule = m.listeners[0]
    assert res.solutions[0][:11] == (10, 0, 9, 1, 8, 2, 7, 3, 6, 4, 5)
    assert rule.consistent == {"inv"}
    posted = {c.key() for c in rule.state.posted}
    assert posted == {c.key() for c in ais_sets(11)["inv"].constraints}
    # X_11 < X_1 was entailed first and is shared by rev and inv
    assert rule.state.posted[0].key() == Lt(View(10), View(0)).key()


def test_forced_rule_waits_while_other_symmetries_remain():
    m = ais_model(11, "dynamic")
    s = Search(m)
    m.store.push()
    m.store.assign(0, 3)
    assert s._fixpoint()
    rule = m.listeners[0]
    # x0 <= 5 is entailed but belongs to id only; rev, inv, inv_rev are still satisfiable
    assert rule.state.posted == []
    assert rule.consistent == set(AIS_NAMES)
    waiting = [e for e in rule.state.events if repr(e.constraint) == "x0 <= 5"]
    assert waiting and not waiting[0].posted and waiting[0].eliminated == {"rev", "inv", "inv_rev"}


def test_forced_rule_posts_once_rivals_are_dead():
    m = ais_model(11, "dynamic")
    s = Search(m)
    m.store.push()
    m.store.assign(0, 10)
    assert s._fixpoint()
    rule = m.listeners[0]
    assert rule.consistent == {"inv"}
    assert rule.state.posted[0].key() == Lt(View(10), View(0)).key()


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_forced_rule_one_per_class_ais(n):
    table = oracle.ais_classes(n)
    got = [s[:n] for s in search(ais_model(n, "dynamic"), "all").solutions]
    assert one_per_class(table, got)


def test_forced_rule_first_branch_not_pruned():
    free = search(ais_model(11))
    dyn = search(ais_model(11, "dynamic"))
    assert free.solutions[0] == dyn.solutions[0]
    assert dyn.stats.backtracks == 0


@pytest.mark.parametrize("value_order", ["lex", "antilex"])
def test_forced_rule_with_patch_on_toys(value_order):
    for k, inst in enumerate(toy_instances(25, seed=7)):
        table = oracle.piecewise_classes(inst, oracle.coloring_solutions(inst))
        got = search(build_model(inst, "dynamic", value_order=value_order), "all").solutions
        assert one_per_class(table, got), k


def test_patch_off_is_sound():
    for inst in toy_instances(30, seed=1):
        table = oracle.piecewise_classes(inst, oracle.coloring_solutions(inst))
        got = search(build_model(inst, "dynamic", patch=False), "all").solutions
        assert all(v >= 1 for v in class_counts(table, got).values())


# -- SBDS ------------------------------------------------------------------------

def test_sbds_sound_on_toys():
    for inst in toy_instances(40, seed=3):
        sols = set(oracle.coloring_solutions(inst))
        table = oracle.piecewise_classes(inst, sols)
        got = search(build_model(inst, "sbds"), "all").solutions
        assert set(got) <= sols
        assert all(v >= 1 for v in class_counts(table, got).values())


def test_sbds_full_group_on_ais_is_complete():
    for n in (5, 6, 7):
        table = oracle.ais_classes(n)
        got = [s[:n] for s in search(ais_model(n, "sbds"), "all").solutions]
        assert one_per_class(table, got)


def test_sbds_first_branch_not_pruned():
    inst = ColoringInstance(4, ((0, 1), (2, 3)), (0, 2, 4), 3)
    free = search(build_model(inst, "none"))
    sb = search(build_model(inst, "sbds"))
    assert free.solutions[0] == sb.solutions[0]


def test_right_branch_nogoods():
    inst = ColoringInstance(3, (), (0, 3), 3)
    m = build_model(inst, "none")
    s = m.store
    gens = [g for g in ais_group(3).values() if not g.is_identity][:0]  # no generators: nothing posted
    assert on_right_branch(s, [(0, 1)], 1, 2, gens) == []
    from symcp.sbds import sbds_pair_generators
    gens = sbds_pair_generators(inst.partitions)
    s.push()
    s.assign(0, 1)
    posted = on_right_branch(s, [(0, 1)], 1, 1, gens, post=lambda c: None)
    # swap x1,x2 moves the refuted x1=1 to x2=1; swap 1,2 maps x0=1 to x0=2 (false): dropped
    assert any(isinstance(c, SbdsNogood) and c.var == 2 and c.val == 1 and c.lits == () for c in posted)
    assert not s.contains(2, 1)
