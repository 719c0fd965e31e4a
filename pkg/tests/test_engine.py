import pytest
from hypothesis import given, settings, strategies as st

from symcp.bench import ais_model
from symcp.constraints import AllDifferent, Lt, Ne, View
from symcp.engine import (ConfigError, Failure, InOrder, Model, Search, SmallestDomain, Store,
                          branch_and_bound_max, search, search_with_restarts)
from symcp import oracle


def test_domain_operations():
    s = Store()
    x = s.new_var(2, 6)
    assert s.values(x) == [2, 3, 4, 5, 6] and s.min(x) == 2 and s.max(x) == 6
    s.remove(x, 4)
    s.set_min(x, 3)
    assert s.values(x) == [3, 5, 6] and s.size(x) == 3
    s.assign(x, 5)
    assert s.is_fixed(x) and s.value(x) == 5
    with pytest.raises(Failure):
        s.remove(x, 5)


def test_sparse_domain():
    s = Store()
    x = s.new_var(0, values=[-3, 7, 2])
    assert s.values(x) == [-3, 2, 7] and s.min(x) == -3 and s.max(x) == 7


def test_empty_domain_rejected():
    with pytest.raises(ValueError):
        Store().new_var(3, 2)


ops = st.lists(st.tuples(st.sampled_from(["remove", "min", "max", "assign", "push", "pop"]),
                         st.integers(0, 3), st.integers(0, 7)), max_size=40)


@settings(max_examples=200, deadline=None)
@given(ops)
def test_restore_is_bit_exact(seq):
    """push / change / pop gives back exactly the domains of the pushed level."""
    s = Store()
    xs = [s.new_var(0, 7) for _ in range(4)]
    s.post(AllDifferent(xs[:3]))
    assert s.propagate()
    saved = [s.snapshot()]
    for op, v, val in seq:
        if op == "push":
            s.push()
            saved.append(s.snapshot())
        elif op == "pop":
            if len(saved) > 1:
                s.pop()
                saved.pop()
                assert s.snapshot() == saved[-1]
        else:
            s.push()
            before = s.snapshot()
            try:
                {"remove": s.remove, "min": s.set_min, "max": s.set_max, "assign": s.assign}[op](xs[v], val)
                ok = s.propagate()
            except Failure:
                ok = False
            s.pop()
            assert s.snapshot() == before
    while len(saved) > 1:
        s.pop()
        saved.pop()
    assert s.snapshot() == saved[0]


def test_monotone_post_survives_backtracking():
    s = Store()
    x, y = s.new_var(0, 3), s.new_var(0, 3)
    s.push()
    s.post(Lt(View(x), View(y)), monotone=True)
    assert s.propagate() and s.max(x) == 2
    s.pop()
    assert s.propagate() and s.max(x) == 2


def test_non_backtrackable_variable_keeps_value():
    s = Store()
    b = s.new_var(0, 1, backtrackable=False)
    s.push()
    s.assign(b, 1)
    s.pop()
    assert s.value(b) == 1


@pytest.mark.parametrize("n", range(3, 9))
def test_ais_solution_counts_match_brute_force(n):
    res = search(ais_model(n), "all")
    assert len(res.solutions) == len(oracle.ais_solutions(n))
    assert sorted(s[:n] for s in res.solutions) == sorted(oracle.ais_solutions(n))


def test_ais_n4_has_four_solutions():
    assert len(search(ais_model(4), "all").solutions) == 4


def test_root_propagation_ais11():
    m = ais_model(11)
    s = m.store
    assert s.propagate()
    assert all(s.size(v) >= 1 for v in range(s.num_vars))


def test_first_branch_identity():
    res = search(ais_model(11, "static", "id"))
    assert res.solutions[0][:11] == (0, 10, 1, 9, 2, 8, 3, 7, 4, 6, 5)
    assert res.stats.backtracks == 0


def test_branch_accounting():
    # x, y in {0,1}, x != y, x < y: one solution (0, 1)
    s = Store()
    x, y = s.new_var(0, 1), s.new_var(0, 1)
    s.post(Ne(View(x), View(y)))
    res = search(Model(s, [x, y], [x, y], InOrder([x, y], "antilex")), "all")
    assert res.solutions == [(1, 0), (0, 1)]
    assert res.stats.branches == 2 and res.stats.backtracks == 0
    assert res.stats.branches >= res.stats.backtracks


def test_unsatisfiable_root_is_not_a_backtrack():
    s = Store()
    x = s.new_var(0, 0)
    y = s.new_var(0, 0)
    s.post(Ne(View(x), View(y)))
    res = search(Model(s, [x, y], [x, y], InOrder([x, y])))
    assert res.status == "exhausted" and res.stats.backtracks == 0 and res.stats.branches == 0


def test_cutoff_reported():
    res = Search(ais_model(11, "static", "rev"), max_branches=50).run()
    assert res.status == "cutoff" and res.stats.cutoff and res.stats.branches == 50


def test_branch_and_bound_maximises():
    s = Store()
    xs = [s.new_var(0, 3) for _ in range(3)]
    s.post(AllDifferent(xs))
    s.post(Lt(View(xs[0]), View(xs[1])))
    res = branch_and_bound_max(Model(s, xs, xs, SmallestDomain(xs), objective=View(xs[0])))
    assert res.stats.best_objective == 2 and res.stats.proved_optimal
    assert res.best[0] == 2


def test_objective_required():
    s = Store()
    x = s.new_var(0, 1)
    with pytest.raises(ConfigError):
        branch_and_bound_max(Model(s, [x], [x], InOrder([x])))


def test_restarts_need_positive_cutoff():
    with pytest.raises(ConfigError):
        search_with_restarts(lambda seed, k: ais_model(5), 0)


def test_restarts_identity_first():
    res = search_with_restarts(lambda seed, k: ais_model(11, "static", "id"), 100)
    assert res.stats.restarts == 0 and res.stats.backtracks == 0
    assert res.best == (0, 10, 1, 9, 2, 8, 3, 7, 4, 6, 5)


def test_restarts_move_on_after_cutoff():
    names = ["rev", "id"]
    res = search_with_restarts(lambda seed, k: ais_model(11, "static", names[min(k, 1)]), 100)
    assert res.stats.restarts == 1 and res.stats.branches == 100 + 8


def test_search_is_deterministic():
    a = search(ais_model(9, "static", "rev"), "all").stats
    b = search(ais_model(9, "static", "rev"), "all").stats
    assert (a.branches, a.backtracks, a.solutions) == (b.branches, b.backtracks, b.solutions)


def test_unknown_mode():
    with pytest.raises(ConfigError):
        Search(ais_model(4)).run("some")
