"""Static posting depends on the value heuristic; dynamic posting and SBDS do not.

On a handful of seeded colouring instances we count backtracks for each
method under lex and antilex value orders.  The static set that prefers low
colours fights the antilex order (and the other way round).  The dynamic
rule and SBDS follow whichever order the search uses, so their two columns
match.  All runs prove the same chromatic number.
"""
from symcp.harness import RunConfig, desk_suite, run

cols = [(m, vo) for m in ("static-lex", "static-antilex", "dynamic", "sbds-pair") for vo in ("lex", "antilex")]
print("k  n  colours  " + "  ".join(f"{m}/{vo}" for m, vo in cols))
for k, inst in enumerate(desk_suite("coloring", 8)):
    recs = [run(RunConfig("coloring", m, value_order=vo, seed=k), inst) for m, vo in cols]
    assert len({r.opt for r in recs}) == 1
    print(f"{k:<2d} {inst.n:<2d} {recs[0].opt:<8d} " + "  ".join(f"{r.backtracks:>{len(m) + len(vo) + 1}d}"
                                                             for r, (m, vo) in zip(recs, cols)))
