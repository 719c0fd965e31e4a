"""Watching the forced symmetry rule post constraints during search.

We decide x0 = 10 and then x10 = 5 by hand.  After the first decision the
identity and reversal+inversion sets are dead, reversal soon follows, and
the rule posts the inversion set one constraint at a time.  Every
entailment it saw is listed, with the symmetries that posting would have
eliminated.
"""
from symcp.bench import ais_model
from symcp.engine import search


class Scripted:
    def __init__(self, script, rest):
        self.script, self.rest = script, rest

    def __call__(self, s):
        for v, val in self.script:
            if not s.is_fixed(v):
                return v, val
        return self.rest(s)


m = ais_model(11, "dynamic")
m.brancher = Scripted([(0, 10), (10, 5)], m.brancher)
res = search(m)
rule = m.listeners[0]
print("solution", res.solutions[0][:11])
print("surviving symmetry", sorted(rule.consistent))
for e in rule.state.events:
    verdict = "posted" if e.posted else "waited"
    print(f"  {verdict:6s} {e.constraint!r:70s} would eliminate {sorted(e.eliminated)}")
