"""All-interval series, n = 11: the same breaking set under four symmetries.

Branching on the differences (last to first, smallest value first), the
identity set agrees with the heuristic and the first descent is a solution.
Reversal, and reversal plus inversion, cut that solution away and send the
search into thousands of branches.  Inversion keeps every difference, so it
costs the same as the identity.  Model restarts with a random symmetry and a
cutoff of 100 branches average close to the cheap case.
"""
import statistics

from symcp.bench import ais_model
from symcp.engine import search
from symcp.harness import RunConfig, run

for name in ("id", "inv", "rev", "inv_rev"):
    res = search(ais_model(11, "static", name))
    print(f"{name:8s} branches {res.stats.branches:6d}  backtracks {res.stats.backtracks:6d}  "
          f"first solution {res.solutions[0][:11]}")

trials = [run(RunConfig("ais", "restarts", gen={"n": 11}, cutoff=100, seed=k)).branches for k in range(200)]
print(f"restarts, cutoff 100: mean {statistics.fmean(trials):.1f} branches over {len(trials)} trials")
