"""
Conflict analysis on the trail
==============================

Builds a tiny database by hand, lets propagation run into a conflict and
learns from it with each reduction strategy.
"""

from pbconflict import Engine, analyze, parse_constraint
from pbconflict.reduction import KINDS, ReductionStrategy

def fresh_engine():
    e = Engine(5)
    e.add_constraint(parse_constraint("x1 + x2 + 2 x3 >= 2"))
    e.add_constraint(parse_constraint("x1 + 2 ~x3 + x4 + x5 >= 3"))
    e.propagate()
    e.decide(-1)
    return e

e = fresh_engine()
conflict = e.propagate()
print("trail:", e.trail, "  conflict in constraint", conflict)

for kind in KINDS:
    res = analyze(e, conflict, ReductionStrategy(kind), debug=True)
    print(f"{kind:<11} learns {str(res.learned):<22} backjump to {res.backjump_level}, "
          f"{res.resolution_steps} resolution step(s)")

# learning 3 x1 + x4 + x5 >= 3 at level 0 fixes x1 = 1 for good
res = analyze(e, conflict, ReductionStrategy("mir"))
e.backjump_to(res.backjump_level)
e.add_constraint(res.learned)
e.propagate()
print("after learning:", e.trail)
