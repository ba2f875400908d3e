"""
Cuts and reason reduction
=========================

The three cuts, then what goes wrong when a reason is resolved without
being reduced first.
"""

from pbconflict import divide, mir, parse_constraint, resolve, saturate, slack
from pbconflict.reduction import KINDS, ReductionStrategy, reduce

# a reason that has propagated x3 under x1 = x2 = 0
c = parse_constraint("2 x1 + 6 x2 + 10 x3 >= 8")
print("constraint     ", c)
print("saturate       ", saturate(c))
print("divide by 10   ", divide(c, 10))
# scaled by 8 mod 10 the MIR cut is stronger than the division cut
print("mir with 10    ", mir(c, 10))

# x1 = 0 is a decision and the reason below propagates x3
reason = parse_constraint("x1 + x2 + 2 x3 >= 2")
conflict = parse_constraint("x1 + 2 ~x3 + x4 + x5 >= 3")
rho = {1: 0, 3: 1}
print()
print("conflict slack ", slack(conflict, rho))

plain = resolve(conflict, reason, 3)
# slack 0 under x1 = 0: the resolvent is no longer a conflict
print("plain resolvent", plain, "slack", slack(plain, {1: 0}))

for kind in KINDS:
    reduced = reduce(ReductionStrategy(kind), reason, conflict, 3, rho)
    res = resolve(conflict, reduced, 3)
    print(f"{kind:<11} reduced {str(reduced):<22} resolvent {str(res):<24} slack {slack(res, {1: 0})}")
