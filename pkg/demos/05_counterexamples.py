"""
Where the stated results break
==============================

The verification harness checks each result on small monoids.  Three
statements fail as written; here are the smallest witnesses found.
"""

from archmon.core import ordered
from archmon.gen import build, random_abstract_flock
from archmon.sa import complement_dual_report
from archmon.strat import stratify
from archmon.verify import instance, run_check, sweep

## Complement duality on Z2
# {0} is not SA, yet U = (V - W) + C(0) = {0, 1} is a submonoid
Z2 = ordered(build("cyclic(2)"))
print(complement_dual_report(Z2, {0}))
print(run_check(instance(Z2, "Z2"), "P3.6").witness)

## Exhaustive sweep of all monoids of order <= 4
rep = sweep(range(1, 5))
print(rep.instances, rep.fail_count, sorted({sid for _, sid, _ in rep.failures}))

## Subadditivity of heights
# 1 < 2 < 4 and 3 < 4 with 1 + 3 = 4: h(1 + 3) = 3 > h(1) + h(3) = 2
F = random_abstract_flock(9)
print(F.gamma.table.tolist(), stratify(F).layers)
print(run_check(instance(F, "abstract#9"), "T3.11").witness)
