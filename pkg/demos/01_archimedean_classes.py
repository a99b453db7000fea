"""
Archimedean classes and the idempotent monoid Gamma(V)
======================================================

"""

import numpy as np

from archmon.arch import arch_class, arch_matrix, gamma
from archmon.core import ordered
from archmon.gen import build

## The truncated monoid T3 = {0,1,2,3}, a+b = min(a+b, 3)
T3 = ordered(build("trunc(3)"))
print(T3.table)

# derived order: x <= y iff x + d = y for some d
print(T3.rel.astype(int))

## Archimedean classes
# x <=_a y iff x <= ny for some n; 1, 2, 3 all reach 3
print(arch_matrix(T3).astype(int))
print(arch_class(T3, 1).elements, arch_class(T3, 0).elements)

G = gamma(T3)
print(len(G), G.table.tolist())     # a 2-chain, and every class is idempotent

## A group collapses to one class
Z2 = ordered(build("cyclic(2)"))
print(len(gamma(Z2)))

## Direct sums multiply
D = ordered(build("dsum(trunc(3),trunc(3))"))
GD = gamma(D)
for c in GD.classes:
    print(c.class_id, sorted(divmod(x, 4) for x in c.elements))

# the class table is the product of two 2-chains
assert np.array_equal(np.diag(GD.table), np.arange(len(GD)))
