"""
Flocks, centers and principal sets
==================================

On a finite monoid every class contains an idempotent, so every class
meets its entourage.  Flocks are therefore single classes; abstract mode
is where the theory has room to move.
"""

from archmon.arch import gamma
from archmon.core import ordered
from archmon.flock import (
    classify_dichotomy,
    classify_inessential,
    compatible,
    max_flock,
    principal_set_of_flock,
    s_f_of,
)
from archmon.gen import build, chain
from archmon.strat import abstract_flock, stratify

T3 = ordered(build("trunc(3)"))
D = ordered(build("dsum(trunc(3),trunc(3))"))

## Every class is centered
r = classify_dichotomy(T3, 1)
print(r.tag, r.evidence)            # 3 = 3 + 3 lies in [1] and in C([1])

## Compatibility
G = gamma(D)
row, col = G.proj[4], G.proj[1]
print(compatible(D, row, col))      # their sum attracts all of V

## Maximal flocks and their principal sets
print(max_flock(T3, 1).class_ids, sorted(principal_set_of_flock(T3, {1})))
print(sorted(divmod(x, 4) for x in s_f_of(D, row)))

## Essential and controlled classes
print(classify_inessential(T3, range(4), 1), classify_inessential(T3, range(4), 0))

## An abstract flock: a 3-chain whose entourage misses it
F = abstract_flock(chain(4), [1, 2, 3])
print(classify_dichotomy(F, 1).tag, F.grounded({1, 2}), F.grounded({2, 3}))
print(stratify(F).layers)
