"""
Heights below omega + omega
===========================

"""

from archmon.gen import boolean, chain
from archmon.strat import Ordinal, abstract_flock, compose_abstract, stratify, transfinite_height

## Layers of the free semilattice on two generators
F = abstract_flock(boolean(2), [1, 2, 3])
S = stratify(F)
print(S.layers, S.heights())

## Stacking a 2-chain on top of a 3-chain
lower = abstract_flock(chain(4), [1, 2, 3])
upper = abstract_flock(chain(3), [1, 2])
C, part_f, part_g = compose_abstract(lower, upper)
h = transfinite_height(stratify(part_f, C), stratify(part_g, C))
print({a: str(v) for a, v in sorted(h.items())})

## Ordinal sums absorb on the left
print(Ordinal.finite(5) + Ordinal.omega_plus(1), Ordinal.omega_plus(1) + Ordinal.finite(5))
