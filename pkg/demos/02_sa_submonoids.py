"""
Summand absorbing submonoids and entourages
===========================================

"""

from archmon.core import ordered
from archmon.flock import entourages
from archmon.gen import build
from archmon.sa import cbar, cbar_omega, enumerate_sa, is_sa, w_of

T3 = ordered(build("trunc(3)"))

## SA means x + y in W forces x, y in W
print(is_sa(T3.monoid, {0}), is_sa(T3.monoid, {0, 1}))

# down-sets of T3 are not enough: 1 + 1 = 2 leaves {0, 1}
print([sorted(s.elements) for s in enumerate_sa(T3)])

## The operators C(x) and C_omega(x)
for x in range(4):
    print(x, sorted(cbar(T3, x)), sorted(cbar_omega(T3, x)))

## W(x), the least SA-submonoid holding the class of x
print(sorted(w_of(T3, 1).elements))

## Entourages of T3 + T3: the two axes, the origin and everything
D = ordered(build("dsum(trunc(3),trunc(3))"))
for e in entourages(D):
    print(sorted(divmod(x, 4) for x in e.elements), "<-", [divmod(x, 4) for x in e.witnesses[:2]])
