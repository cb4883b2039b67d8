"""Order complexes of the partition lattice.

The doubly collapsed order complex of the full partition lattice on n
elements has free cohomology of rank (n-1)! concentrated in degree n-1;
collapsing behaves like a double suspension of the proper part, and the
construction turns cartesian products into smash products.
"""

import math

from confcohom import (
    FinitePoset,
    cohomology,
    enumerate_partitions,
    order_complex,
)
from confcohom.posetcx import smash_check


def partition_poset(n):
    return FinitePoset.from_partitions(enumerate_partitions(n))


print("collapsed partition complexes over the integers")
for n in range(2, 6):
    h = cohomology(order_complex(partition_poset(n), "hatcheck", ring="Z"))
    print(
        "  n=%d: H^%d has rank %d (expected %d), torsion free: %s"
        % (n, n - 1, h.free_rank(n - 1), math.factorial(n - 1), h.is_torsion_free())
    )

print()
print("the four collapse variants on the lattice for n=3")
poset = partition_poset(3)
for variant in ("plain", "hat", "check", "hatcheck"):
    h = cohomology(order_complex(poset, variant))
    print("  %-9s -> %r" % (variant, h))

print()
print("products become smash products (rank check over Q)")
p2, p3 = partition_poset(2), partition_poset(3)
print("  {pt} x {pt}:", smash_check(FinitePoset([0], lambda a, b: True), FinitePoset([0], lambda a, b: True)))
print("  Pi_2 x Pi_2:", smash_check(p2, p2))
print("  Pi_3 x Pi_2:", smash_check(p3, p2))

print()
print("families with blocks of size 1 or >= k (the k-coincidence diagonals)")
for n, k in ((5, 3), (6, 3), (7, 3)):
    parts = [
        p
        for p in enumerate_partitions(n, max_n=max(n, 9))
        if all(s == 1 or s >= k for s in p.block_sizes())
    ]
    h = cohomology(order_complex(FinitePoset.from_partitions(parts), "hatcheck", ring="Z"))
    print("  n=%d, k=%d: %r" % (n, k, h))
