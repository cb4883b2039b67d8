"""Symmetric-group structure and plethystic generating functions.

Characters of the symmetric-group action on configuration cohomology are
class functions; their Frobenius characteristics assemble into a series
that the plethystic formula reproduces in one stroke.
"""

from fractions import Fraction

from confcohom import (
    GradedModuleInput,
    cf_complex,
    characters,
    formal_tcdga,
    invariants_dims,
    kequals_series,
    named_upset,
    pi_k_char,
)
from confcohom.symfunc import ch_from_character_table, euler_specialize

print("characters for three points of the plane, all diagonals removed")
module = GradedModuleInput("Q", {2: 1})
bar = cf_complex(named_upset("full", 3), formal_tcdga(module, 3))
table = characters(bar)
for d in table.degrees():
    print("  degree %d: %s" % (d, {str(list(ct)): str(v) for ct, v in sorted(table.by_degree[d].items())}))
print("  invariant dimensions (unordered configurations):", invariants_dims(table))

print()
print("the partition-family characteristic via plethysm, k=2, arities <= 4")
print(pi_k_char(2, 4).render_schur())

print()
print("generating series for the plane with double points removed (k=2)")
series = kequals_series({2: Fraction(1)}, 2, 4)
print(series.render_schur())

print()
print("arity-3 coefficient matches the direct equivariant computation")
got = ch_from_character_table(3, characters(bar).by_degree, 4)
print("  complex:", got.arity_part(3).to_schur())
print("  series: ", series.arity_part(3).to_schur())

print()
print("Euler specialization (t = 1) of the k=3 series for the line")
line = kequals_series({1: Fraction(-1)}, 3, 5)
print(euler_specialize(line).render_schur())
