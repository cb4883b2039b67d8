"""The bracket route to the same cohomology.

Left-normed bracket words give a basis of size (n-1)! in each arity;
tensoring the suspended coefficient algebra aritywise with these words
yields a twisted Lie algebra whose Chevalley-Eilenberg chains recover the
configuration-space complex, including the symmetric-group characters.
"""

from confcohom import (
    GradedModuleInput,
    compare_cf_ce,
    formal_tcdga,
    normalize_word,
)
from confcohom.celie import lie_basis, lie_character, render_word, twisted_lie, ce_complex
from confcohom.tcdga import acyclic_cdga, constant_tcdga, suspension

print("normalization into the left-normed basis")
for tree in ((2, 1), (1, (2, 3)), ((1, 2), (3, 4))):
    combo = normalize_word(tree)
    pretty = " + ".join(
        "%s %s" % (c, render_word(w)) if c != 1 else render_word(w) for w, c in sorted(combo.items(), key=repr)
    )
    print("  %s  ->  %s" % (render_word(tree), pretty))

print()
print("bracket-word bases and characters")
for n in (2, 3, 4):
    print("  arity %d: %d words; character %s" % (n, len(lie_basis(range(1, n + 1))), dict(lie_character(n))))

print()
print("abelian coefficients: the chains are the answer")
algebra = suspension(formal_tcdga(GradedModuleInput("Q", {2: 1}), 3))
lie = twisted_lie(algebra)
ce = ce_complex(lie, 3)
print("  chain ranks:", {d: ce.total.rank(d) for d in ce.total.degrees()})
print("  cohomology: ", ce.cohomology())

print()
print("the two routes agree, with characters")
for n in (2, 3, 4):
    report = compare_cf_ce(formal_tcdga(GradedModuleInput("Q", {2: 1}), n), n)
    print("  one generator, n=%d: %r" % (n, report))
report = compare_cf_ce(constant_tcdga(acyclic_cdga(), 3), 3)
print("  acyclic constant coefficients, n=3: %r" % (report,))
