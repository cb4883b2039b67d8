"""Transfer relations across an ideal that bounds.

When every cocycle of an ideal bounds in the ambient algebra, choosing
representatives f and primitives g with d g = -f produces the family
f_n = f g ... g, and the quadratic relations d f_n = sum (-1)^i f_i f_j
hold on the nose.  Flipping the sign of g is caught immediately at n=2.
"""

import random

from confcohom.ainfty import (
    FiniteDga,
    IdealData,
    build_morphism,
    hypothesis_check,
    random_dga_fixture,
    verify_morphism,
)
from confcohom.tcdga import acyclic_cdga

print("the two-generator fixture: dc = w, ideal spanned by w")
algebra = FiniteDga.from_cdga(acyclic_cdga())
ideal = IdealData(["w"])
print("  hypotheses:", hypothesis_check(algebra, ideal))
morphism = build_morphism(algebra, ideal)
print("  f:", morphism.f_map, " g:", morphism.g_map)
print("  relations to N=6:", verify_morphism(morphism, 6))

print()
print("a fixture with surviving products: s in degree 1, ds = x, ideal (x, sx, x^2)")
sx = FiniteDga(
    "Q",
    [("s", 1), ("x", 2), ("sx", 3), ("x2", 4)],
    {"s": {"x": 1}, "sx": {"x2": 1}},
    {("s", "x"): {"sx": 1}, ("x", "s"): {"sx": 1}, ("x", "x"): {"x2": 1}},
)
ideal = IdealData(["x", "sx", "x2"])
morphism = build_morphism(sx, ideal)
print("  f_2 on the generator pair:", morphism.f_n(("h0", "h0")))
print("  relations to N=6:", verify_morphism(morphism, 6))

print()
print("corrupting the primitive sign is caught at once")
bad = build_morphism(sx, ideal)
bad.g_map = {k: {name: -c for name, c in v.items()} for k, v in bad.g_map.items()}
print("  ", verify_morphism(bad, 4))

print()
print("randomized fixtures (rejection-sampled to satisfy the hypotheses)")
rng = random.Random(7)
for i in range(5):
    a, idl = random_dga_fixture(rng)
    result = verify_morphism(build_morphism(a, idl), 5)
    print("  fixture %d: %d basis elements, %r" % (i, len(a.basis), result))
