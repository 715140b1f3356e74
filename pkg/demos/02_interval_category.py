# The DG interval K: two objects, f and g inverse up to r1, r2, and r12 tying them.
from ainfcat.categories import builtin, find_preimage, h0, hom_complex, m1_expand
from ainfcat.complexes import homology_all
from ainfcat.functors import catalog, check_functor
from ainfcat.presentations import TruncationConfig

k = builtin("K")
for g in k.quiver.generators:
    print(f"d({g.name}) = {k.d_gen(g.name)}")

# d squares to zero on the generators
print("d^2:", [str(m1_expand(k, m1_expand(k, k.gen(g.name)))) for g in k.quiver.generators])

# r1*g - g*r2 is closed; find something whose differential it is
c = k.parse("r1*g - g*r2")
h, _ = find_preimage(k, c, max_leaves=4)
print(f"d({h}) = {m1_expand(k, h)}")

# K(1, 2) in a window: one class, spanned by f
cfg = TruncationConfig(6, 4)
ht = hom_complex(k, "1", "2", cfg)
print("dims:", {d: ht.result.dim(d) for d in ht.result.degrees()})
print("H:", {d: str(v) for d, v in homology_all(ht.result).items() if not v.is_zero})
print("[f] invertible in H^0:", h0(k, TruncationConfig(4, 3)).is_iso(k.gen("f")))

# Psi collapses K onto the strict interval I
psi = catalog()["Psi"]
print(check_functor(psi).line())
