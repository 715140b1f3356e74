# Attaching cells and watching the new hom complexes split into layers.
from ainfcat.categories import builtin
from ainfcat.complexes import verify_homotopy
from ainfcat.presentations import TruncationConfig
from ainfcat.pushouts import check_inc_quasi_iso, layered_hom, pushout

cfg = TruncationConfig(3, 3)

# a disk cell R(1) glued along 4 -> 1, 5 -> 2 in the interval I
g = pushout(builtin("I"), "R(1)", {"4": "1", "5": "2"})
print(g.result.name, [(x.name, x.source, x.target, x.degree) for x in g.result.quiver.generators])

lh = layered_hom(g, "1", "2", 3, cfg)
for m, layer in lh.layers.items():
    dims = {k: layer.dim(k) for k in layer.degrees()}
    ok = verify_homotopy(layer, lh.homotopies[m]) if m else None
    print(f"layer {m}: {' (x) '.join(lh.factors[m])}  dims {dims}  contracted {ok}")
print(check_inc_quasi_iso(g, 3, cfg).line())

# interval cells: strict is fine within the window, A-infinity is not
for cell in ("F_dg", "F_prime"):
    r = check_inc_quasi_iso(pushout(builtin("A"), cell, {"3": "3"}), 2, TruncationConfig(4, 4))
    print(r.line())
