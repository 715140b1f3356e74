# Lifting properties: hom-level characterizations against an enumerating oracle.
from ainfcat.coeff import GF
from ainfcat.functors import (GeneratingMap, brute_force_lift, brute_force_rlp, catalog,
                              classify, enumerate_squares, has_rlp)
from ainfcat.presentations import TruncationConfig

cfg = TruncationConfig(3, 3)
cat = catalog(GF(2))

for name in ("Psi", "B->I", "C(0)->B", "I2->K"):
    F = cat[name]
    row = []
    for label in ("Q", "S(0)", "R(0)", "F_dg", "F_prime"):
        g = GeneratingMap.parse(label)
        row.append(f"{label}:{has_rlp(F, g, cfg)}/{brute_force_rlp(F, g, cfg).status}")
    print(f"{name:8}", "  ".join(row), classify(F, cfg).to_dict())

# one explicit lift: Psi against R(1), bottom map nonzero
sq = next(s for s in enumerate_squares(cat["Psi"], GeneratingMap.parse("R(1)"), cfg)
          if any(e.terms for e in s.bottom.generator_map.values()))
print("bottom:", {g: str(e) for g, e in sq.bottom.generator_map.items()})
res = brute_force_lift(sq, cfg)
print(res.status, {g: str(e) for g, e in res.lift.generator_map.items()})

# C(0) -> B is onto on homs, yet fails against S(0): the sphere x cannot lift over 0
print("C(0)->B vs S(0):", brute_force_rlp(cat["C(0)->B"], GeneratingMap.parse("S(0)"), cfg).status)
