# The same presentation read as an A-infinity category behaves differently.
from ainfcat.categories import builtin, check_structure, hom_complex, m1_expand
from ainfcat.functors import check_functor
from ainfcat.presentations import TruncationConfig
from ainfcat.pushouts import interval_certificate

ka = builtin("K_ainf")

# without strict associativity the two bracketings of f g f differ
print("m1(m2(r2,f) - m2(f,r1)) =", m1_expand(ka, ka.parse("m2(r2,f) - m2(f,r1)")))

# the Stasheff identities still hold (checked on every tuple in the window)
print(check_structure(ka, TruncationConfig(6, 4)).line())

# adding m3(f,g,f) closes the element up
z = ka.parse("m2(r2,f) - m2(f,r1) + m3(f,g,f)")
print("m1(z) =", m1_expand(ka, z))

# z never bounds: a strict functor to R[eps]/eps^2 (|eps| = -1) sends it to eps
cert = interval_certificate()
print(check_functor(cert, TruncationConfig(4, 4)).line())
print("image of z:", cert.apply(z))
E = cert.target
print("degree -2 of the target:", hom_complex(E, "o", "o", TruncationConfig(4, 4)).result.dim(-2))
