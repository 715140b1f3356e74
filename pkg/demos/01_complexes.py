# Finite cochain complexes over Z, Q and F_p: spheres, disks, cones, tensors.
from ainfcat.coeff import GF, QQ, ZZ
from ainfcat.complexes import (cone, contracting_homotopy, disk, homology_all, identity_map,
                               is_acyclic, is_quasi_iso, sphere, tensor, tensor_homotopy,
                               verify_homotopy)

# sphere(n) is R in degree n, disk(n) is R -> R in degrees n-1, n
for ring in (ZZ, QQ, GF(2)):
    print(ring, {k: str(h) for k, h in homology_all(sphere(2, ring)).items()},
          "disk acyclic:", is_acyclic(disk(2, ring)))

# a map is a quasi-isomorphism exactly when its cone is acyclic
s = sphere(0)
f = identity_map(s)
print("id quasi-iso:", is_quasi_iso(f), " cone acyclic:", is_acyclic(cone(f)))

# a contraction of the disk tensors up to one of disk (x) sphere
d = disk(1, QQ)
h = contracting_homotopy(d)
both = tensor(d, sphere(3, QQ))
h2 = tensor_homotopy(d, sphere(3, QQ), h, "left")
print("disk (x) sphere degrees:", both.degrees(), " h d + d h = id:", verify_homotopy(both, h2))
