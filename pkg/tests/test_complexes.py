import random

import pytest

from ainfcat.coeff import GF, QQ, ZZ, Matrix
from ainfcat.complexes import (ChainMap, FiniteComplex, ModuleDescription, NotAComplex,
                               cone, contracting_homotopy, direct_sum, disk, homology,
                               homology_all, identity_map, inclusion_map, is_acyclic,
                               is_contractible, is_quasi_iso, quotient_by_basis, sphere,
                               tensor, tensor_homotopy, verify_homotopy, zero_complex,
                               zero_map)
from ainfcat.randgen import random_chain_map, random_complex

RINGS = [ZZ, QQ, GF(2), GF(3)]


def times_two():
    return FiniteComplex(ZZ, {0: ("x",), 1: ("y",)}, {0: Matrix.from_rows(ZZ, [[2]])})


def test_sphere_and_disk_shapes():
    assert sphere(0).basis == {0: ("s0",)}
    assert list(sphere(-3).basis) == [-3]
    assert disk(0).degrees() == [-1, 0]
    assert disk(5).total_rank() == 2


@pytest.mark.parametrize("ring", RINGS)
@pytest.mark.parametrize("n", [-2, 0, 3])
def test_sphere_disk_homology(ring, n):
    for k in range(n - 3, n + 3):
        assert homology(disk(n, ring), k).is_zero
        assert homology(sphere(n, ring), k) == ModuleDescription(1 if k == n else 0)


def test_torsion_homology():
    assert homology(times_two(), 1) == ModuleDescription(0, (2,))
    assert homology(times_two(), 0).is_zero
    assert not is_contractible(times_two())
    # over F_2 the same complex is a pair of spheres
    c2 = times_two().change_ring(GF(2))
    assert homology(c2, 0).free_rank == 1 and homology(c2, 1).free_rank == 1


def test_d_squared_enforced():
    bad = dict(basis={0: ("a",), 1: ("b",), 2: ("c",)},
               diff={0: Matrix.from_rows(ZZ, [[1]]), 1: Matrix.from_rows(ZZ, [[1]])})
    with pytest.raises(NotAComplex):
        FiniteComplex(ZZ, **bad)
    unchecked = FiniteComplex(ZZ, **bad, validate=False)
    with pytest.raises(NotAComplex):
        homology(unchecked, 1)


@pytest.mark.parametrize("ring", RINGS)
def test_cone_examples(ring):
    s = sphere(0, ring)
    c = cone(identity_map(s))
    assert is_acyclic(c)
    # cone of the identity on a sphere is the disk, differential identity
    assert [c.dim(k) for k in (-1, 0)] == [1, 1]
    assert c.d(-1) == Matrix.identity(ring, 1)
    z = cone(zero_map(s, s))
    assert homology(z, -1).free_rank == 1 and homology(z, 0).free_rank == 1


@pytest.mark.parametrize("ring", RINGS)
def test_tensor_examples(ring):
    c = random_complex(random.Random(3), ring)
    t = tensor(sphere(0, ring), c)
    assert {k: t.dim(k) for k in t.degrees()} == {k: c.dim(k) for k in c.degrees()}
    assert all(t.d(k) == c.d(k) for k in c.degrees())
    assert is_acyclic(tensor(disk(2, ring), sphere(-1, ring)))
    assert tensor(disk(1, ring), disk(2, ring)).d_squared_violations() == []


@pytest.mark.parametrize("ring", RINGS)
def test_quasi_iso_examples(ring):
    n = 1
    assert is_quasi_iso(identity_map(disk(n, ring)))
    assert is_quasi_iso(zero_map(zero_complex(ring), disk(n, ring)))
    s, d = sphere(n, ring), disk(n, ring)
    i_n = ChainMap(s, d, {n: Matrix.identity(ring, 1)})
    assert not is_quasi_iso(i_n)


def test_quasi_iso_torsion_sensitive():
    # multiplication by 3 on a sphere: iso over Q and F_2, not over Z or F_3
    for ring, expected in [(ZZ, False), (QQ, True), (GF(2), True), (GF(3), False)]:
        s = sphere(0, ring)
        assert is_quasi_iso(ChainMap(s, s, {0: Matrix.from_rows(ring, [[3]])})) is expected


@pytest.mark.parametrize("ring", RINGS)
def test_contracting_homotopy_disk(ring):
    d = disk(4, ring)
    h = contracting_homotopy(d)
    assert h is not None and verify_homotopy(d, h)
    assert is_contractible(d)
    assert not is_contractible(sphere(4, ring))


@pytest.mark.parametrize("ring", RINGS)
def test_tensor_homotopy_both_sides(ring):
    d, c = disk(1, ring), random_complex(random.Random(11), ring)
    h = contracting_homotopy(d)
    assert verify_homotopy(tensor(d, c), tensor_homotopy(d, c, h, "left"))
    assert verify_homotopy(tensor(c, d), tensor_homotopy(c, d, h, "right"))


def test_quotient_by_basis():
    c = direct_sum([sphere(0, QQ), disk(0, QQ)], tags=["u", "k"])
    q = quotient_by_basis(c, {0: [("u", "s0")]})
    assert is_acyclic(q)
    with pytest.raises(ValueError):
        quotient_by_basis(disk(0, QQ), {-1: ["e0"]})


@pytest.mark.parametrize("ring", RINGS)
def test_quasi_iso_matches_cone(ring):
    rng = random.Random(5)
    for _ in range(40):
        a, b = random_complex(rng, ring), random_complex(rng, ring)
        f = random_chain_map(rng, a, b)
        assert is_quasi_iso(f) == is_acyclic(cone(f))


def test_kunneth_ranks_over_q():
    rng = random.Random(8)
    for _ in range(30):
        a, b = random_complex(rng, QQ), random_complex(rng, QQ)
        t = tensor(a, b)
        ha, hb = homology_all(a), homology_all(b)
        for k in t.degrees():
            expected = sum(ha[i].free_rank * hb[k - i].free_rank
                           for i in ha if k - i in hb)
            assert homology(t, k).free_rank == expected


def test_inclusion_and_serialization():
    c = direct_sum([sphere(0, ZZ), disk(1, ZZ)])
    inc = inclusion_map(FiniteComplex(ZZ, {0: ((0, "s0"),)}), c)
    assert not inc.non_commuting_degrees()
    assert FiniteComplex.from_json(c.to_json()).to_json() == c.to_json()
