import pytest

from ainfcat.categories import builtin, check_structure, hom_complex, m1_expand
from ainfcat.coeff import GF, QQ, ZZ
from ainfcat.complexes import homology, verify_homotopy
from ainfcat.functors import check_functor
from ainfcat.pushouts import (check_inc_quasi_iso, interval_certificate, layered_hom,
                              presentation_layers, pushout)
from ainfcat.presentations import TruncationConfig

CFG = TruncationConfig(3, 3)
WIDE = TruncationConfig(4, 4)


def test_q_adds_a_point():
    g = pushout(builtin("A"), "Q")
    assert g.result.objects == ("3", "3'")
    assert not g.result.quiver.generators
    assert g.commutes()
    assert check_inc_quasi_iso(g).status == "out-of-scope"


def test_disk_cell_over_i():
    g = pushout(builtin("I"), "R(0)", {"4": "1", "5": "2"})
    r = g.result
    assert r.objects == ("1", "2")
    e, b = r.quiver.gen("e"), r.quiver.gen("b")
    assert (e.source, e.target, e.degree, b.degree) == ("1", "2", -1, 0)
    assert m1_expand(r, r.gen("e")) == r.gen("b")
    assert g.commutes()
    assert check_functor(g.cell_functor()).status == "pass"
    assert check_functor(g.inc()).status == "pass"
    assert check_structure(r, WIDE).status == "pass"


def test_second_cell_gets_fresh_names():
    once = pushout(builtin("A"), "R(1)", {"4": "3", "5": "3"})
    twice = pushout(once.result, "R(1)", {"4": "3", "5": "3"})
    names = [g.name for g in twice.result.quiver.generators]
    assert names == ["e", "b", "e'", "b'"]
    assert twice.commutes()


def test_sphere_cell_kills_a_class():
    i = builtin("I")
    g = pushout(i, "S(0)", {"8": "1", "9": "2", "x": "j01"})
    r = g.result
    assert [x.name for x in r.quiver.generators] == ["j01", "j10", "e"]
    assert m1_expand(r, r.gen("e")) == r.gen("j01")
    assert g.commutes()
    assert check_structure(r, WIDE).status == "pass"
    assert check_inc_quasi_iso(g).status == "out-of-scope"
    with pytest.raises(ValueError):
        layered_hom(g, "1", "2")


def test_bad_attachments():
    with pytest.raises(ValueError):
        pushout(builtin("I"), "R(0)", {"4": "1"})
    with pytest.raises(ValueError):
        pushout(builtin("I"), "R(0)", {"4": "1", "5": "9"})
    k = builtin("K")
    with pytest.raises(ValueError):  # r1 is not closed
        pushout(k, "S(-1)", {"8": "1", "9": "1", "x": "r1"})
    with pytest.raises(ValueError):
        pushout(k, "F_prime", {"3": "1"})
    with pytest.raises(ValueError):
        pushout(builtin("K_ainf"), "F_dg", {"3": "1"})


@pytest.mark.parametrize("ring", [QQ, ZZ, GF(2)])
@pytest.mark.parametrize("base,att", [("A", ("3", "3")), ("I", ("1", "2")), ("I", ("2", "2"))])
@pytest.mark.parametrize("n", [-1, 0, 2])
def test_disk_cells_are_trivial(ring, base, att, n):
    g = pushout(builtin(base, ring), f"R({n})", {"4": att[0], "5": att[1]})
    report = check_inc_quasi_iso(g, 3, CFG)
    assert report.status == "pass", report.witnesses


def test_layers_of_a_disk_cell():
    i = builtin("I")
    g = pushout(i, "R(1)", {"4": "1", "5": "2"})
    lh = layered_hom(g, "1", "2", 3, CFG)
    assert lh.exact
    assert lh.layers[0] == hom_complex(i, "1", "2", CFG).result
    assert lh.factors[2] == ["M(2,2)", "D", "M(2,1)", "D", "M(1,1)"]
    for m in (1, 2, 3):
        assert verify_homotopy(lh.layers[m], lh.homotopies[m])
    # block-diagonal assembly: no entry leaves its layer
    for k in lh.assembly.degrees():
        rows, cols = lh.offsets(k + 1), lh.offsets(k)
        for (r, c), v in lh.assembly.d(k).entries.items():
            m_c = max(m for m, off in cols.items() if off <= c and lh.layers[m].dim(k))
            m_r = max(m for m, off in rows.items() if off <= r and lh.layers[m].dim(k + 1))
            assert m_r == m_c
    for k in lh.assembly.degrees():
        total = homology(lh.assembly, k).free_rank
        assert total == sum(homology(c, k).free_rank for c in lh.layers.values())


def test_tensor_formula_matches_words_for_disks():
    g = pushout(builtin("I"), "R(0)", {"4": "1", "5": "2"})
    lh = layered_hom(g, "2", "1", 2, CFG)
    words = presentation_layers(g, "2", "1", 2, TruncationConfig(7, 3))
    assert words == {m: {k: c.dim(k) for k in c.degrees()} for m, c in lh.layers.items()}


def test_tensor_formula_overcounts_interval_cells():
    g = pushout(builtin("A"), "F_dg", {"3": "3"})
    lh = layered_hom(g, "3", "3", 2, WIDE)
    words = presentation_layers(g, "3", "3", 2, WIDE)
    dims = {m: {k: c.dim(k) for k in c.degrees()} for m, c in lh.layers.items()}
    assert words[1] == dims[1]
    assert words[2] == {} and dims[2]


def test_inc_is_split_injective():
    g = pushout(builtin("I"), "R(0)", {"4": "1", "5": "2"})
    inc = g.inc()
    base = hom_complex(g.base, "1", "2", CFG)
    glued = hom_complex(g.result, "1", "2", TruncationConfig(5, 3))
    for k in base.result.degrees():
        images = [glued.vector(inc.apply(base.element(k, v)))
                  for v in ([1 if i == j else 0 for i in range(base.result.dim(k))]
                            for j in range(base.result.dim(k)))]
        support = [next(i for i, c in enumerate(v) if c) for v in images]
        assert len(set(support)) == len(images)


def test_f_dg_cell_is_trivial_within_window():
    for base, z in (("A", "3"), ("I", "1")):
        g = pushout(builtin(base), "F_dg", {"3": z})
        assert g.commutes()
        report = check_inc_quasi_iso(g, 2, WIDE)
        assert report.status == "approximate-pass", report.witnesses


def test_f_prime_cell_has_an_obstruction():
    g = pushout(builtin("A"), "F_prime", {"3": "3"})
    assert g.result.kind == "ainf" and g.result.objects == ("3", "2")
    assert g.commutes()
    report = check_inc_quasi_iso(g, 2, WIDE)
    assert report.status == "fail"
    assert report.witnesses[0] == "exact obstruction found"


def test_interval_certificate():
    cert = interval_certificate(QQ)
    assert check_functor(cert, WIDE).status == "pass"
    ka = cert.source
    z = ka.parse("m2(r2,f) - m2(f,r1) + m3(f,g,f)")
    assert m1_expand(ka, z).is_zero()
    assert cert.apply(z) == cert.target.gen("eps")
    # nothing in degree -2 of the target, so eps is not a boundary
    assert hom_complex(cert.target, "o", "o", WIDE).result.dim(-2) == 0
