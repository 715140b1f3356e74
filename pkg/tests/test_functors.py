import pytest

from ainfcat.categories import builtin, terminal_category
from ainfcat.coeff import GF, QQ
from ainfcat.functors import (GeneratingMap, StrictFunctor, brute_force_lift,
                              brute_force_rlp, catalog, check_functor, classify,
                              compose_functors, enumerate_squares, has_rlp, hom_quasi_iso,
                              identity_functor, is_isofibration, is_quasi_equivalence,
                              is_surjective_on_morphisms, is_surjective_on_objects)
from ainfcat.presentations import TruncationConfig

CFG = TruncationConfig(3, 3)
CAT = catalog()
PROBE = (-1, 0, 1, 2)
MAPS = ["Q", "S(0)", "S(1)", "R(0)", "R(1)", "F_prime"]


def gm(text):
    return GeneratingMap.parse(text)


def psi(ring=QQ, **override):
    k, i = builtin("K", ring), builtin("I", ring)
    gens = {"f": i.gen("j01"), "g": i.gen("j10")}
    gens.update(override)
    return StrictFunctor("Psi", k, i, {"1": "1", "2": "2"}, gens)


def test_psi_is_a_functor():
    assert check_functor(psi()).status == "pass"
    for F in CAT.values():
        assert check_functor(F).status == "pass", F.name


@pytest.mark.parametrize("name", ["A", "B", "I", "K", "K_ainf", "P(1)"])
def test_identity_functor_passes(name):
    assert check_functor(identity_functor(builtin(name))).status == "pass"


def test_corrupted_psi_fails():
    i = builtin("I")
    report = check_functor(psi(r1=i.unit("1").scale(1)))
    assert report.status == "fail"
    assert any("r1" in w for w in report.witnesses)


def test_generating_map_labels():
    assert [gm(t).label for t in ("Q", "S(-1)", "R(2)", "F_dg")] == ["Q", "S(-1)", "R(2)", "F_dg"]
    for t in ("S(0)", "R(1)", "F_prime", "F_dg", "Q"):
        assert check_functor(gm(t).functor(GF(2))).status == "pass"
    with pytest.raises(ValueError):
        gm("S(x)")


def test_surjectivity_examples():
    assert is_surjective_on_morphisms(psi(), CFG)
    assert is_surjective_on_morphisms(CAT["Psi1"], CFG)
    assert not is_surjective_on_morphisms(CAT["B->I"], CFG)
    # B(4,5) = 0 cannot reach the unit of A
    assert not is_surjective_on_morphisms(CAT["B->A"], CFG)
    assert is_surjective_on_objects(psi()) and not is_surjective_on_objects(CAT["A->I"])


def test_isofibration_examples():
    assert is_isofibration(psi())
    assert not is_isofibration(CAT["B->I"])
    for name in ("K->A", "I->A", "B->A", "C(0)->A"):
        assert is_isofibration(CAT[name]), name


def test_quasi_equivalence_examples():
    assert is_quasi_equivalence(psi())
    assert is_quasi_equivalence(identity_functor(builtin("K")))
    assert not is_quasi_equivalence(CAT["B->I"])
    assert not hom_quasi_iso(CAT["B->I"], "4", "5")
    assert is_quasi_equivalence(CAT["A->I"])
    # r2 f - f r1 is a nonzero class of I2_dg(1, 2) in degree -1
    assert not hom_quasi_iso(CAT["Psi2"], "1", "2")
    # C(0)(8, 9) is a sphere, B(4, 5) is zero
    assert not is_quasi_equivalence(CAT["C(0)->B"])


def test_has_rlp_examples():
    assert has_rlp(CAT["Psi"], gm("R(0)"), CFG)
    assert not has_rlp(CAT["B->I"], gm("F_dg"), CFG)
    assert has_rlp(CAT["K->A"], gm("Q"), CFG)
    empty_to_a = gm("Q").functor(GF(2))
    assert not has_rlp(empty_to_a, gm("Q"), CFG)


def test_oracle_finds_lift_against_psi():
    F = CAT["Psi"]
    squares = list(enumerate_squares(F, gm("R(0)"), CFG))
    assert squares and all(sq.commutes() for sq in squares)
    for sq in squares:
        res = brute_force_lift(sq, CFG)
        assert res.status == "lift"
        lift = res.lift
        assert check_functor(lift).status == "pass"
        for g in lift.source.quiver.generators:
            img = F.apply(F.source.convert(lift.generator_map[g.name]))
            assert img == F.target.convert(sq.bottom.generator_map[g.name])


def test_oracle_q_against_empty_source():
    F = gm("Q").functor(GF(2))
    res = brute_force_rlp(F, gm("Q"), CFG)
    assert res.status == "fails" and res.witness is not None
    assert brute_force_lift(res.witness, CFG).status == "none"


def test_oracle_f_dg_against_inclusion():
    res = brute_force_rlp(CAT["B->I"], gm("F_dg"), CFG)
    assert res.status == "fails"


def test_oracle_budget_is_distinct():
    sq = next(enumerate_squares(CAT["Psi"], gm("F_dg"), CFG))
    assert brute_force_lift(sq, CFG, budget=1).status == "budget"
    assert brute_force_rlp(CAT["Psi"], gm("F_dg"), CFG, budget=1).status == "budget"


@pytest.mark.parametrize("name", sorted(CAT))
@pytest.mark.parametrize("g", MAPS)
def test_oracle_agrees_with_characterization(name, g):
    F = CAT[name]
    res = brute_force_rlp(F, gm(g), CFG)
    assert res.status != "budget"
    assert (res.status == "holds") == has_rlp(F, gm(g), CFG)


def test_s0_needs_more_than_surjectivity():
    # surjective on morphisms, yet the sphere x cannot be lifted over 0
    F = CAT["C(0)->B"]
    assert is_surjective_on_morphisms(F, CFG)
    assert not has_rlp(F, gm("S(0)"), CFG)
    assert brute_force_rlp(F, gm("S(0)"), CFG).status == "fails"


def test_isofibration_alone_does_not_lift_f_dg():
    # an isofibration that misses r12: the square through id_K has no lift
    F = CAT["I2->K"]
    assert is_isofibration(F) and has_rlp(F, gm("F_dg"), CFG)
    assert not is_surjective_on_morphisms(F, CFG)
    assert brute_force_rlp(F, gm("F_dg"), CFG).status == "fails"


def test_classify_examples():
    assert classify(psi()).to_dict() == {"fibration": True, "trivial_fibration": True,
                                         "weak_equivalence": True}
    assert classify(CAT["B->I"]).to_dict() == {"fibration": False, "trivial_fibration": False,
                                               "weak_equivalence": False}
    c = classify(CAT["A->I"])
    assert c.weak_equivalence and not c.fibration


@pytest.mark.parametrize("name", sorted(CAT))
def test_surj_is_i_injective(name):
    F = CAT[name]
    i_inj = has_rlp(F, gm("Q"), CFG) and all(has_rlp(F, gm(f"S({n})"), CFG) for n in PROBE)
    assert classify(F, CFG).trivial_fibration == i_inj


@pytest.mark.parametrize("name", sorted(CAT))
def test_fibration_is_j_injective(name):
    F = CAT[name]
    j_inj = has_rlp(F, gm("F_prime"), CFG) and all(has_rlp(F, gm(f"R({n})"), CFG) for n in PROBE)
    c = classify(F, CFG)
    assert c.fibration == j_inj
    assert c.trivial_fibration == (j_inj and c.weak_equivalence)


def test_two_out_of_three():
    pairs = [(g, f) for g in CAT.values() for f in CAT.values()
             if f.target.name == g.source.name]
    assert len(pairs) >= 10
    for g, f in pairs:
        gf = compose_functors(g, f)
        assert check_functor(gf).status == "pass"
        w = [is_quasi_equivalence(x, CFG) for x in (f, g, gf)]
        assert sum(w) != 2, (f.name, g.name, w)


def test_maps_to_terminal_are_fibrations():
    t = terminal_category(GF(2))
    for name in ("empty", "A", "B", "C(0)", "P(1)", "I", "I1", "K"):
        c = builtin(name, GF(2))
        F = StrictFunctor(f"{name}->T", c, t, {x: "3" for x in c.objects})
        assert check_functor(F).status == "pass"
        assert classify(F, CFG).fibration, name
        assert brute_force_rlp(F, gm("R(1)"), CFG).status == "holds"
