import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ainfcat.coeff import GF, QQ
from ainfcat.presentations import (Element, Generator, GradedQuiver, NotComposable, Tree,
                                   TruncationConfig, Unit, Word, compose_word, degree, graft,
                                   left_comb, normalize_raw, parse_element, parse_monomial,
                                   right_comb, truncate)

# one object, so every word and tree is composable
LOOP = GradedQuiver(("x",), (Generator("a", "x", "x", 0), Generator("b", "x", "x", 1),
                             Generator("c", "x", "x", -1)))
KQ = GradedQuiver(("1", "2"), (Generator("f", "1", "2", 0), Generator("g", "2", "1", 0),
                               Generator("r1", "1", "1", -1), Generator("r2", "2", "2", -1)))
U = Unit("x")


def el(text, quiver=LOOP, kind="ainf", ring=QQ, **kw):
    return parse_element(text, quiver, ring, kind, **kw)


def test_compose_word_examples():
    g, f = el("g", KQ, "dg"), el("f", KQ, "dg")
    gf = compose_word(g, f)
    assert (gf.source, gf.target, gf.degree) == ("1", "1", 0)
    assert gf.monomials() == [Word(("g", "f"))]
    unit = Element.unit(KQ, QQ, "dg", "2")
    assert compose_word(unit, f) == f
    fg = compose_word(f, g)
    assert compose_word(fg, f) == compose_word(f, compose_word(g, f))
    with pytest.raises(NotComposable):
        compose_word(f, f)


def test_graft_unit_rewrites():
    a, u = el("a"), Element.unit(LOOP, QQ, "ainf", "x")
    assert graft(2, [u, a]) == a and graft(2, [a, u]) == a
    assert graft(3, [a, u, a]).is_zero()
    f, g = el("f", KQ), el("g", KQ)
    lhs = graft(2, [graft(2, [f, g]), f])
    rhs = graft(2, [f, graft(2, [g, f])])
    assert lhs != rhs
    assert lhs.monomials() == [left_comb("f", "g", "f")]
    assert rhs.monomials() == [right_comb("f", "g", "f")]
    with pytest.raises(ValueError):
        graft(3, [a, a, a], TruncationConfig(6, 2))


def test_degree_examples():
    assert degree(Word(("g", "f")), KQ) == 0
    assert degree(Tree(("g", "f")), KQ) == 0
    assert degree(Tree(("f", "g", "f")), KQ) == -1
    assert degree(U, LOOP) == 0
    assert degree(Tree(("b", Tree(("a", "c", "b")))), LOOP) == 1 + (0 - 1 + 1 - 1)


def test_truncate_examples():
    e = el("a*a*a*a*a*a*a", kind="dg")
    cfg = TruncationConfig(6, 4)
    t = truncate(e, cfg)
    assert t.is_zero() and t.truncated
    short = el("a*a + 2 a*a", kind="dg")
    assert truncate(short, cfg) == short and not truncate(short, cfg).truncated
    mixed = el("a*a*a*a*a*a*a + 3 a*a*a*a*a*a*a", kind="dg") + el("a", kind="dg")
    assert truncate(truncate(mixed, TruncationConfig(1, 1)), TruncationConfig(1, 1)) == \
        truncate(mixed, TruncationConfig(1, 1))


def test_parse_round_trip():
    e = el("m2(r2,f) - m2(f,r1)", KQ)
    assert str(e) in ("m2(r2,f) - m2(f,r1)", "-m2(f,r1) + m2(r2,f)")
    assert el(str(e), KQ) == e
    assert parse_monomial("m3(a,id@x,a)") == 0
    assert parse_monomial("m2(id@x,a)") == Word(("a",))
    with pytest.raises(ValueError):
        el("a*a")  # words are not A-infinity monomials
    z = el("0", source="x", target="x", deg=3)
    assert z.is_zero() and z.degree == 3


def test_element_validation():
    with pytest.raises(ValueError):
        Element(LOOP, QQ, "dg", "x", "x", 0, {Word(("b",)): 1})
    with pytest.raises(NotComposable):
        Element(KQ, QQ, "dg", "1", "1", 0, {Word(("f", "f")): 1})
    assert Element(LOOP, GF(2), "dg", "x", "x", 0, {Word(("a",)): 2}).is_zero()


# random raw trees with unit leaves ---------------------------------------

def random_raw(rng, leaves_left):
    if leaves_left == 1 or rng.random() < 0.3:
        return U if rng.random() < 0.3 else rng.choice("abc")
    k = rng.randint(2, min(4, leaves_left))
    sizes = [1] * k
    for _ in range(rng.randint(0, leaves_left - k)):
        sizes[rng.randrange(k)] += 1
    return ("m",) + tuple(random_raw(rng, s) for s in sizes)


def bottom_up(raw):
    """Reference normal form: graft children that are already normal."""
    if isinstance(raw, Unit):
        return Element.unit(LOOP, QQ, "ainf", "x")
    if isinstance(raw, str):
        return Element.generator(LOOP, QQ, "ainf", raw)
    kids = [bottom_up(k) for k in raw[1:]]
    return graft(len(kids), kids)


def test_unit_rewriting_confluent():
    rng = random.Random(2024)
    for _ in range(1000):
        raw = random_raw(rng, rng.randint(1, 8))
        forms = {normalize_raw(raw, random.Random(seed)) for seed in range(4)}
        forms.add(normalize_raw(raw))
        assert len(forms) == 1
        nf = forms.pop()
        ref = bottom_up(raw)
        if nf == 0:
            assert ref.is_zero()
        else:
            assert ref.monomials() == [nf]


# properties ----------------------------------------------------------------

GENS = st.sampled_from(["a", "b", "c"])


@st.composite
def trees(draw, max_leaves=5):
    n = draw(st.integers(1, max_leaves))
    raw = random_raw(random.Random(draw(st.integers(0, 10**6))), n)
    return bottom_up(raw)


@settings(max_examples=80, deadline=None)
@given(trees(), trees(), trees())
def test_graft_degree_shift(x, y, z):
    for k, kids in ((2, [x, y]), (3, [x, y, z])):
        out = graft(k, kids)
        assert out.degree == sum(c.degree for c in kids) + 2 - k
        for m in out.terms:
            assert degree(m, LOOP) == out.degree


@settings(max_examples=80, deadline=None)
@given(st.lists(GENS, min_size=1, max_size=5), st.lists(GENS, min_size=1, max_size=5))
def test_word_degree_additive(u, v):
    a = Element.monomial(LOOP, QQ, "dg", Word(tuple(u)))
    b = Element.monomial(LOOP, QQ, "dg", Word(tuple(v)))
    assert compose_word(a, b).degree == a.degree + b.degree


@settings(max_examples=60, deadline=None)
@given(trees(), trees(), trees(), st.integers(0, 2), st.integers(-2, 2))
def test_graft_multilinear(a, b, other, slot, c):
    if a.degree != b.degree:
        b = a
    kids_a = [other, other, other]
    kids_b = list(kids_a)
    kids_s = list(kids_a)
    kids_a[slot], kids_b[slot], kids_s[slot] = a, b, a + b.scale(c)
    assert graft(3, kids_s) == graft(3, kids_a) + graft(3, kids_b).scale(c)
