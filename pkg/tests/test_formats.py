import pytest
from hypothesis import given, settings, strategies as st

from ainfcat.categories import BUILTIN_NAMES, builtin
from ainfcat.coeff import GF, QQ, ZZ
from ainfcat.formats import FormatError, dump_functor, dump_presentation, parse_documents
from ainfcat.functors import catalog, check_functor

PSI_FILE = """
# the comparison functor
functor: Psi
source: builtin:K
target: builtin:I
object: 1 -> 1
object: 2 -> 2
gen: f -> j01
gen: g -> j10
"""

NAMES = [n.replace("(n)", "(-1)") for n in BUILTIN_NAMES]


def same(a, b):
    return (a.name, a.kind, a.quiver, a.diff, a.relations) == (b.name, b.kind, b.quiver,
                                                                b.diff, b.relations)


@pytest.mark.parametrize("name", NAMES)
def test_builtins_round_trip(name):
    cat = builtin(name)
    text = dump_presentation(cat)
    assert same(parse_documents(text)[cat.name], cat)


def test_presentation_sections():
    text = dump_presentation(builtin("K"))
    assert "  r12 : 1 -> 2 : -2" in text
    assert "  r12 = -f*r1 + r2*f" in text
    assert "relations:" in dump_presentation(builtin("I"))


def test_functor_file():
    F = parse_documents(PSI_FILE)["Psi"]
    assert check_functor(F).status == "pass"
    assert F.generator_map["r12"].is_zero()


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(sorted(catalog(GF(2)))), st.sampled_from([QQ, ZZ, GF(2), GF(5)]))
def test_functors_round_trip(name, ring):
    F = catalog(ring)[name]
    G = parse_documents(dump_functor(F), ring)[F.name]
    assert G.object_map == F.object_map
    assert all(G.generator_map[g] == F.generator_map[g] for g in F.generator_map)


def test_functor_between_file_presentations():
    text = dump_presentation(builtin("B")) + "---\n" + """
name: T2
objects: a
---
functor: collapse
source: B
target: T2
object: 4 -> a
object: 5 -> a
"""
    docs = parse_documents(text)
    assert list(docs) == ["B", "T2", "collapse"]
    assert docs["collapse"].target is docs["T2"]


@pytest.mark.parametrize("text", [
    "name: X\ngenerators:\n  f : 1 -> 2\n",
    "name: X\nobjects: 1\ngenerators:\n  f : 1 -> 2 : 0\n",
    "name: X\nobjects: 1 2\ngenerators:\n  f : 1 -> 2 : 0\ndiff:\n  f g\n",
    "functor: F\nsource: builtin:A\ntarget: builtin:I\n",
    "functor: F\nsource: builtin:Nope\ntarget: builtin:I\nobject: 3 -> 1\n",
    "functor: F\nsource: builtin:I\ntarget: builtin:A\nobject: 1 -> 3\nobject: 2 -> 3\n"
    "gen: j01 -> zz\n",
    "name: X\nobjects: 1\nbogus line\n",
])
def test_malformed_input(text):
    with pytest.raises(FormatError):
        parse_documents(text)
