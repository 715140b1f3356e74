"""Graded quivers, monomials and homogeneous linear combinations.

Two kinds of monomials live here:

* DG words ``Word(("g", "f"))``, written ``g*f``: the left factor is
  post-composed, so ``g*f`` is "f, then g".
* A-infinity planar trees ``Tree(("g", "f"))``, written ``m2(g,f)``, with
  ``m_k(a_1, ..., a_k)`` taking ``a_k`` first.  Internal nodes have arity
  at least 2.  A single generator is ``Word((name,))`` in both settings.

Units are ``Unit(obj)`` (text ``id@obj``).  Strict unitality is applied
eagerly: ``m2(id, a) = m2(a, id) = a`` and ``m_k(..., id, ...) = 0`` for
``k >= 3``, so units never occur inside a monomial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence, Union

from .coeff import RingSpec

__all__ = [
    "Generator",
    "GradedQuiver",
    "Unit",
    "Word",
    "Tree",
    "Monomial",
    "Element",
    "TruncationConfig",
    "NotComposable",
    "compose_word",
    "compose",
    "graft",
    "degree",
    "leaves",
    "leaf_count",
    "max_arity",
    "weight",
    "endpoints",
    "truncate",
    "parse_monomial",
    "parse_element",
    "normalize_raw",
    "left_comb",
    "right_comb",
]


class NotComposable(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    source: str
    target: str
    degree: int


@dataclass(frozen=True)
class GradedQuiver:
    objects: tuple[str, ...]
    generators: tuple[Generator, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(str(o) for o in self.objects))
        object.__setattr__(self, "generators", tuple(self.generators))
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("repeated object label")
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        for g in self.generators:
            if g.source not in self.objects or g.target not in self.objects:
                raise ValueError(f"generator {g.name} has an unknown endpoint")
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", g.name) or re.fullmatch(r"m\d+", g.name):
                raise ValueError(f"bad generator name {g.name!r}")

    def gen(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(f"no generator {name!r}")

    def has(self, name: str) -> bool:
        return any(g.name == name for g in self.generators)

    def names(self) -> list[str]:
        return [g.name for g in self.generators]


@dataclass(frozen=True, order=True)
class Unit:
    obj: str

    def __str__(self):
        return f"id@{self.obj}"


@dataclass(frozen=True, order=True)
class Word:
    letters: tuple[str, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("empty word; use Unit")

    def __str__(self):
        return "*".join(self.letters)


@dataclass(frozen=True)
class Tree:
    """Planar tree; children are generator names or subtrees."""

    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("internal nodes need arity >= 2")
        for c in self.children:
            if not isinstance(c, (str, Tree)):
                raise TypeError(f"bad tree child {c!r}")
        object.__setattr__(self, "_hash", hash(self.children))

    def __hash__(self):
        return self._hash

    @property
    def arity(self):
        return len(self.children)

    def __str__(self):
        return f"m{self.arity}(" + ",".join(str(c) for c in self.children) + ")"


Monomial = Union[Unit, Word, Tree]


def _part(m):
    """Tree-child form of an A-infinity monomial."""
    if isinstance(m, Word):
        if len(m.letters) != 1:
            raise ValueError("multi-letter words are not A-infinity monomials")
        return m.letters[0]
    return m


def _from_part(p) -> Monomial:
    return Word((p,)) if isinstance(p, str) else p


@lru_cache(maxsize=None)
def leaves(m) -> tuple[str, ...]:
    if isinstance(m, Unit):
        return ()
    if isinstance(m, Word):
        return m.letters
    if isinstance(m, str):
        return (m,)
    return tuple(x for c in m.children for x in leaves(c))


def leaf_count(m) -> int:
    return len(leaves(m))


def max_arity(m) -> int:
    if isinstance(m, Tree):
        return max([m.arity] + [max_arity(c) for c in m.children if isinstance(c, Tree)])
    return 0


@lru_cache(maxsize=None)
def _internal_shift(m) -> int:
    if isinstance(m, Tree):
        return (2 - m.arity) + sum(_internal_shift(c) for c in m.children)
    return 0


@lru_cache(maxsize=None)
def degree(m, quiver: GradedQuiver) -> int:
    """Leaf degrees plus ``2 - k`` for every ``m_k`` node; units have degree 0."""
    return sum(quiver.gen(x).degree for x in leaves(m)) + _internal_shift(m)


def weight(m, weights: Mapping[str, int] | None = None) -> int:
    if weights is None:
        return leaf_count(m)
    return sum(weights.get(x, 1) for x in leaves(m))


@lru_cache(maxsize=None)
def endpoints(m, quiver: GradedQuiver) -> tuple[str, str]:
    """``(source, target)``; raises ``NotComposable`` for ill-formed monomials."""
    if isinstance(m, Unit):
        return m.obj, m.obj
    if isinstance(m, str):
        g = quiver.gen(m)
        return g.source, g.target
    if isinstance(m, Word):
        seq = [quiver.gen(x) for x in m.letters]
        for a, b in zip(seq, seq[1:]):
            if a.source != b.target:
                raise NotComposable(f"{m}: {a.name} cannot follow {b.name}")
        return seq[-1].source, seq[0].target
    ends = [endpoints(c, quiver) for c in m.children]
    for (s1, _), (_, t2) in zip(ends, ends[1:]):
        if s1 != t2:
            raise NotComposable(f"{m} is not composable")
    return ends[-1][0], ends[0][1]


def _sort_key(m):
    return (leaf_count(m), str(m))


@dataclass(frozen=True)
class TruncationConfig:
    max_word_length: int = 6
    max_arity: int = 4

    def __post_init__(self):
        if self.max_word_length < 1 or self.max_arity < 1:
            raise ValueError("truncation bounds must be >= 1")

    def __str__(self):
        return f"(L={self.max_word_length}, A={self.max_arity})"


@dataclass(frozen=True, eq=False)
class Element:
    """Homogeneous linear combination of monomials with fixed endpoints."""

    quiver: GradedQuiver
    ring: RingSpec
    kind: str
    source: str
    target: str
    degree: int
    terms: Mapping = field(default_factory=dict)
    truncated: bool = False

    def __post_init__(self):
        if self.kind not in ("dg", "ainf"):
            raise ValueError(f"unknown kind {self.kind!r}")
        clean = {}
        for m, c in self.terms.items():
            c = self.ring.coerce(c)
            if c == 0:
                continue
            if self.kind == "ainf" and isinstance(m, Word) and len(m.letters) > 1:
                raise ValueError("DG words are not A-infinity monomials")
            if self.kind == "dg" and isinstance(m, Tree):
                raise ValueError("trees are not DG monomials")
            s, t = endpoints(m, self.quiver)
            if (s, t) != (self.source, self.target):
                raise NotComposable(f"{m} runs {s}->{t}, expected {self.source}->{self.target}")
            if degree(m, self.quiver) != self.degree:
                raise ValueError(f"{m} has degree {degree(m, self.quiver)}, expected {self.degree}")
            clean[m] = c
        object.__setattr__(self, "terms", clean)

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, quiver, ring, kind, source, target, deg):
        return cls(quiver, ring, kind, source, target, deg, {})

    @classmethod
    def monomial(cls, quiver, ring, kind, m, coeff=1):
        s, t = endpoints(m, quiver)
        return cls(quiver, ring, kind, s, t, degree(m, quiver), {m: coeff})

    @classmethod
    def unit(cls, quiver, ring, kind, obj):
        return cls(quiver, ring, kind, obj, obj, 0, {Unit(obj): 1})

    @classmethod
    def generator(cls, quiver, ring, kind, name):
        return cls.monomial(quiver, ring, kind, Word((name,)))

    def _like(self, terms, truncated=None):
        return Element(self.quiver, self.ring, self.kind, self.source, self.target,
                       self.degree, terms, self.truncated if truncated is None else truncated)

    # linear structure --------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Element):
            raise TypeError("can only combine Elements")
        if (other.source, other.target) != (self.source, self.target):
            raise NotComposable("endpoint mismatch in sum")
        if other.degree != self.degree and other.terms and self.terms:
            raise ValueError("degree mismatch in sum")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        deg = self.degree if self.terms or not other.terms else other.degree
        return Element(self.quiver, self.ring, self.kind, self.source, self.target, deg,
                       terms, self.truncated or other.truncated)

    def __neg__(self):
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.ring.coerce(c)
        return self._like({m: c * v for m, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return ((self.source, self.target) == (other.source, other.target)
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, m):
        return self.terms.get(m, self.ring.zero)

    def monomials(self) -> list:
        return sorted(self.terms, key=_sort_key)

    def support(self) -> set:
        return set(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for m in self.monomials():
            c = self.terms[m]
            neg = (self.ring.kind != "Fp") and c < 0
            a = -c if neg else c
            body = str(m) if a == 1 else f"{a} {m}"
            out.append(("- " if neg else "+ ") + body)
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    __repr__ = __str__


# ---------------------------------------------------------------------------
# composition

def _mono_compose_word(a, b):
    if isinstance(a, Unit):
        return b
    if isinstance(b, Unit):
        return a
    return Word(a.letters + b.letters)


def compose_word(a: Element, b: Element) -> Element:
    """DG composite ``a o b`` (b first); bilinear, units absorbed."""
    if a.kind != "dg" or b.kind != "dg":
        raise ValueError("compose_word is for DG elements")
    if b.target != a.source:
        raise NotComposable(f"cannot compose {a.source}->{a.target} after {b.source}->{b.target}")
    terms: dict = {}
    for (ma, ca), (mb, cb) in product(a.terms.items(), b.terms.items()):
        m = _mono_compose_word(ma, mb)
        terms[m] = terms.get(m, 0) + ca * cb
    return Element(a.quiver, a.ring, "dg", b.source, a.target, a.degree + b.degree,
                   terms, a.truncated or b.truncated)


def _mono_graft(parts: Sequence):
    """Unit-normalized ``m_k`` of monomials; ``None`` encodes zero."""
    k = len(parts)
    units = [isinstance(p, Unit) for p in parts]
    if any(units):
        if k >= 3:
            return None
        return parts[1] if units[0] else parts[0]
    return Tree(tuple(_part(p) for p in parts))


def graft(k: int, children: Sequence[Element], cfg: TruncationConfig | None = None) -> Element:
    """Multilinear ``m_k(children)`` in the free strictly unital A-infinity setting."""
    if k < 2 or len(children) != k:
        raise ValueError("graft needs k >= 2 and exactly k children")
    if cfg is not None and k > cfg.max_arity:
        raise ValueError(f"arity {k} exceeds max_arity {cfg.max_arity}")
    first = children[0]
    for c in children:
        if c.kind != "ainf":
            raise ValueError("graft is for A-infinity elements")
    for a, b in zip(children, children[1:]):
        if a.source != b.target:
            raise NotComposable("children are not composable")
    deg = sum(c.degree for c in children) + 2 - k
    terms: dict = {}
    for combo in product(*[c.terms.items() for c in children]):
        m = _mono_graft([mc[0] for mc in combo])
        if m is None:
            continue
        coeff = 1
        for _, c in combo:
            coeff *= c
        terms[m] = terms.get(m, 0) + coeff
    return Element(first.quiver, first.ring, "ainf", children[-1].source, first.target, deg,
                   terms, any(c.truncated for c in children))


def compose(a: Element, b: Element) -> Element:
    """Binary composite ``a o b``: word concatenation or ``m2``."""
    return compose_word(a, b) if a.kind == "dg" else graft(2, [a, b])


def left_comb(*parts: str) -> Tree:
    t = parts[0]
    for p in parts[1:]:
        t = Tree((t, p))
    return t


def right_comb(*parts: str) -> Tree:
    t = parts[-1]
    for p in reversed(parts[:-1]):
        t = Tree((p, t))
    return t


def truncate(e: Element, cfg: TruncationConfig, weights: Mapping[str, int] | None = None) -> Element:
    """Drop monomials longer than the window; flags the result if anything was dropped."""
    keep = {m: c for m, c in e.terms.items()
            if weight(m, weights) <= cfg.max_word_length and max_arity(m) <= cfg.max_arity}
    return e._like(keep, truncated=e.truncated or len(keep) != len(e.terms))


# ---------------------------------------------------------------------------
# text syntax

_COEFF = re.compile(r"^\s*(\d+(?:/\d+)?)\s+(?=\S)")


def _split_terms(text: str):
    depth, start, out, sign = 0, 0, [], 1
    s = text.strip()
    i = 0
    if s.startswith("-"):
        sign, s = -1, s[1:]
    elif s.startswith("+"):
        s = s[1:]
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0:
            out.append((sign, s[start:i]))
            sign = 1 if ch == "+" else -1
            start = i + 1
    out.append((sign, s[start:]))
    return out


def parse_monomial(text: str):
    text = text.strip()
    if text.startswith("id@"):
        return Unit(text[3:].strip())
    m = re.fullmatch(r"m(\d+)\((.*)\)", text)
    if m:
        k = int(m.group(1))
        args, depth, cur = [], 0, ""
        for ch in m.group(2):
            if ch == "," and depth == 0:
                args.append(cur)
                cur = ""
                continue
            depth += ch == "("
            depth -= ch == ")"
            cur += ch
        args.append(cur)
        if len(args) != k:
            raise ValueError(f"{text}: m{k} needs {k} arguments")
        return _mono_graft([parse_monomial(a) for a in args]) or 0
    letters = tuple(x.strip() for x in text.split("*"))
    if not all(re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", x) for x in letters):
        raise ValueError(f"cannot parse monomial {text!r}")
    return Word(letters)


def parse_element(text: str, quiver: GradedQuiver, ring: RingSpec, kind: str,
                  source: str | None = None, target: str | None = None,
                  deg: int | None = None) -> Element:
    """Parse ``"2 r2*f - f*r1"``, ``"m2(g,f) - id@1"`` or ``"0"``.

    Endpoints and degree are inferred from the first monomial unless given
    (they must be given to parse ``"0"``).
    """
    terms: list = []
    stripped = text.strip()
    if stripped != "0":
        for sign, body in _split_terms(stripped):
            body = body.strip()
            if not body:
                raise ValueError(f"empty term in {text!r}")
            coeff = Fraction(1)
            mc = _COEFF.match(body)
            if mc:
                coeff = Fraction(mc.group(1))
                body = body[mc.end():]
            mono = parse_monomial(body)
            if mono == 0:
                continue
            if kind == "ainf" and isinstance(mono, Word) and len(mono.letters) > 1:
                _word_to_ainf(mono)
            terms.append((mono, ring.coerce(sign * coeff)))
    if terms:
        s, t = endpoints(terms[0][0], quiver)
        source = source or s
        target = target or t
        if deg is None:
            deg = degree(terms[0][0], quiver)
    if source is None or target is None or deg is None:
        raise ValueError(f"cannot infer endpoints/degree of {text!r}")
    out = Element.zero(quiver, ring, kind, source, target, deg)
    for mono, c in terms:
        out = out + Element.monomial(quiver, ring, kind, mono, c)
    return out


def _word_to_ainf(w: Word):
    raise ValueError(f"{w}: use m2(...) trees for A-infinity composites")


# ---------------------------------------------------------------------------
# raw trees with units, for exercising the unit rewrite system

def normalize_raw(raw, rng=None):
    """Normalize a raw tree ``("m", child, ...)`` with ``Unit`` / ``str`` leaves.

    Rewrites ``m2(u, a) -> a``, ``m2(a, u) -> a`` and ``m_k(.., u, ..) -> 0``
    one redex at a time; with ``rng`` the redex is chosen at random.
    Returns a monomial (``Unit``, ``Word`` or ``Tree``) or ``0``.
    """
    term = raw
    while True:
        redexes = list(_redexes(term, ()))
        if not redexes:
            break
        path = rng.choice(redexes) if rng is not None else redexes[0]
        term = _rewrite_at(term, path)
        if term == 0:
            return 0
    return _raw_to_mono(term)


def _redexes(t, path):
    if isinstance(t, tuple):
        kids = t[1:]
        if any(k == 0 for k in kids):
            yield path
            return
        if any(isinstance(k, Unit) for k in kids):
            yield path
        for i, k in enumerate(kids):
            yield from _redexes(k, path + (i,))


def _rewrite_at(t, path):
    if path:
        i = path[0]
        kids = list(t[1:])
        kids[i] = _rewrite_at(kids[i], path[1:])
        return ("m",) + tuple(kids)
    kids = t[1:]
    if any(k == 0 for k in kids):
        return 0
    if len(kids) >= 3:
        return 0
    return kids[1] if isinstance(kids[0], Unit) else kids[0]


def _raw_to_mono(t):
    if isinstance(t, Unit):
        return t
    if isinstance(t, str):
        return Word((t,))
    return Tree(tuple(_part(_raw_to_mono(k)) for k in t[1:]))
