"""DG and strictly unital A-infinity categories given by presentations.

A presentation is a graded quiver, the differential of every generator
and (DG only) a list of relations.  A-infinity presentations are free:
their hom spaces have the planar trees of ``presentations`` as a basis.

Sign convention (the single place it is fixed).  The Stasheff identity
for ``n`` inputs is

    sum_{r+s+t=n} (-1)^{r + s t} m_{r+1+t}(1^r (x) m_s (x) 1^t) = 0,

with the Koszul rule ``(1^r (x) m_s)(a_1 (x) ...) = (-1)^{s(|a_1|+...+|a_r|)}``
since ``m_s`` has degree ``2 - s``.  For ``n = 2`` this is the Leibniz rule
``d(a b) = d(a) b + (-1)^|a| a d(b)``, which is what DG words use.  In a
free A-infinity category the identity is solved for its ``m_1 o m_n``
term, which is how ``m1_expand`` acts on trees.

Hom spaces are infinite in general, so they are computed inside a window:
monomials of weighted length at most ``max_word_length`` and arity at most
``max_arity``.  A generator's weight is the least integer making the
differential weight non-increasing (``r1`` with ``d r1 = g f - 1`` weighs
2), which makes every window a genuine subcomplex.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence

from .coeff import QQ, Matrix, RingSpec, solve
from .complexes import FiniteComplex, homology, homology_basis
from .presentations import (Element, Generator, GradedQuiver, NotComposable, Tree,
                            TruncationConfig, Unit, Word, compose_word, degree, endpoints,
                            graft, leaf_count, max_arity, parse_element, weight)
from .presentations import _mono_graft
from .reports import CheckReport, verdict

__all__ = [
    "CategoryPresentation",
    "HomTruncation",
    "H0Category",
    "WindowNotClosed",
    "BUILTIN_NAMES",
    "builtin",
    "terminal_category",
    "m1_expand",
    "hom_complex",
    "h0",
    "check_structure",
    "split_unit_check",
    "stasheff_defect",
    "normal_form",
    "find_preimage",
    "dg_shadow",
    "window_monomials",
]


class WindowNotClosed(RuntimeError):
    """The differential of a window monomial leaves the window."""


@dataclass(frozen=True, eq=False)
class CategoryPresentation:
    name: str
    kind: str
    quiver: GradedQuiver
    ring: RingSpec
    diff: Mapping[str, Element] = field(default_factory=dict)
    relations: tuple[Element, ...] = ()

    def __post_init__(self):
        if self.kind not in ("dg", "ainf"):
            raise ValueError(f"kind must be 'dg' or 'ainf', not {self.kind!r}")
        object.__setattr__(self, "relations", tuple(self.relations))
        object.__setattr__(self, "diff", dict(self.diff))
        if self.kind == "ainf" and self.relations:
            raise ValueError("A-infinity presentations are free (no relations)")
        for name, e in self.diff.items():
            g = self.quiver.gen(name)
            if e.kind != self.kind or e.ring != self.ring:
                raise ValueError(f"differential of {name} has the wrong kind or ring")
            if (e.source, e.target) != (g.source, g.target):
                raise NotComposable(f"d({name}) has endpoints {e.source}->{e.target}")
            if e.terms and e.degree != g.degree + 1:
                raise ValueError(f"d({name}) must have degree {g.degree + 1}")
        for rel in self.relations:
            if rel.kind != "dg" or rel.ring != self.ring:
                raise ValueError("relations must be DG elements over the same ring")
        object.__setattr__(self, "_m1_cache", {})
        object.__setattr__(self, "_hom_cache", {})
        object.__setattr__(self, "_quot_cache", {})

    # element helpers --------------------------------------------------
    @property
    def objects(self) -> tuple[str, ...]:
        return self.quiver.objects

    def gen(self, name: str) -> Element:
        return Element.generator(self.quiver, self.ring, self.kind, name)

    def unit(self, obj: str) -> Element:
        return Element.unit(self.quiver, self.ring, self.kind, obj)

    def zero(self, source: str, target: str, deg: int) -> Element:
        return Element.zero(self.quiver, self.ring, self.kind, source, target, deg)

    def mono(self, m, coeff=1) -> Element:
        return Element.monomial(self.quiver, self.ring, self.kind, m, coeff)

    def parse(self, text: str, source=None, target=None, deg=None) -> Element:
        return parse_element(text, self.quiver, self.ring, self.kind, source, target, deg)

    def compose(self, a: Element, b: Element) -> Element:
        return compose_word(a, b) if self.kind == "dg" else graft(2, [a, b])

    def compose_many(self, parts: Sequence[Element]) -> Element:
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = self.compose(p, out)
        return out

    def d_gen(self, name: str) -> Element:
        g = self.quiver.gen(name)
        e = self.diff.get(name)
        return e if e is not None else self.zero(g.source, g.target, g.degree + 1)

    def convert(self, e: Element) -> Element:
        """Re-home an element of another presentation sharing generator names."""
        return Element(self.quiver, self.ring, self.kind, e.source, e.target, e.degree,
                       {m: self.ring.coerce(c) for m, c in e.terms.items()})

    @cached_property
    def weights(self) -> dict[str, int]:
        w = {g.name: 1 for g in self.quiver.generators}
        for _ in range(len(w) + 1):
            changed = False
            for name in w:
                need = max([1] + [weight(m, w) for m in self.d_gen(name).terms])
                if need > w[name]:
                    w[name], changed = need, True
            if not changed:
                return w
        raise ValueError(f"{self.name}: differential admits no weight filtration")

    def with_ring(self, ring: RingSpec) -> "CategoryPresentation":
        def conv(e):
            return Element(self.quiver, ring, e.kind, e.source, e.target, e.degree,
                           {m: ring.coerce(c) for m, c in e.terms.items()})
        return CategoryPresentation(self.name, self.kind, self.quiver, ring,
                                    {k: conv(v) for k, v in self.diff.items()},
                                    tuple(conv(r) for r in self.relations))

    def with_diff(self, name: str, text: str, label: str | None = None) -> "CategoryPresentation":
        """Copy with one generator differential replaced (used to build corrupted variants)."""
        g = self.quiver.gen(name)
        new = dict(self.diff)
        new[name] = self.parse(text, g.source, g.target, g.degree + 1)
        return CategoryPresentation(label or self.name + "'", self.kind, self.quiver,
                                    self.ring, new, self.relations)

    def __repr__(self):
        return f"<{self.kind} category {self.name} over {self.ring}>"


# ---------------------------------------------------------------------------
# differential

def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def _op(cat: CategoryPresentation, k: int, args: Sequence[Element]) -> Element:
    return m1_expand(cat, args[0], reduce=False) if k == 1 else graft(k, list(args))


def _m1_part(cat: CategoryPresentation, part) -> Element:
    mono = Word((part,)) if isinstance(part, str) else part
    return _m1_mono(cat, mono)


def _m1_mono(cat: CategoryPresentation, m) -> Element:
    cache = cat._m1_cache
    if m in cache:
        return cache[m]
    s, t = endpoints(m, cat.quiver)
    deg = degree(m, cat.quiver) + 1
    if isinstance(m, Unit):
        out = cat.zero(s, t, deg)
    elif isinstance(m, Word) and len(m.letters) == 1:
        out = cat.d_gen(m.letters[0])
    elif isinstance(m, Word):
        # Leibniz along the word: sign from the letters to the left
        out = cat.zero(s, t, deg)
        letters = m.letters
        left_deg = 0
        for i, x in enumerate(letters):
            dx = cat.d_gen(x)
            if dx.terms:
                parts = [cat.gen(y) for y in letters[:i]] + [dx] + \
                        [cat.gen(y) for y in letters[i + 1:]]
                out = out + cat.compose_many(parts).scale(_sign(left_deg))
            left_deg += cat.quiver.gen(x).degree
        out = Element(cat.quiver, cat.ring, "dg", s, t, deg, out.terms)
    else:
        kids = [cat.mono(Word((c,)) if isinstance(c, str) else c) for c in m.children]
        n = len(kids)
        degs = [k.degree for k in kids]
        acc = cat.zero(s, t, deg)
        for r in range(n):
            for sz in range(1, n - r + 1):
                if sz == n:
                    continue  # the m1 o m_n term being solved for
                tt = n - r - sz
                inner = _op(cat, sz, kids[r:r + sz])
                if not inner.terms:
                    continue
                outer = _op(cat, r + 1 + tt, kids[:r] + [inner] + kids[r + sz:])
                sign = _sign(r + sz * tt) * _sign(sz * sum(degs[:r]))
                acc = acc + outer.scale(sign)
        out = -acc
    cache[m] = out
    return out


def m1_expand(cat: CategoryPresentation, e: Element, reduce: bool = True) -> Element:
    """Apply the differential ``m1`` (DG: Leibniz; A-infinity: Stasheff recursion).

    For DG presentations with relations the result is put in normal form
    when ``reduce`` is true.
    """
    s, t = e.source, e.target
    out = cat.zero(s, t, e.degree + 1)
    for m, c in e.terms.items():
        out = out + _m1_mono(cat, m).scale(c)
    out = Element(cat.quiver, cat.ring, cat.kind, s, t, e.degree + 1, out.terms, e.truncated)
    if reduce and cat.relations and out.terms:
        out = normal_form(cat, out)
    return out


def _stasheff_terms(cat: CategoryPresentation, monos: tuple) -> dict:
    """Stasheff defect of a tuple of monomials, as a raw term dictionary."""
    n = len(monos)
    degs = [degree(m, cat.quiver) for m in monos]
    out: dict = {}

    def add(m, c):
        if m is not None:
            out[m] = out.get(m, 0) + c

    for r in range(n):
        for sz in range(1, n - r + 1):
            tt = n - r - sz
            sign = _sign(r + sz * tt) * _sign(sz * sum(degs[:r]))
            if sz == 1:
                inner = _m1_mono(cat, monos[r]).terms
            else:
                g = _mono_graft(list(monos[r:r + sz]))
                inner = {} if g is None else {g: 1}
            for m, c in inner.items():
                if r + 1 + tt == 1:
                    for m2, c2 in _m1_mono(cat, m).terms.items():
                        add(m2, sign * c * c2)
                else:
                    add(_mono_graft(list(monos[:r]) + [m] + list(monos[r + sz:])), sign * c)
    return {m: c for m, c in out.items() if cat.ring.coerce(c) != 0}


def stasheff_defect(cat: CategoryPresentation, args: Sequence[Element]) -> Element:
    """Left side of the ``n``-input Stasheff identity; zero when it holds."""
    n = len(args)
    deg = sum(a.degree for a in args) + 3 - n
    terms: dict = {}
    for combo in product(*[a.terms.items() for a in args]):
        coeff = 1
        for _, c in combo:
            coeff *= c
        for m, c in _stasheff_terms(cat, tuple(mc[0] for mc in combo)).items():
            terms[m] = terms.get(m, 0) + coeff * c
    return Element(cat.quiver, cat.ring, "ainf", args[-1].source, args[0].target, deg, terms)


def dg_shadow(e: Element, dg: CategoryPresentation) -> Element:
    """Collapse trees to words: ``m2`` becomes composition, ``m_k`` (k >= 3) vanishes."""

    def walk(part):
        if isinstance(part, str):
            return dg.gen(part)
        if part.arity >= 3:
            return None
        kids = [walk(c) for c in part.children]
        if any(k is None for k in kids):
            return None
        return compose_word(kids[0], kids[1])

    out = dg.zero(e.source, e.target, e.degree)
    for m, c in e.terms.items():
        if isinstance(m, Unit):
            img = dg.unit(m.obj)
        else:
            img = walk(m.letters[0] if isinstance(m, Word) else m)
        if img is not None:
            out = out + Element(dg.quiver, dg.ring, "dg", e.source, e.target, e.degree,
                                img.terms).scale(c)
    return out


# ---------------------------------------------------------------------------
# window enumeration

def _paths(cat: CategoryPresentation, x: str, y: str, max_weight: int, w=None):
    """Generator sequences (composition order) from ``x`` to ``y``."""
    w = cat.weights if w is None else w
    out = []
    gens = cat.quiver.generators

    def extend(obj, seq, total):
        if obj == y and seq:
            out.append(tuple(reversed(seq)))
        for g in gens:
            if g.source == obj and total + w[g.name] <= max_weight:
                seq.append(g.name)
                extend(g.target, seq, total + w[g.name])
                seq.pop()

    extend(x, [], 0)
    return out


_TREE_CACHE: dict = {}


def _trees_over(letters: tuple, max_ar: int) -> list:
    key = (letters, max_ar)
    if key in _TREE_CACHE:
        return _TREE_CACHE[key]
    n = len(letters)
    if n == 1:
        res = [letters[0]]
    else:
        res = []
        for k in range(2, min(max_ar, n) + 1):
            for cuts in _compositions(n, k):
                blocks, start = [], 0
                for size in cuts:
                    blocks.append(letters[start:start + size])
                    start += size
                for kids in product(*[_trees_over(b, max_ar) for b in blocks]):
                    res.append(Tree(tuple(kids)))
    _TREE_CACHE[key] = res
    return res


def _compositions(n: int, k: int):
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def window_monomials(cat: CategoryPresentation, x: str, y: str,
                     cfg: TruncationConfig) -> dict[int, list]:
    """All normal-form monomials ``x -> y`` inside the window, by degree."""
    out: dict[int, list] = {}
    if x == y:
        out.setdefault(0, []).append(Unit(x))
    for path in _paths(cat, x, y, cfg.max_word_length):
        if cat.kind == "dg":
            monos = [Word(path)]
        else:
            monos = [Word((p,)) if isinstance(p, str) else p
                     for p in _trees_over(path, cfg.max_arity)]
        for m in monos:
            out.setdefault(degree(m, cat.quiver), []).append(m)
    for k in out:
        out[k].sort(key=lambda m: (weight(m, cat.weights), str(m)))
    return out


def _reachability(cat, start: str, forward: bool) -> set:
    seen, stack = {start}, [start]
    while stack:
        o = stack.pop()
        for g in cat.quiver.generators:
            a, b = (g.source, g.target) if forward else (g.target, g.source)
            if a == o and b not in seen:
                seen.add(b)
                stack.append(b)
    return seen


def _has_cycle(nodes: set, edges: list) -> bool:
    adj = {n: [b for a, b in edges if a == n] for n in nodes}
    state = {}

    def visit(n):
        state[n] = 1
        for m in adj[n]:
            if state.get(m) == 1 or (m not in state and visit(m)):
                return True
        state[n] = 2
        return False

    return any(n not in state and visit(n) for n in nodes)


def _finite_paths(cat, x, y) -> bool:
    live = _reachability(cat, x, True) & _reachability(cat, y, False)
    edges = [(g.source, g.target) for g in cat.quiver.generators
             if g.source in live and g.target in live]
    return not _has_cycle(live, edges)


def _exact(cat: CategoryPresentation, x: str, y: str, cfg: TruncationConfig) -> bool:
    if cat.relations:
        return _rewriting_exact(cat, x, y, cfg)
    if not _finite_paths(cat, x, y):
        return False
    bound = sum(cat.weights.values()) * max(1, len(cat.objects)) + 1
    paths = _paths(cat, x, y, bound)
    if not paths:
        return True
    longest = max(sum(cat.weights[p] for p in path) for path in paths)
    most_leaves = max(len(p) for p in paths)
    if longest > cfg.max_word_length:
        return False
    return cat.kind == "dg" or most_leaves <= cfg.max_arity


# ---------------------------------------------------------------------------
# DG relations: window quotients and an exactness certificate by rewriting

class _Quotient:
    """Gauss-Jordan reduction of window vectors modulo relation multiples."""

    def __init__(self, ring, monos: list, rows: list[dict]):
        self.ring = ring
        # heaviest monomials are eliminated first, so normal forms are short
        self.order = sorted(monos, key=lambda m: (-leaf_count(m), str(m)))
        self.pivots: dict = {}
        pending = [dict(r) for r in rows]
        for col in self.order:
            pick = None
            for i, r in enumerate(pending):
                v = r.get(col)
                if v and ring.is_unit(v):
                    pick = i
                    break
            if pick is None:
                continue
            row = pending.pop(pick)
            inv = ring.inv(row[col])
            row = {m: ring.coerce(v * inv) for m, v in row.items()}
            for other in pending + list(self.pivots.values()):
                f = other.get(col)
                if f:
                    for m, v in row.items():
                        nv = ring.coerce(other.get(m, 0) - f * v)
                        if nv:
                            other[m] = nv
                        else:
                            other.pop(m, None)
            self.pivots[col] = row
        if any(r for r in pending):
            raise ValueError("relation quotient is not free in this window")
        self.basis = [m for m in sorted(monos, key=lambda m: (leaf_count(m), str(m)))
                      if m not in self.pivots]

    def reduce(self, terms: Mapping) -> dict:
        vec = {m: c for m, c in terms.items() if c}
        for col, row in self.pivots.items():
            f = vec.get(col)
            if f:
                for m, v in row.items():
                    nv = self.ring.coerce(vec.get(m, 0) - f * v)
                    if nv:
                        vec[m] = nv
                    else:
                        vec.pop(m, None)
        return vec


def _relation_multiples(cat: CategoryPresentation, x: str, y: str, L: int) -> list[Element]:
    out = []
    for rel in cat.relations:
        rel_min = min(weight(m, cat.weights) for m in rel.terms)
        budget = L - rel_min
        lefts = [Unit(rel.target)] if rel.target == y else []
        lefts += [Word(p) for p in _paths(cat, rel.target, y, budget)]
        rights = [Unit(rel.source)] if rel.source == x else []
        rights += [Word(p) for p in _paths(cat, x, rel.source, budget)]
        wl = [weight(u, cat.weights) for u in lefts]
        wr = [weight(v, cat.weights) for v in rights]
        for u, a in zip(lefts, wl):
            for v, b in zip(rights, wr):
                if a + b > budget:
                    continue
                e = compose_word(compose_word(cat.mono(u), rel), cat.mono(v))
                if e.terms and all(weight(m, cat.weights) <= L for m in e.terms):
                    out.append(e)
    return out


def _quotient(cat: CategoryPresentation, x: str, y: str, deg: int, L: int) -> _Quotient:
    key = (x, y, deg, L)
    if key not in cat._quot_cache:
        monos = window_monomials(cat, x, y, TruncationConfig(L, 2)).get(deg, [])
        rows = [dict(e.terms) for e in _relation_multiples(cat, x, y, L) if e.degree == deg]
        cat._quot_cache[key] = _Quotient(cat.ring, monos, rows)
    return cat._quot_cache[key]


def _relation_slack(cat) -> int:
    return max([0] + [weight(m, cat.weights) for r in cat.relations for m in r.terms])


def normal_form(cat: CategoryPresentation, e: Element, L: int | None = None) -> Element:
    """Canonical representative modulo the relations, computed in a window."""
    if not cat.relations or not e.terms:
        return e
    need = max(weight(m, cat.weights) for m in e.terms)
    L = max(L or 1, need + _relation_slack(cat), 1)
    q = _quotient(cat, e.source, e.target, e.degree, L)
    return Element(cat.quiver, cat.ring, "dg", e.source, e.target, e.degree,
                   q.reduce(e.terms), e.truncated)


def _rules(cat):
    rules = []
    for rel in cat.relations:
        lead = max(rel.terms, key=lambda m: (weight(m, cat.weights), str(m)))
        if not isinstance(lead, Word) or not cat.ring.is_unit(rel.terms[lead]):
            return None
        inv = cat.ring.inv(rel.terms[lead])
        rest = {m: cat.ring.coerce(-c * inv) for m, c in rel.terms.items() if m != lead}
        rules.append((lead.letters, rest, rel))
    return rules


def _rewrite(cat, terms: dict, rules, limit=10_000) -> dict:
    terms = dict(terms)
    for _ in range(limit):
        hit = None
        for m in terms:
            if isinstance(m, Word):
                for lead, rest, rel in rules:
                    n = len(lead)
                    for i in range(len(m.letters) - n + 1):
                        if m.letters[i:i + n] == lead:
                            hit = (m, i, n, rest, rel)
                            break
                    if hit:
                        break
            if hit:
                break
        if hit is None:
            return terms
        m, i, n, rest, rel = hit
        c = terms.pop(m)
        pre, post = m.letters[:i], m.letters[i + n:]
        for r, rc in rest.items():
            mid = () if isinstance(r, Unit) else r.letters
            letters = pre + mid + post
            new = Word(letters) if letters else Unit(endpoints(m, cat.quiver)[0])
            terms[new] = cat.ring.coerce(terms.get(new, 0) + c * rc)
            if terms[new] == 0:
                del terms[new]
    raise RuntimeError("rewriting did not terminate")


def _rewriting_exact(cat, x, y, cfg) -> bool:
    """Certify that the window quotient is the whole hom space.

    Orienting each relation towards its heaviest word gives a terminating
    rewriting system; if every critical pair resolves (diamond lemma) the
    irreducible words form a basis, and the window is exact when they are
    finitely many and all fit inside it.
    """
    rules = _rules(cat)
    if rules is None:
        return False
    leads = [r[0] for r in rules]
    for a in leads:
        for b in leads:
            for k in range(1, min(len(a), len(b)) + (0 if a == b else 1)):
                if a[-k:] == b[:k]:
                    word = a + b[k:]
                    try:
                        e = cat.mono(Word(word))
                    except NotComposable:
                        continue
                    left = _rewrite_once(cat, e, rules, word[:len(a)], 0)
                    right = _rewrite_once(cat, e, rules, word[len(a) - k:], len(a) - k)
                    if _rewrite(cat, left, rules) != _rewrite(cat, right, rules):
                        return False
    # irreducible paths x -> y: finite and inside the window?
    bound = cfg.max_word_length
    found_long = False

    def irreducible(seq):
        return not any(seq[i:i + len(l)] == l for l in leads
                       for i in range(len(seq) - len(l) + 1))

    maxlead = max(len(l) for l in leads)
    gens = cat.quiver.generators

    def explore(obj, seq, stack_states):
        nonlocal found_long
        state = (obj, tuple(seq[-(maxlead - 1):]) if maxlead > 1 else ())
        if state in stack_states:
            # a cycle of irreducible extensions: infinitely many if it can reach y
            if y in _reachability(cat, obj, True) or obj == y:
                found_long = True
            return
        if obj == y and seq and sum(cat.weights[s] for s in seq) > bound:
            found_long = True
        stack_states.add(state)
        for g in gens:
            if g.source == obj:
                new = seq + [g.name]
                if irreducible(tuple(reversed(new))):
                    explore(g.target, new, stack_states)
                if found_long:
                    break
        stack_states.discard(state)

    explore(x, [], set())
    return not found_long


def _rewrite_once(cat, e: Element, rules, lead, pos) -> dict:
    (m, c), = e.terms.items()
    for l, rest, _ in rules:
        if l == tuple(lead):
            out = {}
            pre, post = m.letters[:pos], m.letters[pos + len(l):]
            for r, rc in rest.items():
                mid = () if isinstance(r, Unit) else r.letters
                letters = pre + mid + post
                new = Word(letters) if letters else Unit(e.source)
                out[new] = cat.ring.coerce(out.get(new, 0) + c * rc)
            return {k: v for k, v in out.items() if v}
    raise KeyError(lead)


# ---------------------------------------------------------------------------
# hom complexes

@dataclass(frozen=True, eq=False)
class HomTruncation:
    category: CategoryPresentation
    source: str
    target: str
    cfg: TruncationConfig
    result: FiniteComplex
    basis_dictionary: Mapping[str, object]
    exact_flag: bool
    monomials: Mapping[int, list] = field(repr=False, default_factory=dict)

    def vector(self, e: Element) -> list:
        """Coordinates of an element in the window basis of its degree."""
        cat, k = self.category, e.degree
        terms = e.terms
        if cat.relations:
            terms = _quotient(cat, self.source, self.target, k, self.cfg.max_word_length).reduce(terms)
        pos = {m: i for i, m in enumerate(self.monomials.get(k, []))}
        vec = [cat.ring.zero] * len(pos)
        for m, c in terms.items():
            if m not in pos:
                raise WindowNotClosed(f"{m} lies outside the window {self.cfg}")
            vec[pos[m]] = c
        return vec

    def element(self, k: int, vec: Sequence) -> Element:
        cat = self.category
        terms = {m: c for m, c in zip(self.monomials.get(k, []), vec) if c}
        return Element(cat.quiver, cat.ring, cat.kind, self.source, self.target, k, terms)

    def contains(self, e: Element) -> bool:
        try:
            self.vector(e)
            return True
        except WindowNotClosed:
            return False


def hom_complex(cat: CategoryPresentation, x: str, y: str,
                cfg: TruncationConfig = TruncationConfig()) -> HomTruncation:
    """Truncated hom complex ``cat(x, y)`` with the matrix of ``m1``."""
    if x not in cat.objects or y not in cat.objects:
        raise KeyError(f"unknown object in ({x}, {y})")
    key = (x, y, cfg)
    if key in cat._hom_cache:
        return cat._hom_cache[key]
    raw = window_monomials(cat, x, y, cfg)
    if cat.relations:
        monos = {k: _quotient(cat, x, y, k, cfg.max_word_length).basis for k in raw}
    else:
        monos = raw
    monos = {k: v for k, v in monos.items() if v}
    pos = {k: {m: i for i, m in enumerate(v)} for k, v in monos.items()}
    diff = {}
    for k, ms in monos.items():
        ent = {}
        for j, m in enumerate(ms):
            dm = m1_expand(cat, cat.mono(m), reduce=False)
            terms = dm.terms
            if cat.relations and terms:
                terms = _quotient(cat, x, y, k + 1, cfg.max_word_length).reduce(terms)
            for mm, c in terms.items():
                if mm not in pos.get(k + 1, {}):
                    raise WindowNotClosed(
                        f"window not differential-closed: d({m}) contains {mm}")
                ent[(pos[k + 1][mm], j)] = c
        if ent:
            diff[k] = Matrix(cat.ring, len(monos.get(k + 1, ())), len(ms), ent)
    basis = {k: tuple(str(m) for m in ms) for k, ms in monos.items()}
    result = FiniteComplex(cat.ring, basis, diff)
    ht = HomTruncation(cat, x, y, cfg, result,
                       {str(m): m for ms in monos.values() for m in ms},
                       _exact(cat, x, y, cfg), monos)
    cat._hom_cache[key] = ht
    return ht


# ---------------------------------------------------------------------------
# H^0

def _widened(cfg: TruncationConfig, cat, elements: Iterable[Element]) -> TruncationConfig:
    need = max([cfg.max_word_length] + [weight(m, cat.weights) for e in elements
                                         for m in e.terms])
    slack = max([1] + list(cat.weights.values()))
    ar = max([cfg.max_arity] + [max_arity(m) for e in elements for m in e.terms])
    return TruncationConfig(need + slack if need > cfg.max_word_length else need, ar)


@dataclass(eq=False)
class H0Category:
    category: CategoryPresentation
    cfg: TruncationConfig
    hom: dict = field(default_factory=dict)        # (x, y) -> ModuleDescription
    reps: dict = field(default_factory=dict)       # (x, y) -> list[Element]
    moduli: dict = field(default_factory=dict)     # (x, y) -> tuple[int]
    composition: dict = field(default_factory=dict)  # (x, y, z) -> {(i, j): coords}

    @property
    def objects(self):
        return self.category.objects

    def classify(self, e: Element):
        """Coordinates of the class of a degree-0 cycle in the chosen basis (or ``None``)."""
        cat = self.category
        x, y = e.source, e.target
        reps = self.reps[(x, y)]
        cfg = _widened(self.cfg, cat, [e] + reps)
        ht = hom_complex(cat, x, y, cfg)
        if any(ht.result.d(0).apply(ht.vector(e))) if ht.result.dim(0) else False:
            return None
        cols = [ht.vector(r) for r in reps] + ht.result.d(-1).columns()
        n = ht.result.dim(0)
        target = ht.vector(e)
        if not cols:
            return [] if not any(target) else None
        sol = solve(Matrix.from_columns(cat.ring, cols, n), target)
        if sol is None:
            return None
        out = []
        for xi, mod in zip(sol[:len(reps)], self.moduli[(x, y)]):
            out.append(cat.ring.coerce(xi % mod) if mod else xi)
        return out

    def same_class(self, a: Element, b: Element) -> bool:
        return self.classify(a - b) == [0] * len(self.reps[(a.source, a.target)])

    def class_element(self, x: str, y: str, coords: Sequence) -> Element:
        cat = self.category
        out = cat.zero(x, y, 0)
        for c, r in zip(coords, self.reps[(x, y)]):
            out = out + r.scale(c)
        return out

    def inverse(self, a: Element):
        """A class ``b`` with ``[b a] = [1]`` and ``[a b] = [1]``, or ``None``."""
        cat = self.category
        x, y = a.source, a.target
        back = self.reps[(y, x)]
        eqs, rhs, mods = [], [], []
        for (s, t), compose_with in (((x, x), lambda r: cat.compose(r, a)),
                                     ((y, y), lambda r: cat.compose(a, r))):
            cols = []
            for r in back:
                c = self.classify(compose_with(r))
                if c is None:
                    return None
                cols.append(c)
            unit = self.classify(cat.unit(s))
            if unit is None:
                return None
            for i, mod in enumerate(self.moduli[(s, t)]):
                eqs.append([col[i] for col in cols])
                rhs.append(unit[i])
                mods.append(mod)
        nb = len(back)
        if not eqs:
            return cat.zero(y, x, 0) if nb == 0 else None
        # torsion rows get a slack variable: sum a_j b_j + mod * t = rhs
        extra = [i for i, m in enumerate(mods) if m]
        rows = []
        for i, eq in enumerate(eqs):
            rows.append(list(eq) + [mods[i] if i == j else 0 for j in extra])
        m = Matrix.from_rows(cat.ring, rows, cols=nb + len(extra))
        sol = solve(m, rhs)
        if sol is None:
            return None
        return self.class_element(y, x, sol[:nb])

    def is_iso(self, a: Element) -> bool:
        return self.inverse(a) is not None

    def candidates(self, x: str, y: str, limit: int = 3):
        """Small test set of classes ``x -> y``: coefficients in {-1, 0, 1}
        (all classes over F_2 / F_3 when the rank is at most ``limit``)."""
        n = len(self.reps[(x, y)])
        ring = self.category.ring
        if n > limit:
            rng = [[0] * n]
            for i in range(n):
                v = [0] * n
                v[i] = 1
                rng.append(v)
            coeffs = rng
        else:
            vals = ring.elements() if ring.kind == "Fp" and ring.p <= 3 else [-1, 0, 1]
            coeffs = [list(v) for v in product(vals, repeat=n)]
        for v in coeffs:
            yield self.class_element(x, y, v)

    def isomorphism(self, x: str, y: str):
        for c in self.candidates(x, y):
            if self.is_iso(c):
                return c
        return None


def h0(cat: CategoryPresentation, cfg: TruncationConfig = TruncationConfig()) -> H0Category:
    """Degree-0 cohomology category with representatives and composition table."""
    out = H0Category(cat, cfg)
    for x in cat.objects:
        for y in cat.objects:
            ht = hom_complex(cat, x, y, cfg)
            out.hom[(x, y)] = homology(ht.result, 0)
            hb = homology_basis(ht.result, 0)
            out.reps[(x, y)] = [ht.element(0, v) for v in hb.reps]
            out.moduli[(x, y)] = hb.moduli
    for x in cat.objects:
        for y in cat.objects:
            for z in cat.objects:
                table = {}
                for i, a in enumerate(out.reps[(y, z)]):
                    for j, b in enumerate(out.reps[(x, y)]):
                        table[(i, j)] = out.classify(cat.compose(a, b))
                out.composition[(x, y, z)] = table
    return out


# ---------------------------------------------------------------------------
# structure checks

def _cfg_echo(cat, cfg):
    return {"category": cat.name, "ring": cat.ring.short(), "L": cfg.max_word_length,
            "A": cfg.max_arity}


def check_structure(cat: CategoryPresentation,
                    cfg: TruncationConfig = TruncationConfig(6, 4),
                    max_tuples: int | None = None) -> CheckReport:
    """d o d = 0 on generators and relations (DG) or Stasheff identities (A-infinity)."""
    bad: list[str] = []
    evidence: list[str] = []
    for g in cat.quiver.generators:
        dd = m1_expand(cat, m1_expand(cat, cat.gen(g.name)))
        if not dd.is_zero():
            bad.append(f"d^2({g.name}) = {dd}")
    evidence.append(f"d^2 = 0 on {len(cat.quiver.generators)} generators")
    if cat.kind == "dg":
        for rel in cat.relations:
            d_rel = m1_expand(cat, rel)
            if not d_rel.is_zero():
                bad.append(f"d({rel}) = {d_rel} is not in the relation ideal")
        # strict unit laws
        for x in cat.objects:
            for g in cat.quiver.generators:
                e = cat.gen(g.name)
                if cat.compose(cat.unit(g.target), e) != e or cat.compose(e, cat.unit(g.source)) != e:
                    bad.append(f"unit law fails on {g.name}")
        return verdict(f"structure:{cat.name}", bad, _cfg_echo(cat, cfg), evidence)
    # A-infinity: m1 o m1 on every window monomial, Stasheff on window tuples
    monos = {}
    for x in cat.objects:
        for y in cat.objects:
            for k, ms in window_monomials(cat, x, y, cfg).items():
                for m in ms:
                    monos[m] = (x, y)
                    if not isinstance(m, Unit):
                        dd = m1_expand(cat, m1_expand(cat, cat.mono(m)))
                        if not dd.is_zero():
                            bad.append(f"m1(m1({m})) = {dd}")
    evidence.append(f"m1 o m1 = 0 on {len(monos)} window monomials")
    by_target: dict = {}
    for m, (x, y) in monos.items():
        by_target.setdefault(y, []).append((m, x, weight(m, cat.weights)))
    count = 0

    def tuples(n, start_target, budget):
        """Composable n-tuples (a_1, ..., a_n) with a_1 ending at start_target."""
        if n == 0:
            yield ()
            return
        for m, src, w in by_target.get(start_target, []):
            if w <= budget:
                for rest in tuples(n - 1, src, budget - w):
                    yield (m,) + rest

    for n in range(2, cfg.max_arity + 1):
        for y in cat.objects:
            for tup in tuples(n, y, cfg.max_word_length):
                if max_tuples is not None and count >= max_tuples:
                    break
                count += 1
                defect = _stasheff_terms(cat, tup)
                if defect:
                    bad.append(f"Stasheff({', '.join(map(str, tup))}) has "
                               f"{len(defect)} surviving terms")
    evidence.append(f"Stasheff identities hold on {count} tuples "
                    f"(arity <= {cfg.max_arity}, weight <= {cfg.max_word_length})")
    return verdict(f"structure:{cat.name}", bad[:20], _cfg_echo(cat, cfg), evidence)


def split_unit_check(cat: CategoryPresentation, x: str,
                     cfg: TruncationConfig = TruncationConfig()) -> bool:
    """Is ``R.1_x`` a chain-level direct summand of ``cat(x, x)`` (in the window)?

    Looks for a chain retraction ``p: cat(x, x) -> R`` with ``p(1_x) = 1``:
    a functional on degree 0 killing all boundaries.
    """
    ht = hom_complex(cat, x, x, cfg)
    c = ht.result
    unit_vec = ht.vector(cat.unit(x))
    if not any(unit_vec):
        return False
    if any(c.d(0).apply(unit_vec)) if c.dim(0) else False:
        return False
    bd = c.d(-1)
    # unknown p (length dim 0): p . bd = 0 and p . unit = 1
    rows = bd.transpose().vstack(Matrix.from_rows(cat.ring, [unit_vec], cols=c.dim(0)))
    rhs = [0] * bd.cols + [1]
    return solve(rows, rhs) is not None


def find_preimage(cat: CategoryPresentation, e: Element, max_leaves: int | None = None,
                  candidates: Sequence | None = None):
    """Solve ``m1(h) = e`` over monomials of degree ``deg e - 1``.

    The search space is ``candidates`` if given, else every monomial
    between the endpoints with at most ``max_leaves`` generator leaves.
    Returns ``(h, coefficients)`` or ``None``.
    """
    if candidates is None:
        cfg = TruncationConfig(max_leaves * max(cat.weights.values(), default=1), 4)
        candidates = [m for m in window_monomials(cat, e.source, e.target, cfg).get(e.degree - 1, [])
                      if leaf_count(m) <= max_leaves]
    candidates = list(candidates)
    images = [m1_expand(cat, cat.mono(m)) for m in candidates]
    support = sorted({m for im in images for m in im.terms} | set(e.terms), key=str)
    pos = {m: i for i, m in enumerate(support)}
    cols = []
    for im in images:
        col = [0] * len(support)
        for m, c in im.terms.items():
            col[pos[m]] = c
        cols.append(col)
    rhs = [0] * len(support)
    for m, c in e.terms.items():
        rhs[pos[m]] = c
    if not cols:
        return None
    sol = solve(Matrix.from_columns(cat.ring, cols, len(support)), rhs)
    if sol is None:
        return None
    h = cat.zero(e.source, e.target, e.degree - 1)
    for m, c in zip(candidates, sol):
        if c:
            h = h + cat.mono(m, c)
    return h, dict(zip(candidates, sol))


# ---------------------------------------------------------------------------
# builtin catalog

BUILTIN_NAMES = ("empty", "A", "B", "I", "I0", "I1", "I2_dg", "K", "C(n)", "P(n)",
                 "K_ainf", "I1_ainf")


def _build(name, kind, objects, gens, diffs=(), relations=(), ring=QQ):
    quiver = GradedQuiver(tuple(objects), tuple(Generator(*g) for g in gens))
    tmp = CategoryPresentation(name, kind, quiver, ring)
    diff = {}
    for gname, text in diffs:
        g = quiver.gen(gname)
        diff[gname] = tmp.parse(text, g.source, g.target, g.degree + 1)
    rels = tuple(tmp.parse(t) for t in relations)
    return CategoryPresentation(name, kind, quiver, ring, diff, rels)


_INTERVAL_GENS = [("f", "1", "2", 0), ("g", "2", "1", 0),
                    ("r1", "1", "1", -1), ("r2", "2", "2", -1)]
_INTERVAL_DIFFS = [("r1", "g*f - id@1"), ("r2", "f*g - id@2")]


def builtin(name: str, ring: RingSpec = QQ) -> CategoryPresentation:
    """The categories named in the construction, under the package's grading.

    ``C(n)`` has one closed generator ``x: 8 -> 9`` of degree n (a sphere);
    ``P(n)`` has ``e: 6 -> 7`` of degree n-1 and ``b = d e`` (a disk).
    """
    n = None
    m = re.fullmatch(r"([CP])\(?(-?\d+)\)?", name)
    if m:
        name, n = m.group(1) + "(n)", int(m.group(2))
    if name == "empty":
        return _build("empty", "dg", (), (), ring=ring)
    if name == "A":
        return _build("A", "dg", ("3",), (), ring=ring)
    if name == "B":
        return _build("B", "dg", ("4", "5"), (), ring=ring)
    if name == "I0":
        return _build("I0", "dg", ("1", "2"), (), ring=ring)
    if name == "I":
        return _build("I", "dg", ("1", "2"), [("j01", "1", "2", 0), ("j10", "2", "1", 0)],
                      relations=["j01*j10 - id@2", "j10*j01 - id@1"], ring=ring)
    if name == "I1":
        return _build("I1", "dg", ("1", "2"), _INTERVAL_GENS[:2], ring=ring)
    if name == "I1_ainf":
        return _build("I1_ainf", "ainf", ("1", "2"), _INTERVAL_GENS[:2], ring=ring)
    if name == "I2_dg":
        return _build("I2_dg", "dg", ("1", "2"), _INTERVAL_GENS, _INTERVAL_DIFFS, ring=ring)
    if name == "K":
        return _build("K", "dg", ("1", "2"), _INTERVAL_GENS + [("r12", "1", "2", -2)],
                      _INTERVAL_DIFFS + [("r12", "r2*f - f*r1")], ring=ring)
    if name == "K_ainf":
        return _build("K_ainf", "ainf", ("1", "2"), _INTERVAL_GENS,
                      [("r1", "m2(g,f) - id@1"), ("r2", "m2(f,g) - id@2")], ring=ring)
    if name == "C(n)" and n is not None:
        return _build(f"C({n})", "dg", ("8", "9"), [("x", "8", "9", n)], ring=ring)
    if name == "P(n)" and n is not None:
        return _build(f"P({n})", "dg", ("6", "7"), [("e", "6", "7", n - 1), ("b", "6", "7", n)],
                      [("e", "b")], ring=ring)
    raise KeyError(f"unknown builtin category {name!r}")


def terminal_category(ring: RingSpec = QQ) -> CategoryPresentation:
    """One object whose unit is zero, so every hom space vanishes.

    This is the terminal object of strict categories; ``A`` is not, since
    ``A(3, 3)`` is a copy of the ring.
    """
    return _build("T", "dg", ("3",), (), relations=["id@3"], ring=ring)
