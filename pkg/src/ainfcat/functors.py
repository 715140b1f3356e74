"""Strict functors between presentations, lifting properties and classification.

A strict functor is an object map plus images of generators; it is
extended to words by composition and to trees by the target's operations
(``m2`` is composition and ``m_k`` for ``k >= 3`` vanishes in a DG target).

Every hom-level predicate works on truncation windows (see
``categories.hom_complex``) and is therefore exact only when the windows
are.  Images of window elements may be longer than the window; they are
placed in a widened window of the target before any linear algebra.

Right lifting properties against the generating maps are decided by
hom-level conditions:

* ``Q``: surjective on objects;
* ``R(n)``: every hom component surjective in degree ``n - 1`` (the degree
  of the disk generator ``e``);
* ``S(n)``: for all objects ``a, b`` the map ``e -> (F e, d e)`` from
  ``C^{n-1}(a, b)`` onto pairs ``(e', x)`` with ``x`` an ``n``-cycle and
  ``d e' = F x`` is surjective;
* ``F_prime`` / ``F_dg``: ``F`` is an isofibration.  A lift must also hit the
  higher generators exactly, so for functors that are not surjective on
  morphisms this can be strictly weaker than the lifting property (the
  inclusion ``I2_dg -> K`` against ``F_dg`` is the catalog example);
* ``J_disk(n)``: hom components surjective in degrees ``n - 1`` and ``n``.

``brute_force_lift`` decides the same questions independently by
enumerating squares and solving for lifts over a finite field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping, Sequence

from .categories import (CategoryPresentation, H0Category, _widened, builtin, h0,
                         hom_complex, m1_expand, normal_form)
from .coeff import GF, Matrix, RingSpec, kernel_basis, solve
from .presentations import Element, TruncationConfig, Unit, Word, graft
from .reports import CheckReport, verdict

__all__ = [
    "StrictFunctor",
    "identity_functor",
    "compose_functors",
    "check_functor",
    "is_surjective_on_objects",
    "is_surjective_on_morphisms",
    "is_isofibration",
    "is_quasi_equivalence",
    "hom_quasi_iso",
    "GeneratingMap",
    "GENERATING_TAGS",
    "has_rlp",
    "LiftingSquare",
    "LiftResult",
    "brute_force_lift",
    "brute_force_rlp",
    "enumerate_squares",
    "Classification",
    "classify",
    "catalog",
]


# ---------------------------------------------------------------------------
# functors

@dataclass(frozen=True, eq=False)
class StrictFunctor:
    name: str
    source: CategoryPresentation
    target: CategoryPresentation
    object_map: Mapping[str, str]
    generator_map: Mapping[str, Element] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "object_map", dict(self.object_map))
        gens = {}
        for g in self.source.quiver.generators:
            img = self.generator_map.get(g.name)
            if img is None:
                img = self.target.zero(self.object_map[g.source], self.object_map[g.target],
                                       g.degree)
            gens[g.name] = img
        object.__setattr__(self, "generator_map", gens)

    def obj(self, x: str) -> str:
        return self.object_map[x]

    def __call__(self, e: Element) -> Element:
        return self.apply(e)

    def apply(self, e: Element) -> Element:
        tgt = self.target
        out = tgt.zero(self.obj(e.source), self.obj(e.target), e.degree)
        for m, c in e.terms.items():
            img = _apply_mono(m, self.object_map, self.generator_map, tgt)
            if img is not None:
                out = out + img.scale(c)
        if tgt.relations and out.terms:
            out = normal_form(tgt, out)
        return out

    def __repr__(self):
        return f"<functor {self.name}: {self.source.name} -> {self.target.name}>"


def _apply_mono(m, objects, images, tgt: CategoryPresentation):
    if isinstance(m, Unit):
        return tgt.unit(objects[m.obj])
    if isinstance(m, Word):
        if len(m.letters) > 1 and tgt.kind == "ainf":
            raise ValueError("DG words have no canonical image in an A-infinity target")
        return tgt.compose_many([images[x] for x in m.letters])
    return _apply_part(m, objects, images, tgt)


def _apply_part(part, objects, images, tgt):
    if isinstance(part, str):
        return images[part]
    kids = [_apply_part(c, objects, images, tgt) for c in part.children]
    if any(k is None for k in kids):
        return None
    if tgt.kind == "ainf":
        return graft(len(kids), kids)
    if len(kids) == 2:
        return tgt.compose(kids[0], kids[1])
    return None  # m_k, k >= 3, vanishes in a DG target


def identity_functor(cat: CategoryPresentation) -> StrictFunctor:
    return StrictFunctor(f"id_{cat.name}", cat, cat, {x: x for x in cat.objects},
                         {g.name: cat.gen(g.name) for g in cat.quiver.generators})


def compose_functors(g: StrictFunctor, f: StrictFunctor) -> StrictFunctor:
    """``g o f`` (apply ``f`` first)."""
    if f.target is not g.source and f.target.name != g.source.name:
        raise ValueError(f"cannot compose {g.name} after {f.name}")
    objects = {x: g.obj(f.obj(x)) for x in f.source.objects}
    gens = {name: g.apply(g.source.convert(img)) for name, img in f.generator_map.items()}
    return StrictFunctor(f"{g.name}.{f.name}", f.source, g.target, objects, gens)


def check_functor(F: StrictFunctor, cfg: TruncationConfig = TruncationConfig()) -> CheckReport:
    """Endpoints and degrees of generator images, ``F d = d F`` on generators,
    and (DG sources) relations sent to zero."""
    src, tgt = F.source, F.target
    bad: list[str] = []
    for x in src.objects:
        if F.object_map.get(x) not in tgt.objects:
            bad.append(f"object {x} has no image in {tgt.name}")
    if bad:
        return verdict(f"functor:{F.name}", bad, {"functor": F.name})
    for g in src.quiver.generators:
        img = F.generator_map[g.name]
        if (img.source, img.target) != (F.obj(g.source), F.obj(g.target)):
            bad.append(f"{g.name} maps to {img.source}->{img.target}, expected "
                       f"{F.obj(g.source)}->{F.obj(g.target)}")
            continue
        if img.terms and img.degree != g.degree:
            bad.append(f"{g.name} has degree {g.degree} but its image has degree {img.degree}")
            continue
        lhs = F.apply(src.d_gen(g.name))
        rhs = m1_expand(tgt, img)
        if lhs != rhs:
            bad.append(f"F(d {g.name}) = {lhs} but d F({g.name}) = {rhs}")
    for rel in src.relations:
        img = F.apply(rel)
        if not img.is_zero():
            bad.append(f"relation {rel} maps to {img}")
    return verdict(f"functor:{F.name}", bad,
                   {"functor": F.name, "source": src.name, "target": tgt.name},
                   [f"{len(src.quiver.generators)} generators commute with d"])


# ---------------------------------------------------------------------------
# window linear algebra

def _ht(cat, x, y, cfg):
    return hom_complex(cat, x, y, cfg)


def _vectors(cat: CategoryPresentation, x: str, y: str, cfg: TruncationConfig,
             elements: Sequence[Element]):
    """A window of ``cat(x, y)`` containing every element, and their coordinates."""
    big = _widened(cfg, cat, elements)
    ht = _ht(cat, x, y, big)
    return ht, [ht.vector(e) for e in elements]


def _basis_elements(ht, k: int) -> list[Element]:
    n = ht.result.dim(k)
    return [ht.element(k, [1 if i == j else 0 for i in range(n)]) for j in range(n)]


def _cycles(ht, k: int) -> list[Element]:
    c = ht.result
    n = c.dim(k)
    if n == 0:
        return []
    if c.dim(k + 1) == 0:
        return _basis_elements(ht, k)
    return [ht.element(k, v) for v in kernel_basis(c.d(k))]


def _in_span(ring, columns: list[list], rows: int, vec: list) -> bool:
    if not any(vec):
        return True
    if not columns:
        return False
    return solve(Matrix.from_columns(ring, columns, rows), vec) is not None


def _degrees(*hts) -> list[int]:
    return sorted(set().union(*[set(h.result.degrees()) for h in hts]))


def _slack(cat: CategoryPresentation) -> int:
    return max([1] + list(cat.weights.values()))


def _bigger(cfg: TruncationConfig, by: int) -> TruncationConfig:
    return TruncationConfig(cfg.max_word_length + by, cfg.max_arity)


def _lift_window(cfg: TruncationConfig, cat: CategoryPresentation) -> TruncationConfig:
    # square data lives in cfg; lifts and preimages may be one generator heavier
    return _bigger(cfg, _slack(cat))


# ---------------------------------------------------------------------------
# predicates

def is_surjective_on_objects(F: StrictFunctor) -> bool:
    return set(F.object_map[x] for x in F.source.objects) == set(F.target.objects)


def _surjective_in_degree(F: StrictFunctor, a: str, b: str, k: int,
                          cfg: TruncationConfig) -> bool:
    src, tgt = F.source, F.target
    want = _basis_elements(_ht(tgt, F.obj(a), F.obj(b), cfg), k)
    if not want:
        return True
    have = [F.apply(e) for e in _basis_elements(_ht(src, a, b, _lift_window(cfg, src)), k)]
    ht, vecs = _vectors(tgt, F.obj(a), F.obj(b), cfg, want + have)
    n = ht.result.dim(k)
    cols = vecs[len(want):]
    return all(_in_span(tgt.ring, cols, n, v) for v in vecs[:len(want)])


def is_surjective_on_morphisms(F: StrictFunctor, cfg: TruncationConfig = TruncationConfig(),
                               degrees: Sequence[int] | None = None) -> bool:
    """Every hom component ``C(a, b) -> D(Fa, Fb)`` onto the target window,
    in every degree of the window (or only in ``degrees``)."""
    for a in F.source.objects:
        for b in F.source.objects:
            hd = _ht(F.target, F.obj(a), F.obj(b), cfg)
            ks = hd.result.degrees() if degrees is None else degrees
            for k in ks:
                if not _surjective_in_degree(F, a, b, k, cfg):
                    return False
    return True


def _iso_lifts(F, hc: H0Category, hd: H0Category, a: str, g: Element) -> bool:
    """Is there an iso ``f: a -> a'`` of H^0(C) with ``[F f] = [g]``?"""
    src = F.source
    for a2 in src.objects:
        if F.obj(a2) != g.target:
            continue
        reps = hc.reps[(a, a2)]
        # coordinates of [F r] for every representative r, and of [g]
        cols = []
        for r in reps:
            c = hd.classify(F.apply(r))
            if c is None:
                break
            cols.append(c)
        else:
            target = hd.classify(g)
            mods = hd.moduli[(F.obj(a), g.target)]
            for coeffs in _affine_solutions(src.ring, cols, target, mods, len(reps)):
                f = hc.class_element(a, a2, coeffs)
                if hc.is_iso(f):
                    return True
    return False


def _affine_solutions(ring, cols, target, mods, n):
    """Coefficient vectors ``x`` with ``sum x_i cols_i = target`` (mod the
    torsion orders); the particular solution plus small kernel combinations."""
    if target is None:
        return
    rows = len(target)
    extra = [i for i, m in enumerate(mods) if m]
    mat_rows = []
    for i in range(rows):
        mat_rows.append([col[i] for col in cols] + [mods[i] if i == j else 0 for j in extra])
    if not mat_rows:
        # no constraint: every vector solves
        base = [0] * n
        ker = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    else:
        m = Matrix.from_rows(ring, mat_rows, cols=n + len(extra))
        sol = solve(m, list(target))
        if sol is None:
            return
        base = list(sol[:n])
        ker = [list(v[:n]) for v in kernel_basis(m)] if m.cols else []
    ker = [v for v in ker if any(v)][:3]
    vals = ring.elements() if ring.kind == "Fp" and ring.p <= 3 else [-1, 0, 1]
    for combo in product(vals, repeat=len(ker)):
        yield [b + sum(c * v[i] for c, v in zip(combo, ker)) for i, b in enumerate(base)]


def is_isofibration(F: StrictFunctor, cfg: TruncationConfig = TruncationConfig(4, 3)) -> bool:
    """Every iso ``g: F(a) -> b`` of H^0(D) is ``[F f]`` for an iso ``f`` of H^0(C).

    Isos out of ``F(a)`` are drawn from ``H0Category.candidates``; over
    infinite rings this is a finite test set (units times basis classes).
    """
    hc, hd = h0(F.source, cfg), h0(F.target, cfg)
    for a in F.source.objects:
        for b in F.target.objects:
            for g in hd.candidates(F.obj(a), b):
                if g.is_zero() and F.obj(a) != b:
                    continue
                if not hd.is_iso(g):
                    continue
                if not _iso_lifts(F, hc, hd, a, g):
                    return False
    return True


def hom_quasi_iso(F: StrictFunctor, a: str, b: str,
                  cfg: TruncationConfig = TruncationConfig(4, 3)) -> bool:
    """Window test that ``F: C(a, b) -> D(Fa, Fb)`` induces isomorphisms on homology.

    Cycles are taken in the ``cfg`` window; boundaries may come from a
    window enlarged by the largest generator weight.
    """
    src, tgt = F.source, F.target
    fa, fb = F.obj(a), F.obj(b)
    c_small, d_small = _ht(src, a, b, cfg), _ht(tgt, fa, fb, cfg)
    c_big = _ht(src, a, b, _bigger(cfg, _slack(src)))
    dcfg = _bigger(cfg, _slack(tgt))
    ring = src.ring
    for k in _degrees(c_small, d_small):
        # injective: a cycle z with F z = d x must be a boundary
        zs = _cycles(c_small, k)
        if zs:
            imgs = [F.apply(z) for z in zs]
            ht, vecs = _vectors(tgt, fa, fb, dcfg, imgs)
            n = ht.result.dim(k)
            bcols = ht.result.d(k - 1).columns() if ht.result.dim(k - 1) else []
            cols = vecs + [[-x for x in col] for col in bcols]
            if n:
                kernel = kernel_basis(Matrix.from_columns(ring, cols, n))
            else:
                # the target is zero here, so every cycle lies in the kernel
                kernel = [[1 if i == j else 0 for i in range(len(cols))] for j in range(len(zs))]
            if True:
                for v in kernel:
                    z = src.zero(a, b, k)
                    for lam, zi in zip(v[:len(zs)], zs):
                        z = z + zi.scale(lam)
                    if z.is_zero():
                        continue
                    if not _is_boundary(src, a, b, z, c_big):
                        return False
        # surjective: each target cycle is F(cycle) + boundary
        ws = _cycles(d_small, k)
        if ws:
            cb = _basis_elements(c_big, k)
            imgs = [F.apply(e) for e in cb]
            ht, vecs = _vectors(tgt, fa, fb, dcfg, ws + imgs)
            n = ht.result.dim(k)
            wv, iv = vecs[:len(ws)], vecs[len(ws):]
            bcols = ht.result.d(k - 1).columns() if ht.result.dim(k - 1) else []
            nz = c_big.result.dim(k + 1)
            dz = c_big.result.d(k).columns() if cb else []
            # unknowns (z, x): [F z + d x ; d_C z] = [w ; 0]
            cols = [list(fi) + list(dzi) for fi, dzi in zip(iv, dz)]
            cols += [list(bc) + [0] * nz for bc in bcols]
            for w in wv:
                if not _in_span(ring, cols, n + nz, list(w) + [0] * nz):
                    return False
    return True


def _is_boundary(cat, a, b, z: Element, ht) -> bool:
    if not ht.contains(z):
        ht = _ht(cat, a, b, _widened(ht.cfg, cat, [z]))
    v = ht.vector(z)
    k = z.degree
    cols = ht.result.d(k - 1).columns() if ht.result.dim(k - 1) else []
    return _in_span(cat.ring, cols, ht.result.dim(k), v)


def _essentially_surjective(F: StrictFunctor, cfg: TruncationConfig) -> bool:
    image = {F.obj(x) for x in F.source.objects}
    missing = [y for y in F.target.objects if y not in image]
    if not missing:
        return True
    hd = h0(F.target, cfg)
    return all(any(hd.isomorphism(x, y) is not None for x in sorted(image)) for y in missing)


def is_quasi_equivalence(F: StrictFunctor, cfg: TruncationConfig = TruncationConfig(4, 3)) -> bool:
    """Hom-wise quasi-isomorphism (window test) and essential surjectivity on H^0."""
    for a in F.source.objects:
        for b in F.source.objects:
            if not hom_quasi_iso(F, a, b, cfg):
                return False
    return _essentially_surjective(F, cfg)


# ---------------------------------------------------------------------------
# generating maps and right lifting properties

GENERATING_TAGS = ("Q", "S", "R", "F_dg", "F_prime", "J_disk")


@dataclass(frozen=True)
class GeneratingMap:
    tag: str
    n: int | None = None

    def __post_init__(self):
        if self.tag not in GENERATING_TAGS:
            raise ValueError(f"unknown generating map {self.tag!r}")
        if (self.tag in ("S", "R", "J_disk")) != (self.n is not None):
            raise ValueError(f"{self.tag} {'needs' if self.n is None else 'takes no'} parameter")

    @property
    def label(self) -> str:
        return self.tag if self.n is None else f"{self.tag}({self.n})"

    def __str__(self):
        return self.label

    @classmethod
    def parse(cls, text: str) -> "GeneratingMap":
        text = text.strip()
        if "(" in text:
            tag, rest = text.split("(", 1)
            return cls(tag.strip(), int(rest.rstrip(")")))
        return cls(text)

    def functor(self, ring: RingSpec) -> StrictFunctor:
        """The generating map as a strict functor ``X -> Y`` (not for ``J_disk``)."""
        n = self.n
        if self.tag == "Q":
            return StrictFunctor("Q", builtin("empty", ring), builtin("A", ring), {})
        if self.tag == "S":
            c, p = builtin(f"C({n})", ring), builtin(f"P({n})", ring)
            return StrictFunctor(self.label, c, p, {"8": "6", "9": "7"}, {"x": p.gen("b")})
        if self.tag == "R":
            return StrictFunctor(self.label, builtin("B", ring), builtin(f"P({n})", ring),
                                 {"4": "6", "5": "7"})
        if self.tag == "F_prime":
            return StrictFunctor("F_prime", builtin("A", ring), builtin("K_ainf", ring), {"3": "1"})
        if self.tag == "F_dg":
            return StrictFunctor("F_dg", builtin("A", ring), builtin("K", ring), {"3": "1"})
        raise ValueError("J_disk(n) is a map of complexes, not of categories")


def _s_condition(F: StrictFunctor, a: str, b: str, n: int, cfg: TruncationConfig) -> bool:
    """Every pair ``(e', x)``, ``x`` an n-cycle of ``C(a, b)`` and ``d e' = F x``,
    is ``(F e, d e)`` for some ``e`` in ``C^{n-1}(a, b)``."""
    src, tgt = F.source, F.target
    fa, fb = F.obj(a), F.obj(b)
    hc = _ht(src, a, b, cfg)
    zs = _cycles(hc, n)
    es = _basis_elements(_ht(tgt, fa, fb, cfg), n - 1)
    if not zs and not es:
        return True
    d_es = [m1_expand(tgt, e) for e in es]
    f_zs = [F.apply(z) for z in zs]
    ht, vecs = _vectors(tgt, fa, fb, cfg, d_es + f_zs)
    rows = ht.result.dim(n)
    cols = vecs[:len(es)] + [[-x for x in v] for v in vecs[len(es):]]
    if rows == 0:
        pairs = [[1 if i == j else 0 for i in range(len(cols))] for j in range(len(cols))]
    else:
        pairs = kernel_basis(Matrix.from_columns(src.ring, cols, rows))
    # candidates e in C^{n-1}(a, b): columns (F e ; d e)
    big = _ht(src, a, b, _lift_window(cfg, src))
    cand = _basis_elements(big, n - 1)
    f_cand = [F.apply(e) for e in cand]
    want_e = []
    for v in pairs:
        e_d = tgt.zero(fa, fb, n - 1)
        for mu, e in zip(v[:len(es)], es):
            e_d = e_d + e.scale(mu)
        want_e.append(e_d)
    ht2, vecs2 = _vectors(tgt, fa, fb, cfg, f_cand + want_e)
    r1 = ht2.result.dim(n - 1)
    r2 = big.result.dim(n)
    d_cand = big.result.d(n - 1).columns() if cand else []
    cols2 = [list(fv) + list(dv) for fv, dv in zip(vecs2[:len(cand)], d_cand)]
    for v, ev in zip(pairs, vecs2[len(cand):]):
        x = [0] * r2
        for lam, z in zip(v[len(es):], zs):
            for i, c in enumerate(big.vector(z)):
                x[i] += lam * c
        if not _in_span(src.ring, cols2, r1 + r2, list(ev) + x):
            return False
    return True


def has_rlp(F: StrictFunctor, g: GeneratingMap,
            cfg: TruncationConfig = TruncationConfig(3, 3)) -> bool:
    """Right lifting property of ``F`` against ``g``, from the hom-level conditions
    listed in the module docstring."""
    pairs = [(a, b) for a in F.source.objects for b in F.source.objects]
    if g.tag == "Q":
        return is_surjective_on_objects(F)
    if g.tag == "R":
        return all(_surjective_in_degree(F, a, b, g.n - 1, cfg) for a, b in pairs)
    if g.tag == "J_disk":
        return all(_surjective_in_degree(F, a, b, k, cfg)
                   for a, b in pairs for k in (g.n - 1, g.n))
    if g.tag == "S":
        return all(_s_condition(F, a, b, g.n, cfg) for a, b in pairs)
    return is_isofibration(F, cfg)


# ---------------------------------------------------------------------------
# brute-force oracle

class BudgetExhausted(RuntimeError):
    pass


class _Counter:
    def __init__(self, budget):
        self.budget, self.used = budget, 0
        self.found = False

    def tick(self, n=1):
        self.used += n
        if self.budget is not None and self.used > self.budget:
            raise BudgetExhausted(f"budget of {self.budget} exhausted")


def _enumerated_generators(Y: CategoryPresentation, fixed) -> set:
    """Generators to enumerate so that every differential is linear in the rest."""
    chosen: set = set()
    for _ in range(len(Y.quiver.generators) + 1):
        changed = False
        for g in Y.quiver.generators:
            for m in Y.d_gen(g.name).terms:
                free = [x for x in _leaves(m) if x not in fixed and x not in chosen]
                if len(free) >= 2:
                    closed = [x for x in free if not Y.d_gen(x).terms]
                    if len(free) - len(closed) > 1:
                        raise NotImplementedError(
                            f"d({g.name}) is not linear in its non-closed generators")
                    keep = next((x for x in free if x not in closed), closed[-1])
                    chosen.update(x for x in closed if x != keep)
                    changed = True
        if not changed:
            return chosen
    return chosen


def _leaves(m):
    from .presentations import leaves
    return leaves(m)


def _span_points(ring, base, kernel):
    vals = ring.elements()
    for combo in product(vals, repeat=len(kernel)):
        yield [ring.coerce(b + sum(c * k[i] for c, k in zip(combo, kernel)))
               for i, b in enumerate(base)]


def _linear_system(Z, W, groups, unknowns, cfg):
    """Assemble ``A u = b`` from equation groups.

    Each group is ``(cat, x, y, k, columns, constant)`` meaning
    ``sum_j u_j columns[j] = constant`` in ``cat(x, y)`` degree ``k``; ``columns``
    has one (possibly ``None``) element per unknown coordinate.
    """
    rows, rhs = [], []
    ncols = len(unknowns)
    for cat, x, y, k, columns, constant in groups:
        elems = [c for c in columns if c is not None] + [constant]
        ht, vecs = _vectors(cat, x, y, cfg, elems)
        n = ht.result.dim(k)
        it = iter(vecs[:-1])
        colvecs = [next(it) if c is not None else [0] * n for c in columns]
        for i in range(n):
            rows.append([colvecs[j][i] for j in range(ncols)])
            rhs.append(vecs[-1][i])
    return rows, rhs


def _solve_functors(Y: CategoryPresentation, Z: CategoryPresentation, cfg: TruncationConfig,
                    objects: Mapping[str, Sequence[str]], fixed: Mapping[str, Element],
                    counter: _Counter, proj: StrictFunctor | None = None,
                    proj_values: Mapping[str, Element] | None = None,
                    first_only: bool = False) -> Iterator[StrictFunctor]:
    """All strict functors ``Y -> Z`` (generator images in ``cfg`` windows) with
    the given object choices and fixed generator images, optionally with
    ``proj o functor`` prescribed on generators.  Finite fields only."""
    ring = Z.ring
    if ring.kind != "Fp":
        raise ValueError("the brute-force oracle needs a finite field")
    gens = list(Y.quiver.generators)
    enum = _enumerated_generators(Y, fixed)
    rest = [g for g in gens if g.name not in fixed and g.name not in enum]
    ys = list(Y.objects)
    for choice in product(*[list(objects[y]) for y in ys]):
        counter.tick()
        omap = dict(zip(ys, choice))
        # phase 1: enumerated generators, each on its own affine space
        spaces = []
        for g in gens:
            if g.name not in enum:
                continue
            spaces.append((g, list(_affine_images(Y, Z, g, omap, fixed, cfg, proj, proj_values))))
        for picks in product(*[sp for _, sp in spaces]):
            counter.tick()
            images = dict(fixed)
            for (g, _), img in zip(spaces, picks):
                images[g.name] = img
            yield from _phase_two(Y, Z, cfg, omap, images, rest, counter, proj, proj_values,
                                  first_only)
            if first_only and counter.found:
                return


def _affine_images(Y, Z, g, omap, fixed, cfg, proj, proj_values):
    """Images of a generator whose differential only involves fixed generators."""
    s, t = omap[g.source], omap[g.target]
    ht = _ht(Z, s, t, cfg)
    basis = _basis_elements(ht, g.degree)
    const = _evaluate(Y, Z, Y.d_gen(g.name), omap, fixed)
    groups = [(Z, s, t, g.degree + 1, [m1_expand(Z, b) for b in basis], const)]
    if proj is not None and g.name in proj_values:
        groups.append((proj.target, proj.obj(s), proj.obj(t), g.degree,
                       [proj.apply(b) for b in basis], proj_values[g.name]))
    rows, rhs = _linear_system(Z, None, groups, basis, cfg)
    for coeffs in _all_solutions(Z.ring, rows, rhs, len(basis)):
        out = Z.zero(s, t, g.degree)
        for c, b in zip(coeffs, basis):
            out = out + b.scale(c)
        yield out


def _all_solutions(ring, rows, rhs, n):
    if n == 0:
        if not any(rhs):
            yield []
        return
    if not rows:
        yield from _span_points(ring, [0] * n, [[1 if i == j else 0 for i in range(n)]
                                                 for j in range(n)])
        return
    m = Matrix.from_rows(ring, rows, cols=n)
    sol = solve(m, rhs)
    if sol is None:
        return
    yield from _span_points(ring, sol, kernel_basis(m))


def _evaluate(Y, Z, e: Element, omap, images) -> Element:
    out = Z.zero(omap[e.source], omap[e.target], e.degree)
    for m, c in e.terms.items():
        img = _apply_mono(m, omap, images, Z)
        if img is not None:
            out = out + img.scale(c)
    return out


def _phase_two(Y, Z, cfg, omap, images, rest, counter, proj, proj_values, first_only):
    ring = Z.ring
    # unknown coordinates: (generator, basis element)
    unknowns = []
    bases = {}
    for g in rest:
        ht = _ht(Z, omap[g.source], omap[g.target], cfg)
        bases[g.name] = _basis_elements(ht, g.degree)
        unknowns += [(g.name, b) for b in bases[g.name]]
    zero_of = {g.name: Z.zero(omap[g.source], omap[g.target], g.degree) for g in rest}
    groups = []
    for g in Y.quiver.generators:
        s, t = omap[g.source], omap[g.target]
        dy = Y.d_gen(g.name)
        # d(img g) - img(d g) = 0
        cols = []
        for name, b in unknowns:
            trial = dict(images)
            trial.update(zero_of)
            trial[name] = b
            lhs = m1_expand(Z, b) if name == g.name else Z.zero(s, t, g.degree + 1)
            rhs_part = _evaluate(Y, Z, dy, omap, trial) - _evaluate(Y, Z, dy, omap,
                                                                     {**images, **zero_of})
            col = lhs - rhs_part
            cols.append(col if col.terms else None)
        base_imgs = {**images, **zero_of}
        const = _evaluate(Y, Z, dy, omap, base_imgs) - m1_expand(Z, base_imgs[g.name])
        if any(c is not None for c in cols) or const.terms:
            groups.append((Z, s, t, g.degree + 1, cols, const))
        if proj is not None and g.name in proj_values and g.name in bases:
            pcols = [proj.apply(b) if name == g.name else None for name, b in unknowns]
            pcols = [c if c is not None and c.terms else None for c in pcols]
            groups.append((proj.target, proj.obj(s), proj.obj(t), g.degree, pcols,
                           proj_values[g.name]))
    # prescribed projections of fixed / enumerated generators must already agree
    if proj is not None:
        for g in Y.quiver.generators:
            if g.name in bases or g.name not in proj_values:
                continue
            if proj.apply(images[g.name]) != proj.target.convert(proj_values[g.name]):
                return
    rows, rhs = _linear_system(Z, None, groups, unknowns, cfg)
    for coeffs in _all_solutions(ring, rows, rhs, len(unknowns)):
        counter.tick()
        gmap = dict(images)
        for g in rest:
            gmap[g.name] = zero_of[g.name]
        for c, (name, b) in zip(coeffs, unknowns):
            if c:
                gmap[name] = gmap[name] + b.scale(c)
        counter.found = True
        yield StrictFunctor(f"{Y.name}->{Z.name}", Y, Z, omap, gmap)
        if first_only:
            return


@dataclass(eq=False)
class LiftingSquare:
    """``top: X -> C``, ``bottom: Y -> D``, ``left: X -> Y``, ``right: C -> D``."""

    left: GeneratingMap
    top: StrictFunctor
    bottom: StrictFunctor
    right: StrictFunctor

    def left_functor(self) -> StrictFunctor:
        return self.left.functor(self.right.source.ring)

    def commutes(self) -> bool:
        L, F, T, B = self.left_functor(), self.right, self.top, self.bottom
        for x in L.source.objects:
            if F.obj(T.obj(x)) != B.obj(L.obj(x)):
                return False
        for g in L.source.quiver.generators:
            lhs = F.apply(F.source.convert(T.generator_map[g.name]))
            rhs = B.apply(B.source.convert(L.generator_map[g.name]))
            if lhs != F.target.convert(rhs):
                return False
        return True


@dataclass
class LiftResult:
    status: str                      # "lift", "none" or "budget"
    lift: StrictFunctor | None = None
    explored: int = 0


def _left_data(L: StrictFunctor):
    """Generators of Y hit by generators of X, as ``{y_gen: x_gen}``."""
    out = {}
    for name, img in L.generator_map.items():
        if len(img.terms) != 1:
            raise ValueError("generating maps send generators to generators")
        (m, c), = img.terms.items()
        if not isinstance(m, Word) or len(m.letters) != 1 or c != 1:
            raise ValueError("generating maps send generators to generators")
        out[m.letters[0]] = name
    return out


def brute_force_lift(sq: LiftingSquare, cfg: TruncationConfig = TruncationConfig(3, 3),
                     budget: int | None = 200_000) -> LiftResult:
    """Search for ``lift: Y -> C`` with ``lift o left = top`` and ``right o lift = bottom``."""
    L, F, T, B = sq.left_functor(), sq.right, sq.top, sq.bottom
    counter = _Counter(budget)
    Y, C = L.target, F.source
    image = {L.obj(x): T.obj(x) for x in L.source.objects}
    objects = {y: [image[y]] if y in image else [c for c in C.objects if F.obj(c) == B.obj(y)]
               for y in Y.objects}
    fixed = {y: C.convert(T.generator_map[x]) for y, x in _left_data(L).items()}
    try:
        for lift in _solve_functors(Y, C, _lift_window(cfg, C), objects, fixed, counter, proj=F,
                                    proj_values=B.generator_map, first_only=True):
            return LiftResult("lift", lift, counter.used)
    except BudgetExhausted:
        return LiftResult("budget", None, counter.used)
    return LiftResult("none", None, counter.used)


def enumerate_squares(F: StrictFunctor, g: GeneratingMap,
                      cfg: TruncationConfig = TruncationConfig(3, 3),
                      budget: int | None = 200_000) -> Iterator[LiftingSquare]:
    """Every commutative square of ``g`` against ``F`` with window-sized data."""
    ring = F.source.ring
    L = g.functor(ring)
    X, Y, C, D = L.source, L.target, F.source, F.target
    counter = _Counter(budget)
    hits = _left_data(L)
    for T in _solve_functors(X, C, cfg, {x: C.objects for x in X.objects}, {}, counter):
        image = {L.obj(x): F.obj(T.obj(x)) for x in X.objects}
        objects = {y: [image[y]] if y in image else list(D.objects) for y in Y.objects}
        fixed = {y: D.convert(F.apply(T.generator_map[x])) for y, x in hits.items()}
        for B in _solve_functors(Y, D, cfg, objects, fixed, counter):
            yield LiftingSquare(g, T, B, F)


@dataclass
class RLPResult:
    status: str                      # "holds", "fails" or "budget"
    squares: int = 0
    witness: LiftingSquare | None = None


def brute_force_rlp(F: StrictFunctor, g: GeneratingMap,
                    cfg: TruncationConfig = TruncationConfig(3, 3),
                    budget: int | None = 200_000) -> RLPResult:
    """Lift every enumerated square; ``fails`` carries a square without a lift."""
    count = 0
    try:
        for sq in enumerate_squares(F, g, cfg, budget):
            count += 1
            res = brute_force_lift(sq, cfg, budget)
            if res.status == "budget":
                return RLPResult("budget", count, sq)
            if res.status == "none":
                return RLPResult("fails", count, sq)
    except BudgetExhausted:
        return RLPResult("budget", count)
    return RLPResult("holds", count)


# ---------------------------------------------------------------------------
# classification

@dataclass(frozen=True)
class Classification:
    fibration: bool
    trivial_fibration: bool
    weak_equivalence: bool

    def to_dict(self) -> dict:
        return {"fibration": self.fibration, "trivial_fibration": self.trivial_fibration,
                "weak_equivalence": self.weak_equivalence}


def classify(F: StrictFunctor, cfg: TruncationConfig = TruncationConfig(3, 3)) -> Classification:
    """Fibration: isofibration and surjective on morphisms.  Trivial fibration:
    surjective on objects and morphisms and a quasi-equivalence."""
    surj = is_surjective_on_morphisms(F, cfg)
    weq = is_quasi_equivalence(F, cfg)
    fib = surj and is_isofibration(F, cfg)
    return Classification(fib, surj and weq and is_surjective_on_objects(F), weq)


# ---------------------------------------------------------------------------
# catalog

def _to_point(cat: CategoryPresentation, point: CategoryPresentation, values=None) -> StrictFunctor:
    values = values or {}
    obj = point.objects[0]
    gens = {}
    for g in cat.quiver.generators:
        if g.name in values:
            gens[g.name] = point.unit(obj).scale(values[g.name])
    return StrictFunctor(f"{cat.name}->A", cat, point, {x: obj for x in cat.objects}, gens)


def catalog(ring: RingSpec = GF(2)) -> dict[str, StrictFunctor]:
    """Named functors between the builtin categories."""
    K, I, I1, I2 = (builtin(n, ring) for n in ("K", "I", "I1", "I2_dg"))
    A, B, C0 = builtin("A", ring), builtin("B", ring), builtin("C(0)", ring)
    j = {"f": I.gen("j01"), "g": I.gen("j10")}
    out = [
        StrictFunctor("Psi", K, I, {"1": "1", "2": "2"}, j),
        StrictFunctor("Psi1", I1, I, {"1": "1", "2": "2"}, j),
        StrictFunctor("Psi2", I2, I, {"1": "1", "2": "2"}, j),
        StrictFunctor("B->I", B, I, {"4": "1", "5": "2"}),
        StrictFunctor("A->I", A, I, {"3": "1"}),
        StrictFunctor("I2->K", I2, K, {"1": "1", "2": "2"},
                      {g: K.gen(g) for g in ("f", "g", "r1", "r2")}),
        StrictFunctor("C(0)->B", C0, B, {"8": "4", "9": "5"}),
        _to_point(K, A, {"f": 1, "g": 1}),
        _to_point(I, A, {"j01": 1, "j10": 1}),
        _to_point(B, A),
        _to_point(C0, A, {"x": 1}),
        identity_functor(I),
        identity_functor(K),
    ]
    return {F.name: F for F in out}
