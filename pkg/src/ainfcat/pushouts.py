"""Cell attachments: pushouts along the generating maps.

Attaching a cell glues the target of a generating map onto a base
category along a top functor.  The result is again a presentation: the
base generators, plus the cell generators with their endpoints moved to
the glued objects.  For ``S(n)`` the cell's boundary ``b`` is identified
with the attaching cycle and only ``e`` is new.

For a ``J'`` cell the homs between base objects split into layers by the
number of cell factors,

    P^(m)(x, y) = M(b, y) (x) D (x) M(b, a) (x) ... (x) D (x) M(x, a)

for a disk cell ``D`` attached along ``a -> b``, and the same shape with
the reduced cell hom ``K(1, 1) / R 1`` around the glued object ``z`` for
``F_dg`` and ``F_prime``.  ``layered_hom`` builds these tensor products;
``presentation_layers`` counts the same layers among the words of the
pushout, which is the independent route.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .categories import CategoryPresentation, _build, builtin, h0, hom_complex, m1_expand
from .coeff import QQ, Matrix, RingSpec, solve
from .complexes import (FiniteComplex, direct_sum, disk, homology, homology_basis,
                        quotient_by_basis, tensor, tensor_homotopy, verify_homotopy)
from .functors import GeneratingMap, StrictFunctor
from .presentations import (Element, Generator, GradedQuiver, TruncationConfig, Unit,
                            leaves)
from .reports import CheckReport, verdict

__all__ = [
    "GluedCategory",
    "pushout",
    "LayeredHom",
    "layered_hom",
    "presentation_layers",
    "check_inc_quasi_iso",
    "interval_certificate",
]


def _fresh(name: str, taken: set) -> str:
    while name in taken:
        name += "'"
    taken.add(name)
    return name


@dataclass(eq=False)
class GluedCategory:
    base: CategoryPresentation
    cell: GeneratingMap
    attachment: dict
    result: CategoryPresentation
    glue: dict = field(default_factory=dict)       # cell object -> result object
    renamed: dict = field(default_factory=dict)    # cell generator -> result generator

    def inc(self) -> StrictFunctor:
        b, r = self.base, self.result
        return StrictFunctor("inc", b, r, {x: x for x in b.objects},
                             {g.name: r.gen(g.name) for g in b.quiver.generators})

    def cell_functor(self) -> StrictFunctor:
        """The right-hand map of the pushout square, from the cell's target."""
        y = self.cell.functor(self.base.ring).target
        if self.cell.tag == "F_prime":
            y = builtin("K_ainf", self.base.ring)
        r = self.result
        gens = {old: r.gen(new) for old, new in self.renamed.items()}
        if self.cell.tag == "S":
            gens["b"] = r.convert(self.attachment["x"])
        return StrictFunctor(f"cell:{self.cell.label}", y, r, self.glue, gens)

    def top(self) -> StrictFunctor:
        x = self.cell.functor(self.base.ring).source
        if self.cell.tag == "F_prime":
            x = builtin("A", self.base.ring)
        gens = {}
        if self.cell.tag == "S":
            gens["x"] = self.base.convert(self.attachment["x"])
        objects = {o: self.attachment[o] for o in x.objects}
        return StrictFunctor("top", x, self.base, objects, gens)

    def commutes(self) -> bool:
        """``inc o top == cell o left`` on objects and generators."""
        left = self.cell.functor(self.base.ring)
        top, inc, cell = self.top(), self.inc(), self.cell_functor()
        for o in left.source.objects:
            if inc.obj(top.obj(o)) != cell.obj(left.obj(o)):
                return False
        for g in left.source.quiver.generators:
            a = inc.apply(top.generator_map[g.name])
            b = cell.apply(cell.source.convert(left.generator_map[g.name]))
            if a != b:
                return False
        return True


def _attachment(cell: GeneratingMap, base: CategoryPresentation, data) -> dict:
    if isinstance(data, StrictFunctor):
        out = dict(data.object_map)
        out.update({k: v for k, v in data.generator_map.items() if v.terms})
        data = out
    data = dict(data or {})
    need = {"Q": (), "R": ("4", "5"), "S": ("8", "9", "x"),
            "F_dg": ("3",), "F_prime": ("3",)}.get(cell.tag)
    if need is None:
        raise ValueError(f"no pushouts along {cell.label}")
    for key in need:
        if key not in data:
            raise ValueError(f"{cell.label} attachment needs {key!r}")
    for key in need:
        if key != "x" and data[key] not in base.objects:
            raise ValueError(f"attachment object {data[key]!r} is not in {base.name}")
    if cell.tag == "S":
        x = data["x"]
        if isinstance(x, str):
            x = base.parse(x, data["8"], data["9"], cell.n)
        if (x.source, x.target, x.degree) != (data["8"], data["9"], cell.n):
            raise ValueError(f"attaching element must be {data['8']} -> {data['9']} "
                             f"in degree {cell.n}")
        if not m1_expand(base, x).is_zero():
            raise ValueError("attaching element of a sphere must be closed")
        data["x"] = x
    return data


def pushout(base: CategoryPresentation, cell: GeneratingMap | str, attachment=None) -> GluedCategory:
    """Attach one cell to ``base`` along the given top functor or object data."""
    if isinstance(cell, str):
        cell = GeneratingMap.parse(cell)
    data = _attachment(cell, base, attachment)
    ring = base.ring
    kind = base.kind
    if cell.tag == "F_prime":
        if base.kind == "dg" and (base.quiver.generators or base.relations):
            raise ValueError("F_prime cells attach to A-infinity bases")
        kind = "ainf"
        y = builtin("K_ainf", ring)
    elif cell.tag == "F_dg":
        if base.kind != "dg":
            raise ValueError("F_dg cells attach to DG bases")
        y = builtin("K", ring)
    else:
        y = cell.functor(ring).target
    left = cell.functor(ring)

    objects = list(base.objects)
    taken_obj = set(objects)
    glue = {}
    for o in left.source.objects:
        glue[left.obj(o)] = data[o]
    for o in y.objects:
        if o not in glue:
            glue[o] = _fresh(o, taken_obj)
            objects.append(glue[o])

    taken = {g.name for g in base.quiver.generators}
    renamed = {}
    gens = list(base.quiver.generators)
    for g in y.quiver.generators:
        if cell.tag == "S" and g.name == "b":
            continue
        new = _fresh(g.name, taken)
        renamed[g.name] = new
        gens.append(Generator(new, glue[g.source], glue[g.target], g.degree))
    quiver = GradedQuiver(tuple(objects), tuple(gens))

    def move(e: Element) -> Element:
        return Element(quiver, ring, kind, e.source, e.target, e.degree, dict(e.terms))

    diff = {name: move(e) for name, e in base.diff.items()}
    rels = tuple(move(r) for r in base.relations)
    bare = CategoryPresentation(f"{base.name}+{cell.label}", kind, quiver, ring, diff, rels)
    images = {old: bare.gen(new) for old, new in renamed.items()}
    if cell.tag == "S":
        images["b"] = move(data["x"])
    to_bare = StrictFunctor("cell", y, bare, glue, images)
    for old, new in renamed.items():
        d = y.d_gen(old)
        if d.terms:
            diff[new] = to_bare.apply(d)
    result = CategoryPresentation(bare.name, kind, quiver, ring, diff, rels)
    return GluedCategory(base, cell, data, result, glue, renamed)


# ---------------------------------------------------------------------------
# layered homs

@dataclass(eq=False)
class LayeredHom:
    layers: dict                 # m -> FiniteComplex
    assembly: FiniteComplex
    factors: dict                # m -> list of factor names, outermost first
    exact: bool
    homotopies: dict = field(default_factory=dict)   # m -> contracting homotopy (disk cells)

    def offsets(self, k: int) -> dict:
        """Position of each layer's degree-k block inside the assembly."""
        out, pos = {}, 0
        for m in sorted(self.layers):
            out[m] = pos
            pos += self.layers[m].dim(k)
        return out


def _base_hom(base, u, v, cfg):
    ht = hom_complex(base, u, v, cfg)
    return ht.result, ht.exact_flag


def _canonical(cat, a: str, b: str):
    # the degree 0 class spanning H(a, b) when the cell is an interval
    if a == b:
        return Unit(a)
    return next(iter(cat.gen("f" if (a, b) == ("1", "2") else "g").terms))


def _reduced_cell_hom(g: GluedCategory, cfg: TruncationConfig, a: str = "1", b: str = "1"):
    cat = g.cell_functor().source
    ht = hom_complex(cat, a, b, cfg)
    return quotient_by_basis(ht.result, {0: [str(_canonical(cat, a, b))]}), ht


def layered_hom(g: GluedCategory, x: str, y: str, m_max: int = 3,
                cfg: TruncationConfig = TruncationConfig()) -> LayeredHom:
    """The layers ``P^(m)(x, y)``, 0 <= m <= m_max, as tensor products."""
    base, tag = g.base, g.cell.tag
    if x not in base.objects or y not in base.objects:
        raise ValueError("layers are defined between base objects")
    m0, exact = _base_hom(base, x, y, cfg)
    layers, names, homotopies = {0: m0}, {0: [f"M({x},{y})"]}, {}
    if tag == "Q":
        m_max = 0
    elif tag == "S":
        raise ValueError("sphere cells do not split into layers: d e lands in the base")
    elif tag == "R":
        if base.kind != "dg":
            raise ValueError("layers of disk cells are computed over DG bases")
        a, b = g.attachment["4"], g.attachment["5"]
        cell, a_name = disk(g.cell.n, base.ring), "D"
        h_cell = {g.cell.n: Matrix.identity(base.ring, 1)}
    else:
        a = b = g.attachment["3"]
        cell, _ = _reduced_cell_hom(g, cfg)
        a_name, h_cell = "Kbar", None
        exact = False
    for m in range(1, m_max + 1):
        first, fx = _base_hom(base, b, y, cfg)
        mid, mx = _base_hom(base, b, a, cfg)
        last, lx = _base_hom(base, x, a, cfg)
        exact = exact and fx and lx and (m == 1 or mx)
        # outermost (last applied) factor first, as in composition
        factors = [first, cell]
        labels = [f"M({b},{y})", a_name]
        for _ in range(m - 1):
            factors += [mid, cell]
            labels += [f"M({b},{a})", a_name]
        factors.append(last)
        labels.append(f"M({x},{a})")
        out = tensor(factors[0], factors[1])
        h = tensor_homotopy(factors[0], factors[1], h_cell, "right") if h_cell else None
        for f in factors[2:]:
            if h is not None:
                h = tensor_homotopy(out, f, h, "left")
            out = tensor(out, f)
        layers[m], names[m] = out, labels
        if h is not None:
            homotopies[m] = h
    assembly = direct_sum([layers[m] for m in sorted(layers)], tags=sorted(layers))
    return LayeredHom(layers, assembly, names, exact, homotopies)


def _segments(g: GluedCategory, mono) -> int:
    """Number of maximal runs of cell letters that compose inside the cell."""
    if isinstance(mono, Unit):
        return 0
    y = g.cell_functor().source
    back = {new: old for old, new in g.renamed.items()}
    count, prev = 0, None
    for letter in reversed(leaves(mono)):   # first applied first
        old = back.get(letter)
        if old is None:
            prev = None
            continue
        gen = y.quiver.gen(old)
        if prev is None or prev.target != gen.source:
            count += 1
        prev = gen
    return count


def presentation_layers(g: GluedCategory, x: str, y: str, m_max: int,
                        cfg: TruncationConfig) -> dict:
    """Dimensions ``{m: {degree: dim}}`` of the pushout's words with m cell segments."""
    ht = hom_complex(g.result, x, y, cfg)
    out = {m: {} for m in range(m_max + 1)}
    for k, monos in ht.monomials.items():
        for mono in monos:
            m = _segments(g, mono)
            if m <= m_max:
                out[m][k] = out[m].get(k, 0) + 1
    return out


def _dims(c: FiniteComplex) -> dict:
    return {k: c.dim(k) for k in c.degrees()}


def _needed_length(g: GluedCategory, x, y, m_max, cfg) -> int:
    """Window length holding every word of layers 0..m_max when the base homs are exact."""
    base = g.base
    w = g.result.weights

    def heaviest(u, v):
        ht = hom_complex(base, u, v, cfg)
        ms = [m for ms in ht.monomials.values() for m in ms if not isinstance(m, Unit)]
        return max([0] + [sum(w[l] for l in leaves(m)) for m in ms])
    cell = max(w[n] for n in g.renamed.values())
    a, b = g.attachment["4"], g.attachment["5"]
    return max(heaviest(x, y), heaviest(b, y) + heaviest(x, a)
               + m_max * cell + (m_max - 1) * heaviest(b, a), 1)


# ---------------------------------------------------------------------------
# certificates and the inc check

def interval_certificate(ring: RingSpec = QQ) -> StrictFunctor:
    """A strict functor from ``K_ainf`` to a finite DG category.

    The target has one object and hom ``R[eps]/(eps^2)`` with ``eps`` in
    degree -1 and zero differential; ``f, g -> 1``, ``r1 -> 0``, ``r2 -> eps``.
    Any closed element sent to a nonzero multiple of ``eps`` is not a boundary.
    """
    d = _build("E", "dg", ("o",), [("eps", "o", "o", -1)], relations=["eps*eps"], ring=ring)
    ka = builtin("K_ainf", ring)
    return StrictFunctor("eps", ka, d, {"1": "o", "2": "o"},
                         {"f": d.unit("o"), "g": d.unit("o"), "r2": d.gen("eps")})


def _certified(cert: StrictFunctor, e: Element) -> bool:
    """Is ``e`` (closed modulo units) sent to a nonzero class of the reduced target?"""
    img = cert.apply(e)
    return any(not isinstance(m, Unit) and c for m, c in img.terms.items())


def _layer_cycles_bound(cell_small: FiniteComplex, cell_big: FiniteComplex):
    """Homology classes of the small window that survive in the big one (label-matched)."""
    out = []
    for k in cell_small.degrees():
        hb = homology_basis(cell_small, k)
        if not len(hb):
            continue
        labels = cell_big.labels(k)
        where = {lab: i for i, lab in enumerate(labels)}
        cols = cell_big.d(k - 1).columns()
        for rep in hb.reps:
            v = [0] * len(labels)
            for lab, c in zip(cell_small.labels(k), rep):
                v[where[lab]] = c
            bounded = bool(cols) and solve(Matrix.from_columns(cell_big.ring, cols, len(v)),
                                           v) is not None
            if not bounded:
                out.append((k, dict(zip(cell_small.labels(k), rep))))
    return out


def check_inc_quasi_iso(g: GluedCategory, m_max: int = 3,
                        cfg: TruncationConfig = TruncationConfig()) -> CheckReport:
    """Is ``inc: base -> pushout`` a quasi-equivalence (layers 1.. acyclic)?"""
    tag = g.cell.tag
    rid = f"inc:{g.base.name}+{g.cell.label}"
    conf = {"ring": str(g.base.ring), "L": cfg.max_word_length, "A": cfg.max_arity,
            "m": m_max, "cell": g.cell.label}
    if tag in ("Q", "S"):
        return CheckReport(rid, "out-of-scope",
                           [f"{g.cell.label} is a generating cofibration, not a trivial one"],
                           conf)
    bad, notes = [], []
    pairs = [(x, y) for x in g.base.objects for y in g.base.objects]
    if tag == "R":
        for x, y in pairs:
            lh = layered_hom(g, x, y, m_max, cfg)
            if not lh.exact:
                bad.append(f"base homs around ({x},{y}) are not exact in {cfg}")
                continue
            for m in range(1, m_max + 1):
                layer = lh.layers[m]
                if not verify_homotopy(layer, lh.homotopies[m]):
                    bad.append(f"layer {m} of ({x},{y}): h d + d h != id")
            for k in lh.assembly.degrees():
                if homology(lh.assembly, k) != homology(lh.layers[0], k):
                    bad.append(f"H^{k}({x},{y}) changes after attaching")
            big = TruncationConfig(_needed_length(g, x, y, m_max, cfg), cfg.max_arity)
            counted = presentation_layers(g, x, y, m_max, big)
            for m in range(m_max + 1):
                if counted[m] != _dims(lh.layers[m]):
                    bad.append(f"layer {m} of ({x},{y}): words {counted[m]} "
                               f"vs tensor formula {_dims(lh.layers[m])}")
            notes.append(f"({x},{y}): layers 1..{m_max} contracted by explicit homotopies")
        return verdict(rid, bad, conf, notes)

    # F_dg / F_prime: the reduced cell hom is infinite; test it in a window
    z = g.attachment["3"]
    cat = g.cell_functor().source
    slack = max(cat.weights.values())
    wide = TruncationConfig(cfg.max_word_length + slack, cfg.max_arity + 1)
    cert = interval_certificate(g.base.ring) if tag == "F_prime" else None
    exact_fail = False
    # all four cell homs: the glued copy of 2 makes them homs of the pushout
    for a, b in (("1", "1"), ("1", "2"), ("2", "1"), ("2", "2")):
        small, ht = _reduced_cell_hom(g, cfg, a, b)
        big, _ = _reduced_cell_hom(g, wide, a, b)
        for k, rep in _layer_cycles_bound(small, big):
            e = cat.zero(a, b, k)
            for lab, c in rep.items():
                if c:
                    e = e + cat.mono(ht.basis_dictionary[lab]).scale(c)
            msg = f"H^{k} of the reduced cell hom ({a},{b}): {e} does not bound within {wide}"
            if cert is not None and _certified(cert, e):
                msg += f"; {cert.name} sends it to {cert.apply(e)}, a nonzero class"
                exact_fail = True
            bad.append(msg)
    for x, y in pairs:
        base_hom, _ = _base_hom(g.base, x, y, cfg)
        glued = hom_complex(g.result, x, y, cfg).result
        for k in sorted(set(base_hom.degrees()) | set(glued.degrees())):
            if homology(glued, k) != homology(base_hom, k):
                bad.append(f"H^{k}({x},{y}) of the pushout differs from the base in {cfg}")
        if m_max >= 2:
            lh = layered_hom(g, x, y, m_max, cfg)
            words = presentation_layers(g, x, y, m_max, cfg)
            extra = sum(lh.layers[m].total_rank() - sum(words[m].values())
                        for m in range(2, m_max + 1))
            if extra:
                notes.append(f"({x},{y}): the tensor formula has {extra} more basis elements "
                             f"in layers 2..{m_max} than the pushout has words")
    # the new object is isomorphic to z in H^0
    new = g.glue["2"]
    f = g.result.gen(g.renamed["f"])
    if not h0(g.result, TruncationConfig(min(cfg.max_word_length, 4), cfg.max_arity)).is_iso(f):
        bad.append(f"[f]: {z} -> {new} is not invertible in H^0")
    if bad:
        if exact_fail:
            bad.insert(0, "exact obstruction found")
        return CheckReport(rid, "fail", bad + notes, conf)
    notes.insert(0, f"reduced cell hom and pushout homs agree with the base in {cfg}; "
                    f"[f]: {z} -> {new} invertible; approximate within (L, m_max)")
    return CheckReport(rid, "approximate-pass", notes, conf)
