"""Text format for presentations and strict functors.

A file holds one or more documents separated by ``---`` lines.  A presentation::

    name: K
    kind: dg
    objects: 1 2
    generators:
      f : 1 -> 2 : 0
      r1 : 1 -> 1 : -1
    diff:
      r1 = g*f - id@1
    relations:
      j01*j10 - id@2

A functor document refers to presentations by name, either defined earlier in
the same file or as ``builtin:NAME``::

    functor: Psi
    source: builtin:K
    target: builtin:I
    object: 1 -> 1
    gen: f -> j01

Blank lines and ``#`` comments are ignored.  Generators missing from a functor
go to zero.
"""

from __future__ import annotations

import re
from pathlib import Path

from .categories import CategoryPresentation, builtin
from .coeff import QQ, RingSpec
from .functors import StrictFunctor
from .presentations import Generator, GradedQuiver

__all__ = [
    "FormatError",
    "parse_documents",
    "load",
    "resolve_category",
    "dump_presentation",
    "dump_functor",
]

_SECTIONS = ("generators", "diff", "relations")


class FormatError(ValueError):
    pass


def _documents(text: str) -> list[list[tuple[int, str]]]:
    docs, cur = [], []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip() == "---":
            docs.append(cur)
            cur = []
        elif line.strip():
            cur.append((no, line.strip()))
    docs.append(cur)
    return [d for d in docs if d]


def _key(line: str):
    m = re.fullmatch(r"([a-z]+)\s*:\s*(.*)", line)
    return (m.group(1), m.group(2).strip()) if m else (None, line)


def _presentation(lines, ring: RingSpec) -> CategoryPresentation:
    name, kind, objects = "unnamed", "dg", None
    gens, diffs, rels = [], [], []
    section = None
    for no, line in lines:
        key, rest = _key(line)
        if key in _SECTIONS and not rest:
            section = key
            continue
        if key == "name":
            name, section = rest, None
        elif key == "kind":
            kind, section = rest.lower(), None
        elif key == "objects":
            objects, section = tuple(rest.replace(",", " ").split()), None
        elif section == "generators":
            m = re.fullmatch(r"(\S+)\s*:\s*(\S+)\s*->\s*(\S+)\s*:\s*(-?\d+)", line)
            if not m:
                raise FormatError(f"line {no}: expected 'name : src -> tgt : degree'")
            gens.append(Generator(m.group(1), m.group(2), m.group(3), int(m.group(4))))
        elif section == "diff":
            lhs, eq, rhs = line.partition("=")
            if not eq:
                raise FormatError(f"line {no}: expected 'name = element'")
            diffs.append((no, lhs.strip(), rhs.strip()))
        elif section == "relations":
            rels.append((no, line))
        else:
            raise FormatError(f"line {no}: unexpected {line!r}")
    if objects is None:
        raise FormatError(f"presentation {name}: missing 'objects:'")
    try:
        quiver = GradedQuiver(objects, tuple(gens))
        bare = CategoryPresentation(name, kind, quiver, ring)
        diff = {}
        for no, gname, text in diffs:
            g = quiver.gen(gname)
            diff[gname] = bare.parse(text, g.source, g.target, g.degree + 1)
        relations = tuple(bare.parse(text) for _, text in rels)
        return CategoryPresentation(name, kind, quiver, ring, diff, relations)
    except (ValueError, KeyError) as exc:
        raise FormatError(f"presentation {name}: {exc}") from exc


def resolve_category(ref: str, known: dict | None = None,
                     ring: RingSpec = QQ) -> CategoryPresentation:
    """``builtin:NAME``, a bare builtin name, or a presentation defined in ``known``."""
    known = known or {}
    if ref in known:
        return known[ref]
    name = ref[len("builtin:"):] if ref.startswith("builtin:") else ref
    try:
        return builtin(name, ring)
    except KeyError:
        raise FormatError(f"unknown category {ref!r}") from None


def _functor(lines, known, ring) -> StrictFunctor:
    name, src, tgt = None, None, None
    objects, images = {}, []
    for no, line in lines:
        key, rest = _key(line)
        if key == "functor":
            name = rest
        elif key == "source":
            src = resolve_category(rest, known, ring)
        elif key == "target":
            tgt = resolve_category(rest, known, ring)
        elif key in ("object", "gen"):
            a, arrow, b = rest.partition("->")
            if not arrow:
                raise FormatError(f"line {no}: expected '{key}: a -> b'")
            if key == "object":
                objects[a.strip()] = b.strip()
            else:
                images.append((no, a.strip(), b.strip()))
        else:
            raise FormatError(f"line {no}: unexpected {line!r}")
    if src is None or tgt is None:
        raise FormatError(f"functor {name}: needs 'source:' and 'target:'")
    missing = [x for x in src.objects if x not in objects]
    if missing:
        raise FormatError(f"functor {name}: objects {missing} have no image")
    gens = {}
    for no, gname, text in images:
        try:
            g = src.quiver.gen(gname)
            gens[gname] = tgt.parse(text, objects[g.source], objects[g.target], g.degree)
        except (ValueError, KeyError) as exc:
            raise FormatError(f"line {no}: {exc}") from exc
    return StrictFunctor(name or f"{src.name}->{tgt.name}", src, tgt, objects, gens)


def parse_documents(text: str, ring: RingSpec = QQ) -> dict:
    """Presentations and functors of a file, keyed by name, in file order."""
    out: dict = {}
    for doc in _documents(text):
        if _key(doc[0][1])[0] == "functor":
            F = _functor(doc, {k: v for k, v in out.items()
                               if isinstance(v, CategoryPresentation)}, ring)
            out[F.name] = F
        else:
            cat = _presentation(doc, ring)
            out[cat.name] = cat
    return out


def load(path: str | Path, ring: RingSpec = QQ) -> dict:
    return parse_documents(Path(path).read_text(), ring)


def dump_presentation(cat: CategoryPresentation) -> str:
    lines = [f"name: {cat.name}", f"kind: {cat.kind}", "objects: " + " ".join(cat.objects)]
    if cat.quiver.generators:
        lines.append("generators:")
        lines += [f"  {g.name} : {g.source} -> {g.target} : {g.degree}"
                  for g in cat.quiver.generators]
    if any(e.terms for e in cat.diff.values()):
        lines.append("diff:")
        lines += [f"  {g.name} = {cat.diff[g.name]}" for g in cat.quiver.generators
                  if g.name in cat.diff and cat.diff[g.name].terms]
    if cat.relations:
        lines.append("relations:")
        lines += [f"  {r}" for r in cat.relations]
    return "\n".join(lines) + "\n"


def dump_functor(F: StrictFunctor, source_ref: str | None = None,
                 target_ref: str | None = None) -> str:
    lines = [f"functor: {F.name}", f"source: {source_ref or 'builtin:' + F.source.name}",
             f"target: {target_ref or 'builtin:' + F.target.name}"]
    lines += [f"object: {x} -> {F.obj(x)}" for x in F.source.objects]
    lines += [f"gen: {g} -> {img}" for g, img in F.generator_map.items() if img.terms]
    return "\n".join(lines) + "\n"
