"""Finite cochain complexes of free modules (differential of degree +1).

Grading normalization used everywhere in the package:

* ``sphere(n)`` is R in degree n with zero differential;
* ``disk(n)`` is R in degrees n-1 and n, the differential being the
  identity from degree n-1 to degree n;
* the generating cofibration ``sphere(n) -> disk(n)`` hits degree n.

The mapping cone of ``f: A -> B`` has ``cone^k = A^{k+1} (+) B^k`` and
``d(x, y) = (-d_A x, f x + d_B y)``; hence ``cone(id_{sphere(n)})`` is
``disk(n)`` on the nose.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Hashable, Mapping, Sequence

from .coeff import QQ, ZZ, Matrix, RingSpec, kernel_basis, rank, smith_normal_form, solve

__all__ = [
    "FiniteComplex",
    "ChainMap",
    "ModuleDescription",
    "NotAComplex",
    "sphere",
    "disk",
    "zero_complex",
    "homology",
    "homology_all",
    "is_acyclic",
    "cone",
    "tensor",
    "tensor_many",
    "direct_sum",
    "is_quasi_iso",
    "is_contractible",
    "contracting_homotopy",
    "verify_homotopy",
    "tensor_homotopy",
    "direct_sum_homotopy",
    "quotient_by_basis",
    "inclusion_map",
    "identity_map",
    "zero_map",
    "HomologyBasis",
    "homology_basis",
]


class NotAComplex(ValueError):
    """A differential with d o d != 0."""


@dataclass(frozen=True, eq=False)
class FiniteComplex:
    """Degreewise free complex; ``diff[k]`` maps degree k to degree k+1."""

    ring: RingSpec
    basis: Mapping[int, tuple] = field(default_factory=dict)
    diff: Mapping[int, Matrix] = field(default_factory=dict)
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        basis = {int(k): tuple(v) for k, v in self.basis.items() if len(v)}
        object.__setattr__(self, "basis", basis)
        diff = {}
        for k, m in self.diff.items():
            k = int(k)
            if m.ring != self.ring:
                raise ValueError(f"differential in degree {k} is over {m.ring}")
            if m.shape != (self.dim(k + 1), self.dim(k)):
                raise ValueError(
                    f"d^{k} has shape {m.shape}, expected {(self.dim(k + 1), self.dim(k))}")
            if not m.is_zero():
                diff[k] = m
        object.__setattr__(self, "diff", diff)
        for k, labels in basis.items():
            if len(set(labels)) != len(labels):
                raise ValueError(f"repeated basis label in degree {k}")
        if self.validate:
            bad = self.d_squared_violations()
            if bad:
                raise NotAComplex(f"d o d != 0 in degrees {bad}")

    def dim(self, k: int) -> int:
        return len(self.basis.get(k, ()))

    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def labels(self, k: int) -> tuple:
        return self.basis.get(k, ())

    def d(self, k: int) -> Matrix:
        m = self.diff.get(k)
        if m is None:
            return Matrix.zeros(self.ring, self.dim(k + 1), self.dim(k))
        return m

    def total_rank(self) -> int:
        return sum(len(v) for v in self.basis.values())

    def d_squared_violations(self) -> list[int]:
        return [k for k in self.diff if k + 1 in self.diff
                and not (self.diff[k + 1] @ self.diff[k]).is_zero()]

    def index(self, k: int, label) -> int:
        return self.labels(k).index(label)

    def is_zero(self) -> bool:
        return not self.basis

    def change_ring(self, ring: RingSpec) -> "FiniteComplex":
        return FiniteComplex(ring, self.basis,
                             {k: m.change_ring(ring) for k, m in self.diff.items()})

    def __eq__(self, other):
        if not isinstance(other, FiniteComplex):
            return NotImplemented
        return (self.ring == other.ring and self.basis == other.basis
                and self.diff == other.diff)

    def __repr__(self):
        dims = ", ".join(f"{k}:{self.dim(k)}" for k in self.degrees())
        return f"FiniteComplex({self.ring}, dims={{{dims}}})"

    # serialization ---------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "ring": self.ring.short(),
            "basis": {str(k): [str(x) for x in self.basis[k]] for k in self.degrees()},
            "diff": {str(k): [[str(x) for x in row] for row in self.diff[k].to_rows()]
                     for k in sorted(self.diff)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping) -> "FiniteComplex":
        from fractions import Fraction

        ring = RingSpec.parse(data["ring"])
        basis = {int(k): tuple(v) for k, v in data["basis"].items()}
        diff = {}
        for k, rows in data.get("diff", {}).items():
            k = int(k)
            diff[k] = Matrix.from_rows(
                ring, [[ring.coerce(Fraction(x)) for x in row] for row in rows],
                cols=len(basis.get(k, ())))
        return cls(ring, basis, diff)

    @classmethod
    def from_json(cls, text: str) -> "FiniteComplex":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class ChainMap:
    source: FiniteComplex
    target: FiniteComplex
    components: Mapping[int, Matrix] = field(default_factory=dict)
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        comps = {}
        for k, m in self.components.items():
            if m.shape != (self.target.dim(k), self.source.dim(k)):
                raise ValueError(f"component {k} has shape {m.shape}")
            if not m.is_zero():
                comps[int(k)] = m
        object.__setattr__(self, "components", comps)
        if self.source.ring != self.target.ring:
            raise ValueError("ring mismatch")
        if self.validate and self.non_commuting_degrees():
            raise ValueError(f"not a chain map in degrees {self.non_commuting_degrees()}")

    @property
    def ring(self):
        return self.source.ring

    def f(self, k: int) -> Matrix:
        m = self.components.get(k)
        if m is None:
            return Matrix.zeros(self.ring, self.target.dim(k), self.source.dim(k))
        return m

    def non_commuting_degrees(self) -> list[int]:
        ks = set(self.source.basis) | set(self.target.basis)
        return sorted(k for k in ks
                      if self.f(k + 1) @ self.source.d(k) != self.target.d(k) @ self.f(k))

    def degrees(self):
        return sorted(set(self.source.basis) | set(self.target.basis))


@dataclass(frozen=True)
class ModuleDescription:
    """``R^free_rank (+) Z/t_1 (+) ... `` with ``t_1 | t_2 | ...``."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0 or any(t <= 1 for t in self.torsion):
            raise ValueError("invalid module description")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("torsion must form a divisibility chain")

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("R" if self.free_rank == 1 else f"R^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


# ---------------------------------------------------------------------------
# constructors

def zero_complex(ring: RingSpec) -> FiniteComplex:
    return FiniteComplex(ring)


def sphere(n: int, ring: RingSpec = ZZ) -> FiniteComplex:
    return FiniteComplex(ring, {n: (f"s{n}",)})


def disk(n: int, ring: RingSpec = ZZ) -> FiniteComplex:
    return FiniteComplex(ring, {n - 1: (f"e{n}",), n: (f"b{n}",)},
                         {n - 1: Matrix.identity(ring, 1)})


def identity_map(c: FiniteComplex) -> ChainMap:
    return ChainMap(c, c, {k: Matrix.identity(c.ring, c.dim(k)) for k in c.degrees()})


def zero_map(a: FiniteComplex, b: FiniteComplex) -> ChainMap:
    return ChainMap(a, b, {})


def inclusion_map(sub: FiniteComplex, c: FiniteComplex) -> ChainMap:
    """Chain map sending each basis label of ``sub`` to the same label of ``c``."""
    comps = {}
    for k in sub.degrees():
        comps[k] = Matrix(c.ring, c.dim(k), sub.dim(k),
                          {(c.index(k, lab), j): 1 for j, lab in enumerate(sub.labels(k))})
    return ChainMap(sub, c, comps)


# ---------------------------------------------------------------------------
# homology

def _check_complex(c: FiniteComplex):
    bad = c.d_squared_violations()
    if bad:
        raise NotAComplex(f"d o d != 0 in degrees {bad}")


def _qrank(m: Matrix) -> int:
    return rank(m.change_ring(QQ) if m.ring == ZZ else m)


def homology(c: FiniteComplex, k: int) -> ModuleDescription:
    """Cohomology ``ker d^k / im d^{k-1}``."""
    _check_complex(c)
    incoming, outgoing = c.d(k - 1), c.d(k)
    free = c.dim(k) - _qrank(outgoing) - _qrank(incoming)
    if c.ring.is_field:
        return ModuleDescription(free)
    d, _, _ = smith_normal_form(incoming)
    torsion = tuple(int(x) for x in d.diagonal() if x > 1)
    return ModuleDescription(free, torsion)


def homology_all(c: FiniteComplex) -> dict[int, ModuleDescription]:
    return {k: homology(c, k) for k in c.degrees()}


def is_acyclic(c: FiniteComplex) -> bool:
    return all(h.is_zero for h in homology_all(c).values())


def _columns_matrix(ring, cols: Sequence[Sequence], rows: int) -> Matrix:
    return Matrix.from_columns(ring, cols, rows) if cols else Matrix.zeros(ring, rows, 0)


def is_quasi_iso(f: ChainMap) -> bool:
    """Decide whether ``H(f)`` is bijective in every degree.

    Works directly on cycles and boundaries (no mapping cone involved):
    surjectivity asks that each cycle of the target lies in
    ``f(Z(A)) + B(B)``; injectivity asks that every cycle of the source
    whose image is a boundary is itself a boundary.
    """
    A, B, ring = f.source, f.target, f.ring
    _check_complex(A)
    _check_complex(B)
    for k in f.degrees():
        za = kernel_basis(A.d(k))
        zb = kernel_basis(B.d(k))
        bd_a = A.d(k - 1)
        bd_b = B.d(k - 1)
        fz = f.f(k) @ _columns_matrix(ring, za, A.dim(k))
        span = fz.hstack(bd_b)
        for z in zb:
            if solve(span, z) is None:
                return False
        for vec in kernel_basis(span):
            coeffs = vec[:len(za)]
            cycle = _columns_matrix(ring, za, A.dim(k)).apply(coeffs)
            if solve(bd_a, cycle) is None:
                return False
    return True


# ---------------------------------------------------------------------------
# cones, sums, tensors

def cone(f: ChainMap) -> FiniteComplex:
    A, B, ring = f.source, f.target, f.ring
    degs = sorted({k - 1 for k in A.basis} | set(B.basis))
    basis = {k: tuple(("a", x) for x in A.labels(k + 1)) + tuple(("b", y) for y in B.labels(k))
             for k in degs}
    diff = {}
    for k in degs:
        top = (-A.d(k + 1)).hstack(Matrix.zeros(ring, A.dim(k + 2), B.dim(k)))
        bottom = f.f(k + 1).hstack(B.d(k))
        diff[k] = top.vstack(bottom)
    return FiniteComplex(ring, basis, diff)


def direct_sum(parts: Sequence[FiniteComplex], tags: Sequence[Hashable] | None = None) -> FiniteComplex:
    """Block-diagonal sum; labels become ``(tag, label)``."""
    if not parts:
        raise ValueError("empty direct sum needs a ring; use zero_complex")
    ring = parts[0].ring
    tags = list(tags) if tags is not None else list(range(len(parts)))
    degs = sorted({k for p in parts for k in p.basis})
    basis = {k: tuple((t, x) for t, p in zip(tags, parts) for x in p.labels(k)) for k in degs}
    diff = {}
    for k in degs:
        ent = {}
        r0 = c0 = 0
        for p in parts:
            for (i, j), v in p.d(k).entries.items():
                ent[(r0 + i, c0 + j)] = v
            r0 += p.dim(k + 1)
            c0 += p.dim(k)
        diff[k] = Matrix(ring, r0, c0, ent)
    return FiniteComplex(ring, basis, diff)


def tensor(a: FiniteComplex, b: FiniteComplex) -> FiniteComplex:
    """Tensor product with ``d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy``."""
    if a.ring != b.ring:
        raise ValueError("ring mismatch")
    ring = a.ring
    pairs: dict[int, list] = {}
    for i in a.degrees():
        for j in b.degrees():
            pairs.setdefault(i + j, []).append((i, j))
    basis, where = {}, {}
    for k, ij in sorted(pairs.items()):
        labels = []
        for i, j in ij:
            for x, y in product(range(a.dim(i)), range(b.dim(j))):
                where[(i, x, j, y)] = (k, len(labels))
                labels.append((a.labels(i)[x], b.labels(j)[y]))
        basis[k] = tuple(labels)
    diff = {}
    for k, ij in pairs.items():
        ent = {}
        for i, j in ij:
            da, db = a.d(i), b.d(j)
            sign = -1 if i % 2 else 1
            for (x2, x), v in da.entries.items():
                for y in range(b.dim(j)):
                    _, col = where[(i, x, j, y)]
                    _, row = where[(i + 1, x2, j, y)]
                    ent[(row, col)] = ent.get((row, col), 0) + v
            for (y2, y), v in db.entries.items():
                for x in range(a.dim(i)):
                    _, col = where[(i, x, j, y)]
                    _, row = where[(i, x, j + 1, y2)]
                    ent[(row, col)] = ent.get((row, col), 0) + sign * v
        if ent:
            diff[k] = Matrix(ring, len(basis.get(k + 1, ())), len(basis[k]), ent)
    return FiniteComplex(ring, basis, diff)


def tensor_many(factors: Sequence[FiniteComplex], ring: RingSpec | None = None) -> FiniteComplex:
    """Left-nested tensor product; the empty product is R in degree 0."""
    if not factors:
        if ring is None:
            raise ValueError("ring required for the empty tensor product")
        return FiniteComplex(ring, {0: ((),)})
    out = factors[0]
    for c in factors[1:]:
        out = tensor(out, c)
    return out


def quotient_by_basis(c: FiniteComplex, drop: Mapping[int, Sequence]) -> FiniteComplex:
    """Quotient by the subcomplex spanned by the given basis labels."""
    keep = {k: [i for i, lab in enumerate(c.labels(k)) if lab not in set(drop.get(k, ()))]
            for k in c.degrees()}
    gone = {k: [i for i in range(c.dim(k)) if i not in set(keep[k])] for k in c.degrees()}
    for k in c.degrees():
        dk = c.d(k)
        for j in gone[k]:
            for i in keep.get(k + 1, []):
                if dk[i, j]:
                    raise ValueError("dropped labels do not span a subcomplex")
    basis = {k: tuple(c.labels(k)[i] for i in keep[k]) for k in c.degrees()}
    diff = {k: c.d(k).submatrix(keep.get(k + 1, []), keep[k]) for k in c.degrees()}
    return FiniteComplex(c.ring, basis, diff)


# ---------------------------------------------------------------------------
# contracting homotopies

Homotopy = Mapping[int, Matrix]   # h[k]: C^k -> C^{k-1}


def verify_homotopy(c: FiniteComplex, h: Homotopy) -> bool:
    """Check ``d h + h d = id`` in every degree."""
    for k in c.degrees():
        hk = h.get(k, Matrix.zeros(c.ring, c.dim(k - 1), c.dim(k)))
        hk1 = h.get(k + 1, Matrix.zeros(c.ring, c.dim(k), c.dim(k + 1)))
        if c.d(k - 1) @ hk + hk1 @ c.d(k) != Matrix.identity(c.ring, c.dim(k)):
            return False
    return True


def contracting_homotopy(c: FiniteComplex) -> dict[int, Matrix] | None:
    """Solve ``d h + h d = id`` for ``h``; ``None`` if impossible over the ring."""
    _check_complex(c)
    ring = c.ring
    degs = c.degrees()
    unknowns = []
    for k in degs:
        for i in range(c.dim(k - 1)):
            for j in range(c.dim(k)):
                unknowns.append((k, i, j))
    pos = {u: n for n, u in enumerate(unknowns)}
    rows, rhs = [], []
    for k in degs:
        n = c.dim(k)
        dk_1, dk = c.d(k - 1), c.d(k)
        for a in range(n):
            for b in range(n):
                row = {}
                # (d^{k-1} h^k)[a, b] = sum_i d^{k-1}[a, i] h^k[i, b]
                for i in range(c.dim(k - 1)):
                    v = dk_1[a, i]
                    if v:
                        row[pos[(k, i, b)]] = row.get(pos[(k, i, b)], 0) + v
                # (h^{k+1} d^k)[a, b] = sum_i h^{k+1}[a, i] d^k[i, b]
                for i in range(c.dim(k + 1)):
                    v = dk[i, b]
                    if v:
                        row[pos[(k + 1, a, i)]] = row.get(pos[(k + 1, a, i)], 0) + v
                rows.append(row)
                rhs.append(1 if a == b else 0)
    if not unknowns:
        return {} if c.is_zero() else None
    m = Matrix(ring, len(rows), len(unknowns),
               {(r, col): v for r, row in enumerate(rows) for col, v in row.items()})
    x = solve(m, rhs)
    if x is None:
        return None
    h = {}
    for k in degs:
        ent = {(i, j): x[pos[(k, i, j)]] for i in range(c.dim(k - 1)) for j in range(c.dim(k))}
        h[k] = Matrix(ring, c.dim(k - 1), c.dim(k), ent)
    return h


def is_contractible(c: FiniteComplex) -> bool:
    """Acyclic over a field; over ZZ additionally requires a contracting homotopy."""
    if not is_acyclic(c):
        return False
    if c.ring.is_field:
        return True
    return contracting_homotopy(c) is not None


def tensor_homotopy(a: FiniteComplex, b: FiniteComplex, h: Homotopy, side: str) -> dict[int, Matrix]:
    """Contracting homotopy on ``tensor(a, b)`` induced from one factor.

    ``side="left"``:  H(x (x) y) = h(x) (x) y.
    ``side="right"``: H(x (x) y) = (-1)^|x| x (x) h(y).
    """
    t = tensor(a, b)
    ring = t.ring
    index = {k: {lab: n for n, lab in enumerate(t.labels(k))} for k in t.degrees()}
    deg_a = {lab: i for i in a.degrees() for lab in a.labels(i)}
    deg_b = {lab: j for j in b.degrees() for lab in b.labels(j)}
    out = {}
    for k in t.degrees():
        ent = {}
        for col, (x, y) in enumerate(t.labels(k)):
            i, j = deg_a[x], deg_b[y]
            if side == "left":
                hk = h.get(i)
                if hk is None:
                    continue
                xi = a.index(i, x)
                for (r, cc), v in hk.entries.items():
                    if cc == xi:
                        row = index[k - 1][(a.labels(i - 1)[r], y)]
                        ent[(row, col)] = ent.get((row, col), 0) + v
            elif side == "right":
                hk = h.get(j)
                if hk is None:
                    continue
                yj = b.index(j, y)
                sign = -1 if i % 2 else 1
                for (r, cc), v in hk.entries.items():
                    if cc == yj:
                        row = index[k - 1][(x, b.labels(j - 1)[r])]
                        ent[(row, col)] = ent.get((row, col), 0) + sign * v
            else:
                raise ValueError("side must be 'left' or 'right'")
        out[k] = Matrix(ring, t.dim(k - 1), t.dim(k), ent)
    return out


def direct_sum_homotopy(parts: Sequence[FiniteComplex], hs: Sequence[Homotopy]) -> dict[int, Matrix]:
    """Block-diagonal homotopy on ``direct_sum(parts)``."""
    ring = parts[0].ring
    degs = sorted({k for p in parts for k in p.basis})
    out = {}
    for k in degs:
        ent, r0, c0 = {}, 0, 0
        for p, h in zip(parts, hs):
            hk = h.get(k)
            if hk is not None:
                for (i, j), v in hk.entries.items():
                    ent[(r0 + i, c0 + j)] = v
            r0 += p.dim(k - 1)
            c0 += p.dim(k)
        out[k] = Matrix(ring, r0, c0, ent)
    return out


# ---------------------------------------------------------------------------
# explicit homology classes

@dataclass(frozen=True, eq=False)
class HomologyBasis:
    """Chosen cycle representatives of ``H^k`` and a coordinate map.

    ``moduli[i]`` is 0 for a free generator and the order of the class
    otherwise (only over ZZ).
    """

    complex: FiniteComplex
    degree: int
    reps: tuple[tuple, ...]
    moduli: tuple[int, ...]

    def coords(self, vec: Sequence):
        """Coordinates of the class of a cycle, or ``None`` if ``vec`` is not a cycle.

        Torsion coordinates are reduced modulo their order.
        """
        c, k = self.complex, self.degree
        ring = c.ring
        vec = [ring.coerce(x) for x in vec]
        if any(c.d(k).apply(vec)) if c.dim(k) else False:
            return None
        n = c.dim(k)
        cols = [list(r) for r in self.reps] + c.d(k - 1).columns()
        if not cols:
            return [] if not any(vec) else None
        x = solve(_columns_matrix(ring, cols, n), vec)
        if x is None:
            return None
        out = []
        for xi, mod in zip(x[:len(self.reps)], self.moduli):
            out.append(ring.coerce(xi % mod) if mod else xi)
        return out

    def __len__(self):
        return len(self.reps)


def homology_basis(c: FiniteComplex, k: int) -> HomologyBasis:
    _check_complex(c)
    ring, n = c.ring, c.dim(k)
    cycles = kernel_basis(c.d(k)) if n else []
    bounds = c.d(k - 1).columns()
    if ring.is_field:
        reps: list = []
        current = list(bounds)
        r = _qrank(_columns_matrix(ring, current, n)) if current else 0
        for z in cycles:
            trial = current + [z]
            rt = rank(_columns_matrix(ring, trial, n))
            if rt > r:
                reps.append(tuple(z))
                current, r = trial, rt
        return HomologyBasis(c, k, tuple(reps), tuple(0 for _ in reps))
    # over ZZ: boundaries in cycle coordinates, then Smith form
    zmat = _columns_matrix(ring, cycles, n)
    bc = []
    for b in bounds:
        x = solve(zmat, b)
        if x is None:
            raise NotAComplex("boundary outside the cycle lattice")
        bc.append(x)
    nz = len(cycles)
    bmat = _columns_matrix(ring, bc, nz) if bc else Matrix.zeros(ring, nz, 0)
    d, u, _ = smith_normal_form(bmat)
    uinv = _unimodular_inverse(u)
    diag = d.diagonal()
    reps, moduli = [], []
    for i in range(nz):
        di = diag[i] if i < len(diag) else 0
        if di == 1:
            continue
        gen = zmat.apply(uinv.column(i))
        reps.append(tuple(gen))
        moduli.append(int(di))
    return HomologyBasis(c, k, tuple(reps), tuple(moduli))


def _unimodular_inverse(u: Matrix) -> Matrix:
    cols = [solve(u, [int(i == j) for i in range(u.rows)]) for j in range(u.cols)]
    return _columns_matrix(u.ring, cols, u.rows)
