"""Exact scalars over Z, Q and F_p, and sparse exact matrices.

Everything here is exact: integers, ``fractions.Fraction`` or residues
mod p.  Matrices act on column vectors, so an ``r x c`` matrix maps a
rank-``c`` free module to a rank-``r`` one.

>>> m = Matrix.from_rows(ZZ, [[2, 4], [6, 8]])
>>> d, u, v = smith_normal_form(m)
>>> d.diagonal()
[2, 4]
>>> rank(Matrix.from_rows(QQ, [[1, 2], [2, 4]]))
1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from sympy import isprime

__all__ = [
    "RingSpec",
    "ZZ",
    "QQ",
    "GF",
    "Matrix",
    "smith_normal_form",
    "rank",
    "solve",
    "kernel_basis",
    "NoSolution",
]


@dataclass(frozen=True)
class RingSpec:
    """Coefficient ring: ``"Z"``, ``"Q"`` or ``"Fp"`` with a prime ``p``."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp":
            if self.p is None or not isprime(self.p):
                raise ValueError(f"F_p needs a prime p, got {self.p!r}")
        elif self.p is not None:
            raise ValueError("only prime fields carry a characteristic")

    @classmethod
    def parse(cls, text: str) -> "RingSpec":
        """Parse ``z``, ``q`` or ``fp:<p>`` (case-insensitive)."""
        t = text.strip().lower()
        if t in ("z", "zz", "integers"):
            return ZZ
        if t in ("q", "qq", "rationals"):
            return QQ
        if t.startswith("fp:"):
            return cls("Fp", int(t[3:]))
        raise ValueError(f"cannot parse ring {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "Fp" else 0

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def coerce(self, x):
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def is_unit(self, x) -> bool:
        x = self.coerce(x)
        if self.kind == "Z":
            return x in (1, -1)
        return x != 0

    def inv(self, x):
        x = self.coerce(x)
        if not self.is_unit(x):
            raise ZeroDivisionError(f"{x} is not invertible in {self}")
        if self.kind == "Z":
            return x
        if self.kind == "Q":
            return 1 / x
        return pow(x, -1, self.p)

    def elements(self):
        """All elements of a finite field, zero first."""
        if self.kind != "Fp":
            raise ValueError(f"{self} is infinite")
        return list(range(self.p))

    def __str__(self):
        return {"Z": "ZZ", "Q": "QQ"}.get(self.kind) or f"GF({self.p})"

    def short(self) -> str:
        return {"Z": "z", "Q": "q"}.get(self.kind) or f"fp:{self.p}"


ZZ = RingSpec("Z")
QQ = RingSpec("Q")


def GF(p: int) -> RingSpec:
    return RingSpec("Fp", p)


class NoSolution(Exception):
    """Raised internally when a linear system has no solution over the ring."""


@dataclass(frozen=True, eq=False)
class Matrix:
    """Immutable sparse matrix; absent entries are zero."""

    ring: RingSpec
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], object] = field(default_factory=dict)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry {(i, j)} outside {self.rows}x{self.cols}")
            v = self.ring.coerce(v)
            if v != 0:
                clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    # construction
    @classmethod
    def zeros(cls, ring, rows, cols):
        return cls(ring, rows, cols, {})

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_rows(cls, ring, rows: Sequence[Sequence], cols: int | None = None):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else (cols or 0)
        if cols is not None:
            ncols = cols
        ent = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    ent[(i, j)] = v
        return cls(ring, nrows, ncols, ent)

    @classmethod
    def from_columns(cls, ring, columns: Sequence[Sequence], rows: int):
        ent = {}
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column length mismatch")
            for i, v in enumerate(col):
                if v:
                    ent[(i, j)] = v
        return cls(ring, rows, len(columns), ent)

    @classmethod
    def column_vector(cls, ring, values: Sequence):
        return cls.from_rows(ring, [[v] for v in values], cols=1)

    # access
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        return self.entries.get(ij, self.ring.zero)

    def to_rows(self) -> list[list]:
        out = [[self.ring.zero] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def column(self, j) -> list:
        return [self[i, j] for i in range(self.rows)]

    def columns(self) -> list[list]:
        rows = self.to_rows()
        return [[rows[i][j] for i in range(self.rows)] for j in range(self.cols)]

    def diagonal(self) -> list:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def is_zero(self) -> bool:
        return not self.entries

    # arithmetic
    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.ring == other.ring and self.shape == other.shape
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.ring, self.shape, frozenset(self.entries.items())))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        ent = dict(self.entries)
        for k, v in other.entries.items():
            ent[k] = ent.get(k, 0) + v
        return Matrix(self.ring, self.rows, self.cols, ent)

    def __neg__(self):
        return Matrix(self.ring, self.rows, self.cols,
                      {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.ring.coerce(c)
        return Matrix(self.ring, self.rows, self.cols,
                      {k: c * v for k, v in self.entries.items()})

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ring != other.ring:
            raise ValueError("ring mismatch")
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        by_row: dict[int, list] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        ent: dict = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                ent[(i, j)] = ent.get((i, j), 0) + a * b
        return Matrix(self.ring, self.rows, other.cols, ent)

    def apply(self, vec: Sequence) -> list:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = [0] * self.rows
        for (i, j), v in self.entries.items():
            if vec[j]:
                out[i] += v * vec[j]
        return [self.ring.coerce(x) for x in out]

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, self.cols, self.rows,
                      {(j, i): v for (i, j), v in self.entries.items()})

    T = property(transpose)

    def change_ring(self, ring: RingSpec) -> "Matrix":
        return Matrix(ring, self.rows, self.cols, dict(self.entries))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        ent = dict(self.entries)
        ent.update({(i, j + self.cols): v for (i, j), v in other.entries.items()})
        return Matrix(self.ring, self.rows, self.cols + other.cols, ent)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch in vstack")
        ent = dict(self.entries)
        ent.update({(i + self.rows, j): v for (i, j), v in other.entries.items()})
        return Matrix(self.ring, self.rows + other.rows, self.cols, ent)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "Matrix":
        rows, cols = list(rows), list(cols)
        rpos = {r: a for a, r in enumerate(rows)}
        cpos = {c: b for b, c in enumerate(cols)}
        ent = {(rpos[i], cpos[j]): v for (i, j), v in self.entries.items()
               if i in rpos and j in cpos}
        return Matrix(self.ring, len(rows), len(cols), ent)

    def _check_same(self, other):
        if self.ring != other.ring or self.shape != other.shape:
            raise ValueError("incompatible matrices")

    def __repr__(self):
        return f"Matrix({self.ring}, {self.to_rows()})"


# ---------------------------------------------------------------------------
# Smith normal form over Z

def smith_normal_form(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(d, u, v)`` with ``u @ m @ v == d`` and ``d`` in Smith form.

    ``u`` and ``v`` are unimodular.  The nonzero diagonal entries of ``d``
    are positive and each divides the next.
    """
    if m.ring != ZZ:
        raise ValueError("smith_normal_form works over ZZ only")
    nr, nc = m.shape
    a = [list(map(int, row)) for row in m.to_rows()]
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row dst += c * row src
        if c:
            a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
            u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        if c:
            for row in a:
                row[dst] += c * row[src]
            for row in v:
                row[dst] += c * row[src]

    t = 0
    while t < min(nr, nc):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, nr)
                   for j in range(t, nc) if a[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    if a[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remaining entry of row/col t into the pivot
                cands = [(abs(a[i][t]), i, t) for i in range(t, nr) if a[i][t]]
                cands += [(abs(a[t][j]), t, j) for j in range(t, nc) if a[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            # divisibility: pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    def mk(rows, r, c):
        return Matrix.from_rows(ZZ, rows, cols=c) if r else Matrix.zeros(ZZ, 0, c)

    return mk(a, nr, nc), mk(u, nr, nr), mk(v, nc, nc)


# ---------------------------------------------------------------------------
# field elimination

def _rref(m: Matrix):
    """Reduced row echelon form over a field: ``(rows, pivots)``."""
    ring = m.ring
    rows = [dict() for _ in range(m.rows)]
    for (i, j), val in m.entries.items():
        rows[i][j] = val
    pivots = []
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, len(rows)) if rows[i].get(c)), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ring.inv(rows[r][c])
        rows[r] = {k: ring.coerce(v * inv) for k, v in rows[r].items()}
        for i in range(len(rows)):
            if i != r and rows[i].get(c):
                f = rows[i][c]
                row = rows[i]
                for k, v in rows[r].items():
                    nv = ring.coerce(row.get(k, 0) - f * v)
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(m: Matrix) -> int:
    """Dimension of the column span over a field."""
    if not m.ring.is_field:
        raise ValueError("rank is defined here over fields; use smith_normal_form over ZZ")
    return len(_rref(m)[1])


def kernel_basis(m: Matrix) -> list[list]:
    """A basis of ``{x : m x = 0}`` (a lattice basis over ZZ)."""
    ring = m.ring
    if ring == ZZ:
        d, _, v = smith_normal_form(m)
        r = sum(1 for x in d.diagonal() if x)
        return [v.column(j) for j in range(r, m.cols)]
    rows, pivots = _rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        x = [ring.zero] * m.cols
        x[fcol] = ring.one
        for row, pc in zip(rows, pivots):
            x[pc] = ring.coerce(-row.get(fcol, 0))
        basis.append(x)
    return basis


def solve(m: Matrix, b: Sequence):
    """Return some ``x`` with ``m x = b`` over the ring, or ``None``.

    Over ZZ integral solvability is decided through the Smith form.
    """
    ring = m.ring
    if len(b) != m.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m.rows}")
    b = [ring.coerce(x) for x in b]
    if ring == ZZ:
        d, u, v = smith_normal_form(m)
        ub = u.apply(b) if m.rows else []
        y = [0] * m.cols
        for i in range(m.rows):
            di = d[i, i] if i < m.cols else 0
            if di == 0:
                if ub[i] != 0:
                    return None
            else:
                if ub[i] % di:
                    return None
                y[i] = ub[i] // di
        return v.apply(y) if m.cols else []
    aug = m.hstack(Matrix.column_vector(ring, b))
    rows, pivots = _rref(aug)
    if m.cols in pivots:
        return None
    x = [ring.zero] * m.cols
    for row, pc in zip(rows, pivots):
        x[pc] = row.get(m.cols, ring.zero)
    return x
