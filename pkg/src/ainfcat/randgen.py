"""Seeded random small complexes and chain maps for property sweeps."""

from __future__ import annotations

import random

from .coeff import ZZ, Matrix, RingSpec, kernel_basis
from .complexes import ChainMap, FiniteComplex


def _elementary_pieces(rng: random.Random, ring: RingSpec, lo: int, hi: int, count: int):
    """Pieces: spheres, unit disks, and (over ZZ) R --k--> R."""
    pieces = []
    for _ in range(count):
        n = rng.randint(lo, hi)
        kind = rng.choice(["sphere", "disk", "mult"] if ring == ZZ else ["sphere", "disk"])
        if kind == "sphere":
            pieces.append((n, None))
        elif kind == "disk":
            pieces.append((n, 1))
        else:
            pieces.append((n, rng.choice([2, 3, 4, 6])))
    return pieces


def _unimodular(rng: random.Random, ring: RingSpec, n: int, steps: int = 6):
    """A random invertible matrix and its inverse, built from elementary moves."""
    p = [[int(i == j) for j in range(n)] for i in range(n)]
    q = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        # p <- E p with E = I + c e_ij ; q <- q E^{-1}
        p[i] = [a + c * b for a, b in zip(p[i], p[j])]
        for row in q:
            row[j] -= c * row[i]
    return Matrix.from_rows(ring, p, cols=n), Matrix.from_rows(ring, q, cols=n)


def random_complex(rng: random.Random, ring: RingSpec, lo: int = -2, hi: int = 2,
                   max_pieces: int = 4) -> FiniteComplex:
    """Direct sum of elementary pieces in a scrambled basis."""
    pieces = _elementary_pieces(rng, ring, lo, hi, rng.randint(0, max_pieces))
    basis: dict[int, list] = {}
    arrows = []  # (deg, source index, target index, scalar)
    for n, mult in pieces:
        if mult is None:
            basis.setdefault(n, []).append(None)
        else:
            basis.setdefault(n - 1, []).append(None)
            basis.setdefault(n, []).append(None)
            arrows.append((n - 1, len(basis[n - 1]) - 1, len(basis[n]) - 1, mult))
    dims = {k: len(v) for k, v in basis.items()}
    diff = {}
    for k in dims:
        ent = {(t, s): c for (deg, s, t, c) in arrows if deg == k}
        diff[k] = Matrix(ring, dims.get(k + 1, 0), dims[k], ent)
    changes = {k: _unimodular(rng, ring, n) for k, n in dims.items()}
    scrambled = {}
    for k in dims:
        if k + 1 in dims:
            p_next, _ = changes[k + 1]
            _, q_here = changes[k]
            scrambled[k] = p_next @ diff[k] @ q_here
    labels = {k: tuple(f"x{k}_{i}" for i in range(n)) for k, n in dims.items()}
    return FiniteComplex(ring, labels, scrambled)


def random_chain_map(rng: random.Random, a: FiniteComplex, b: FiniteComplex,
                     coeff_range: int = 2) -> ChainMap:
    """Random integer combination of a basis of the chain maps ``a -> b``."""
    ring = a.ring
    degs = sorted(set(a.basis) | set(b.basis))
    unknowns = [(k, i, j) for k in degs for i in range(b.dim(k)) for j in range(a.dim(k))]
    pos = {u: n for n, u in enumerate(unknowns)}
    rows = []
    for k in degs:
        # (f_{k+1} dA_k - dB_k f_k)[i, j] = 0
        for i in range(b.dim(k + 1)):
            for j in range(a.dim(k)):
                row = {}
                for (t, s), v in a.d(k).entries.items():
                    if s == j:
                        row[pos[(k + 1, i, t)]] = row.get(pos[(k + 1, i, t)], 0) + v
                for (t, s), v in b.d(k).entries.items():
                    if t == i:
                        row[pos[(k, s, j)]] = row.get(pos[(k, s, j)], 0) - v
                if row:
                    rows.append(row)
    if not unknowns:
        return ChainMap(a, b, {})
    m = Matrix(ring, len(rows), len(unknowns),
               {(r, c): v for r, row in enumerate(rows) for c, v in row.items()})
    basis = kernel_basis(m)
    x = [0] * len(unknowns)
    for vec in basis:
        c = rng.randint(-coeff_range, coeff_range)
        if c:
            x = [xi + c * vi for xi, vi in zip(x, vec)]
    comps = {}
    for k in degs:
        comps[k] = Matrix(ring, b.dim(k), a.dim(k),
                          {(i, j): x[pos[(k, i, j)]] for i in range(b.dim(k))
                           for j in range(a.dim(k))})
    return ChainMap(a, b, comps)


def random_quasi_iso_candidate(rng: random.Random, ring: RingSpec) -> ChainMap:
    """Chain map that is a quasi-isomorphism reasonably often.

    Source and target share their sphere pieces, so identity-like maps on
    the shared part occur with positive probability.
    """
    a = random_complex(rng, ring)
    if rng.random() < 0.5:
        b = a
    else:
        b = random_complex(rng, ring)
    f = random_chain_map(rng, a, b)
    if b is a and rng.random() < 0.5:
        comps = {k: f.f(k) + Matrix.identity(ring, a.dim(k)) for k in a.degrees()}
        f = ChainMap(a, a, comps)
    return f
