"""The eight acceptance criteria, each at its stated tolerance and time limit.

Every criterion prints one PASS/FAIL line (collected again at the end of the
pytest run).  Criteria 6 and 7 fail on substance: their tests are strict
xfails, so they turn red if the computation ever changes its answer.
Run ``python tests/test_acceptance.py`` for the eight lines alone.
"""

import random
import time

import pytest

from ainfcat.categories import (BUILTIN_NAMES, builtin, check_structure, find_preimage,
                                m1_expand, terminal_category)
from ainfcat.coeff import GF, QQ, ZZ
from ainfcat.complexes import cone, disk, homology, is_acyclic, is_quasi_iso, sphere, tensor
from ainfcat.functors import (GeneratingMap, StrictFunctor, brute_force_rlp, catalog,
                              check_functor, classify, has_rlp)
from ainfcat.harness import HarnessConfig, run_recognition
from ainfcat.presentations import TruncationConfig, Word, left_comb, right_comb
from ainfcat.randgen import random_complex, random_quasi_iso_candidate

LINES: dict[int, str] = {}
RINGS = (ZZ, QQ, GF(2))


def record(n, title, limit, fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - t0
    in_time = elapsed < limit
    verdict = "PASS" if ok and in_time else "FAIL"
    LINES[n] = (f"criterion {n} {verdict}: {title} ({elapsed:.2f}s, limit {limit}s)"
                f" - {detail}")
    print(LINES[n])
    return ok, in_time, detail


# ---------------------------------------------------------------------------

def c1_spheres_and_disks():
    bad = []
    for ring in RINGS:
        for n in range(-5, 6):
            if not all(homology(disk(n, ring), k).is_zero for k in range(n - 3, n + 3)):
                bad.append(f"disk({n}) over {ring}")
            s = sphere(n, ring)
            for k in range(n - 3, n + 3):
                h = homology(s, k)
                want_r = k == n
                if (h.free_rank, h.torsion) != ((1, ()) if want_r else (0, ())):
                    bad.append(f"H^{k}(sphere({n})) over {ring} is {h}")
    return not bad, bad[0] if bad else "33 disks acyclic, 33 spheres concentrated in one degree"


def c2_k_structure():
    k, i = builtin("K"), builtin("I")
    bad = [g.name for g in k.quiver.generators
           if not m1_expand(k, m1_expand(k, k.gen(g.name))).is_zero()]
    psi = StrictFunctor("Psi", k, i, {"1": "1", "2": "2"},
                        {"f": i.gen("j01"), "g": i.gen("j10")})
    functor_ok = check_functor(psi).status == "pass"
    identity = m1_expand(k, k.parse("r2*f - f*r1")).is_zero()
    ok = not bad and functor_ok and identity
    return ok, ("d^2 = 0 on 5 generators, Psi is a functor, d(r2*f - f*r1) = 0" if ok
                else f"d^2 fails on {bad}, functor {functor_ok}, identity {identity}")


REFERENCE = [Word(tuple(w.split("*"))) for w in ("g*r12*g", "r1*g*r2", "g*r2*r2", "r1*r1*g")]


def c3_coboundary_replay():
    k = builtin("K")
    c = k.parse("r1*g - g*r2")
    closed = m1_expand(k, c).is_zero()
    found = find_preimage(k, c, max_leaves=4)
    restricted = find_preimage(k, c, candidates=REFERENCE)
    if not (closed and found and restricted):
        return False, f"closed {closed}, preimage {found is not None}, reference {restricted}"
    h, _ = found
    signs = [restricted[1][m] for m in REFERENCE]
    ok = m1_expand(k, h) == c and all(s in (1, -1) for s in signs)
    pattern = ",".join("+" if s == 1 else "-" for s in signs)
    return ok, f"preimage {h}; sign pattern on the reference words ({pattern})"


def c4_divergence():
    ka = builtin("K_ainf")
    out = m1_expand(ka, ka.parse("m2(r2,f) - m2(f,r1)"))
    support_ok = out.support() == {left_comb("f", "g", "f"), right_comb("f", "g", "f")}
    stasheff = check_structure(ka, TruncationConfig(6, 4))
    ok = support_ok and not out.is_zero() and stasheff.status == "pass"
    return ok, f"m1 = {out}; Stasheff at (6,4): {stasheff.status}"


MAPS = ("Q", "S(0)", "S(1)", "R(0)", "R(1)", "F_prime")


def c5_oracle():
    cfg = TruncationConfig(3, 3)
    cells, bad = 0, []
    functors = catalog(GF(2))
    for name, F in sorted(functors.items()):
        for label in MAPS:
            g = GeneratingMap.parse(label)
            res = brute_force_rlp(F, g, cfg)
            cells += 1
            if res.status == "budget" or (res.status == "holds") != has_rlp(F, g, cfg):
                bad.append(f"{name} x {label}: oracle {res.status}")
    return not bad, (f"{len(functors)} functors x {len(MAPS)} maps, {cells} cells agree"
                     if not bad else "; ".join(bad))


def c6_recognition():
    reports = {r.id: r for r in run_recognition(HarnessConfig())}
    want = {"RT-1-two-out-of-three": "pass", "RT-5/6-Surj-identity": "pass",
            "RT-4-Jcell-weq:A+F_prime": "approximate-pass"}
    for base in ("A", "I"):
        for n in (0, 1):
            want[f"RT-4-Jcell-weq:{base}+R({n})"] = "pass"
    bad = [f"{rid} is {reports[rid].status}: {reports[rid].witnesses[0]}"
           for rid, status in want.items() if reports[rid].status != status]
    return not bad, ("RT-1, RT-4 (R cells exact, F' approximate) and RT-5/6 as required"
                     if not bad else "; ".join(bad))


def _to_a(cat, a):
    # degree 0 generators to 1, the rest to 0: the map K -> A needs f g = 1
    gens = {g.name: a.unit("3") for g in cat.quiver.generators if g.degree == 0}
    F = StrictFunctor(f"{cat.name}->{a.name}", cat, a, {x: "3" for x in cat.objects}, gens)
    if check_functor(F).status == "fail":
        F = StrictFunctor(F.name, cat, a, F.object_map)
    return F


FIBRANT = [n.replace("(n)", "(0)") for n in BUILTIN_NAMES] + ["C(1)", "P(1)"]


def c7_fibrant():
    cfg = TruncationConfig(3, 3)
    bad = []
    terminal_bad = []
    a, t = builtin("A", GF(2)), terminal_category(GF(2))
    for name in FIBRANT:
        cat = builtin(name, GF(2))
        F = _to_a(cat, a)
        if check_functor(F).status == "fail" or not classify(F, cfg).fibration:
            bad.append(name)
        T = StrictFunctor(f"{name}->T", cat, t, {x: "3" for x in cat.objects})
        if not classify(T, cfg).fibration:
            terminal_bad.append(name)
    detail = (f"C -> A is not a fibration for {bad}" if bad else
              f"all {len(FIBRANT)} maps C -> A are fibrations")
    detail += (f"; C -> T (terminal) is a fibration for all {len(FIBRANT)}"
               if not terminal_bad else f"; C -> T fails for {terminal_bad}")
    return not bad, detail


def c8_random_homology():
    rng = random.Random(20261019)
    bad, hits = [], 0
    for ring in RINGS:
        for i in range(200):
            f = random_quasi_iso_candidate(rng, ring)
            q = is_quasi_iso(f)
            hits += q
            if q != is_acyclic(cone(f)):
                bad.append(f"map {i} over {ring}")
    for i in range(100):
        a, b = random_complex(rng, QQ), random_complex(rng, QQ)
        ab = tensor(a, b)
        for n in ab.degrees():
            lhs = homology(ab, n).free_rank
            rhs = sum(homology(a, p).free_rank * homology(b, n - p).free_rank
                      for p in a.degrees())
            if lhs != rhs:
                bad.append(f"Kunneth pair {i}, degree {n}: {lhs} != {rhs}")
    return not bad, (f"600 maps ({hits} quasi-isos) agree with their cones; 100 Kunneth pairs"
                     if not bad else "; ".join(bad[:5]))


CRITERIA = {
    1: ("sphere/disk homology sweep", 1, c1_spheres_and_disks),
    2: ("K structure", 1, c2_k_structure),
    3: ("coboundary replay", 5, c3_coboundary_replay),
    4: ("A-infinity/DG divergence", 10, c4_divergence),
    5: ("RLP oracle equivalence", 60, c5_oracle),
    6: ("recognition conditions", 60, c6_recognition),
    7: ("fibrancy of C -> A", 5, c7_fibrant),
    8: ("randomized homology consistency", 30, c8_random_homology),
}

KNOWN_FAILURES = {
    6: "the A-infinity interval cell carries a certified class that never bounds",
    7: "A = R.1 is not terminal; B, C(n), P(n) -> A miss the unit of A",
}


@pytest.mark.parametrize("n", [
    pytest.param(n, marks=pytest.mark.xfail(reason=KNOWN_FAILURES[n], strict=True))
    if n in KNOWN_FAILURES else n
    for n in CRITERIA])
def test_criterion(n):
    title, limit, fn = CRITERIA[n]
    ok, in_time, detail = record(n, title, limit, fn)
    assert ok, detail
    assert in_time, LINES[n]


if __name__ == "__main__":
    for n, (title, limit, fn) in CRITERIA.items():
        record(n, title, limit, fn)
