"""Command-line front end.

Exit status is 0 when no report fails, 1 when one does and 2 on usage errors.
Categories are given as ``builtin:NAME``, a file path (first presentation) or
``path#NAME``; functors as a catalog name, a generating map label such as
``R(0)``, or ``path#NAME``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .categories import (BUILTIN_NAMES, CategoryPresentation, WindowNotClosed, check_structure,
                         hom_complex)
from .coeff import GF, RingSpec
from .complexes import homology
from .formats import FormatError, dump_presentation, load, resolve_category
from .functors import (GeneratingMap, StrictFunctor, brute_force_rlp, check_functor,
                       has_rlp)
from .harness import (HarnessConfig, recognition_catalog, reports_to_json,
                      run_paper_computations, run_recognition, run_sweeps)
from .presentations import TruncationConfig
from .pushouts import check_inc_quasi_iso, pushout
from .reports import CheckReport


class UsageError(Exception):
    pass


def _ring(text: str) -> RingSpec:
    try:
        return RingSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _file_part(ref: str, ring: RingSpec):
    path, _, name = ref.partition("#")
    if not Path(path).is_file():
        return None
    docs = load(path, ring)
    if name:
        if name not in docs:
            raise UsageError(f"{path} defines no {name!r}")
        return docs[name]
    return docs


def _category(ref: str, ring: RingSpec) -> CategoryPresentation:
    found = _file_part(ref, ring)
    if isinstance(found, CategoryPresentation):
        return found
    if isinstance(found, dict):
        cats = [v for v in found.values() if isinstance(v, CategoryPresentation)]
        if not cats:
            raise UsageError(f"{ref} defines no presentation")
        return cats[0]
    if found is not None:
        raise UsageError(f"{ref} is a functor, not a category")
    return resolve_category(ref, ring=ring)


def _functor(ref: str, ring: RingSpec) -> StrictFunctor:
    found = _file_part(ref, ring)
    if isinstance(found, dict):
        fs = [v for v in found.values() if isinstance(v, StrictFunctor)]
        if not fs:
            raise UsageError(f"{ref} defines no functor")
        return fs[0]
    if found is not None:
        if not isinstance(found, StrictFunctor):
            raise UsageError(f"{ref} is a category, not a functor")
        return found
    name = ref[len("catalog:"):] if ref.startswith("catalog:") else ref
    cat = recognition_catalog(ring)
    if name not in cat:
        raise UsageError(f"unknown functor {ref!r}; see 'catalog'")
    return cat[name]


def _attachment(text: str) -> dict:
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, eq, value = part.partition("=")
        if not eq:
            raise UsageError(f"attachment entries look like key=value, got {part!r}")
        out[key.strip()] = value.strip()
    return out


# ---------------------------------------------------------------------------
# subcommands; each returns (text lines, json payload, reports)

def cmd_catalog(args, cfg):
    names = list(BUILTIN_NAMES)
    functors = recognition_catalog(cfg.ring)
    lines = ["categories: " + ", ".join(names),
             "functors:"] + [f"  {n}: {F.source.name} -> {F.target.name}"
                             for n, F in functors.items()]
    payload = {"categories": names,
               "functors": {n: [F.source.name, F.target.name] for n, F in functors.items()}}
    return lines, payload, []


def cmd_homology(args, cfg):
    cat = _category(args.category, cfg.ring)
    for x in (args.x, args.y):
        if x not in cat.objects:
            raise UsageError(f"{cat.name} has no object {x!r}")
    ht = hom_complex(cat, args.x, args.y, cfg.window)
    groups = {k: homology(ht.result, k) for k in ht.result.degrees()}
    nonzero = {k: str(v) for k, v in groups.items() if not v.is_zero}
    head = f"{cat.name}({args.x},{args.y}) in window {cfg.window}"
    if not ht.exact_flag:
        head += " (truncated hom: classes near the top weight may be artefacts)"
    lines = [head]
    lines += [f"H^{k} = {v}" for k, v in nonzero.items()] or ["H^k = 0 for all k"]
    payload = {"category": cat.name, "x": args.x, "y": args.y, "ring": cfg.ring.short(),
               "L": cfg.max_length, "A": cfg.max_arity, "exact": ht.exact_flag,
               "homology": {str(k): v for k, v in nonzero.items()}}
    return lines, payload, []


def cmd_verify(args, cfg):
    found = _file_part(args.target, cfg.ring)
    items = []
    if isinstance(found, dict):
        items = list(found.values())
    elif found is not None:
        items = [found]
    else:
        items = [_category(args.target, cfg.ring)]
    reports = []
    for item in items:
        if isinstance(item, StrictFunctor):
            reports.append(check_functor(item, cfg.window))
        else:
            reports.append(check_structure(item, cfg.window))
    return None, None, reports


def cmd_lift(args, cfg):
    F = _functor(args.functor, cfg.ring)
    try:
        g = GeneratingMap.parse(args.map)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    w = TruncationConfig(min(cfg.max_length, 3), min(cfg.max_arity, 3)) if args.oracle \
        else cfg.window
    answer = has_rlp(F, g, w)
    witnesses = [f"has_rlp({F.name}, {g.label}) = {answer} in window {w}"]
    status = "pass"
    if args.oracle:
        # the oracle enumerates maps, so it runs over F_2
        F2 = _functor(args.functor, GF(2))
        want = has_rlp(F2, g, w)
        res = brute_force_rlp(F2, g, w)
        witnesses.append(f"over GF(2): has_rlp = {want}, oracle {res.status}")
        if res.status == "budget":
            status = "approximate-pass"
        elif (res.status == "holds") != want:
            status = "fail"
            witnesses.insert(0, "oracle and characterization disagree")
    report = CheckReport(f"lift:{F.name}|{g.label}", status, witnesses,
                         {"ring": cfg.ring.short(), "L": w.max_word_length,
                          "A": w.max_arity, "m": cfg.max_layers})
    return None, None, [report]


def cmd_pushout(args, cfg):
    base = _category(args.base, cfg.ring)
    try:
        g = pushout(base, args.cell, _attachment(args.attachment))
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from None
    report = check_inc_quasi_iso(g, cfg.max_layers, cfg.window)
    report.config = {"ring": cfg.ring.short(), "L": cfg.max_length, "A": cfg.max_arity,
                     "m": cfg.max_layers}
    text = dump_presentation(g.result).rstrip("\n").splitlines()
    return text, {"presentation": dump_presentation(g.result)}, [report]


def cmd_recognize(args, cfg):
    reports = run_recognition(cfg) + run_paper_computations(cfg) + run_sweeps(cfg)
    return None, None, reports


COMMANDS = {"catalog": cmd_catalog, "homology": cmd_homology, "verify": cmd_verify,
            "lift": cmd_lift, "pushout": cmd_pushout, "recognize": cmd_recognize}


def _flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommands repeat the flags without defaults, so values given before
    # the subcommand are not overwritten
    def d(value):
        return argparse.SUPPRESS if suppress else value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", type=_ring, default=d(RingSpec.parse("q")),
                        help="z, q or fp:<p> (default q)")
    common.add_argument("--max-length", type=int, default=d(6))
    common.add_argument("--max-arity", type=int, default=d(4))
    common.add_argument("--max-layers", type=int, default=d(3))
    common.add_argument("--format", choices=("text", "json"), default=d("text"))
    common.add_argument("--seed", type=int, default=d(0))
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _flags(True)
    p = argparse.ArgumentParser(prog="ainfcat", parents=[_flags(False)],
                                description="Exact checks for DG and A-infinity categories.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("catalog", parents=[common], help="list builtins and functors")
    h = sub.add_parser("homology", parents=[common], help="homology of a hom complex")
    h.add_argument("category")
    h.add_argument("x")
    h.add_argument("y")
    v = sub.add_parser("verify", parents=[common], help="structure or functor checks")
    v.add_argument("target")
    lf = sub.add_parser("lift", parents=[common], help="right lifting property")
    lf.add_argument("functor")
    lf.add_argument("map", help="Q, S(n), R(n), F_dg or F_prime")
    lf.add_argument("--oracle", action="store_true", help="cross-check by enumeration")
    po = sub.add_parser("pushout", parents=[common], help="attach a cell")
    po.add_argument("base")
    po.add_argument("cell")
    po.add_argument("attachment", help="e.g. 4=1,5=2 or 8=1,9=2,x=j01 or 3=1")
    sub.add_parser("recognize", parents=[common], help="recognition and worked computations")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if min(args.max_length, args.max_arity, args.max_layers) < 1:
            raise UsageError("window bounds must be >= 1")
        cfg = HarnessConfig(args.ring, args.max_length, args.max_arity, args.max_layers,
                            args.seed)
        lines, payload, reports = COMMANDS[args.command](args, cfg)
    except (UsageError, FormatError) as exc:
        print(f"ainfcat: error: {exc}", file=sys.stderr)
        return 2
    except WindowNotClosed as exc:
        print(f"ainfcat: error: {exc}; enlarge --max-length", file=sys.stderr)
        return 2
    if args.format == "json":
        if reports:
            out = reports_to_json(reports)
            if payload is not None:
                out = json.dumps({"result": payload,
                                  "reports": json.loads(out)}, indent=2)
        else:
            out = json.dumps(payload, indent=2)
        print(out)
    else:
        for line in lines or []:
            print(line)
        for r in sorted(reports, key=lambda r: r.id):
            print(r.line())
            for w in r.witnesses[1:]:
                print("    " + w)
    return 1 if any(r.status == "fail" for r in reports) else 0


if __name__ == "__main__":
    sys.exit(main())
