"""Command-line front end.

Verbs: catalog, verify, tensor, tor, kunneth, compare.  Module arguments
are catalog names (R, C, T, zero, O3, ... — a `catalog:` prefix is
accepted) or paths to module JSON files.  Tables are rendered in the
source layout, degrees 0 through 8 with degree 8 repeating degree 0.

Exit codes: 0 success, 1 mathematical failure (verification failure,
fixture mismatch, empty solution set), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import catalog_entry, catalog_names, cuntz_resolution
from .crt_core import (
    CRTModule,
    OP_NAMES,
    PARTS,
    crt_isomorphic,
    is_acyclic,
    is_free,
    module_from_json,
    module_to_json,
    verify_relations,
    zero_module,
)
from .free_crt import monogenic
from .kunneth import kunneth_pipeline
from .tensor import tensor_and_tor, tensor_free
from .zlinalg import GroupHom

_OP_LABELS = {"c": "c_n", "r": "r_n", "eps": "eps_n", "zeta": "zeta_n",
              "psiU": "psiU_n", "psiT": "psiT_n", "gamma": "gamma_n", "tau": "tau_n"}


class UsageError(Exception):
    pass


def _load_module(source: str) -> CRTModule:
    name = source.removeprefix("catalog:")
    try:
        return catalog_entry(name).module
    except KeyError:
        pass
    path = Path(source)
    if not path.exists():
        raise UsageError(f"not a catalog name or file: {source!r}")
    try:
        with open(path) as fh:
            return module_from_json(json.load(fh))
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot parse module file {source!r}: {exc}")


def _fmt_matrix(h: GroupHom) -> str:
    m = h.matrix
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return "0"
    if m.rows == 1 and m.cols == 1:
        return str(m.entries[0][0])
    return "[" + "; ".join(" ".join(str(x) for x in row) for row in m.entries) + "]"


def render_module(M: CRTModule, window: int = 8) -> str:
    cols = list(range(window + 1))
    rows = []
    rows.append(["n"] + [str(n) for n in cols])
    for part, label in (("O", "KO_n"), ("U", "KU_n"), ("T", "KT_n")):
        rows.append([label] + [str(M.group(part, n % 8)) for n in cols])
    for name in OP_NAMES:
        rows.append([_OP_LABELS[name]] + [_fmt_matrix(M.op(name, n % 8)) for n in cols])
    widths = [max(len(r[i]) for r in rows) for i in range(len(cols) + 1)]
    lines = []
    for i, r in enumerate(rows):
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(r, widths)))
        if i in (0, 3):
            lines.append("-" * len(lines[-1]))
    return "\n".join(lines)


def _write_json(obj, path: str):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in catalog_names():
            print(name)
        return 0
    ent = catalog_entry(args.name.removeprefix("catalog:"))
    if args.json:
        _write_json(module_to_json(ent.module), args.json)
    print(f"catalog entry {ent.name}")
    print(render_module(ent.module, args.period_window))
    return 0


def cmd_verify(args) -> int:
    M = _load_module(args.module)
    rel = verify_relations(M)
    if not rel.ok():
        print(f"relations: FAIL ({rel})")
        return 1
    acy = is_acyclic(M, check_relations=False)
    free = is_free(M) if acy.ok() else False
    print(f"relations: pass, acyclic: {'pass' if acy.ok() else 'FAIL (' + str(acy) + ')'}, "
          f"free: {'pass' if free else 'no'}")
    return 0 if acy.ok() else 1


def _tensor_tor(args) -> tuple[CRTModule, CRTModule]:
    a = args.a.removeprefix("catalog:")
    B = _load_module(args.b)
    if a == "zero":
        return zero_module(), zero_module()
    if a in ("R", "C", "T"):
        tm = tensor_free(monogenic(a, 0), B)
        return tm.module, zero_module()
    if a.startswith("O"):
        res = cuntz_resolution(int(a[1:]) - 1)
        tp = tensor_and_tor(res, B)
        return tp.tensor, tp.tor
    raise UsageError(f"first factor {args.a!r} needs a catalog resolution")


def cmd_tensor(args) -> int:
    tensor, _ = _tensor_tor(args)
    if args.json:
        _write_json(module_to_json(tensor), args.json)
    print(render_module(tensor, args.period_window))
    return 0


def cmd_tor(args) -> int:
    _, tor = _tensor_tor(args)
    if args.json:
        _write_json(module_to_json(tor), args.json)
    print(render_module(tor, args.period_window))
    return 0


def cmd_kunneth(args) -> int:
    a = args.a.removeprefix("catalog:")
    b = args.b.removeprefix("catalog:")
    report = kunneth_pipeline(a, b, budget=args.budget)
    print(f"pair ({a}, {b}): k={report.k}, l={report.l}")
    print("tensor part:")
    print(render_module(report.tensor, args.period_window))
    print("\nTor part:")
    print(render_module(report.tor, args.period_window))
    if not report.solutions:
        print("\nno consistent middle found (transcription error upstream?)")
        return 1
    sol = report.solutions[0]
    print(f"\nmiddle ({len(report.solutions)} solution class):")
    print(render_module(sol.middle, args.period_window))
    print(f"\nsplit: {sol.split}")
    if args.json:
        _write_json(module_to_json(sol.middle), args.json)
    if report.expected is not None:
        ok = all(report.matches_expected)
        print(f"matches printed product table: {ok}")
        if not ok:
            for part in PARTS:
                for n in range(8):
                    ga = sol.middle.group(part, n)
                    gb = report.expected.group(part, n)
                    if ga != gb:
                        print(f"  {part}-part degree {n}: computed {ga}, table {gb}")
        return 0 if ok else 1
    return 0


def cmd_compare(args) -> int:
    A = _load_module(args.a)
    B = _load_module(args.b)
    diffs = []
    for part in PARTS:
        for n in range(8):
            ga, gb = A.group(part, n), B.group(part, n)
            if ga != gb:
                diffs.append(f"  {part}-part degree {n}: {ga} vs {gb}")
    if diffs:
        print("group discrepancies:")
        print("\n".join(diffs))
        return 1
    if A.all_finite() and B.all_finite():
        iso = crt_isomorphic(A, B)
        print("isomorphic" if iso else "same groups but not CRT-isomorphic")
        return 0 if iso else 1
    same_ops = all(A.op(nm, n) == B.op(nm, n) for nm in OP_NAMES for n in range(8))
    print("identical tables" if same_ops
          else "same groups; operation tables differ (infinite parts compared by field equality)")
    return 0 if same_ops else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="crtk", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--json", metavar="PATH", help="also write module JSON")
        p.add_argument("--period-window", type=int, default=8,
                       help="last degree column to render (default 8)")

    p = sub.add_parser("catalog", help="list or show named fixtures")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?", default="R")
    common(p)
    p.set_defaults(fn=cmd_catalog)

    p = sub.add_parser("verify", help="relation/acyclicity/freeness report")
    p.add_argument("module")
    p.set_defaults(fn=cmd_verify)

    for verb, fn in (("tensor", cmd_tensor), ("tor", cmd_tor)):
        p = sub.add_parser(verb, help=f"{verb} of a resolved catalog module with another module")
        p.add_argument("a")
        p.add_argument("b")
        common(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("kunneth", help="full pipeline: tensor, Tor, middle, split")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--budget", type=int, default=5_000_000)
    common(p)
    p.set_defaults(fn=cmd_kunneth)

    p = sub.add_parser("compare", help="diff two modules up to isomorphism")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(fn=cmd_compare)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
