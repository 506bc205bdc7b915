"""Command-line entry point: ``pluckerflag <command> --field p [options]``.

Every command prints one JSON object (keys sorted) with the command name,
field, elapsed seconds, a ``pass`` flag and the command's results.  Exit
status is 0 on pass, 1 on a failed verification and 2 on usage errors,
including commands refused by a size guard.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import flagspace, flagvariety, transform
from .exactalg import GF, QQ, ExactMatrix, Field
from .flagspace import SizeLimitError, UnsupportedEnumerationError, relatedness_graph
from .projgeom import geometry
from .reports import Report, _jsonable
from .serialize import (
    flag_to_dict,
    flagmap_from_json,
    matrix_to_text,
    transformation_to_dict,
)

__all__ = ["main", "run", "UsageError"]


class UsageError(Exception):
    """Bad arguments or a request beyond a command's size guard."""


def parse_field(text: str) -> Field:
    if text.lower() in ("q", "qq", "0"):
        return QQ
    try:
        return GF(int(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"field must be a prime or 'q': {exc}") from None


def _finite(field: Field, max_p: int, why: str) -> None:
    if not field.is_finite:
        raise UsageError(f"{why}: needs a finite field")
    if field.characteristic > max_p:
        raise UsageError(f"{why}: limited to p <= {max_p}")


# ---------------------------------------------------------------------------
# commands; each returns (results dict, pass flag)


def cmd_stats(args):
    _finite(args.field, 5, "stats enumerates the whole geometry")
    geo = geometry(args.field)
    graph = relatedness_graph(args.field)
    out = {
        "points": len(geo.points),
        "lines": len(geo.lines),
        "planes": len(geo.planes),
        "flags": len(geo.flags),
        "pencils": len(graph.pencils),
    }
    return out, True


def _report(rep: Report):
    return rep.to_dict(), rep.passed


def cmd_verify_prop1(args):
    _finite(args.field, 3, "clique enumeration")
    return _report(flagspace.verify_prop1(args.field))


def cmd_verify_2net(args):
    _finite(args.field, 5, "2-net check on every line")
    return _report(flagspace.verify_two_nets(args.field))


def cmd_verify_4path(args):
    _finite(args.field, 3, "closed 4-path enumeration")
    return _report(flagspace.verify_closed_4path(args.field))


def cmd_verify_eq9_10(args):
    _finite(args.field, 5, "incidence/kernel comparison")
    return _report(flagvariety.verify_eq9_eq10(args.field, samples=args.trials or 10_000, seed=args.seed))


def cmd_verify_prop4(args):
    _finite(args.field, 2, "all flag-image pairs")
    return _report(flagvariety.verify_prop4(args.field))


def cmd_verify_prop5(args):
    _finite(args.field, 3, "Segre point enumeration")
    return _report(flagvariety.verify_prop5(args.field, samples=args.trials or 10_000, seed=args.seed))


def cmd_dims(args):
    dims = flagvariety.build_incidence_maps(args.field).dims
    ok = dims == {"ker_i01": 80, "ker_i12": 80, "intersection": 64, "rank_i01": 16, "rank_i12": 16}
    return dims, ok


def cmd_span_report(args):
    if args.field.is_finite:
        _finite(args.field, 5, "exhaustive span of the variety")
    rep = flagvariety.span_report(args.field)
    out = rep.to_dict()
    expected_sum = 63 if args.field.characteristic == 3 else 64
    ok = (
        rep.star_dim == 8
        and rep.dim_wp == rep.dim_wu == 32
        and rep.dim_wp_plus_wu == expected_sum
        and rep.dim_span == 64
        and rep.special_flag_outside in (None, True)
    )
    return out, ok


def _load_flagmap(path: str | None, field: Field):
    if path is None:
        return None
    a = flagmap_from_json(Path(path).read_text())
    if a.field != field:
        raise UsageError(f"flag map is over {a.field!r}, --field says {field!r}")
    return a


def cmd_decompose(args):
    _finite(args.field, 5, "flag maps are tabulated")
    a = _load_flagmap(args.input, args.field)
    if a is None:
        return _report(transform.verify_round_trips(args.field, trials=args.trials or 100, seed=args.seed))
    if not transform.is_plucker_transformation(a):
        return {"error": "not a Plücker transformation"}, False
    return transformation_to_dict(transform.decompose(a)), True


def cmd_extend(args):
    _finite(args.field, 3, "extension checks on every flag image")
    a = _load_flagmap(args.input, args.field)
    if a is None:
        rep = flagvariety.verify_extensions(args.field, trials=args.trials or 100, seed=args.seed)
        if args.field.characteristic == 2:
            rng = np.random.default_rng(args.seed)
            sample = transform.FlagMap.from_transformation(transform.Duality(transform.random_invertible(args.field, rng)))
            rep.merge(flagvariety.verify_uniqueness_on_span(sample, seed=args.seed), prefix="uniqueness: ")
        return _report(rep)
    mat = flagvariety.extend_to_collineation(a)
    uniq = flagvariety.verify_uniqueness_on_span(a, seed=args.seed)
    out = {"matrix": matrix_to_text(mat), "kind": transformation_to_dict(transform.decompose(a))["kind"], "uniqueness": uniq.to_dict()}
    return out, uniq.passed


def cmd_autcount(args):
    _finite(args.field, 2, "automorphism search")
    return _report(transform.verify_automorphism_count(args.field))


def cmd_path(args):
    _finite(args.field, 5 if args.pair else 3, "connecting paths")
    if args.pair:
        geo = geometry(args.field)
        a, b = args.pair
        n = len(geo.flags)
        if not (0 <= a < n and 0 <= b < n):
            raise UsageError(f"flag indices must lie in [0, {n})")
        ids, method = flagspace.connecting_path_ids(geo, a, b)
        steps_ok = all(flagspace.related(geo.flags[x], geo.flags[y]) for x, y in zip(ids, ids[1:]))
        out = {"method": method, "steps": len(ids) - 1, "path": [flag_to_dict(geo.flags[i]) for i in ids]}
        return out, steps_ok and len(ids) - 1 <= 12
    sample = None if args.field.characteristic == 2 else (args.trials or 10_000)
    return _report(flagspace.verify_connectivity(args.field, sample=sample, seed=args.seed))


EXPORTS = ("i01", "i12", "kernel01", "kernel12", "intersection", "images", "span", "char3", "polarity")


def cmd_export(args):
    field = args.field
    what = args.what
    maps = flagvariety.build_incidence_maps(field)
    if what in ("images", "span"):
        _finite(field, 5, "flag images are enumerated")
        model = flagvariety.build_variety_model(field)
        mat = ExactMatrix(model.images.T.copy() if what == "images" else model.span.T.copy(), field)
    elif what == "char3":
        if field.is_finite:
            _finite(field, 5, "exhaustive span of the variety")
        text = json.dumps(flagvariety.span_report(field).to_dict(), sort_keys=True)
        mat = None
    elif what == "polarity":
        from .multilinear import klein_polarity

        mat = klein_polarity(field)
    else:
        mat = getattr(maps, what)
        if what.startswith("kernel") or what == "intersection":
            mat = mat.T  # basis vectors as columns, like the image matrix
    if mat is not None:
        text = matrix_to_text(mat)
    out = {"what": what}
    if mat is not None:
        out["shape"] = list(mat.shape)
    if args.out:
        Path(args.out).write_text(text)
        out["written"] = args.out
    else:
        out["content"] = text
    return out, True


COMMANDS = {
    "stats": (cmd_stats, "counts of points, lines, planes, flags and pencils"),
    "verify-prop1": (cmd_verify_prop1, "maximal cliques of relatedness are the pencils (p <= 3)"),
    "verify-2net": (cmd_verify_2net, "flags on each line form a 2-net (p <= 5)"),
    "verify-4path": (cmd_verify_4path, "closed 4-paths avoid type-1 pencils (p <= 3)"),
    "verify-eq9-10": (cmd_verify_eq9_10, "kernel membership matches incidence (exhaustive for p = 2)"),
    "verify-prop4": (cmd_verify_prop4, "lines in the flag variety are pencil images (p = 2)"),
    "verify-prop5": (cmd_verify_prop5, "Segre points in the incidence subspace are flags (p <= 3)"),
    "dims": (cmd_dims, "kernel dimensions of the incidence maps"),
    "span-report": (cmd_span_report, "span dimensions incl. the characteristic-3 drop"),
    "decompose": (cmd_decompose, "recover a collineation or duality from a flag map"),
    "extend": (cmd_extend, "extend flag maps to the 96-dimensional space (p <= 3)"),
    "autcount": (cmd_autcount, "count automorphisms of the flag space (p = 2)"),
    "path": (cmd_path, "connecting paths between flags"),
    "export": (cmd_export, "export matrices and reports"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pluckerflag", description="Exact computations on the flags of PG(3, K).")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, helptext) in COMMANDS.items():
        p = sub.add_parser(name, help=helptext, description=helptext)
        p.add_argument("--field", type=parse_field, default=GF(2), help="prime p, or 'q' for the rationals (default 2)")
        p.add_argument("--text", action="store_true", help="human-readable output instead of JSON")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=None, help="random trials or samples (command-specific default)")
        if name in ("decompose", "extend"):
            p.add_argument("--input", help="flag map as JSON (list of flag pairs)")
        if name == "path":
            p.add_argument("--pair", type=int, nargs=2, metavar=("A", "B"), help="flag indices; default checks all pairs")
        if name == "export":
            p.add_argument("what", choices=EXPORTS)
            p.add_argument("--out", help="write the artifact here instead of embedding it in the report")
    return parser


def run(argv: list[str]) -> tuple[dict, int]:
    """Run one command; returns the report dict and the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    func = COMMANDS[args.command][0]
    start = time.perf_counter()
    try:
        results, ok = func(args)
    except (UsageError, SizeLimitError, UnsupportedEnumerationError) as exc:
        parser.exit(2, f"{parser.prog} {args.command}: error: {exc}\n")
    report = {
        "command": args.command,
        "field": args.field.characteristic,
        "pass": bool(ok),
        "results": _jsonable(results),
        "elapsed": round(time.perf_counter() - start, 3),
    }
    return report, 0 if ok else 1


def _as_text(report: dict) -> str:
    lines = [f"{report['command']} over field {report['field'] or 'Q'}: {'PASS' if report['pass'] else 'FAIL'} ({report['elapsed']}s)"]
    res = report["results"]
    if not ("counts" in res or "checks" in res):
        lines += [f"  {k}: {v}" for k, v in sorted(res.items())]
        return "\n".join(lines)
    for k, v in sorted(res.get("counts", {}).items()):
        lines.append(f"  {k}: {v}")
    for c in res.get("checks", []):
        lines.append(f"  [{'ok' if c['pass'] else 'FAIL'}] {c['name']}: expected {c['expected']}, computed {c['computed']}")
    for w in res.get("violations", [])[:5]:
        lines.append(f"  violation: {w}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    report, status = run(argv)
    if build_parser().parse_args(argv).text:
        print(_as_text(report))
    else:
        print(json.dumps(report, sort_keys=True))
    return status


if __name__ == "__main__":
    sys.exit(main())
