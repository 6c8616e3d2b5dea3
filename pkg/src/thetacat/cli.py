"""Batch command line: one JSON report per run.

Exit codes: 0 success or check passed, 1 usage error, 2 check failed
(the report carries the witness), 3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .anodyne import certify_union_inclusion, spine_probe, verify_certificate
from .checkers import check, parse_mode
from .errors import BudgetExceededError, ProofShapeViolation
from .groups import FiniteGroup, builtin_group, cocycle_tools
from .nerves import (
    cocycle_to_map,
    homotopy_classes,
    map_to_cocycle,
    nerve_from_spec,
)
from .presheaves import nat_presheaves, table_from_json
from .selftest import run_selftest
from .subshapes import DEFAULT_WINDOW, WindowSpec
from .theta import enumerate_hom, faces_of, parse_shape

MAX_DIM_CAP = 6
MAX_ENTRY_CAP = 6


def _write_report(report: dict, out_path: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _window_from_args(args) -> WindowSpec:
    d = args.max_dim if args.max_dim is not None else DEFAULT_WINDOW.max_dim
    s = args.max_entry if args.max_entry is not None else DEFAULT_WINDOW.max_entry
    if not (0 <= d <= MAX_DIM_CAP and 1 <= s <= MAX_ENTRY_CAP):
        raise SystemExit(_usage_error(f"window out of range: dim {d}, entry {s}"))
    return WindowSpec(d, s)


def _usage_error(message: str) -> int:
    sys.stderr.write(f"thetacat: {message}\n")
    return 1


def _parse_shape_arg(text: str):
    try:
        return parse_shape(text)
    except ValueError:
        raise SystemExit(_usage_error(f"bad shape token {text!r}")) from None


def _load_group(token: str) -> FiniteGroup:
    if token.startswith("@"):
        with open(token[1:]) as fh:
            return FiniteGroup.from_json(json.load(fh))
    try:
        return builtin_group(token)
    except ValueError:
        raise SystemExit(_usage_error(f"bad group token {token!r}")) from None


def cmd_faces(args) -> int:
    a = _parse_shape_arg(args.shape)
    fds = faces_of(a)
    report = {
        "command": "faces",
        "shape": a.to_json(),
        "count": len(fds),
        "inner_count": sum(1 for fd in fds if fd.inner),
        "outer_count": sum(1 for fd in fds if not fd.inner),
        "faces": [
            {
                "k": fd.k,
                "m": fd.m,
                "kind": fd.kind,
                "target": fd.target.to_json(),
            }
            for fd in fds
        ],
    }
    _write_report(report, args.out)
    return 0


def cmd_hom(args) -> int:
    a, b = _parse_shape_arg(args.src), _parse_shape_arg(args.dst)
    hom = enumerate_hom(a, b)
    report = {
        "command": "hom",
        "src": a.to_json(),
        "dst": b.to_json(),
        "count": len(hom),
        "by_degree": {
            str(q): sum(1 for f in hom if f.degree == q)
            for q in range(1, max(a.dim, b.dim) + 2)
        },
        "classes": [f.to_json() for f in hom],
    }
    _write_report(report, args.out)
    return 0


def cmd_check(args) -> int:
    window = _window_from_args(args)
    if args.nerve:
        try:
            x = nerve_from_spec(args.nerve)
        except ValueError as exc:
            return _usage_error(str(exc))
    elif args.input:
        with open(args.input) as fh:
            x = table_from_json(json.load(fh))
    else:
        return _usage_error("check needs --nerve or --input")
    try:
        mode = parse_mode(args.mode)
    except ValueError as exc:
        return _usage_error(str(exc))
    try:
        report = check(x, mode, window, args.budget)
    except BudgetExceededError as exc:
        _write_report(
            {"command": "check", "error": "budget exceeded", "nodes": exc.count},
            args.out,
        )
        return 3
    _write_report(dict(report.to_json(), command="check"), args.out)
    return 0 if report.verdict else 2


def cmd_certify(args) -> int:
    a = _parse_shape_arg(args.shape)
    try:
        gamma = [
            (int(tok.split(":")[0]), int(tok.split(":")[1]))
            for tok in args.gamma.split(",")
            if tok
        ]
    except (ValueError, IndexError):
        return _usage_error(f"bad gamma list {args.gamma!r}")
    try:
        cert = certify_union_inclusion(a, gamma)
    except ProofShapeViolation as exc:
        _write_report(
            {
                "command": "certify",
                "error": "proof-shape violation",
                "detail": str(exc),
                "data": exc.data,
            },
            args.out,
        )
        return 2
    except ValueError as exc:
        return _usage_error(str(exc))
    verdict = verify_certificate(cert)
    report = {
        "command": "certify",
        "certificate": cert.to_json(),
        "verified": verdict.ok,
        "steps": len(cert.steps),
    }
    _write_report(report, args.out)
    return 0 if verdict.ok else 2


def cmd_probe(args) -> int:
    a = _parse_shape_arg(args.shape)
    result = spine_probe(a, args.target, budget=args.budget)
    report = dict(result.to_json(), command="probe", shape=a.to_json())
    if result.found:
        verdict = verify_certificate(result.certificate)
        report["verified"] = verdict.ok
        _write_report(report, args.out)
        return 0 if verdict.ok else 2
    _write_report(report, args.out)
    return 3


def cmd_h2(args) -> int:
    g = _load_group(args.group)
    a = _load_group(args.coeff)
    if not a.abelian:
        return _usage_error(f"coefficient group {a.name} is not abelian")
    try:
        data = cocycle_tools(g, a, args.budget)
        from .nerves import H2_WINDOW, NerveB1, NerveB2EM

        maps = nat_presheaves(NerveB1(g), NerveB2EM(a), H2_WINDOW, args.budget)
        round_trip = all(
            cocycle_to_map(map_to_cocycle(m)) == m for m in maps
        )
        hreport = homotopy_classes(g, a, budget=args.budget)
    except BudgetExceededError as exc:
        _write_report(
            {"command": "h2", "error": "budget exceeded", "nodes": exc.count},
            args.out,
        )
        return 3
    report = {
        "command": "h2",
        "group": g.name,
        "coeff": a.name,
        "z2": len(data.z2),
        "b2": len(data.b2),
        "h2_classes": data.classes,
        "nat_maps": len(maps),
        "maps_equal_cocycles": len(maps) == len(data.z2),
        "round_trip_ok": round_trip,
        "num_classes": hreport.num_classes,
        "agree": hreport.agree,
        "relation": {
            "reflexive": hreport.relation_was_reflexive,
            "symmetric": hreport.relation_was_symmetric,
            "transitive": hreport.relation_was_transitive,
        },
        "counterexample": hreport.counterexample,
    }
    _write_report(report, args.out)
    return 0 if (hreport.agree and report["maps_equal_cocycles"] and round_trip) else 2


def cmd_selftest(args) -> int:
    report = dict(run_selftest(args.seed), command="selftest")
    _write_report(report, args.out)
    return 0 if report["verdict"] == "pass" else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thetacat",
        description="exact combinatorics of generalized simplices",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--max-dim", type=int, default=None)
        p.add_argument("--max-entry", type=int, default=None)
        p.add_argument("--budget", type=int, default=10**6)
        p.add_argument("--out", default=None)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("faces", help="list the faces of a shape")
    p.add_argument("shape")
    common(p)
    p.set_defaults(fn=cmd_faces)

    p = sub.add_parser("hom", help="enumerate classes between two shapes")
    p.add_argument("src")
    p.add_argument("dst")
    common(p)
    p.set_defaults(fn=cmd_hom)

    p = sub.add_parser("check", help="horn-filling check of a presheaf")
    p.add_argument("--mode", required=True)
    p.add_argument("--nerve", default=None, help="B1:G, B2strict:A or B2em:A")
    p.add_argument("--input", default=None, help="windowed presheaf JSON file")
    common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("certify", help="certificate for a union of faces")
    p.add_argument("shape")
    p.add_argument("--gamma", required=True, help="comma list of k:m faces")
    common(p)
    p.set_defaults(fn=cmd_certify)

    p = sub.add_parser("probe", help="search a certificate from the spine")
    p.add_argument("shape")
    p.add_argument("--target", choices=("outer", "full"), default="full")
    common(p)
    p.set_defaults(fn=cmd_probe)

    p = sub.add_parser("h2", help="maps, cocycles and homotopy classes")
    p.add_argument("--group", required=True)
    p.add_argument("--coeff", required=True)
    common(p)
    p.set_defaults(fn=cmd_h2)

    p = sub.add_parser("selftest", help="run every module's invariant suite")
    common(p)
    p.set_defaults(fn=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 1
    except BudgetExceededError:
        return 3


if __name__ == "__main__":
    sys.exit(main())
