"""Batch command line: verify, search, net, cylinder, examples, selftest.

Exit codes: 0 verified/ok, 1 a verification refuted the input, 2 usage or
malformed input.  All structured output is JSON on stdout (or --output);
human-readable summaries go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import __version__
from .errors import ConsistencyError, VerificationError
from .fields import FieldSpec, field_from_order
from .plane import ProjPoint, collinear
from .arcs import arc_config_from_json
from .cylinder import (
    check_weight_identities,
    dualize,
    gen_example,
    project_and_weight,
    random_cylinder,
    select_projection_center,
    plane_residues,
    weighted_config_from_json,
)
from .nets import bkm_conic_check, is_dual_3net, net_from_json, standard_conic_group, subgroup_coset_3net
from .search import SearchTask, run_search
from . import kernel


def _emit(args, payload):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_verify(args):
    try:
        obj = _load_json(args.input)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return 2
    try:
        if _looks_weighted(obj):
            cfg = weighted_config_from_json(obj)
            payload = {
                "type": "weighted_config",
                "verified": True,
                "q": cfg.spec.order,
                "white_count": cfg.k,
                "black_total": cfg.black_total(),
            }
        else:
            cfg = arc_config_from_json(obj)
            payload = {
                "type": "blocked_arc",
                "verified": True,
                "q": cfg.spec.order,
                "k": cfg.k,
                "certificate": cfg.certificate_json(),
            }
    except VerificationError as exc:
        _emit(args, {"verified": False, "reason": exc.reason, "witness": repr(exc.witness)})
        print(f"refuted: {exc}", file=sys.stderr)
        return 1
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: malformed configuration: {exc}", file=sys.stderr)
        return 2
    _emit(args, payload)
    return 0


def _looks_weighted(obj):
    blacks = obj.get("black", [])
    return any(isinstance(entry, dict) for entry in blacks)


def cmd_search(args):
    try:
        task = SearchTask(
            order=args.q,
            k=args.k,
            mode=args.mode,
            reduction=args.reduction,
            node_budget=args.node_budget,
            time_budget=args.time_budget,
        )
        report = run_search(task, jobs=args.jobs)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(args, report.to_json_dict())
    print(
        f"search q={args.q} k={args.k} mode={args.mode}: "
        f"{report.counts['classes']} class(es), "
        f"{report.counts['arcs_enumerated']} arcs enumerated, "
        f"exhaustive={report.exhaustive}, kernel={kernel.KERNEL_NAME}",
        file=sys.stderr,
    )
    return 0


def cmd_net(args):
    if args.input:
        try:
            net = net_from_json(_load_json(args.input))
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            print(f"error: malformed net: {exc}", file=sys.stderr)
            return 2
        check = is_dual_3net(*net.components())
        bkm = bkm_conic_check(net) if check.ok else None
        payload = {
            "is_dual_3net": check.ok,
            "witness_line": None if check.ok else list(check.witness.key),
            "bkm": None if bkm is None else {
                "c_collinear": bkm.c_collinear,
                "status": bkm.status,
                "irreducible": bkm.irreducible,
                "contains_all": bkm.contains_all,
            },
        }
        _emit(args, payload)
        return 0 if check.ok else 1
    try:
        spec = field_from_order(args.q)
        group = standard_conic_group(spec, args.type)
        net = subgroup_coset_3net(group, args.n)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    bkm = bkm_conic_check(net)
    payload = net.to_json_dict()
    payload["group"] = {"kind": group.kind, "order": group.order}
    payload["bkm"] = {
        "c_collinear": bkm.c_collinear,
        "status": bkm.status,
        "irreducible": bkm.irreducible,
        "contains_all": bkm.contains_all,
    }
    _emit(args, payload)
    return 0


def cmd_cylinder(args):
    try:
        spec = field_from_order(args.q)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rng = random.Random(args.seed)
    trials = []
    all_ok = True
    for t in range(args.trials):
        stages = {}
        cyl = random_cylinder(spec, rng)
        residues = plane_residues(cyl)
        stages["plane_residues"] = residues.all_zero
        center = select_projection_center(cyl)
        stages["center_bad_planes"] = center.bad_planes
        stages["center_meets_bound"] = center.meets_bound
        lwm = project_and_weight(cyl, center.point)
        nonzero = sum(1 for w in lwm.weights.values() if w != 0)
        stages["nonzero_weight_lines"] = nonzero
        stages["nonzero_within_q"] = nonzero <= spec.order
        try:
            check_weight_identities(lwm)
            stages["weight_identities"] = True
        except ConsistencyError:
            stages["weight_identities"] = False
        try:
            cfg = dualize(lwm)
            stages["dual_verified"] = True
            pts = list(cfg.white) + [p for p, _ in cfg.black]
            stages["dual_collinear"] = len(pts) <= 2 or all(
                collinear(pts[0], pts[1], p) for p in pts[2:]
            )
        except VerificationError:
            stages["dual_verified"] = False
            stages["dual_collinear"] = False
        ok = (
            stages["plane_residues"]
            and stages["center_meets_bound"]
            and stages["nonzero_within_q"]
            and stages["weight_identities"]
            and stages["dual_verified"]
            and stages["dual_collinear"]
        )
        stages["pass"] = ok
        all_ok = all_ok and ok
        trials.append(stages)
    payload = {"q": args.q, "trials": args.trials, "seed": args.seed,
               "results": trials, "all_pass": all_ok}
    _emit(args, payload)
    print(f"cylinder q={args.q}: {args.trials} trial(s), all_pass={all_ok}", file=sys.stderr)
    return 0 if all_ok else 1


def cmd_examples(args):
    try:
        spec = field_from_order(args.p)
        params = {}
        if args.kind == "collinear":
            if args.k is None:
                raise ValueError("--k is required for the collinear example")
            params["k"] = args.k
        elif args.kind == "two_lines":
            if args.n is None:
                raise ValueError("--n is required for the two-lines example")
            params["n"] = args.n
            params["coset_rep"] = args.coset_rep
        cfg = gen_example(args.kind, spec, **params)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(args, cfg.to_json_dict())
    return 0


def cmd_selftest(args):
    from .arcs import tangent_frame, triple_product, verify_gha
    from .plane import standard_frame

    checks = []

    def check(name, fn):
        try:
            fn()
            checks.append((name, True, ""))
        except Exception as exc:  # noqa: BLE001 - report, do not crash
            checks.append((name, False, str(exc)))

    def quadrangle_family():
        for p in (5, 7, 11):
            spec = FieldSpec(p)
            frame = standard_frame(spec)
            one, zero = spec.one(), spec.zero()
            diag = (
                ProjPoint((one, one, zero)),
                ProjPoint((one, zero, one)),
                ProjPoint((zero, one, one)),
            )
            cfg = verify_gha(frame, diag)
            fr = tangent_frame(cfg)
            assert triple_product(fr, 0, 1, 2) == spec.one()

    def small_search():
        rep = run_search(SearchTask(order=5, k=4))
        assert rep.counts["classes"] == 1 and rep.exhaustive
        rep6 = run_search(SearchTask(order=5, k=6))
        assert rep6.counts["classes"] == 0 and rep6.exhaustive

    def conic_group():
        for kind in ("hyperbolic", "elliptic"):
            g = standard_conic_group(FieldSpec(5), kind)
            assert all(g.add(p, g.identity) == p for p in g.elements)
            net = subgroup_coset_3net(g, g.order // 2)
            assert is_dual_3net(*net.components()).ok

    def cylinder_pipeline():
        spec = FieldSpec(5)
        rng = random.Random(1)
        cyl = random_cylinder(spec, rng)
        assert plane_residues(cyl).all_zero
        center = select_projection_center(cyl)
        lwm = project_and_weight(cyl, center.point)
        dualize(lwm)

    check("quadrangle family verifies (p = 5, 7, 11)", quadrangle_family)
    check("search: one class at k=4, none at k=6 (q=5)", small_search)
    check("conic chord groups and subgroup nets (q=5)", conic_group)
    check("cylinder pipeline (q=5)", cylinder_pipeline)

    ok = True
    for name, passed, msg in checks:
        status = "PASS" if passed else f"FAIL ({msg})"
        print(f"{status:4} {name}" if passed else f"FAIL {name}: {msg}")
        ok = ok and passed
    print(f"kernel: {kernel.KERNEL_NAME}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="arcgeo",
        description="Blocked arcs, dual 3-nets and weighted configurations in PG(2,q).",
    )
    parser.add_argument("--version", action="version", version=f"arcgeo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="verify a blocked-arc or weighted-config JSON file")
    p.add_argument("input", help="path to the configuration JSON")
    p.add_argument("--output", help="write the certificate JSON here instead of stdout")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="exhaustive blocked-arc search")
    p.add_argument("--q", type=int, required=True, help="field order (prime power)")
    p.add_argument("--k", type=int, required=True, help="white arc size (even, >= 4)")
    p.add_argument("--mode", choices=["gha", "hyperfocused"], default="gha")
    p.add_argument("--reduction", choices=["canonical-frame", "none"], default="canonical-frame")
    p.add_argument("--node-budget", type=int, default=10**9)
    p.add_argument("--time-budget", type=float, default=None)
    p.add_argument("--jobs", type=int, default=int(os.environ.get("ARCGEO_JOBS", "1")))
    p.add_argument("--output")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("net", help="build or verify a dual 3-net")
    p.add_argument("--input", help="verify this net JSON instead of building one")
    p.add_argument("--q", type=int, help="field order for the built net")
    p.add_argument("--type", choices=["hyperbolic", "elliptic"], default="hyperbolic")
    p.add_argument("--n", type=int, help="subgroup order (proper divisor of the group order)")
    p.add_argument("--output")
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("cylinder", help="seeded random cylinder pipeline")
    p.add_argument("--q", type=int, required=True, help="field order (prime power)")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_cylinder)

    p = sub.add_parser("examples", help="emit one of the three weighted-config families")
    p.add_argument("--kind", choices=["collinear", "two_lines", "quadrangle"], required=True)
    p.add_argument("--p", type=int, required=True, help="prime order of the plane")
    p.add_argument("--k", type=int, help="white count (collinear kind)")
    p.add_argument("--n", type=int, help="subgroup order (two-lines kind)")
    p.add_argument("--coset-rep", type=int, default=1, help="coset representative (two-lines kind)")
    p.add_argument("--output")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("selftest", help="run a quick internal battery")
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "net" and not args.input:
        if args.q is None or args.n is None:
            parser.error("net needs either --input or both --q and --n")
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
