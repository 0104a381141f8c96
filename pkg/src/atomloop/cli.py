"""Command-line front end.

Subcommands: ``atoms`` (class listing), ``loops`` (loop-detection report),
``check`` (engine vs brute-force oracle), ``gen`` (instance generators).
Exit codes: 0 clean, 1 finding (a loop, or a check mismatch), 2 input error.
Instance file arguments accept ``-`` for stdin.  Set ``ATOMLOOP_LOG=debug``
for engine tracing.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from .atoms import compute_uc, overlap_metrics
from .formats import InstanceError, dump_instance, load_instance
from .generators import (
    fig2_instance,
    gen_hsa_hard,
    gen_random_instance,
    gen_veriflow_hard,
)
from .network import NetworkInstance, build_rule_index, detect_loops, scan_loops
from .oracle import oracle_classes, oracle_loops
from .setrep import Geometry, ParseError, format_header, format_ruleset

log = logging.getLogger("atomloop.cli")


def _read_instance(path: str) -> NetworkInstance:
    if path == "-":
        return load_instance(sys.stdin)
    with open(path, "r", encoding="utf-8") as fp:
        return load_instance(fp)


def cmd_atoms(args) -> int:
    net = _read_instance(args.instance)
    rule_sets, _ = build_rule_index(net)
    store = compute_uc(net.geometry, rule_sets, algo=args.algo)
    out = sys.stdout
    print(f"# atoms: {len(store)}", file=out)
    print(f"# distinct_rules: {store.rule_count}", file=out)
    for comb in store.combinations():
        ids = ",".join(str(i) for i in sorted(comb.cont)) or "-"
        print(f"{format_ruleset(comb.set)}\t{comb.atsize}\t{ids}", file=out)
    return 0


def cmd_loops(args) -> int:
    start = time.perf_counter()
    net = _read_instance(args.instance)
    report = detect_loops(
        net,
        algo=args.algo,
        first=args.first,
        want_witness=args.witness,
        jobs=args.jobs,
    )
    metrics = overlap_metrics(report.store)
    elapsed_ms = round((time.perf_counter() - start) * 1000.0, 3)
    data = {
        "atoms": report.atom_count,
        "distinct_rules": report.distinct_rules,
        "k": metrics.k,
        "k_bar": str(metrics.k_bar),
        "K_bar": "unavailable" if metrics.K_bar is None else str(metrics.K_bar),
        "loops": [
            {
                "combination": rec.combination,
                "cycle": list(rec.cycle),
                "containers": list(rec.containers),
                "atom_size": str(rec.atom_size),
                "witness": None
                if rec.witness is None
                else format_header(net.geometry, rec.witness),
            }
            for rec in report.records
        ],
        "elapsed_ms": elapsed_ms,
    }
    json.dump(data, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 1 if report.has_loop else 0


def run_check(net: NetworkInstance) -> list[str]:
    """Engine vs oracle comparison; returns mismatch descriptions."""
    rule_sets, index = build_rule_index(net)
    store = compute_uc(net.geometry, rule_sets)
    engine = {tuple(sorted(c.cont)): c.atsize for c in store.combinations()}
    truth = oracle_classes(rule_sets, net.geometry)
    mismatches = []
    for key in sorted(set(engine) | set(truth)):
        got = engine.get(key)
        want = truth.get(key)
        if got is None:
            mismatches.append(
                f"class {list(key)}: oracle sees {len(want)} headers, engine has no combination"
            )
        elif want is None:
            mismatches.append(
                f"class {list(key)}: engine claims {got} headers, oracle has no such class"
            )
        elif got != len(want):
            mismatches.append(
                f"class {list(key)}: engine size {got} != oracle size {len(want)}"
            )
    flagged = {rec.containers for rec in scan_loops(store, rule_sets, index, net)}
    engine_loop_headers: set[int] = set()
    for key in flagged:
        engine_loop_headers.update(truth.get(key, ()))
    oracle_loop_headers = oracle_loops(net)
    if engine_loop_headers != oracle_loop_headers:
        only_engine = sorted(engine_loop_headers - oracle_loop_headers)
        only_oracle = sorted(oracle_loop_headers - engine_loop_headers)
        if only_engine:
            mismatches.append(f"loop headers flagged only by engine: {only_engine[:10]}")
        if only_oracle:
            mismatches.append(f"loop headers found only by oracle: {only_oracle[:10]}")
    return mismatches


def cmd_check(args) -> int:
    net = _read_instance(args.instance)
    mismatches = run_check(net)
    if mismatches:
        for line in mismatches:
            print(line)
        print(f"check failed: {len(mismatches)} mismatch(es)")
        return 1
    print("check passed: classes and loop sets match the oracle")
    return 0


def _parse_widths(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise InstanceError("widths", f"bad field widths {text!r}") from exc


def cmd_gen(args) -> int:
    if args.family == "fig2":
        net = fig2_instance()
    elif args.family == "hsa":
        net = gen_hsa_hard(args.ell)
    elif args.family == "veriflow":
        breakpoints = None
        if args.breakpoints:
            breakpoints = [int(x) for x in args.breakpoints.split(",")]
        net = gen_veriflow_hard(
            args.d, args.p, width=args.width, breakpoints=breakpoints, b=args.b
        )
    else:
        if (args.ell is None) == (args.widths is None):
            raise InstanceError("random", "give exactly one of --ell / --widths")
        if args.ell is not None:
            geometry = Geometry.wildcard(args.ell)
        else:
            geometry = Geometry.multirange(_parse_widths(args.widths))
        net = gen_random_instance(
            args.seed,
            args.n,
            geometry,
            star_density=args.star_density,
            num_nodes=args.nodes,
        )
    if args.out == "-":
        dump_instance(net, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8") as fp:
            dump_instance(net, fp)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atomloop",
        description="Header-class atoms and forwarding-loop detection "
        "for wildcard / multi-range rule tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_atoms = sub.add_parser("atoms", help="list header classes of an instance")
    p_atoms.add_argument("instance", help="instance file, or - for stdin")
    p_atoms.add_argument("--algo", choices=("add", "basic"), default="add")
    p_atoms.set_defaults(func=cmd_atoms)

    p_loops = sub.add_parser("loops", help="detect forwarding loops per class")
    p_loops.add_argument("instance", help="instance file, or - for stdin")
    p_loops.add_argument("--algo", choices=("add", "basic"), default="add")
    p_loops.add_argument("--first", action="store_true", help="stop at the first loop")
    p_loops.add_argument(
        "--witness", action="store_true", help="include a witness header per loop"
    )
    p_loops.add_argument("--jobs", type=int, default=1, help="parallel class checks")
    p_loops.set_defaults(func=cmd_loops)

    p_check = sub.add_parser("check", help="compare engine against brute force")
    p_check.add_argument("instance", help="instance file, or - for stdin")
    p_check.set_defaults(func=cmd_check)

    p_gen = sub.add_parser("gen", help="generate instance files")
    gen_sub = p_gen.add_subparsers(dest="family", required=True)
    g_fig2 = gen_sub.add_parser("fig2", help="toy 8-header range collection")
    g_hsa = gen_sub.add_parser("hsa", help="nested wildcard drop rules + catch-all")
    g_hsa.add_argument("--ell", type=int, required=True, help="header bit length")
    g_vf = gen_sub.add_parser("veriflow", help="disjoint slab rules + catch-all")
    g_vf.add_argument("--d", type=int, required=True, help="number of fields")
    g_vf.add_argument("--p", type=int, required=True, help="breakpoints per field")
    g_vf.add_argument("--width", type=int, default=None, help="bits per field")
    g_vf.add_argument("--breakpoints", default=None, help="comma-separated a_1..a_p")
    g_vf.add_argument("--b", type=int, default=None, help="slab tail value")
    g_rand = gen_sub.add_parser("random", help="seeded random instance")
    g_rand.add_argument("--seed", type=int, required=True)
    g_rand.add_argument("--n", type=int, required=True, help="rule pool size")
    g_rand.add_argument("--ell", type=int, default=None, help="wildcard bit length")
    g_rand.add_argument("--widths", default=None, help="comma-separated field widths")
    g_rand.add_argument("--star-density", type=float, default=0.5)
    g_rand.add_argument("--nodes", type=int, default=2)
    for g in (g_fig2, g_hsa, g_vf, g_rand):
        g.add_argument("--out", default="-", help="output path, or - for stdout")
    p_gen.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("ATOMLOOP_LOG")
    if level:
        logging.basicConfig(
            level=getattr(logging, level.upper(), logging.INFO), stream=sys.stderr
        )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
