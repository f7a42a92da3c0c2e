"""Command-line front end: ``graphregen {repair,retrieve,reproduce}``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from .base import LinearCode, ParameterError
from .channel import resilient_ip_transmit
from .determinant import DetCode, cascade_params
from .engine import (
    cutset_bound,
    partial_repair,
    repair_cost,
    retrieval_lower_bound,
    simulate_repair,
)
from .field import DEFAULT_P, FieldError
from .gpm import GpmCode
from .moulin import MoulinCode, file_space
from .pm import PmMbrCode, PmMsrCode
from .retrieval import plan_retrieval, retrieve_mbr_optimal, retrieve_relay
from .topology import Graph, GraphError, bfs_distances, build_repair_tree, running_example, select_helpers

FAMILIES = ("pm-msr", "pm-mbr", "gpm", "moulin", "det")


def build_code(args, n: int) -> LinearCode:
    fam, p = args.family, args.modulus
    need = {"pm-msr": ["k"], "pm-mbr": ["k", "d"], "gpm": ["k", "t"], "moulin": ["k", "d", "s"], "det": ["k", "m"]}[fam]
    missing = [f"--{x}" for x in need if getattr(args, x) is None]
    if missing:
        raise ParameterError(f"family {fam} needs {' '.join(missing)}")
    if fam == "pm-msr":
        return PmMsrCode(n, args.k, p)
    if fam == "pm-mbr":
        return PmMbrCode(n, args.k, args.d, p)
    if fam == "gpm":
        return GpmCode(n, args.k, args.t, p, seed=args.seed)
    if fam == "moulin":
        return MoulinCode(n, args.k, args.d, args.s, p, seed=args.seed)
    return DetCode(n, args.k, args.m, p)


def load_graph(path: str | None) -> Graph:
    return running_example() if path is None else Graph.load(path)


def _node_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def cmd_repair(args) -> tuple[dict, bool]:
    g = load_graph(args.graph)
    code = build_code(args, args.n or g.n)
    if code.n != g.n:
        raise ParameterError(f"code length n={code.n} differs from the graph's {g.n} nodes")
    tree = build_repair_tree(g, args.failed, select_helpers(g, args.failed, code.d))
    rng = np.random.default_rng(args.seed)
    codeword = code.encode_message(code.random_message(rng))
    if args.gamma is not None:
        report, _ = partial_repair(code, codeword, tree, args.gamma)
    elif args.rho is not None:
        report, _ = resilient_ip_transmit(code, codeword, tree, args.rho, args.seed)
    else:
        report, _ = simulate_repair(code, codeword, tree, args.strategy)
    out = {"code": repr(code), "failed": args.failed, "helpers": list(tree.helpers), **report.to_dict()}
    return out, report.verified


def cmd_retrieve(args) -> tuple[dict, bool]:
    g = load_graph(args.graph)
    code = build_code(args, args.n or g.n)
    attach = _node_list(args.attach)
    if args.nodes:
        nodes = _node_list(args.nodes)
    else:
        # the k nodes closest to the attachment set, ties by index
        dist = {v: min(bfs_distances(g, a).get(v, g.n) for a in attach) for v in range(g.n)}
        nodes = sorted(sorted(range(g.n), key=lambda v: (dist[v], v))[: code.k])
    plan = plan_retrieval(g, nodes, attach)
    rng = np.random.default_rng(args.seed)
    message = code.random_message(rng)
    codeword = code.encode_message(message)
    file_relay, relay = retrieve_relay(code, codeword, plan)
    out = {"code": repr(code), "plan": plan.to_dict(code.d), "relay": relay.to_dict()}
    ok = relay.verified and np.array_equal(file_relay, message)
    if isinstance(code, PmMbrCode):
        file_opt, opt = retrieve_mbr_optimal(code, codeword, plan)
        out["optimal"] = opt.to_dict()
        out["saving"] = relay.total_symbols - opt.total_symbols
        ok = ok and opt.verified and np.array_equal(file_opt, message)
    out["bounds"] = {str(a): retrieval_lower_bound(a, code.k, code.d, code.l, code.beta) for a in range(code.k + 1)}
    return out, bool(ok)


def checkpoints(graph: Graph, seed: int = 0) -> list[dict]:
    """Every reference number, recomputed on ``graph`` (failed node / collector at 0)."""
    rows = []

    def check(name, expected, measured):
        rows.append({"name": name, "expected": expected, "measured": measured, "pass": expected == measured})

    rng = np.random.default_rng(seed)
    tree = build_repair_tree(graph, 0, select_helpers(graph, 0, 6))

    check(
        "example 1 accounting (l=2, beta=1): AF, IP",
        [10, 8],
        [repair_cost(tree, 2, 1, s).total_symbols for s in ("af", "ip")],
    )

    gpm = GpmCode(graph.n, 5, 3, seed=seed)
    cw = gpm.encode_message(gpm.random_message(rng))
    reps = [simulate_repair(gpm, cw, tree, s)[0] for s in ("af", "ip")]
    check("example 2 GPM t=3: AF, IP, exact", [30, 24, True], [reps[0].total_symbols, reps[1].total_symbols, all(r.verified for r in reps)])

    check("Moulin k=5 d=6 s=4 file-space dimension", 125, int(file_space(5, 6, 4).shape[1]))

    moulin = MoulinCode(graph.n, 5, 6, 4, seed=seed)
    cw = moulin.encode_message(moulin.random_message(rng))
    reps = [simulate_repair(moulin, cw, tree, s)[0] for s in ("af", "ip")]
    check(
        "example 3 Moulin: AF, IP, lower bound, exact",
        [110, 96, 88, True],
        [reps[0].total_symbols, reps[1].total_symbols, int(reps[1].lower_bound), all(r.verified for r in reps)],
    )

    det = DetCode(graph.n, 6, 3)
    cw = det.encode_message(det.random_message(rng))
    reps = [simulate_repair(det, cw, tree, s)[0] for s in ("af", "ip")]
    check("example 4 determinant m=3: AF, IP, exact", [100, 80, True], [reps[0].total_symbols, reps[1].total_symbols, all(r.verified for r in reps)])

    mbr = PmMbrCode(graph.n, 5, 6)
    message = mbr.random_message(rng)
    cw = mbr.encode(message)
    plan = plan_retrieval(graph, [0, 1, 2, 3, 4], [0])
    f1, relay = retrieve_relay(mbr, cw, plan)
    f2, opt = retrieve_mbr_optimal(mbr, cw, plan)
    check(
        "retrieval PM MBR: relay, optimal, collector symbols, exact",
        [66, 39, 20, True],
        [relay.total_symbols, opt.total_symbols, opt.extra["dc_symbols"], bool(np.array_equal(f1, message) and np.array_equal(f2, message))],
    )

    check("retrieval lower bound MBR k=5 d=6: a=1, a=2", [2, 5], [retrieval_lower_bound(a, 5, 6, 6, 1) for a in (1, 2)])

    pm = PmMsrCode(graph.n, 4)
    cw = pm.encode_message(pm.random_message(rng))
    part, _ = partial_repair(pm, cw, tree, Fraction(1, 3))
    full, _ = simulate_repair(pm, cw, tree, "ip")
    check("partial repair gamma=1/3: partial, full, exact", [6, 10, True], [part.total_symbols, full.total_symbols, part.verified])

    casc = cascade_params(5, 6, 3)
    check(
        "cascade mu=3 parameters; cutset at MSR and MBR corners",
        [[26, 11, 125], 12, 20],
        [[casc.l, casc.beta, casc.M], cutset_bound(7, 4, 6, 3, 1), cutset_bound(7, 5, 6, 6, 1)],
    )

    res, _ = resilient_ip_transmit(pm, cw, tree, Fraction(1, 10), seed, budget="radius")
    check(
        "noisy edges rho=1/10: exact, total within bound",
        [True, True],
        [res.verified, Fraction(res.total_symbols) <= Fraction(res.extra["overhead_bound"])],
    )
    return rows


def cmd_reproduce(args) -> tuple[dict, bool]:
    rows = checkpoints(load_graph(args.graph), args.seed)
    ok = all(r["pass"] for r in rows)
    return {"checkpoints": rows, "passed": sum(r["pass"] for r in rows), "total": len(rows)}, ok


def _print_table(doc: dict) -> None:
    for r in doc["checkpoints"]:
        mark = "PASS" if r["pass"] else "FAIL"
        print(f"{mark}  {r['name']}: expected {r['expected']}, measured {r['measured']}")
    print(f"{doc['passed']}/{doc['total']} checkpoints pass")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphregen", description="Regenerating codes on graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--graph", help="graph JSON file (default: bundled 7-node example)")
        sp.add_argument("--modulus", type=int, default=DEFAULT_P, help="prime field size")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    def family(sp):
        sp.add_argument("--family", choices=FAMILIES, required=True)
        sp.add_argument("--n", type=int, help="number of nodes (default: graph size)")
        for name in ("k", "d", "t", "s", "m"):
            sp.add_argument(f"--{name}", type=int)

    rp = sub.add_parser("repair", help="repair a failed node over the graph")
    family(rp)
    common(rp)
    rp.add_argument("--failed", type=int, default=0)
    rp.add_argument("--strategy", choices=("af", "ip"), default="ip")
    rp.add_argument("--rho", type=Fraction, help="edge error fraction; protects IP messages with RS blocks")
    rp.add_argument("--gamma", type=Fraction, help="repair only this fraction of the node's coordinates")

    rt = sub.add_parser("retrieve", help="retrieve the file at a data collector")
    family(rt)
    common(rt)
    rt.add_argument("--attach", default="0", help="comma-separated nodes adjacent to the collector")
    rt.add_argument("--nodes", help="comma-separated retrieval set (default: k nodes nearest the collector)")

    rr = sub.add_parser("reproduce", help="recompute every reference number")
    common(rr)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        doc, ok = {"repair": cmd_repair, "retrieve": cmd_retrieve, "reproduce": cmd_reproduce}[args.command](args)
    except (ParameterError, GraphError, FieldError, ValueError) as exc:
        print(f"graphregen: error: {exc}", file=sys.stderr)
        return 2
    if args.command == "reproduce" and not args.json:
        _print_table(doc)
    else:
        print(json.dumps(doc, sort_keys=True, indent=None if args.json else 2))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
