"""Acceptance gate: ten criteria, each printed as one PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) or through pytest, where
the lines appear in the terminal summary.
"""

from fractions import Fraction

import numpy as np
import pytest

from graphregen.channel import noisy_overhead_bound, resilient_ip_transmit
from graphregen.determinant import DetCode
from graphregen.engine import (
    cutset_bound,
    partial_repair,
    repair_cost,
    retrieval_lower_bound,
    simulate_repair,
)
from graphregen.gpm import GpmCode
from graphregen.matrix import mul, rank, rank_factorize
from graphregen.moulin import MoulinCode
from graphregen.multilinear import SpaceSpec, coboundary_v, coboundary_w
from graphregen.pm import PmMbrCode, PmMsrCode
from graphregen.retrieval import plan_retrieval, retrieve_mbr_optimal, retrieve_relay
from graphregen.topology import GraphError, build_repair_tree, running_example, select_helpers

RESULTS: dict[int, tuple[bool, str]] = {}

GRAPH = running_example()
TREE = build_repair_tree(GRAPH, 0, select_helpers(GRAPH, 0, 6))


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (bool(ok), detail)
    print(f"CRITERION {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def exact_repairs(code, trials: int, seed: int) -> int:
    rng = np.random.default_rng(seed)
    good = 0
    for _ in range(trials):
        cw = code.encode_message(code.random_message(rng))
        report, content = simulate_repair(code, cw, TREE, "ip")
        good += report.verified and np.array_equal(content, cw[:, 0])
    return good


def test_criterion_01_example_accounting():
    af = repair_cost(TREE, 2, 1, "af").total_symbols
    ip = repair_cost(TREE, 2, 1, "ip").total_symbols
    record(1, (af, ip) == (10, 8), f"l=2 beta=1: AF={af} (10), IP={ip} (8)")


def test_criterion_02_gpm():
    code = GpmCode(7, 5, 3)
    cw = code.encode_message(code.random_message(np.random.default_rng(0)))
    af = simulate_repair(code, cw, TREE, "af")[0].total_symbols
    ip = simulate_repair(code, cw, TREE, "ip")[0].total_symbols
    good = exact_repairs(code, 100, 2)
    record(2, (af, ip, good) == (30, 24, 100), f"GPM t=3: AF={af} (30), IP={ip} (24), exact {good}/100")


def test_criterion_03_moulin():
    code = MoulinCode(7, 5, 6, 4)
    dim = code.file_basis.shape[1]
    cw = code.encode_message(code.random_message(np.random.default_rng(0)))
    r_af = simulate_repair(code, cw, TREE, "af")[0]
    r_ip = simulate_repair(code, cw, TREE, "ip")[0]
    good = exact_repairs(code, 50, 3)
    got = (dim, r_af.total_symbols, r_ip.total_symbols, r_ip.lower_bound, good)
    record(
        3,
        got == (125, 110, 96, 88, 50),
        f"Moulin k=5 d=6 s=4: dim={dim} (125), AF={got[1]} (110), IP={got[2]} (96), bound={got[3]} (88), exact {good}/50",
    )


def test_criterion_04_determinant():
    code = DetCode(7, 6, 3)
    rng = np.random.default_rng(4)
    cw = code.encode_message(code.random_message(rng))
    af = simulate_repair(code, cw, TREE, "af")[0].total_symbols
    ip = simulate_repair(code, cw, TREE, "ip")[0].total_symbols
    helpers = TREE.helpers
    agree = 0
    for _ in range(100):
        cw = code.encode_message(code.random_message(rng))
        shares = {h: code.helper_share(0, h, cw[:, h]) for h in helpers}
        classic = code.classic_repair(0, helpers, shares)
        pipeline = code.ip_aggregate(0, helpers, shares, helpers)
        agree += np.array_equal(classic, pipeline) and np.array_equal(classic, cw[:, 0])
    ranks = [rank(code.repair_matrix(f), code.p) for f in range(7)]
    ok = (af, ip, agree) == (100, 80, 100) and max(ranks) <= 10
    record(4, ok, f"det m=3: AF={af} (100), IP={ip} (80), classic=pipeline {agree}/100, max rank(R)={max(ranks)} (<=10)")


def test_criterion_05_retrieval():
    code = PmMbrCode(7, 5, 6)
    x = code.random_message(np.random.default_rng(5))
    cw = code.encode(x)
    plan = plan_retrieval(GRAPH, [0, 1, 2, 3, 4], [0])
    f1, relay = retrieve_relay(code, cw, plan)
    f2, opt = retrieve_mbr_optimal(code, cw, plan)
    exact = np.array_equal(f1, x) and np.array_equal(f2, x)
    got = (relay.total_symbols, opt.total_symbols, relay.total_symbols - opt.total_symbols, opt.extra["dc_symbols"])
    ok = got == (66, 39, 27, 20) and code.M == 20 and exact
    record(5, ok, f"relay={got[0]} (66), optimal={got[1]} (39), saving={got[2]} (27), DC={got[3]} (20=M), exact={exact}")


def test_criterion_06_bounds():
    rng = np.random.default_rng(6)
    good = 0
    for _ in range(20):
        n = int(rng.integers(3, 15))
        d = int(rng.integers(1, n))
        k = int(rng.integers(1, d + 1))
        msr_l = d - k + 1
        msr = cutset_bound(n, k, d, msr_l, 1) == k * msr_l
        mbr = cutset_bound(n, k, d, d, 1) == k * d - k * (k - 1) // 2
        good += msr and mbr
    r1 = retrieval_lower_bound(1, 5, 6, 6, 1)
    r2 = retrieval_lower_bound(2, 5, 6, 6, 1)
    record(6, good == 20 and (r1, r2) == (2, 5), f"cutset corners {good}/20, retrieval bound a=1 -> {r1} (2), a=2 -> {r2} (5)")


def test_criterion_07_multilinear():
    p = 65537
    rng = np.random.default_rng(7)
    checks = bad = 0
    for dv in range(3):
        for dw in range(1, 6):
            spec = SpaceSpec(dv, dw)
            for a in range(4):
                for b in range(4):
                    if a + b > 4:
                        continue
                    v, w = rng.integers(0, p, dv), rng.integers(0, p, dw)
                    bad += mul(coboundary_w(w, a, b + 1, spec), coboundary_w(w, a, b, spec)).any()
                    if dv:
                        bad += mul(coboundary_v(v, a + 1, b, spec), coboundary_v(v, a, b, spec)).any()
                        vw = mul(coboundary_v(v, a, b + 1, spec), coboundary_w(w, a, b, spec))
                        wv = mul(coboundary_w(w, a + 1, b, spec), coboundary_v(v, a, b, spec))
                        bad += ((vw + wv) % p).any()
                    checks += 1
    instances = residual = 0
    for k in range(1, 6):
        for e in range(3):
            d = k + e
            for s in range(2, min(k + 1, 4) + 1):
                code = MoulinCode(d + 1, k, d, s, seed=k + e + s)
                for f in range(code.n):
                    residual += code.repair_identity_residual(f, code.random_phi(rng)).any()
                instances += 1
    record(
        7,
        bad == 0 and residual == 0,
        f"differential identities on {checks} cases ({bad} violations); "
        f"repair identity on {instances} instances ({residual} nonzero residuals)",
    )


def test_criterion_08_channel():
    code = PmMsrCode(7, 4)
    rho = Fraction(1, 10)
    noiseless = repair_cost(TREE, code.l, code.beta, "ip").total_symbols
    bound = noisy_overhead_bound(noiseless, len(TREE.parent), rho)
    results = {}
    for budget in ("floor", "radius"):
        good, worst = 0, 0
        for seed in range(50):
            rng = np.random.default_rng(seed)
            cw = code.encode_message(code.random_message(rng))
            report, _ = resilient_ip_transmit(code, cw, TREE, rho, seed, budget)
            good += report.verified
            worst = max(worst, report.total_symbols)
        results[budget] = (good, worst)
    ok = all(g == 50 and w <= bound for g, w in results.values())
    record(
        8,
        ok,
        f"rho=1/10: exact {results['floor'][0]}/50 (floor(rho N) errors), {results['radius'][0]}/50 (full radius); "
        f"total {results['floor'][1]} <= {float(bound)} = 1.25*{noiseless} + slack",
    )


def test_criterion_09_partial():
    code = PmMsrCode(7, 4)
    cw = code.encode_message(code.random_message(np.random.default_rng(9)))
    part, coords = partial_repair(code, cw, TREE, Fraction(1, 3))
    full, _ = simulate_repair(code, cw, TREE, "ip")
    ok = part.total_symbols == 6 and full.total_symbols == 10 and np.array_equal(coords, cw[:1, 0])
    record(9, ok, f"gamma=1/3: partial={part.total_symbols} (6), full={full.total_symbols} (10), exact={part.verified}")


def test_criterion_10_properties():
    trials = 50
    codes = [PmMsrCode(7, 4), PmMbrCode(7, 5, 6), GpmCode(7, 5, 3), MoulinCode(7, 5, 6, 4), DetCode(7, 6, 3)]
    counts = dict.fromkeys(["equivalence", "ip<=af", "bound<=ip", "additivity", "factorization", "retrieval"], 0)
    for seed in range(trials):
        rng = np.random.default_rng(1000 + seed)
        ok_eq = ok_le = ok_lb = ok_add = True
        for code in codes:
            cw = code.encode_message(code.random_message(rng))
            a, ca = simulate_repair(code, cw, TREE, "af")
            b, cb = simulate_repair(code, cw, TREE, "ip")
            ok_eq &= a.verified and b.verified and np.array_equal(ca, cb)
            ok_le &= b.total_symbols <= a.total_symbols
            ok_lb &= b.lower_bound <= b.total_symbols
            helpers = TREE.helpers
            shares = {h: code.helper_share(0, h, code.node_content(cw, h)) for h in helpers}
            cut = int(rng.integers(0, len(helpers) + 1))
            order = list(rng.permutation(helpers))
            lifted = {h: code.lift(0, helpers, h, shares[h]) for h in helpers}
            left = sum((lifted[h] for h in order[:cut]), np.zeros(code.l, dtype=np.int64)) % code.p
            right = sum((lifted[h] for h in order[cut:]), np.zeros(code.l, dtype=np.int64)) % code.p
            ok_add &= np.array_equal((left + right) % code.p, cw[:, 0])
        counts["equivalence"] += ok_eq
        counts["ip<=af"] += ok_le
        counts["bound<=ip"] += ok_lb
        counts["additivity"] += ok_add

        a = rng.integers(0, 65537, (int(rng.integers(1, 8)), int(rng.integers(1, 8))))
        a[:, -1] = a[:, 0]  # force some rank deficiency
        left, right = rank_factorize(a)
        counts["factorization"] += np.array_equal(mul(left, right), a % 65537) and left.shape[1] == rank(a)

        mbr = codes[1]
        x = mbr.random_message(rng)
        cw = mbr.encode(x)
        nodes = sorted(int(v) for v in rng.permutation(7)[:5])
        attach = [nodes[0]]
        try:
            plan = plan_retrieval(GRAPH, nodes, attach)
        except GraphError:  # first node not adjacent to the rest
            plan = plan_retrieval(GRAPH, nodes, nodes)
        counts["retrieval"] += np.array_equal(retrieve_relay(mbr, cw, plan)[0], retrieve_mbr_optimal(mbr, cw, plan)[0])
    ok = all(v == trials for v in counts.values())
    record(10, ok, ", ".join(f"{k} {v}/{trials}" for k, v in counts.items()))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
