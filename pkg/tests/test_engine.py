import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphregen.base import CodeParams, ParameterError
from graphregen.determinant import DetCode
from graphregen.engine import (
    IpMessage,
    cutset_bound,
    generic_retrieve,
    partial_file_bound,
    partial_repair,
    repair_cost,
    repair_lower_bound,
    retrieval_lower_bound,
    simulate_repair,
    subset_repair_bound,
)
from graphregen.gpm import GpmCode
from graphregen.moulin import MoulinCode
from graphregen.pm import PmMbrCode, PmMsrCode
from graphregen.topology import Graph, build_repair_tree, select_helpers


@pytest.fixture(scope="module")
def codes():
    return [PmMsrCode(7, 4), PmMbrCode(7, 5, 6), GpmCode(7, 5, 3), MoulinCode(7, 5, 6, 4), DetCode(7, 6, 3)]


def test_example_cost_accounting(tree):
    assert repair_cost(tree, 2, 1, "af").total_symbols == 10
    assert repair_cost(tree, 2, 1, "ip").total_symbols == 8
    assert repair_cost(tree, 6, 3, "ip").total_symbols == 24
    assert repair_cost(tree, 26, 11, "af").total_symbols == 110
    assert repair_cost(tree, 20, 10, "ip").total_symbols == 80
    with pytest.raises(ParameterError):
        repair_cost(tree, 2, 1, "xx")


@pytest.mark.parametrize(
    "index,af,ip,bound",
    [(0, 10, 10, 10), (1, 10, 10, 10), (2, 30, 24, 24), (3, 110, 96, 88), (4, 100, 80, 60)],
)
def test_simulated_totals(codes, tree, rng, index, af, ip, bound):
    code = codes[index]
    cw = code.encode_message(code.random_message(rng))
    r_af, c_af = simulate_repair(code, cw, tree, "af")
    r_ip, c_ip = simulate_repair(code, cw, tree, "ip")
    assert (r_af.total_symbols, r_ip.total_symbols) == (af, ip)
    assert r_ip.lower_bound == bound
    assert r_af.verified and r_ip.verified
    assert np.array_equal(c_af, c_ip)
    cost = repair_cost(tree, code.l, code.beta, "ip")
    assert cost.per_edge == r_ip.per_edge


def test_strategy_equivalence_many_seeds(codes, tree):
    for code in codes:
        for seed in range(10):
            rng = np.random.default_rng(seed)
            cw = code.encode_message(code.random_message(rng))
            a, ca = simulate_repair(code, cw, tree, "af")
            b, cb = simulate_repair(code, cw, tree, "ip")
            assert a.verified and b.verified and np.array_equal(ca, cb)
            assert b.total_symbols <= a.total_symbols
            assert b.lower_bound <= b.total_symbols


def test_ip_equals_af_when_no_subtree_overflows(graph):
    tree = build_repair_tree(graph, 0, select_helpers(graph, 0, 6))
    # l large enough that nothing aggregates
    assert repair_cost(tree, 10, 1, "ip").total_symbols == repair_cost(tree, 10, 1, "af").total_symbols


def test_helper_count_mismatch(graph, rng):
    code = PmMsrCode(7, 3)
    tree = build_repair_tree(graph, 0, select_helpers(graph, 0, 6))
    cw = code.encode_message(code.random_message(rng))
    with pytest.raises(ParameterError):
        simulate_repair(code, cw, tree, "ip")


def test_ip_message_counts():
    raw = IpMessage(raw={3: np.array([1, 2]), 1: np.array([5])})
    assert raw.symbol_count() == 3
    assert list(raw.symbols()) == [5, 1, 2]
    agg = IpMessage(aggregated=np.array([1, 2, 3, 4]))
    assert agg.is_aggregated and agg.symbol_count() == 4
    assert IpMessage().symbol_count() == 0


def test_report_json(codes, tree, rng):
    code = codes[3]
    cw = code.encode_message(code.random_message(rng))
    report, _ = simulate_repair(code, cw, tree, "ip")
    doc = json.loads(report.to_json())
    assert set(doc) == {"strategy", "total_symbols", "per_edge", "lower_bound", "verified"}
    assert doc["per_edge"][0] == {"from": 3, "to": 1, "symbols": 11}
    assert doc["lower_bound"] == 88
    assert sum(e["symbols"] for e in doc["per_edge"]) == doc["total_symbols"]


def test_fractional_lower_bound_serialized():
    g = Graph.path(4)
    tree = build_repair_tree(g, 0, [1, 2, 3])
    b = repair_lower_bound(tree, CodeParams(4, 2, 3, 4, 2, 8))
    # subtrees 3, 2, 1 with d-k+1 = 2: max(4, 12/3), max(4, 8/3), 1*2
    assert b == Fraction(4) + Fraction(4) + Fraction(2)
    assert subset_repair_bound(2, 2, 3, 5, 1) == Fraction(10, 3)


def test_lower_bound_examples(tree):
    assert repair_lower_bound(tree, CodeParams(7, 5, 6, 26, 11, 125)) == 88
    assert repair_lower_bound(tree, CodeParams(7, 6, 6, 20, 10, 105)) == 60
    # MSR: every internal edge needs l
    assert subset_repair_bound(3, 4, 6, 3, 1) == 3
    star = Graph.star(7)
    t = build_repair_tree(star, 0, select_helpers(star, 0, 6))
    assert repair_lower_bound(t, CodeParams(7, 5, 6, 26, 11, 125)) == 6 * 11


def _corner_cases():
    return st.integers(2, 12).flatmap(
        lambda n: st.integers(1, n - 1).flatmap(lambda d: st.tuples(st.just(n), st.integers(1, d), st.just(d)))
    )


@settings(max_examples=40, deadline=None)
@given(_corner_cases(), st.integers(1, 4))
def test_cutset_corner_points(nkd, beta):
    n, k, d = nkd
    l_msr = (d - k + 1) * beta
    assert cutset_bound(n, k, d, l_msr, beta) == k * l_msr
    l_mbr = d * beta
    assert cutset_bound(n, k, d, l_mbr, beta) == (k * d - k * (k - 1) // 2) * beta
    assert cutset_bound(n, k, d, 0, beta) == 0


def test_retrieval_bound_examples():
    assert retrieval_lower_bound(1, 5, 6, 6, 1) == 2
    assert retrieval_lower_bound(2, 5, 6, 6, 1) == 5
    assert retrieval_lower_bound(0, 5, 6, 6, 1) == 0
    assert retrieval_lower_bound(4, 4, 6, 3, 1) == 12
    with pytest.raises(ParameterError):
        retrieval_lower_bound(6, 5, 6, 6, 1)


def test_partial_file_bound_reduces_to_cutset():
    for n, k, d, l, beta in [(7, 4, 6, 3, 1), (7, 5, 6, 26, 11), (7, 5, 6, 6, 1)]:
        assert partial_file_bound(k, d, l, beta, 1) == cutset_bound(n, k, d, l, beta)
    assert partial_file_bound(4, 6, 3, 1, Fraction(1, 3)) == 12


def test_partial_repair(tree, rng):
    code = PmMsrCode(7, 4)
    cw = code.encode_message(code.random_message(rng))
    r, part = partial_repair(code, cw, tree, Fraction(1, 3))
    assert r.total_symbols == 6 and r.verified
    assert np.array_equal(part, cw[:1, 0])
    r, _ = partial_repair(code, cw, tree, 0.34)
    assert r.total_symbols == 8
    full, _ = simulate_repair(code, cw, tree, "ip")
    r, part = partial_repair(code, cw, tree, 1)
    assert r.per_edge == full.per_edge and np.array_equal(part, cw[:, 0])
    with pytest.raises(ParameterError):
        partial_repair(code, cw, tree, 0)


def test_generic_retrieve_roundtrip(codes, rng):
    for code in codes:
        x = code.random_message(rng)
        cw = code.encode_message(x)
        nodes = sorted(rng.permutation(7)[: code.k])
        assert np.array_equal(generic_retrieve(code, cw, nodes), x)
