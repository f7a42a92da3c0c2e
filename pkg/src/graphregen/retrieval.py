"""Data retrieval through a graph.

The data collector (DC) is a virtual node with index ``g.n`` joined to every
node of the attachment set ``K_bar``.  Traffic flows on the subgraph induced
by ``K`` plus the DC, along a BFS tree rooted at the DC.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import LinearCode, ParameterError
from .engine import BandwidthReport, generic_retrieve, retrieval_lower_bound
from .pm import PmMbrCode
from .topology import Graph, GraphError


@dataclass(frozen=True)
class RetrievalPlan:
    dc: int
    nodes: tuple[int, ...]
    attach: tuple[int, ...]
    parent: dict[int, int]
    depth: dict[int, int]
    order: tuple[int, ...]

    def children(self, v: int) -> list[int]:
        return sorted(c for c, par in self.parent.items() if par == v)

    def subtree(self, v: int) -> list[int]:
        out, stack = [], [v]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(self.children(x))
        return sorted(out)

    def rank(self, v: int) -> int:
        return self.order.index(v)

    def quotas(self, d: int, beta: int = 1) -> dict[int, int]:
        """Symbols node ``v`` contributes in the MBR scheme: ``(d - rank) * beta``."""
        return {v: (d - r) * beta for r, v in enumerate(self.order)}

    def edges_upward(self) -> list[int]:
        """Nodes in deepest-first order; each one's up-edge goes to ``parent``."""
        return sorted(self.parent, key=lambda v: (-self.depth[v], v))

    def to_dict(self, d: int | None = None) -> dict:
        out = {
            "dc": self.dc,
            "nodes": list(self.nodes),
            "attach": list(self.attach),
            "order": list(self.order),
            "parent": {str(v): p for v, p in sorted(self.parent.items())},
        }
        if d is not None:
            out["quotas"] = {str(v): q for v, q in self.quotas(d).items()}
        return out


def plan_retrieval(g: Graph, nodes, attach) -> RetrievalPlan:
    nodes = tuple(sorted(set(int(v) for v in nodes)))
    attach = tuple(sorted(set(int(v) for v in attach)))
    if not attach or not set(attach) <= set(nodes):
        raise GraphError("attachment set must be a non-empty subset of the retrieval set")
    dc = g.n
    depth = {v: 1 for v in attach}
    frontier = list(attach)
    parent = {v: dc for v in attach}
    allowed = set(nodes)
    while frontier:
        nxt = []
        for v in sorted(frontier):
            for w in g.neighbors(v):
                if w in allowed and w not in depth:
                    depth[w] = depth[v] + 1
                    nxt.append(w)
        for w in nxt:
            parent[w] = min(u for u in g.neighbors(w) if depth.get(u) == depth[w] - 1)
        frontier = nxt
    missing = sorted(allowed - set(depth))
    if missing:
        raise GraphError(f"nodes {missing} cannot reach the collector inside the retrieval graph")
    order = tuple(sorted(nodes, key=lambda v: (depth[v], v)))
    return RetrievalPlan(dc, nodes, attach, parent, depth, order)


def _edge_report(plan: RetrievalPlan, load: dict[int, int], strategy: str, code: LinearCode) -> BandwidthReport:
    edges = []
    for v in plan.edges_upward():
        edges.append((v, plan.parent[v], sum(load[u] for u in plan.subtree(v))))
    k, d, l, beta = len(plan.nodes), code.d, code.l, code.beta
    bound = sum(retrieval_lower_bound(len(plan.subtree(v)), k, d, l, beta) for v in plan.parent)
    # the collector's own incoming edges are the attachment edges; report the total reaching it
    reaching = sum(s for v, par, s in edges if par == plan.dc)
    return BandwidthReport(strategy, edges, bound, False, {"dc_symbols": reaching})


def _check(code: LinearCode, plan: RetrievalPlan):
    if len(plan.nodes) != code.k:
        raise ParameterError(f"retrieval needs exactly k={code.k} nodes, got {len(plan.nodes)}")


def retrieve_relay(code: LinearCode, codeword, plan: RetrievalPlan) -> tuple[np.ndarray, BandwidthReport]:
    """Every node forwards its full content and everything it receives."""
    _check(code, plan)
    report = _edge_report(plan, {v: code.l for v in plan.nodes}, "relay", code)
    message = generic_retrieve(code, codeword, plan.nodes)
    report.verified = bool(np.array_equal(code.encode_message(message), np.asarray(codeword) % code.p))
    return message, report


def retrieve_mbr_optimal(code: PmMbrCode, codeword, plan: RetrievalPlan) -> tuple[np.ndarray, BandwidthReport]:
    """Node of rank ``r`` sends only ``d - r`` evaluations; ``M`` symbols reach the collector."""
    if not isinstance(code, PmMbrCode):
        raise ParameterError("optimal retrieval is implemented for product-matrix MBR codes")
    _check(code, plan)
    shares = code.triangular_shares(codeword, plan.order)
    load = {v: len(shares[r]) for r, v in enumerate(plan.order)}
    report = _edge_report(plan, load, "optimal", code)
    message = code.triangular_decode(plan.order, shares)
    report.verified = bool(np.array_equal(code.encode_message(message), np.asarray(codeword) % code.p))
    return message, report
