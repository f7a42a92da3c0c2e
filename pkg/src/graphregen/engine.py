"""Repair simulation on a repair tree, bandwidth accounting and bounds.

A code takes part in graph repair through four methods:
``helper_share(f, h, content)``, ``lift(f, helpers, h, share)`` (linear in
the share, returns ``l`` symbols), ``finalize(f, helpers, aggregate)`` and
``share_size(f, h)``.  Summing the lifts of all helpers and finalizing must
give back the erased content.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

import numpy as np

from .base import CodeParams, LinearCode, ParameterError
from .matrix import SingularMatrixError, rank, solve
from .topology import RepairTree

STRATEGIES = ("af", "ip")


class RepairError(RuntimeError):
    pass


@dataclass
class IpMessage:
    """Either raw helper shares or one aggregated vector of ``l`` symbols."""

    raw: dict[int, np.ndarray] = field(default_factory=dict)
    aggregated: np.ndarray | None = None

    @property
    def is_aggregated(self) -> bool:
        return self.aggregated is not None

    def symbol_count(self) -> int:
        if self.aggregated is not None:
            return len(self.aggregated)
        return sum(len(s) for s in self.raw.values())

    def symbols(self) -> np.ndarray:
        """Flat payload, helper shares in ascending helper order."""
        if self.aggregated is not None:
            return np.asarray(self.aggregated, dtype=np.int64)
        if not self.raw:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([self.raw[h] for h in sorted(self.raw)]).astype(np.int64)


@dataclass
class BandwidthReport:
    strategy: str
    per_edge: list[tuple[int, int, int]]
    lower_bound: Fraction | int | None = None
    verified: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def total_symbols(self) -> int:
        return sum(s for _, _, s in self.per_edge)

    def edge(self, child: int) -> int:
        return next(s for c, _, s in self.per_edge if c == child)

    def to_dict(self) -> dict:
        lb = self.lower_bound
        if isinstance(lb, Fraction):
            lb = lb.numerator if lb.denominator == 1 else f"{lb.numerator}/{lb.denominator}"
        out = {
            "strategy": self.strategy,
            "total_symbols": self.total_symbols,
            "per_edge": [{"from": a, "to": b, "symbols": s} for a, b, s in self.per_edge],
            "lower_bound": lb,
            "verified": bool(self.verified),
        }
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# -- bounds ----------------------------------------------------------------


def cutset_bound(n: int, k: int, d: int, l: int, beta: int) -> int:
    """Largest file size storable with the given ``(n, k, d, l, beta)``."""
    if not k <= d <= n - 1:
        raise ParameterError(f"need k <= d <= n-1, got n={n} k={k} d={d}")
    return sum(min(l, (d - i + 1) * beta) for i in range(1, k + 1))


def subset_repair_bound(size: int, k: int, d: int, l: int, beta: int) -> Fraction:
    """Symbols a set of ``size`` helpers must send toward the failed node."""
    if size >= d - k + 1:
        return max(Fraction((d - k + 1) * beta), Fraction(size * l, d))
    return Fraction(size * beta)


def repair_lower_bound(tree: RepairTree, params: CodeParams) -> Fraction:
    """Sum of the per-edge bounds over the subtree behind each up-edge."""
    return sum(
        (subset_repair_bound(tree.subtree_size[v], params.k, params.d, params.l, params.beta) for v in tree.parent),
        Fraction(0),
    )


def retrieval_lower_bound(a: int, k: int, d: int, l: int, beta: int) -> int:
    """Symbols that ``a`` of the ``k`` retrieval nodes must send to the collector."""
    if not 0 <= a <= k:
        raise ParameterError(f"need 0 <= a <= k, got a={a}, k={k}")
    return sum(min(l, (d - i) * beta) for i in range(k - a, k))


def partial_file_bound(k: int, d: int, l: int, beta: int, gamma) -> Fraction:
    """File-size bound when repair restores a fraction ``gamma`` of a node."""
    g = as_fraction(gamma)
    return sum((min(Fraction(l), (d - i) * beta + l * (1 - g)) for i in range(k)), Fraction(0))


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x).limit_denominator(10**6)


# -- cost-only accounting ----------------------------------------------------


def repair_cost(tree: RepairTree, l: int, beta: int, strategy: str) -> BandwidthReport:
    """Per-edge symbol counts without moving any data."""
    strategy = _check_strategy(strategy)
    edges = []
    for v in tree.postorder():
        raw = tree.subtree_size[v] * beta
        edges.append((v, tree.parent[v], raw if strategy == "af" else min(raw, l)))
    return BandwidthReport(strategy, edges)


def _check_strategy(strategy: str) -> str:
    s = strategy.lower()
    if s not in STRATEGIES:
        raise ParameterError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    return s


# -- symbol-level simulation -----------------------------------------------


def _aggregate(code: LinearCode, f: int, helpers, msgs: list[IpMessage], coords=None) -> np.ndarray:
    out = None
    for m in msgs:
        if m.is_aggregated:
            vec = m.aggregated
        else:
            vec = np.zeros(code.l if coords is None else len(coords), dtype=np.int64)
            for h, share in m.raw.items():
                lifted = code.lift(f, helpers, h, share)
                vec = (vec + (lifted if coords is None else lifted[coords])) % code.p
        out = vec if out is None else (out + vec) % code.p
    return out


def _merge(msgs: list[IpMessage]) -> IpMessage:
    raw = {}
    for m in msgs:
        raw.update(m.raw)
    return IpMessage(raw=raw)


def _run_tree(code: LinearCode, codeword, tree: RepairTree, cap: int | None, coords=None):
    """Move messages up the tree.  Nodes switch to an aggregated vector as
    soon as the raw payload would exceed ``cap`` symbols (``None``: never).
    Returns the per-edge transcript and the messages arriving at the root."""
    f, helpers = tree.root, tree.helpers
    if len(helpers) != code.d:
        raise ParameterError(f"repair tree has {len(helpers)} helpers, code needs d={code.d}")
    inbox: dict[int, list[IpMessage]] = {v: [] for v in list(helpers) + [f]}
    edges = []
    for v in tree.postorder():
        own = IpMessage(raw={v: code.helper_share(f, v, code.node_content(codeword, v))})
        msgs = inbox[v] + [own]
        merged = _merge(msgs)
        if any(m.is_aggregated for m in msgs) or (cap is not None and merged.symbol_count() > cap):
            out = IpMessage(aggregated=_aggregate(code, f, helpers, msgs, coords))
        else:
            out = merged
        edges.append((v, tree.parent[v], out.symbol_count()))
        inbox[tree.parent[v]].append(out)
    return edges, inbox[f]


def simulate_repair(code: LinearCode, codeword, tree: RepairTree, strategy: str = "ip") -> tuple[BandwidthReport, np.ndarray]:
    """Repair ``tree.root`` from its helpers; returns the report and the rebuilt content."""
    strategy = _check_strategy(strategy)
    cap = None if strategy == "af" else code.l
    edges, arrived = _run_tree(code, codeword, tree, cap)
    f = tree.root
    content = code.finalize(f, tree.helpers, _aggregate(code, f, tree.helpers, arrived))
    report = BandwidthReport(
        strategy,
        edges,
        repair_lower_bound(tree, code.params()),
        bool(np.array_equal(content % code.p, np.asarray(codeword)[:, f] % code.p)),
    )
    return report, content


def partial_repair(code: LinearCode, codeword, tree: RepairTree, gamma) -> tuple[BandwidthReport, np.ndarray]:
    """Restore the first ``ceil(gamma * l)`` coordinates of the failed node.

    Each up-edge carries ``min(ceil(gamma * l), |subtree| * beta)`` symbols.
    """
    g = as_fraction(gamma)
    if not 0 < g <= 1:
        raise ParameterError(f"gamma must lie in (0, 1], got {gamma}")
    if type(code).finalize is not LinearCode.finalize:
        raise ParameterError(f"partial repair needs an identity finalize step, {code.family} has its own")
    c = ceil(g * code.l)
    coords = np.arange(c)
    edges, arrived = _run_tree(code, codeword, tree, c, coords)
    f = tree.root
    part = _aggregate(code, f, tree.helpers, arrived, coords)
    ok = np.array_equal(part % code.p, np.asarray(codeword)[:c, f] % code.p)
    report = BandwidthReport("partial-ip", edges, None, bool(ok), {"gamma": str(g), "coordinates": c})
    return report, part


def generic_retrieve(code: LinearCode, codeword, nodes) -> np.ndarray:
    """Solve for the message from the full contents of ``nodes``."""
    nodes = list(nodes)
    g = code.generator()[nodes].reshape(-1, code.M)
    if rank(g, code.p) != code.M:
        raise RepairError(f"nodes {nodes} do not determine the file")
    values = np.asarray(codeword)[:, nodes].T.reshape(-1)
    try:
        return solve(g, values, code.p)
    except SingularMatrixError as exc:
        raise RepairError("node contents are inconsistent with the code") from exc

