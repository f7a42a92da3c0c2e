"""Storage graphs, helper selection and repair trees.

Ties are always broken by ascending node index, so helper sets, parents and
therefore bandwidth transcripts are reproducible.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from importlib import resources
from pathlib import Path


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u},{v}) outside [0,{self.n})")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(norm))
        if self.n and len(bfs_distances(self, 0)) != self.n:
            raise GraphError("graph is not connected")

    def neighbors(self, v: int) -> list[int]:
        return sorted({b for a, b in self.edges if a == v} | {a for a, b in self.edges if b == v})

    @classmethod
    def from_json(cls, doc: dict | str) -> "Graph":
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(int(doc["nodes"]), tuple(tuple(e) for e in doc["edges"]))

    @classmethod
    def load(cls, path: str | Path) -> "Graph":
        return cls.from_json(Path(path).read_text())

    def to_json(self) -> dict:
        return {"nodes": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def star(cls, n: int, center: int = 0) -> "Graph":
        return cls(n, tuple((center, i) for i in range(n) if i != center))


def running_example() -> Graph:
    """Seven nodes: root 0, children 1 and 2, grandchildren 3,4 (of 1) and 5,6 (of 2)."""
    text = resources.files("graphregen").joinpath("data/running_example.json").read_text()
    return Graph.from_json(text)


def bfs_distances(g: Graph, source: int, allowed: set[int] | None = None) -> dict[int, int]:
    adj = {v: g.neighbors(v) for v in range(g.n)}
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in dist and (allowed is None or w in allowed):
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def select_helpers(g: Graph, f: int, d: int) -> tuple[int, ...]:
    """The ``d`` nodes closest to ``f``, ties by ascending index."""
    if not 0 <= f < g.n:
        raise GraphError(f"failed node {f} not in graph")
    if d > g.n - 1:
        raise GraphError(f"need d <= n-1 = {g.n - 1}, got d={d}")
    dist = bfs_distances(g, f)
    ranked = sorted((dist[v], v) for v in dist if v != f)
    return tuple(sorted(v for _, v in ranked[:d]))


@dataclass(frozen=True)
class RepairTree:
    root: int
    parent: dict[int, int]
    depth: dict[int, int]
    subtree_size: dict[int, int]

    @property
    def helpers(self) -> tuple[int, ...]:
        return tuple(sorted(self.parent))

    @property
    def d(self) -> int:
        return len(self.parent)

    def children(self, v: int) -> list[int]:
        return sorted(c for c, par in self.parent.items() if par == v)

    def postorder(self) -> list[int]:
        """Helpers ordered deepest first (ties by index); every child precedes its parent."""
        return sorted(self.parent, key=lambda v: (-self.depth[v], v))

    def subtree(self, v: int) -> list[int]:
        out, stack = [], [v]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(self.children(x))
        return sorted(out)


def build_repair_tree(g: Graph, f: int, helpers) -> RepairTree:
    """BFS shortest-path tree rooted at ``f`` on the subgraph induced by
    ``helpers + {f}``; each node's parent is its lowest-index neighbour one
    level closer to ``f``."""
    hs = set(int(h) for h in helpers)
    if f in hs:
        raise GraphError("failed node cannot be its own helper")
    allowed = hs | {f}
    dist = bfs_distances(g, f, allowed)
    missing = sorted(hs - set(dist))
    if missing:
        raise GraphError(f"helpers {missing} unreachable from {f} inside the helper subgraph")
    parent = {}
    for v in hs:
        parent[v] = min(w for w in g.neighbors(v) if w in allowed and dist.get(w) == dist[v] - 1)
    size = {v: 1 for v in hs}
    for v in sorted(hs, key=lambda x: -dist[x]):
        if parent[v] != f:
            size[parent[v]] += size[v]
    return RepairTree(f, parent, {v: dist[v] for v in hs}, size)
