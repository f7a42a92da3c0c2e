"""Noisy edges: Reed-Solomon protection of repair messages.

Each tree edge carries one RS block encoding its repair message.  An
adversarial channel corrupts up to ``floor(rho * N)`` symbols of a length-``N``
block; the block length is the smallest ``N`` with
``K <= N - 2 * ceil(rho * N)``, so the decoder always has enough radius.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

import numpy as np

from .base import LinearCode, ParameterError
from .engine import BandwidthReport, IpMessage, _aggregate, as_fraction, repair_cost
from .field import DEFAULT_P, inv
from .matrix import SingularMatrixError, mul, solve, vandermonde
from .topology import RepairTree


class DecodingError(RuntimeError):
    pass


def block_length(K: int, rho) -> int:
    r = as_fraction(rho)
    if not 0 <= r < Fraction(1, 2):
        raise ParameterError(f"rho must lie in [0, 1/2), got {rho}")
    N = K
    while K > N - 2 * ceil(r * N):
        N += 1
    return N


@dataclass
class RsCodec:
    """Evaluation code of length ``N`` and dimension ``K`` at points ``1..N``."""

    K: int
    rho: Fraction
    p: int = DEFAULT_P
    N: int = field(init=False)

    def __post_init__(self):
        self.rho = as_fraction(self.rho)
        if self.K < 1:
            raise ParameterError("message length must be positive")
        self.N = block_length(self.K, self.rho)
        if self.N >= self.p:
            raise ParameterError(f"block length {self.N} needs a field larger than {self.p}")
        self.points = list(range(1, self.N + 1))
        self.gen = vandermonde(self.points, self.K, self.p)

    @property
    def radius(self) -> int:
        return (self.N - self.K) // 2

    def encode(self, message) -> np.ndarray:
        m = np.asarray(message, dtype=np.int64) % self.p
        if m.shape != (self.K,):
            raise ParameterError(f"RS message must have {self.K} symbols")
        return mul(self.gen, m, self.p)

    def decode(self, received) -> np.ndarray:
        """Berlekamp-Welch decoding; raises :class:`DecodingError` beyond the radius."""
        r = np.asarray(received, dtype=np.int64) % self.p
        if r.shape != (self.N,):
            raise ParameterError(f"RS block must have {self.N} symbols")
        e, p = self.radius, self.p
        # unknowns: Q_0..Q_{e+K-1}, E_0..E_{e-1}; E is monic of degree e
        a = np.zeros((self.N, e + self.K + e), dtype=np.int64)
        b = np.zeros(self.N, dtype=np.int64)
        for i, x in enumerate(self.points):
            for j in range(e + self.K):
                a[i, j] = pow(x, j, p)
            for j in range(e):
                a[i, e + self.K + j] = (-int(r[i]) * pow(x, j, p)) % p
            b[i] = int(r[i]) * pow(x, e, p) % p
        try:
            sol = solve(a, b, p)
        except SingularMatrixError as exc:
            raise DecodingError("no error locator fits the received block") from exc
        q = sol[: e + self.K]
        loc = np.concatenate([sol[e + self.K :], [1]]).astype(np.int64)
        msg, rem = poly_divmod(q, loc, p)
        if np.any(rem % p):
            raise DecodingError("error locator does not divide the interpolant")
        msg = np.concatenate([msg, np.zeros(max(0, self.K - len(msg)), dtype=np.int64)])
        if np.any(msg[self.K :] % p):
            raise DecodingError("decoded polynomial has too high a degree")
        msg = msg[: self.K] % p
        if int(np.count_nonzero((self.encode(msg) - r) % p)) > e:
            raise DecodingError("nearest codeword lies beyond the decoding radius")
        return msg


def poly_divmod(num, den, p: int = DEFAULT_P) -> tuple[np.ndarray, np.ndarray]:
    """Quotient and remainder of coefficient vectors (lowest degree first)."""
    num = [int(c) % p for c in num]
    den = [int(c) % p for c in den]
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    lead = inv(den[-1], p)
    quot = [0] * max(1, len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1] * lead % p
        quot[i] = c
        for j, dj in enumerate(den):
            num[i + j] = (num[i + j] - c * dj) % p
    rem = num[: len(den) - 1] if len(den) > 1 else []
    return np.array(quot, dtype=np.int64), np.array(rem, dtype=np.int64)


class EdgeChannel:
    """Adds random nonzero errors at ``floor(rho * N)`` random positions of each block.

    ``budget="radius"`` instead spends the whole decoding radius, which is
    useful for stress tests at small block lengths.
    """

    def __init__(self, rho, seed: int = 0, p: int = DEFAULT_P, budget: str = "floor"):
        self.rho = as_fraction(rho)
        self.p = p
        if budget not in ("floor", "radius"):
            raise ParameterError("budget must be 'floor' or 'radius'")
        self.budget = budget
        self.rng = np.random.default_rng(seed)
        self.injected = 0

    def errors_for(self, codec: RsCodec) -> int:
        return codec.radius if self.budget == "radius" else floor(self.rho * codec.N)

    def transmit(self, block, codec: RsCodec) -> np.ndarray:
        out = np.asarray(block, dtype=np.int64).copy()
        t = self.errors_for(codec)
        if t:
            pos = self.rng.choice(len(out), size=t, replace=False)
            out[pos] = (out[pos] + self.rng.integers(1, self.p, size=t)) % self.p
            self.injected += t
        return out


def noisy_overhead_bound(noiseless_total: int, edges: int, rho) -> Fraction:
    """``T0 / (1 - 2 rho)`` plus ``2 / (1 - 2 rho) + 1`` rounding slack per edge."""
    r = as_fraction(rho)
    scale = 1 / (1 - 2 * r)
    return noiseless_total * scale + edges * (2 * scale + 1)


def resilient_ip_transmit(
    code: LinearCode, codeword, tree: RepairTree, rho, seed: int = 0, budget: str = "floor"
) -> tuple[BandwidthReport, np.ndarray | None]:
    """IP repair where every edge message travels as one RS block.

    An aggregating node never encodes its sum directly: it adds its own
    encoded contribution to the encodings of what it received, which equals
    the encoding of the aggregate by linearity.
    """
    channel = EdgeChannel(rho, seed, code.p, budget)
    f, helpers = tree.root, tree.helpers
    if len(helpers) != code.d:
        raise ParameterError(f"repair tree has {len(helpers)} helpers, code needs d={code.d}")
    failures: list[str] = []
    codecs: dict[int, RsCodec] = {}

    def codec_for(K: int) -> RsCodec:
        if K not in codecs:
            codecs[K] = RsCodec(K, channel.rho, code.p)
        return codecs[K]

    inbox: dict[int, list[IpMessage]] = {v: [] for v in list(helpers) + [f]}
    edges = []
    for v in tree.postorder():
        own = code.helper_share(f, v, code.node_content(codeword, v))
        msgs = inbox[v] + [IpMessage(raw={v: own})]
        raw = {h: s for m in msgs for h, s in m.raw.items()}
        aggregate = any(m.is_aggregated for m in msgs) or sum(len(s) for s in raw.values()) > code.l
        if aggregate:
            codec = codec_for(code.l)
            parts = [m.aggregated for m in msgs if m.is_aggregated]
            parts += [code.lift(f, helpers, h, s) for h, s in raw.items()]
            block = sum((codec.encode(x) for x in parts), np.zeros(codec.N, dtype=np.int64)) % code.p
        else:
            payload = np.concatenate([raw[h] for h in sorted(raw)])
            codec = codec_for(len(payload))
            block = codec.encode(payload)
        received = channel.transmit(block, codec)
        try:
            decoded = codec.decode(received)
        except DecodingError as exc:
            failures.append(f"edge {v}->{tree.parent[v]}: {exc}")
            decoded = np.zeros(codec.K, dtype=np.int64)
        if aggregate:
            out = IpMessage(aggregated=decoded)
        else:
            out, at = IpMessage(), 0
            for h in sorted(raw):
                out.raw[h] = decoded[at : at + len(raw[h])]
                at += len(raw[h])
        edges.append((v, tree.parent[v], codec.N))
        inbox[tree.parent[v]].append(out)

    content = code.finalize(f, helpers, _aggregate(code, f, helpers, inbox[f]))
    ok = not failures and bool(np.array_equal(content % code.p, np.asarray(codeword)[:, f] % code.p))
    noiseless = repair_cost(tree, code.l, code.beta, "ip").total_symbols
    bound = noisy_overhead_bound(noiseless, len(edges), channel.rho)
    extra = {
        "rho": str(channel.rho),
        "noiseless_total": noiseless,
        "overhead_bound": str(bound),
        "errors_injected": channel.injected,
    }
    if failures:
        extra["failures"] = failures
    return BandwidthReport("ip-rs", edges, None, ok, extra), (content if ok else None)
