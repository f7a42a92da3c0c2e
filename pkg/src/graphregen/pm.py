"""Product-matrix codes in polynomial (evaluation) form.

MSR: node ``i`` stores the coefficients of
``g_i(z) = s1(a_i, z) + a_i^(k-1) s2(a_i, z)`` with ``s1, s2`` symmetric of
degree ``<= k-2`` in each variable.  MBR: node ``i`` stores the ``d``
coefficients of ``g_i(z) = s(x_i, z)`` where ``s`` has the symmetric
coefficient matrix ``[[S, T], [T^T, 0]]``.

Node ``i`` uses evaluation point ``i + 1``.
"""

from __future__ import annotations

from math import comb

import numpy as np

from .base import LinearCode, ParameterError
from .field import DEFAULT_P, inv, power
from .matrix import inverse, mul, solve, vandermonde


def poly_eval(coeffs, x: int, p: int = DEFAULT_P) -> int:
    acc = 0
    for c in reversed([int(c) for c in coeffs]):
        acc = (acc * x + c) % p
    return acc


def poly_mul(a, b, p: int = DEFAULT_P) -> np.ndarray:
    out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
    for i, c in enumerate(a):
        out[i : i + len(b)] = (out[i : i + len(b)] + int(c) * np.asarray(b, dtype=np.int64)) % p
    return out


def lagrange_coeffs(points, h: int, p: int = DEFAULT_P) -> np.ndarray:
    """Coefficients ``l_0..l_{d-1}`` of the Lagrange basis polynomial that is
    1 at ``points[h]`` and 0 at every other point."""
    pts = [int(x) % p for x in points]
    if len(set(pts)) != len(pts):
        raise ValueError("Lagrange points must be distinct")
    ah = pts[h]
    poly = np.array([1], dtype=np.int64)
    denom = 1
    for i, ai in enumerate(pts):
        if i == h:
            continue
        poly = poly_mul(poly, [(-ai) % p, 1], p)
        denom = denom * (ah - ai) % p
    return poly * inv(denom, p) % p


def interpolate(points, values, p: int = DEFAULT_P) -> np.ndarray:
    """Coefficients of the unique polynomial of degree ``< len(points)``."""
    return solve(vandermonde(points, len(points), p), np.asarray(values, dtype=np.int64), p)


def _sym_from_upper(vals, size: int) -> np.ndarray:
    s = np.zeros((size, size), dtype=np.int64)
    it = iter(vals)
    for a in range(size):
        for b in range(a, size):
            s[a, b] = s[b, a] = next(it)
    return s


def _upper_of(s: np.ndarray) -> list[int]:
    return [int(s[a, b]) for a in range(s.shape[0]) for b in range(a, s.shape[0])]


class PmMsrCode(LinearCode):
    family = "pm-msr"

    def __init__(self, n: int, k: int, p: int = DEFAULT_P):
        if k < 2:
            raise ParameterError("PM MSR needs k >= 2")
        d = 2 * (k - 1)
        if d > n - 1:
            raise ParameterError(f"PM MSR needs n-1 >= d = 2(k-1) = {d}, got n={n}")
        super().__init__(n, k, d, k - 1, 1, k * (k - 1), p)
        self.points = [i + 1 for i in range(n)]
        self._lift_cache: dict = {}

    def split_message(self, message) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(message, dtype=np.int64) % self.p
        if x.shape != (self.M,):
            raise ParameterError(f"message must have {self.M} symbols")
        half = self.M // 2
        return _sym_from_upper(x[:half], self.l), _sym_from_upper(x[half:], self.l)

    def join_message(self, s1, s2) -> np.ndarray:
        for s in (s1, s2):
            s = np.asarray(s) % self.p
            if s.shape != (self.l, self.l):
                raise ParameterError(f"coefficient matrices must be {self.l}x{self.l}")
            if not np.array_equal(s, s.T):
                raise ParameterError("coefficient matrices must be symmetric")
        return np.array(_upper_of(np.asarray(s1) % self.p) + _upper_of(np.asarray(s2) % self.p), dtype=np.int64)

    def encode(self, file) -> np.ndarray:
        """Codeword (``l x n``) from an ``M``-vector or a pair ``(S1, S2)``."""
        if isinstance(file, tuple):
            file = self.join_message(*file)
        s1, s2 = self.split_message(file)
        phi = vandermonde(self.points, self.l, self.p)
        lam = np.array([power(a, self.k - 1, self.p) for a in self.points], dtype=np.int64)
        rows = (mul(phi, s1, self.p) + lam[:, None] * mul(phi, s2, self.p)) % self.p
        return rows.T.copy()

    def encode_message(self, message) -> np.ndarray:
        return self.encode(message)

    def _build_generator(self) -> np.ndarray:
        g = np.zeros((self.n, self.l, self.M), dtype=np.int64)
        for m in range(self.M):
            e = np.zeros(self.M, dtype=np.int64)
            e[m] = 1
            g[:, :, m] = self.encode(e).T
        return g

    # -- repair ----------------------------------------------------------

    def helper_share(self, f: int, h: int, content) -> np.ndarray:
        return np.array([poly_eval(content, self.points[f], self.p)], dtype=np.int64)

    def ip_vector(self, f: int, helpers: tuple[int, ...], h: int) -> np.ndarray:
        """Column multiplying ``g_h(a_f)`` in the intermediate-processing message."""
        key = (f, tuple(helpers), h)
        if key not in self._lift_cache:
            helpers = tuple(helpers)
            lc = lagrange_coeffs([self.points[x] for x in helpers], helpers.index(h), self.p)
            lc = np.concatenate([lc, np.zeros(self.d - len(lc), dtype=np.int64)])
            af = power(self.points[f], self.k - 1, self.p)
            self._lift_cache[key] = (lc[: self.l] + af * lc[self.l : 2 * self.l]) % self.p
        return self._lift_cache[key]

    def lift(self, f: int, helpers, h: int, share) -> np.ndarray:
        return int(np.asarray(share)[0]) * self.ip_vector(f, tuple(helpers), h) % self.p

    def ip_message(self, f: int, A, shares: dict[int, np.ndarray], helpers) -> np.ndarray:
        """``xi(f, A)``: sum of lifted helper shares over ``A``."""
        helpers = tuple(helpers)
        if not set(A) <= set(helpers):
            raise ParameterError("A must be a subset of the helper set")
        out = np.zeros(self.l, dtype=np.int64)
        for h in A:
            out = (out + self.lift(f, helpers, h, shares[h])) % self.p
        return out

    def _extra_params(self) -> dict:
        return {}


class PmMbrCode(LinearCode):
    family = "pm-mbr"

    def __init__(self, n: int, k: int, d: int, p: int = DEFAULT_P):
        if not 1 <= k <= d <= n - 1:
            raise ParameterError("PM MBR needs 1 <= k <= d <= n-1")
        super().__init__(n, k, d, d, 1, k * d - comb(k, 2), p)
        self.points = [i + 1 for i in range(n)]

    def split_message(self, message) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(message, dtype=np.int64) % self.p
        if x.shape != (self.M,):
            raise ParameterError(f"message must have {self.M} symbols")
        ns = comb(self.k + 1, 2)
        return _sym_from_upper(x[:ns], self.k), x[ns:].reshape(self.k, self.d - self.k)

    def join_message(self, s, t) -> np.ndarray:
        s = np.asarray(s, dtype=np.int64) % self.p
        if not np.array_equal(s, s.T):
            raise ParameterError("S must be symmetric")
        return np.array(_upper_of(s) + [int(v) for v in np.asarray(t).ravel() % self.p], dtype=np.int64)

    def coefficient_matrix(self, message) -> np.ndarray:
        s, t = self.split_message(message)
        b = np.zeros((self.d, self.d), dtype=np.int64)
        b[: self.k, : self.k] = s
        b[: self.k, self.k :] = t
        b[self.k :, : self.k] = t.T
        return b

    def encode(self, message) -> np.ndarray:
        psi = vandermonde(self.points, self.d, self.p)
        return mul(psi, self.coefficient_matrix(message), self.p).T.copy()

    def encode_message(self, message) -> np.ndarray:
        return self.encode(message)

    def _build_generator(self) -> np.ndarray:
        g = np.zeros((self.n, self.l, self.M), dtype=np.int64)
        for m in range(self.M):
            e = np.zeros(self.M, dtype=np.int64)
            e[m] = 1
            g[:, :, m] = self.encode(e).T
        return g

    def decode_rows(self, nodes, rows) -> np.ndarray:
        """Recover the message from the full contents (``g`` coefficients) of ``k`` nodes."""
        nodes = list(nodes)
        if len(nodes) != self.k:
            raise ParameterError(f"need exactly k={self.k} nodes")
        psi = vandermonde([self.points[i] for i in nodes], self.d, self.p)
        rows = np.asarray(rows, dtype=np.int64) % self.p
        p1, p2 = psi[:, : self.k], psi[:, self.k :]
        p1inv = inverse(p1, self.p)
        t = mul(p1inv, rows[:, self.k :], self.p)
        s = mul(p1inv, (rows[:, : self.k] - mul(p2, t.T, self.p)) % self.p, self.p)
        return self.join_message(s, t)

    # -- optimal retrieval ----------------------------------------------

    def triangular_points(self, order) -> list[int]:
        """Evaluation points: the ordered nodes' points, then ``d-k`` points of
        the remaining nodes in ascending index."""
        order = list(order)
        rest = [self.points[i] for i in range(self.n) if i not in order]
        return [self.points[i] for i in order] + rest[: self.d - len(order)]

    def triangular_shares(self, codeword, order) -> list[np.ndarray]:
        """Node at rank ``r`` (0-based) sends ``g(x_j)`` for ``j = r..d-1``."""
        order = list(order)
        if len(order) != self.k or len(set(order)) != self.k:
            raise ParameterError(f"need k={self.k} distinct nodes")
        pts = self.triangular_points(order)
        out = []
        for r, v in enumerate(order):
            col = np.asarray(codeword)[:, v]
            out.append(np.array([poly_eval(col, pts[j], self.p) for j in range(r, self.d)], dtype=np.int64))
        return out

    def triangular_decode(self, order, shares) -> np.ndarray:
        """Sequential interpolation: reuse ``g_r(x_s) = g_s(x_r)`` for earlier ranks."""
        order = list(order)
        pts = self.triangular_points(order)
        polys: list[np.ndarray] = []
        for r in range(self.k):
            known = [poly_eval(polys[s], pts[r], self.p) for s in range(r)]
            vals = known + [int(x) for x in shares[r]]
            polys.append(interpolate(pts, vals, self.p))
        return self.decode_rows(order, np.array(polys))

    # -- repair (plain: d shares interpolate g_f) -------------------------

    def helper_share(self, f: int, h: int, content) -> np.ndarray:
        return np.array([poly_eval(content, self.points[f], self.p)], dtype=np.int64)

    def lift(self, f: int, helpers, h: int, share) -> np.ndarray:
        helpers = tuple(helpers)
        lc = lagrange_coeffs([self.points[x] for x in helpers], helpers.index(h), self.p)
        return int(np.asarray(share)[0]) * lc % self.p
