"""Determinant codes (``d = k``) with pipeline repair, and cascade parameters.

Rows of the data matrix ``D`` are indexed by the ``m``-subsets of
``{0..d-1}`` in lexicographic order, columns by ``{0..d-1}``.  The codeword
is ``C = D @ Phi`` with ``Phi`` a ``d x n`` Vandermonde matrix in the points
``1..n``, so every ``d`` columns of ``Phi`` are invertible.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

from .base import CodeParams, LinearCode, ParameterError
from .field import DEFAULT_P
from .matrix import inverse, mul, rank_factorize, vandermonde


def tau(subset, j: int) -> int:
    """Number of elements of ``subset`` that are ``<= j``."""
    return sum(1 for i in subset if i <= j)


def subsets(d: int, size: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(d), size)) if 0 <= size <= d else []


def det_params(k: int, m: int) -> tuple[int, int, int]:
    """``(l, beta, M)`` of the mode-``m`` determinant code with ``d = k``."""
    if not 1 <= m <= k:
        raise ParameterError(f"mode must satisfy 1 <= m <= k, got m={m}, k={k}")
    return comb(k, m), comb(k - 1, m - 1), m * comb(k + 1, m + 1)


def cascade_params(k: int, d: int, mu: int) -> CodeParams:
    """Parameters of the cascade code of mode ``mu`` (no ``n``; reported as ``d + 1``)."""
    if not 1 <= mu <= k <= d:
        raise ParameterError(f"need 1 <= mu <= k <= d, got mu={mu}, k={k}, d={d}")
    e = d - k
    l = sum(e ** (mu - m) * comb(k, m) for m in range(mu + 1))
    beta = sum(e ** (mu - m) * comb(k - 1, m - 1) for m in range(1, mu + 1))
    M = sum(k * e ** (mu - m) * comb(k, m) for m in range(mu + 1)) - comb(k, mu + 1)
    return CodeParams(d + 1, k, d, l, beta, M, {"mu": mu})


class DetCode(LinearCode):
    family = "det"

    def __init__(self, n: int, k: int, m: int, p: int = DEFAULT_P):
        if not k <= n - 1:
            raise ParameterError(f"need k <= n-1, got n={n}, k={k}")
        l, beta, M = det_params(k, m)
        super().__init__(n, k, k, l, beta, M, p)
        self.m = m
        self.rows = subsets(k, m)
        self.row_index = {a: i for i, a in enumerate(self.rows)}
        self.prev_rows = subsets(k, m - 1)
        self.prev_index = {b: i for i, b in enumerate(self.prev_rows)}
        self.phi = vandermonde([i + 1 for i in range(n)], k, p).T.copy()
        self.v_labels = [(a, j) for a in self.rows for j in a]
        self.w_labels = [(s, j) for s in subsets(k, m + 1) for j in s[:-1]]
        self._cache: dict = {}

    def _extra_params(self) -> dict:
        return {"m": self.m}

    # -- encoding --------------------------------------------------------

    def data_matrix(self, message) -> np.ndarray:
        x = np.asarray(message, dtype=np.int64) % self.p
        if x.shape != (self.M,):
            raise ParameterError(f"message must have {self.M} symbols")
        nv = len(self.v_labels)
        w = {}
        for (s, j), val in zip(self.w_labels, x[nv:]):
            w[(s, j)] = int(val)
        # the largest element of each S closes the parity check
        for s in subsets(self.d, self.m + 1):
            top = s[-1]
            acc = sum((-1) ** tau(s, j) * w[(s, j)] for j in s[:-1])
            w[(s, top)] = (-acc * (-1) ** tau(s, top)) % self.p
        D = np.zeros((self.l, self.d), dtype=np.int64)
        for (a, j), val in zip(self.v_labels, x[:nv]):
            D[self.row_index[a], j] = val
        for a in self.rows:
            for j in range(self.d):
                if j not in a:
                    D[self.row_index[a], j] = w[(tuple(sorted(a + (j,))), j)]
        return D

    def encode(self, message) -> np.ndarray:
        return mul(self.data_matrix(message), self.phi, self.p)

    def encode_message(self, message) -> np.ndarray:
        return self.encode(message)

    def _build_generator(self) -> np.ndarray:
        g = np.zeros((self.n, self.l, self.M), dtype=np.int64)
        for t in range(self.M):
            e = np.zeros(self.M, dtype=np.int64)
            e[t] = 1
            g[:, :, t] = self.encode(e).T
        return g

    # -- repair ----------------------------------------------------------

    def repair_matrix(self, f: int) -> np.ndarray:
        """``R`` of shape ``l_{m-1} x l_m`` for failed node ``f``."""
        key = ("R", f)
        if key not in self._cache:
            r = np.zeros((len(self.prev_rows), self.l), dtype=np.int64)
            for a in self.rows:
                for j in a:
                    b = tuple(x for x in a if x != j)
                    r[self.prev_index[b], self.row_index[a]] = (-1) ** tau(a, j) * int(self.phi[j, f])
            self._cache[key] = r % self.p
        return self._cache[key]

    def repair_factors(self, f: int) -> tuple[np.ndarray, np.ndarray]:
        """Rank factorization ``R = L @ S``."""
        key = ("LS", f)
        if key not in self._cache:
            self._cache[key] = rank_factorize(self.repair_matrix(f), self.p)
        return self._cache[key]

    def share_size(self, f: int, h: int) -> int:
        return self.repair_factors(f)[1].shape[0]

    def helper_share(self, f: int, h: int, content) -> np.ndarray:
        """Coordinates of ``R C[:, h]`` in the column basis of ``L``."""
        return mul(self.repair_factors(f)[1], np.asarray(content, dtype=np.int64), self.p)

    def expand_share(self, f: int, share) -> np.ndarray:
        return mul(self.repair_factors(f)[0], np.asarray(share, dtype=np.int64), self.p)

    def _check_helpers(self, f: int, helpers) -> tuple[int, ...]:
        helpers = tuple(helpers)
        if len(helpers) != self.d or f in helpers or len(set(helpers)) != self.d:
            raise ParameterError(f"need {self.d} distinct helpers other than {f}")
        return helpers

    def classic_repair(self, f: int, helpers, shares: dict[int, np.ndarray]) -> np.ndarray:
        """Recover ``C[:, f]`` from the matrix ``R D = T Phi_H^{-1}``."""
        helpers = self._check_helpers(f, helpers)
        t = np.stack([self.expand_share(f, shares[h]) for h in helpers], axis=1)
        rd = mul(t, inverse(self.phi[:, list(helpers)], self.p), self.p)
        out = np.zeros(self.l, dtype=np.int64)
        for a in self.rows:
            acc = 0
            for i in a:
                b = tuple(x for x in a if x != i)
                acc += (-1) ** tau(a, i) * int(rd[self.prev_index[b], i])
            out[self.row_index[a]] = acc % self.p
        return out

    def selection(self, i: int) -> np.ndarray:
        """Signed selection ``P_i`` with ``W^(i) = P_i @ R``."""
        sel = np.zeros((self.l, len(self.prev_rows)), dtype=np.int64)
        for a in self.rows:
            if i in a:
                b = tuple(x for x in a if x != i)
                sel[self.row_index[a], self.prev_index[b]] = (-1) ** tau(a, i)
        return sel % self.p

    def pipeline_matrices(self, f: int, helpers) -> dict[int, np.ndarray]:
        """``U^(h)`` for each helper, with ``sum_h U^(h) C[:, h] = C[:, f]``."""
        helpers = self._check_helpers(f, helpers)
        key = ("U", f, helpers)
        if key not in self._cache:
            inv = inverse(self.phi[:, list(helpers)], self.p)
            r = self.repair_matrix(f)
            out = {}
            for pos, h in enumerate(helpers):
                acc = np.zeros((self.l, len(self.prev_rows)), dtype=np.int64)
                for y in range(self.d):
                    acc = (acc + int(inv[pos, y]) * self.selection(y)) % self.p
                out[h] = acc
            self._cache[key] = {h: mul(a, r, self.p) for h, a in out.items()}
            self._cache[("Ulift", f, helpers)] = {h: mul(a, self.repair_factors(f)[0], self.p) for h, a in out.items()}
        return self._cache[key]

    def lift(self, f: int, helpers, h: int, share) -> np.ndarray:
        """``U^(h) C[:, h]`` computed from the helper's share alone."""
        helpers = tuple(helpers)
        self.pipeline_matrices(f, helpers)
        return mul(self._cache[("Ulift", f, helpers)][h], np.asarray(share, dtype=np.int64), self.p)

    def ip_aggregate(self, f: int, A, shares: dict[int, np.ndarray], helpers) -> np.ndarray:
        helpers = tuple(helpers)
        if not set(A) <= set(helpers):
            raise ParameterError("A must be a subset of the helper set")
        out = np.zeros(self.l, dtype=np.int64)
        for h in A:
            out = (out + self.lift(f, helpers, h, shares[h])) % self.p
        return out
