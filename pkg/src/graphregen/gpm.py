"""Generalized product-matrix MSR codes.

The file is a functional ``phi`` on ``X (x) S^t Y`` with ``X = F^t`` and
``Y = F^(k-t+1)``; its coordinates in the basis ``e_c (x) e_J`` (``c`` major,
``J`` a monomial of ``S^t Y``) are the ``M`` message symbols.  Node ``i``
stores ``phi`` on ``x_i (x) y_i (.) e_I`` for the monomials ``I`` of
``S^(t-1) Y``.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

from .base import LinearCode, ParameterError
from .field import DEFAULT_P, power
from .matrix import mul, rank, solve
from .multilinear import sym_basis, sym_multiply


class SetupError(RuntimeError):
    pass


def gpm_params(k: int, t: int) -> tuple[int, int, int, int]:
    """``(d, l, beta, M)`` for the given ``k, t``."""
    if not 2 <= t <= k:
        raise ParameterError("need 2 <= t <= k")
    if ((k - 1) * t) % (t - 1):
        raise ParameterError(f"(k-1)t = {(k - 1) * t} not divisible by t-1 = {t - 1}")
    return (k - 1) * t // (t - 1), comb(k - 1, t - 1), comb(k - 2, t - 2), t * comb(k, t)


class GpmCode(LinearCode):
    family = "gpm"

    def __init__(self, n: int, k: int, t: int, p: int = DEFAULT_P, seed: int = 0, retries: int = 20):
        d, l, beta, M = gpm_params(k, t)
        if not k <= n - 1 or d > n - 1:
            raise ParameterError(f"need k <= n-1 and d={d} <= n-1")
        super().__init__(n, k, d, l, beta, M, p)
        self.t = t
        self.dim_y = k - t + 1
        self.points = [i + 1 for i in range(n)]
        self._expansions: dict = {}
        self.xs, self.ys = self._vandermonde_family()
        self.construction = "vandermonde"
        rng = np.random.default_rng(seed)
        attempt = 0
        while not self.verify():
            if attempt >= retries:
                raise SetupError("could not find vectors satisfying the spanning conditions")
            self.xs = rng.integers(0, p, size=(n, t), dtype=np.int64)
            self.ys = rng.integers(0, p, size=(n, self.dim_y), dtype=np.int64)
            self.construction = f"random(seed={seed}, attempt={attempt})"
            self._gen = None
            attempt += 1

    def _extra_params(self) -> dict:
        return {"t": self.t}

    def _vandermonde_family(self):
        # x_i = (1, a^e, a^2e, ...) with e = dim Y keeps x_i (x) y_i monomials disjoint
        e = self.dim_y
        xs = np.array([[power(a, e * j, self.p) for j in range(self.t)] for a in self.points], dtype=np.int64)
        ys = np.array([[power(a, j, self.p) for j in range(self.dim_y)] for a in self.points], dtype=np.int64)
        return xs, ys

    # -- spaces ----------------------------------------------------------

    def _node_vectors(self, i: int, degree: int, times_y: int | None = None) -> np.ndarray:
        """Columns ``x_i (x) y_i (.) e_J [(.) y_f]`` for ``J`` in ``S^degree Y``,
        in coordinates of ``X (x) S^(degree+1 [+1]) Y``."""
        m = sym_multiply(self.ys[i], degree, self.dim_y, self.p)
        if times_y is not None:
            m = mul(sym_multiply(self.ys[times_y], degree + 1, self.dim_y, self.p), m, self.p)
        return np.kron(self.xs[i].reshape(-1, 1), m) % self.p

    def _build_generator(self) -> np.ndarray:
        g = np.zeros((self.n, self.l, self.M), dtype=np.int64)
        for i in range(self.n):
            g[i] = self._node_vectors(i, self.t - 1).T
        return g

    def verify(self) -> bool:
        """Exhaustive rank checks of the three spanning conditions, plus
        invertibility of every k-node retrieval system."""
        t, p = self.t, self.p
        for sub in itertools.combinations(range(self.n), t):
            if rank(self.xs[list(sub)], p) != t:
                return False
        for sub in itertools.combinations(range(self.n), self.dim_y):
            if rank(self.ys[list(sub)], p) != self.dim_y:
                return False
        target = t * comb(self.dim_y + t - 2, t - 1)
        blocks = [self._node_vectors(i, t - 2) for i in range(self.n)]
        for sub in itertools.combinations(range(self.n), self.d):
            if rank(np.concatenate([blocks[i] for i in sub], axis=1), p) != target:
                return False
        self._gen = None
        g = self.generator()
        for sub in itertools.combinations(range(self.n), self.k):
            if rank(g[list(sub)].reshape(-1, self.M), p) != self.M:
                return False
        return True

    # -- repair ----------------------------------------------------------

    def helper_share(self, f: int, h: int, content) -> np.ndarray:
        """``phi`` on ``x_h (x) y_h (.) Y_J (.) y_f`` over ``J`` in ``S^(t-2) Y``.

        The helper knows ``phi`` on ``x_h (x) y_h (.) S^(t-1)Y`` (its content), and
        ``y_h (.) Y_J (.) y_f = y_h (.) (y_f (.) Y_J)``, so each share symbol is
        a fixed combination of content symbols.
        """
        m = sym_multiply(self.ys[f], self.t - 2, self.dim_y, self.p)  # S^(t-2) -> S^(t-1)
        return mul(m.T, np.asarray(content, dtype=np.int64), self.p)

    def expansion(self, f: int, helpers) -> dict[int, np.ndarray]:
        """Per helper, the ``beta x l`` coefficients ``a_{h,J}`` expanding
        ``x_f (x) e_I`` over ``{x_h (x) y_h (.) Y_J}``."""
        key = (f, tuple(helpers))
        if key not in self._expansions:
            helpers = tuple(helpers)
            span = np.concatenate([self._node_vectors(h, self.t - 2) for h in helpers], axis=1)
            targets = np.kron(self.xs[f].reshape(-1, 1), np.eye(comb(self.dim_y + self.t - 2, self.t - 1), dtype=np.int64))
            coeffs = solve(span, targets % self.p, self.p)
            b = self.beta
            self._expansions[key] = {h: coeffs[j * b : (j + 1) * b] for j, h in enumerate(helpers)}
        return self._expansions[key]

    def lift(self, f: int, helpers, h: int, share) -> np.ndarray:
        a = self.expansion(f, tuple(helpers))[h]
        return mul(a.T, np.asarray(share, dtype=np.int64), self.p)

    def ip_aggregate(self, f: int, A, shares: dict[int, np.ndarray], helpers) -> np.ndarray:
        helpers = tuple(helpers)
        if not set(A) <= set(helpers):
            raise ParameterError("A must be a subset of the helper set")
        out = np.zeros(self.l, dtype=np.int64)
        for h in A:
            out = (out + self.lift(f, helpers, h, shares[h])) % self.p
        return out

    def s_basis(self, degree: int):
        return sym_basis(self.dim_y, degree)
