"""Interior-point Moulin codes with intermediate-processing repair.

Notation follows :mod:`graphregen.multilinear`: ``V = F^(d-k)``,
``W = F^k``, ``U = V (+) W``.  The file ``phi`` is a coordinate vector on the
degree ``s-1`` space ``(+)_{p+q=s-1} T^pV (x) U (x) Lambda^qW`` that
satisfies the parity checks below; node ``i`` stores ``phi`` on the vectors
``nu (x) u_i (x) omega``.

Parity checks (one per basis element of ``T^pV (x) Lambda^qW`` with
``p + q = s``):

* ``p >= 1, q >= 1``: ``phi(iota_V(x)) = phi(iota_W(nabla x))`` where
  ``iota_V`` moves the last V factor of ``x`` into the U slot;
* ``p = 0``: ``phi(iota_W(nabla omega)) = 0``;
* ``q = 0``: ``phi`` vanishes on ``T^(s-1)V (x) V``.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

from .base import LinearCode, ParameterError
from .matrix import mul, nullspace, rank, rank_factorize, solve
from .field import DEFAULT_P
from .multilinear import SpaceSpec, coboundary_degree, cowedge_terms, ext_basis, tensor_basis


class SetupError(RuntimeError):
    pass


def moulin_params(k: int, d: int, s: int) -> tuple[int, int, int]:
    """``(l, beta, M)`` for Moulin codes."""
    e = d - k
    l = sum(e**p * comb(k, q) for p, q in _pairs(s - 1))
    beta = sum(e**p * comb(k - 1, q) for p, q in _pairs(s - 2))
    M = sum(d * e**p * comb(k, q) for p, q in _pairs(s - 1)) - sum(e**p * comb(k, q) for p, q in _pairs(s))
    return l, beta, M


def _pairs(j: int):
    return [(p, j - p) for p in range(j + 1)] if j >= 0 else []


def parity_matrix(spec: SpaceSpec, s: int, p: int = DEFAULT_P) -> np.ndarray:
    """One row per basis element of ``T^aV (x) Lambda^bW`` with ``a + b = s``,
    acting on degree ``s-1`` coordinates."""
    dv = spec.dim_v
    dim = spec.degree_dim(s - 1)
    rows = []
    for a in range(s + 1):
        b = s - a
        for nu in tensor_basis(dv, a):
            for om in ext_basis(spec.dim_w, b):
                row = np.zeros(dim, dtype=np.int64)
                if a >= 1:
                    # last V factor moves into the U slot
                    row[spec.coord(a - 1, b, nu[:-1], nu[-1], om)] += 1
                if b >= 1:
                    for w, rest, c in cowedge_terms(om):
                        row[spec.coord(a, b - 1, nu, dv + w, rest)] -= c
                rows.append(row % p)
    if not rows:
        return np.zeros((0, dim), dtype=np.int64)
    return np.array(rows)


def file_space(k: int, d: int, s: int, p: int = DEFAULT_P) -> np.ndarray:
    """Basis (as columns) of the functionals satisfying every parity check."""
    return nullspace(parity_matrix(SpaceSpec(d - k, k), s, p), p)


class MoulinCode(LinearCode):
    family = "moulin"

    def __init__(self, n: int, k: int, d: int, s: int, p: int = DEFAULT_P, seed: int = 0, retries: int = 20):
        if not (n - 1 >= d >= k >= s - 1 >= 1):
            raise ParameterError(f"need n-1 >= d >= k >= s-1 >= 1, got n={n} k={k} d={d} s={s}")
        l, beta, M = moulin_params(k, d, s)
        super().__init__(n, k, d, l, beta, M, p)
        self.s = s
        self.spec = SpaceSpec(d - k, k)
        self.parity = parity_matrix(self.spec, s, p)
        self.file_basis = nullspace(self.parity, p)
        if self.file_basis.shape[1] != M:
            raise SetupError(f"file space has dimension {self.file_basis.shape[1]}, expected {M}")
        rng = np.random.default_rng(seed)
        for _ in range(retries + 1):
            self.us = rng.integers(0, p, size=(n, d), dtype=np.int64)
            if self.verify_vectors():
                break
        else:
            raise SetupError("could not find node vectors with the spanning properties")
        self._repair_cache: dict = {}

    def _extra_params(self) -> dict:
        return {"s": self.s}

    # -- file space ------------------------------------------------------

    def phi_from_message(self, message) -> np.ndarray:
        x = np.asarray(message, dtype=np.int64) % self.p
        if x.shape != (self.M,):
            raise ParameterError(f"message must have {self.M} symbols")
        return mul(self.file_basis, x, self.p)

    def random_phi(self, rng: np.random.Generator) -> np.ndarray:
        return self.phi_from_message(self.random_message(rng))

    def check_phi(self, phi) -> np.ndarray:
        phi = np.asarray(phi, dtype=np.int64) % self.p
        if phi.shape != (self.spec.degree_dim(self.s - 1),):
            raise ParameterError("phi has the wrong length")
        if mul(self.parity, phi, self.p).any():
            raise ParameterError("phi violates a parity check")
        return phi

    # -- node vectors ----------------------------------------------------

    def verify_vectors(self) -> bool:
        k, d, p = self.k, self.d, self.p
        for sub in itertools.combinations(range(self.n), d):
            if rank(self.us[list(sub)], p) != d:
                return False
        for sub in itertools.combinations(range(self.n), k):
            if rank(self.us[list(sub), d - k :], p) != k:
                return False
        return True

    def embedding(self, u, degree: int) -> np.ndarray:
        """Columns ``nu (x) u (x) omega`` over all blocks of ``degree``."""
        sp = self.spec
        out = np.zeros((sp.degree_dim(degree), sum(sp.tensor_dim(pp) * comb(sp.dim_w, qq) for pp, qq in _pairs(degree))), dtype=np.int64)
        col = 0
        for pp, qq in sp.degree_blocks(degree):
            for nu in tensor_basis(sp.dim_v, pp):
                for om in ext_basis(sp.dim_w, qq):
                    for a in range(sp.dim_u):
                        c = int(u[a])
                        if c:
                            out[sp.coord(pp, qq, nu, a, om), col] = c
                    col += 1
        return out % self.p

    def node_coordinates(self) -> list[tuple[int, int, tuple, tuple]]:
        """``(p, q, nu, omega)`` labelling each stored symbol, in storage order."""
        sp = self.spec
        return [(pp, qq, nu, om) for pp, qq in sp.degree_blocks(self.s - 1) for nu in tensor_basis(sp.dim_v, pp) for om in ext_basis(sp.dim_w, qq)]

    def _build_generator(self) -> np.ndarray:
        g = np.zeros((self.n, self.l, self.M), dtype=np.int64)
        for i in range(self.n):
            g[i] = mul(self.embedding(self.us[i], self.s - 1).T, self.file_basis, self.p)
        return g

    def encode(self, phi) -> np.ndarray:
        phi = self.check_phi(phi)
        return np.stack([mul(self.embedding(self.us[i], self.s - 1).T, phi, self.p) for i in range(self.n)], axis=1)

    # -- repair ----------------------------------------------------------

    def _coboundary(self, f: int) -> np.ndarray:
        key = ("cob", f)
        if key not in self._repair_cache:
            self._repair_cache[key] = coboundary_degree(self.us[f], self.s - 2, self.spec, self.p)
        return self._repair_cache[key]

    def share_map(self, f: int, h: int) -> tuple[np.ndarray, np.ndarray]:
        """Rank factorization ``(basis, coords)`` of ``d_{u_f}`` restricted to
        the helper's degree ``s-2`` subspace: ``image = basis @ coords``."""
        key = ("share", f, h)
        if key not in self._repair_cache:
            img = mul(self._coboundary(f), self.embedding(self.us[h], self.s - 2), self.p)
            self._repair_cache[key] = rank_factorize(img, self.p)
        return self._repair_cache[key]

    def share_size(self, f: int, h: int) -> int:
        return self.share_map(f, h)[0].shape[1]

    def helper_share(self, f: int, h: int, content) -> np.ndarray:
        """``phi`` on a basis of ``d_{u_f}`` applied to the helper's subspace.

        On the file space each image vector agrees with a fixed combination of
        the helper's stored coordinates, so the share is a linear map of the
        content.
        """
        return mul(self._share_from_content(f, h), np.asarray(content, dtype=np.int64), self.p)

    def _share_from_content(self, f: int, h: int) -> np.ndarray:
        key = ("fromcontent", f, h)
        if key not in self._repair_cache:
            basis, _ = self.share_map(f, h)
            # phi(basis col) must be a combination of phi(nu (x) u_h (x) omega);
            # solve on the file space: basis^T N = X @ (E_h^T N)
            n_mat = self.file_basis
            stored = mul(self.embedding(self.us[h], self.s - 1).T, n_mat, self.p)
            want = mul(basis.T, n_mat, self.p)
            x = solve(stored.T, want.T, self.p).T
            self._repair_cache[key] = x
        return self._repair_cache[key]

    def repair_targets(self) -> np.ndarray:
        """Columns ``nabla(nu (x) omega) - [p>=1] nu (x) omega`` in the degree
        ``s-2`` space, one per stored coordinate, with the sign ``(-1)^p``
        applied (so ``phi(d_{u_f} target) = phi(nu (x) u_f (x) omega)``)."""
        key = ("targets",)
        if key not in self._repair_cache:
            sp, dv = self.spec, self.spec.dim_v
            coords = self.node_coordinates()
            out = np.zeros((sp.degree_dim(self.s - 2), len(coords)), dtype=np.int64)
            for j, (pp, qq, nu, om) in enumerate(coords):
                sign = (-1) ** pp
                if qq >= 1:
                    for w, rest, c in cowedge_terms(om):
                        out[sp.coord(pp, qq - 1, nu, dv + w, rest), j] += sign * c
                if pp >= 1:
                    out[sp.coord(pp - 1, qq, nu[:-1], nu[-1], om), j] -= sign
            self._repair_cache[key] = out % self.p
        return self._repair_cache[key]

    def expansion(self, f: int, helpers) -> dict[int, np.ndarray]:
        """Per helper ``h``, the ``l x share_size`` lift matrix."""
        key = ("lift", f, tuple(helpers))
        if key not in self._repair_cache:
            helpers = tuple(helpers)
            dom = self.embedding(self.us[helpers[0]], self.s - 2).shape[1]
            span = np.concatenate([self.embedding(self.us[h], self.s - 2) for h in helpers], axis=1)
            c = solve(span, self.repair_targets(), self.p)
            lifts = {}
            for j, h in enumerate(helpers):
                _, coords = self.share_map(f, h)
                lifts[h] = mul(coords, c[j * dom : (j + 1) * dom], self.p).T.copy()
            self._repair_cache[key] = lifts
        return self._repair_cache[key]

    def lift(self, f: int, helpers, h: int, share) -> np.ndarray:
        return mul(self.expansion(f, tuple(helpers))[h], np.asarray(share, dtype=np.int64), self.p)

    def repair_identity_residual(self, f: int, phi) -> np.ndarray:
        """``phi(d_{u_f} target) - phi(nu (x) u_f (x) omega)`` for every stored
        coordinate; identically zero for a valid ``phi``."""
        phi = self.check_phi(phi)
        lhs = mul(mul(self._coboundary(f), self.repair_targets(), self.p).T, phi, self.p)
        rhs = mul(self.embedding(self.us[f], self.s - 1).T, phi, self.p)
        return (lhs - rhs) % self.p

    def ip_aggregate(self, f: int, A, shares: dict[int, np.ndarray], helpers) -> np.ndarray:
        helpers = tuple(helpers)
        if not set(A) <= set(helpers):
            raise ParameterError("A must be a subset of the helper set")
        out = np.zeros(self.l, dtype=np.int64)
        for h in A:
            out = (out + self.lift(f, helpers, h, shares[h])) % self.p
        return out
