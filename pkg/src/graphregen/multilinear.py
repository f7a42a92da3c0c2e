"""Coordinates for tensor, symmetric and exterior powers, and the operators
used by the interior-point (Moulin) construction.

Basis conventions
-----------------
* ``T^p F^n``: tuples in ``itertools.product`` order (first factor major).
* ``S^p F^n``: nondecreasing tuples (multisets) in lexicographic order.
  The symmetric product of basis vectors is the sorted multiset with
  coefficient 1, i.e. ``S^* F^n`` is the polynomial ring with monomial basis.
* ``Lambda^q F^n``: strictly increasing tuples in lexicographic order.

Operators are returned as matrices acting on column vectors
(``image = M @ x``), codomain rows by domain columns.

Blocks ``T^pV (x) U (x) Lambda^qW`` are indexed by ``(nu, u, omega)`` with
``nu`` major and ``omega`` minor.  The ``U`` coordinate is split as
``[V-block | W-block]``: ``u < dim_v`` is a V direction, ``u >= dim_v`` the
W direction ``u - dim_v``.  A degree-``j`` space is the direct sum of the
blocks with ``p + q = j`` concatenated in increasing ``p``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from .field import DEFAULT_P

Index = tuple[int, ...]


def tensor_basis(n: int, p: int) -> list[Index]:
    return list(itertools.product(range(n), repeat=p))


def sym_basis(n: int, p: int) -> list[Index]:
    if n < 1 or p < 0:
        raise ValueError("need n >= 1 and p >= 0")
    return list(itertools.combinations_with_replacement(range(n), p))


def ext_basis(n: int, q: int) -> list[Index]:
    if q < 0:
        raise ValueError("negative exterior degree")
    return list(itertools.combinations(range(n), q))


def _index_of(basis: list[Index]) -> dict[Index, int]:
    return {b: i for i, b in enumerate(basis)}


def symmetrize(n: int, p: int, mod: int = DEFAULT_P) -> np.ndarray:
    """Matrix of the projection ``T^p F^n -> S^p F^n`` (sort each index)."""
    target = _index_of(sym_basis(n, p))
    src = tensor_basis(n, p)
    out = np.zeros((len(target), len(src)), dtype=np.int64)
    for j, t in enumerate(src):
        out[target[tuple(sorted(t))], j] = 1
    return out % mod


def sym_multiply(vec, degree: int, n: int, mod: int = DEFAULT_P) -> np.ndarray:
    """Matrix of ``s -> vec (.) s`` from ``S^degree F^n`` to ``S^(degree+1) F^n``."""
    src = sym_basis(n, degree)
    target = _index_of(sym_basis(n, degree + 1))
    out = np.zeros((len(target), len(src)), dtype=np.int64)
    for j, mono in enumerate(src):
        for a in range(n):
            c = int(vec[a]) % mod
            if c:
                row = target[tuple(sorted(mono + (a,)))]
                out[row, j] = (out[row, j] + c) % mod
    return out


def wedge_basis_vector(omega: Index, j: int) -> tuple[int, Index]:
    """``omega ^ e_j`` as ``(sign, sorted subset)``; sign 0 if ``j`` occurs."""
    if j in omega:
        return 0, omega
    larger = sum(1 for x in omega if x > j)
    return (-1) ** larger, tuple(sorted(omega + (j,)))


@lru_cache(maxsize=None)
def _cowedge_terms(omega: Index) -> tuple[tuple[int, Index, int], ...]:
    """Recursive co-wedge of a basis wedge as ``(w, rest, coeff)`` terms.

    nabla(w1) = w1 (x) 1 and
    nabla(omega ^ w1) = nabla(omega) ^ w1 + (-1)^q w1 (x) omega.
    """
    if len(omega) == 0:
        return ()
    if len(omega) == 1:
        return ((omega[0], (), 1),)
    head, last = omega[:-1], omega[-1]
    q = len(head)
    acc: dict[tuple[int, Index], int] = {}
    for w, rest, c in _cowedge_terms(head):
        sign, merged = wedge_basis_vector(rest, last)
        if sign:
            acc[(w, merged)] = acc.get((w, merged), 0) + sign * c
    acc[(last, head)] = acc.get((last, head), 0) + (-1) ** q
    return tuple((w, rest, c) for (w, rest), c in acc.items() if c)


def cowedge_terms(omega: Index) -> list[tuple[int, Index, int]]:
    return list(_cowedge_terms(tuple(omega)))


@dataclass(frozen=True)
class SpaceSpec:
    """``V = F^dim_v``, ``W = F^dim_w``, ``U = V (+) W``."""

    dim_v: int
    dim_w: int
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def dim_u(self) -> int:
        return self.dim_v + self.dim_w

    def tensor_dim(self, p: int) -> int:
        return self.dim_v**p

    def block_dim(self, p: int, q: int) -> int:
        if p < 0 or q < 0:
            return 0
        return self.dim_v**p * self.dim_u * comb(self.dim_w, q)

    def block_basis(self, p: int, q: int) -> list[tuple[Index, int, Index]]:
        key = ("basis", p, q)
        if key not in self._cache:
            self._cache[key] = [
                (nu, u, om)
                for nu in tensor_basis(self.dim_v, p)
                for u in range(self.dim_u)
                for om in ext_basis(self.dim_w, q)
            ]
        return self._cache[key]

    def block_index(self, p: int, q: int) -> dict[tuple[Index, int, Index], int]:
        key = ("index", p, q)
        if key not in self._cache:
            self._cache[key] = _index_of(self.block_basis(p, q))
        return self._cache[key]

    def degree_blocks(self, j: int) -> list[tuple[int, int]]:
        return [(p, j - p) for p in range(j + 1)]

    def degree_offsets(self, j: int) -> dict[tuple[int, int], int]:
        off, out = 0, {}
        for p, q in self.degree_blocks(j):
            out[(p, q)] = off
            off += self.block_dim(p, q)
        return out

    def degree_dim(self, j: int) -> int:
        if j < 0:
            return 0
        return sum(self.block_dim(p, q) for p, q in self.degree_blocks(j))

    def coord(self, p: int, q: int, nu: Index, u: int, omega: Index) -> int:
        """Global coordinate of a basis element inside the degree ``p+q`` space."""
        return self.degree_offsets(p + q)[(p, q)] + self.block_index(p, q)[(nu, u, omega)]


def cowedge(p: int, q: int, spec: SpaceSpec, mod: int = DEFAULT_P) -> np.ndarray:
    """``nabla: T^pV (x) Lambda^(q+1)W -> T^pV (x) W (x) Lambda^qW``.

    Domain coordinates ``(nu, S)``, codomain ``(nu, w, omega)``, nu major.
    """
    nus = tensor_basis(spec.dim_v, p)
    src = ext_basis(spec.dim_w, q + 1)
    rests = _index_of(ext_basis(spec.dim_w, q))
    n_src, n_rest = len(src), len(rests)
    out = np.zeros((len(nus) * spec.dim_w * n_rest, len(nus) * n_src), dtype=np.int64)
    for a in range(len(nus)):
        for j, om in enumerate(src):
            for w, rest, c in _cowedge_terms(om):
                row = (a * spec.dim_w + w) * n_rest + rests[rest]
                out[row, a * n_src + j] += c
    return out % mod


def cowedge_embedded(p: int, q: int, spec: SpaceSpec, mod: int = DEFAULT_P) -> np.ndarray:
    """``nabla`` with its ``W`` factor placed in the W-block of the ``U`` slot,
    landing in block ``(p, q)`` of ``T^pV (x) U (x) Lambda^qW``."""
    nus = tensor_basis(spec.dim_v, p)
    src = ext_basis(spec.dim_w, q + 1)
    idx = spec.block_index(p, q)
    out = np.zeros((spec.block_dim(p, q), len(nus) * len(src)), dtype=np.int64)
    for a, nu in enumerate(nus):
        for j, om in enumerate(src):
            for w, rest, c in _cowedge_terms(om):
                out[idx[(nu, spec.dim_v + w, rest)], a * len(src) + j] += c
    return out % mod


def _insert_v(seq: Index, v) -> dict[Index, int]:
    """Recursive ``d^V_v`` on a pure tensor ``seq`` whose last entry is the U slot."""
    out: dict[Index, int] = {}
    nz = [(a, int(c)) for a, c in enumerate(v) if int(c)]
    if len(seq) == 1:
        for a, c in nz:
            out[(a,) + seq] = c
        return out
    for s, c in _insert_v(seq[:-1], v).items():
        key = s + seq[-1:]
        out[key] = out.get(key, 0) + c
    sign = (-1) ** (len(seq) - 1)
    for a, c in nz:
        key = seq[:-1] + (a,) + seq[-1:]
        out[key] = out.get(key, 0) + sign * c
    return out


def coboundary_v(v, p: int, q: int, spec: SpaceSpec, mod: int = DEFAULT_P) -> np.ndarray:
    """``d^V_v`` from block ``(p, q)`` to block ``(p+1, q)``.

    ``p = -1`` denotes the bare ``Lambda^qW`` (mapped to zero in block (0, q)).
    """
    if p == -1:
        return np.zeros((spec.block_dim(0, q), comb(spec.dim_w, q)), dtype=np.int64)
    v = np.asarray(v, dtype=np.int64) % mod
    src = spec.block_basis(p, q)
    tgt = spec.block_index(p + 1, q)
    out = np.zeros((spec.block_dim(p + 1, q), len(src)), dtype=np.int64)
    for j, (nu, u, om) in enumerate(src):
        for seq, c in _insert_v(nu + (u,), v).items():
            out[tgt[(seq[:-1], seq[-1], om)], j] += c
    return out % mod


def coboundary_w(w, p: int, q: int, spec: SpaceSpec, mod: int = DEFAULT_P) -> np.ndarray:
    """``d^W_w``: ``nu (x) u (x) omega -> (-1)^(p+q) nu (x) u (x) omega ^ w``."""
    w = np.asarray(w, dtype=np.int64) % mod
    src = spec.block_basis(p, q)
    tgt = spec.block_index(p, q + 1)
    out = np.zeros((spec.block_dim(p, q + 1), len(src)), dtype=np.int64)
    sign0 = (-1) ** (p + q)
    for j, (nu, u, om) in enumerate(src):
        for b in range(spec.dim_w):
            c = int(w[b])
            if not c:
                continue
            s, merged = wedge_basis_vector(om, b)
            if s:
                out[tgt[(nu, u, merged)], j] += sign0 * s * c
    return out % mod


def split_u(u, spec: SpaceSpec, mod: int = DEFAULT_P) -> tuple[np.ndarray, np.ndarray]:
    u = np.asarray(u, dtype=np.int64) % mod
    if u.shape != (spec.dim_u,):
        raise ValueError(f"expected a vector of length {spec.dim_u}")
    return u[: spec.dim_v], u[spec.dim_v :]


def coboundary_u(u, p: int, q: int, spec: SpaceSpec, mod: int = DEFAULT_P) -> np.ndarray:
    """``d^U_u = d^V_v + d^W_w`` from block ``(p, q)`` into the stacked codomain
    ``[block (p, q+1); block (p+1, q)]`` (increasing ``p``)."""
    v, w = split_u(u, spec, mod)
    return np.concatenate([coboundary_w(w, p, q, spec, mod), coboundary_v(v, p, q, spec, mod)], axis=0)


def coboundary_degree(u, j: int, spec: SpaceSpec, mod: int = DEFAULT_P) -> np.ndarray:
    """Total ``d^U_u`` from the degree-``j`` space to the degree-``j+1`` space."""
    v, w = split_u(u, spec, mod)
    src_off = spec.degree_offsets(j)
    tgt_off = spec.degree_offsets(j + 1)
    out = np.zeros((spec.degree_dim(j + 1), spec.degree_dim(j)), dtype=np.int64)
    for p, q in spec.degree_blocks(j):
        cols = slice(src_off[(p, q)], src_off[(p, q)] + spec.block_dim(p, q))
        r = tgt_off[(p, q + 1)]
        out[r : r + spec.block_dim(p, q + 1), cols] += coboundary_w(w, p, q, spec, mod)
        r = tgt_off[(p + 1, q)]
        out[r : r + spec.block_dim(p + 1, q), cols] += coboundary_v(v, p, q, spec, mod)
    return out % mod
