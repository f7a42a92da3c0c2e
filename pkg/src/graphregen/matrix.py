"""Dense linear algebra over GF(p) on numpy int64 arrays.

All routines are exact; elimination pivots on the first nonzero entry in
each column, so results are deterministic for a given input.
"""

from __future__ import annotations

import numpy as np

from .field import DEFAULT_P, inv


class SingularMatrixError(ArithmeticError):
    pass


class DimensionError(ValueError):
    pass


def as_matrix(a, p: int = DEFAULT_P) -> np.ndarray:
    m = np.mod(np.asarray(a, dtype=np.int64), p)
    if m.ndim == 1:
        m = m.reshape(1, -1) if m.size else m.reshape(0, 0)
    if m.ndim != 2:
        raise DimensionError("expected a 2-d array")
    return m


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mul(a: np.ndarray, b: np.ndarray, p: int = DEFAULT_P) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[-1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    a, b = np.mod(a, p), np.mod(b, p)
    if (p - 1) ** 2 * max(a.shape[-1], 1) < 2**63:
        return np.mod(a @ b, p)
    # large moduli: exact products through Python integers
    return np.mod(a.astype(object) @ b.astype(object), p).astype(np.int64)


def rref(a: np.ndarray, p: int = DEFAULT_P) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot column list."""
    m = as_matrix(a, p).copy()
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * inv(int(m[r, c]), p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int = DEFAULT_P) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def inverse(a: np.ndarray, p: int = DEFAULT_P) -> np.ndarray:
    a = as_matrix(a, p)
    n, c = a.shape
    if n != c:
        raise DimensionError(f"inverse of non-square {a.shape} matrix")
    aug = np.concatenate([a, identity(n)], axis=1)
    red, pivots = rref(aug, p)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular over GF(%d)" % p)
    return red[:, n:]


def solve(a: np.ndarray, b: np.ndarray, p: int = DEFAULT_P) -> np.ndarray:
    """Return one solution ``x`` of ``a @ x = b`` (``b`` a vector or matrix).

    Free variables are set to zero.  Raises ``SingularMatrixError`` when the
    system is inconsistent.
    """
    a = as_matrix(a, p)
    b = np.mod(np.asarray(b, dtype=np.int64), p)
    vec = b.ndim == 1
    bm = b.reshape(-1, 1) if vec else b
    if bm.shape[0] != a.shape[0]:
        raise DimensionError(f"rhs has {bm.shape[0]} rows, matrix has {a.shape[0]}")
    n = a.shape[1]
    red, pivots = rref(np.concatenate([a, bm], axis=1), p)
    if pivots and pivots[-1] >= n:
        raise SingularMatrixError("inconsistent linear system")
    x = np.zeros((n, bm.shape[1]), dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = red[i, n:]
    return x[:, 0] if vec else x


def nullspace(a: np.ndarray, p: int = DEFAULT_P) -> np.ndarray:
    """Basis of the right kernel as the columns of a ``cols x nullity`` matrix.

    One basis vector per free column, in increasing free-column order, with
    a 1 in its own free position.
    """
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return identity(cols)
    red, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-red[i, fc]) % p
    return basis


def vandermonde(points, cols: int, p: int = DEFAULT_P) -> np.ndarray:
    """Rows ``(1, x, x^2, ..., x^(cols-1))`` for each point."""
    pts = [int(x) % p for x in points]
    if any(x == 0 for x in pts):
        raise ValueError("Vandermonde points must be nonzero")
    if len(set(pts)) != len(pts):
        raise ValueError("Vandermonde points must be distinct")
    out = np.ones((len(pts), cols), dtype=np.int64)
    for j in range(1, cols):
        out[:, j] = (out[:, j - 1] * np.asarray(pts, dtype=np.int64)) % p
    return out


def rank_factorize(a: np.ndarray, p: int = DEFAULT_P) -> tuple[np.ndarray, np.ndarray]:
    """Split ``a`` as ``left @ right`` with inner dimension ``rank(a)``.

    ``left`` holds the pivot columns of ``a``; ``right`` is the nonzero part
    of its reduced row echelon form.
    """
    a = np.asarray(a, dtype=np.int64)
    red, pivots = rref(a, p)
    left = np.mod(a[:, pivots], p)
    right = red[: len(pivots)]
    return left, right
