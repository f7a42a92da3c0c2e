"""Arithmetic in the prime field GF(p).

Scalars are plain Python ints in ``[0, p)``; vectors and matrices are numpy
``int64`` arrays reduced mod ``p``.  With ``p < 2**17`` a product of two
residues fits in 34 bits, so dot products of length up to ~2**29 cannot
overflow before reduction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_P = 65537


class FieldError(ArithmeticError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_modulus(p: int) -> int:
    if not is_prime(p):
        raise FieldError(f"modulus {p} is not prime")
    if p >= 2**31:
        raise FieldError(f"modulus {p} too large for int64 matrix products")
    return p


def inv(a: int, p: int = DEFAULT_P) -> int:
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError("inverse of zero in GF(%d)" % p)
    return pow(a, p - 2, p)


def power(a: int, e: int, p: int = DEFAULT_P) -> int:
    """``a**e mod p``; ``power(0, 0) == 1``."""
    if e < 0:
        raise ValueError("negative exponent")
    return pow(int(a) % p, e, p)


def reduce(x, p: int = DEFAULT_P) -> np.ndarray:
    """Coerce an int / nested list / array to a reduced int64 array."""
    arr = np.asarray(x, dtype=object) if not isinstance(x, np.ndarray) else x
    return np.mod(np.asarray(arr, dtype=np.int64), p)


def random_elements(rng: np.random.Generator, shape, p: int = DEFAULT_P) -> np.ndarray:
    return rng.integers(0, p, size=shape, dtype=np.int64)


def random_nonzero(rng: np.random.Generator, shape, p: int = DEFAULT_P) -> np.ndarray:
    return rng.integers(1, p, size=shape, dtype=np.int64)


@dataclass(frozen=True)
class FieldElement:
    """A residue mod ``p`` with operator overloading, for scalar work."""

    value: int
    p: int = DEFAULT_P

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise FieldError("mixing elements of different fields")
            return other.value
        return int(other) % self.p

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FieldElement(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def __truediv__(self, other):
        return self * FieldElement(self._coerce(other), self.p).inv()

    def __pow__(self, e: int):
        if e < 0:
            return FieldElement(power(self.inv().value, -e, self.p), self.p)
        return FieldElement(power(self.value, e, self.p), self.p)

    def inv(self) -> "FieldElement":
        return FieldElement(inv(self.value, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"GF{self.p}({self.value})"
