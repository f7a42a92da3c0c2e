"""Parameter record and the linear-code base class shared by all families."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .field import DEFAULT_P, check_modulus, random_elements
from .matrix import mul


@dataclass(frozen=True)
class CodeParams:
    n: int
    k: int
    d: int
    l: int
    beta: int
    M: int
    extra: dict = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "d": self.d, "l": self.l, "beta": self.beta, "M": self.M, **self.extra}


class ParameterError(ValueError):
    pass


class LinearCode:
    """A linear ``[n, k, d, l, beta, M]`` code given by a generator tensor.

    ``generator()`` has shape ``(n, l, M)``: node ``i`` stores
    ``generator()[i] @ message``.  A codeword is an ``l x n`` array whose
    column ``i`` is node ``i``'s content.
    """

    family = "linear"

    def __init__(self, n: int, k: int, d: int, l: int, beta: int, M: int, p: int = DEFAULT_P):
        self.n, self.k, self.d, self.l, self.beta, self.M = n, k, d, l, beta, M
        self.p = check_modulus(p)
        if p <= n:
            raise ParameterError(f"field size {p} must exceed n={n}")
        self._gen: np.ndarray | None = None

    def params(self) -> CodeParams:
        return CodeParams(self.n, self.k, self.d, self.l, self.beta, self.M, self._extra_params())

    def _extra_params(self) -> dict:
        return {}

    def _build_generator(self) -> np.ndarray:
        raise NotImplementedError

    def generator(self) -> np.ndarray:
        if self._gen is None:
            self._gen = self._build_generator()
        return self._gen

    def random_message(self, rng: np.random.Generator) -> np.ndarray:
        return random_elements(rng, self.M, self.p)

    def encode_message(self, message) -> np.ndarray:
        x = np.asarray(message, dtype=np.int64) % self.p
        if x.shape != (self.M,):
            raise ParameterError(f"message must have {self.M} symbols, got shape {x.shape}")
        g = self.generator()
        return mul(g.reshape(self.n * self.l, self.M), x, self.p).reshape(self.n, self.l).T.copy()

    def node_content(self, codeword: np.ndarray, i: int) -> np.ndarray:
        return np.asarray(codeword)[:, i].copy()

    # -- repair protocol, overridden per family --------------------------

    def helper_share(self, f: int, h: int, content: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def lift(self, f: int, helpers: tuple[int, ...], h: int, share: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def finalize(self, f: int, helpers: tuple[int, ...], aggregate: np.ndarray) -> np.ndarray:
        return np.asarray(aggregate, dtype=np.int64) % self.p

    def share_size(self, f: int, h: int) -> int:
        return self.beta

    def __repr__(self):
        extra = "".join(f",{k}={v}" for k, v in self._extra_params().items())
        return f"{type(self).__name__}[n={self.n},k={self.k},d={self.d},l={self.l},beta={self.beta},M={self.M}{extra}]"
