"""Reed-Muller codes built by the (u, u+v) recursion, plus generic small codes."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb
from typing import Iterator

import numpy as np

from .gf2core import BitMatrix, BitVector, nullspace, rank

DEFAULT_CAP = 24


class CapExceeded(ValueError):
    """An exhaustive routine was asked to go beyond its size limit."""

    def __init__(self, what: str, value: int, cap: int):
        super().__init__(f"{what} = {value} exceeds cap {cap}")
        self.what = what
        self.value = value
        self.cap = cap


@dataclass(frozen=True)
class LinearCode:
    n: int
    k: int
    G: BitMatrix
    H: BitMatrix

    def __post_init__(self):
        if self.G.shape != (self.k, self.n) or self.H.shape != (self.n - self.k, self.n):
            raise ValueError("generator/parity-check shapes disagree with [n, k]")

    @classmethod
    def from_generator(cls, G: BitMatrix) -> LinearCode:
        if rank(G) != G.t:
            raise ValueError("generator matrix is not full rank")
        return cls(G.n, G.t, G, nullspace(G))

    def check(self) -> None:
        assert rank(self.G) == self.k
        assert rank(self.H) == self.n - self.k
        for g in self.G.rows:
            assert self.H.mul_vec(BitVector(self.n, g)).bits == 0

    def contains(self, v: BitVector) -> bool:
        return self.H.mul_vec(v).bits == 0

    def __str__(self) -> str:
        return f"[{self.n}, {self.k}] code"


@dataclass(frozen=True)
class RMCode(LinearCode):
    r: int = 0
    m: int = 0

    def __str__(self) -> str:
        return f"RM({self.r}, {self.m})"


def rm_dimension(r: int, m: int) -> int:
    return sum(comb(m, i) for i in range(r + 1))


@lru_cache(maxsize=None)
def _rm_rows(r: int, m: int) -> tuple[int, ...]:
    n = 1 << m
    if r < 0:
        return ()
    if r == 0:
        return ((1 << n) - 1,)
    if r == m:
        return tuple(1 << j for j in range(n))
    half = n >> 1
    left = _rm_rows(r, m - 1)
    right = _rm_rows(r - 1, m - 1)
    return tuple(g | g << half for g in left) + tuple(g << half for g in right)


@lru_cache(maxsize=None)
def rm(r: int, m: int) -> RMCode:
    """RM(r, m); H is the generator of RM(m - r - 1, m)."""
    if m < 0 or not -1 <= r <= m:
        raise ValueError(f"invalid Reed-Muller parameters r={r}, m={m}")
    if m > 20:
        raise ValueError("m > 20 is not supported")
    n = 1 << m
    G = BitMatrix(n, _rm_rows(r, m))
    H = BitMatrix(n, _rm_rows(m - r - 1, m))
    return RMCode(n, len(G.rows), G, H, r=r, m=m)


def dual(code: RMCode) -> RMCode:
    return rm(code.m - code.r - 1, code.m)


def uuv_split(v: BitMatrix) -> tuple[BitMatrix, BitMatrix]:
    return v.split()


def random_code(n: int, k: int, rng: np.random.Generator) -> LinearCode:
    """Uniform full-rank k x n generator, rejection sampled."""
    while True:
        a = rng.integers(0, 2, size=(k, n), dtype=np.uint8)
        G = BitMatrix.from_array(a) if k else BitMatrix(n, ())
        if rank(G) == k:
            return LinearCode.from_generator(G)


def _span_ints(rows) -> list[int]:
    words = [0]
    for g in reversed(rows):
        words = words + [w ^ g for w in words]
    return words


def codeword_ints(code: LinearCode) -> list[int]:
    """All codewords as ints, in message order (first generator row most significant)."""
    return _span_ints(code.G.rows)


def codeword_array(code: LinearCode) -> np.ndarray:
    """Dense uint8 array of shape (2^k, n) in message order."""
    G = code.G.to_array()
    words = np.zeros((1, code.n), dtype=np.uint8)
    for g in G[::-1]:
        words = np.concatenate([words, words ^ g])
    return words


def enumerate_codewords(code: LinearCode, t: int, cap: int = DEFAULT_CAP) -> Iterator[BitMatrix]:
    """Every element of C^t, in lexicographic message order (row 0 most significant)."""
    if t * code.k > cap:
        raise CapExceeded("t*k", t * code.k, cap)
    words = codeword_ints(code)
    for rows in product(words, repeat=t):
        yield BitMatrix(code.n, rows)


def _popcount_rows(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).sum(axis=-1)


def min_distance(code: LinearCode, cap: int = DEFAULT_CAP) -> int:
    """Minimum weight of a nonzero codeword, by exhaustive enumeration.

    Since k <= n, the k <= cap condition covers both size limits.
    """
    if code.k == 0:
        raise ValueError("the zero code has no minimum distance")
    if code.k > cap:
        raise CapExceeded("k", code.k, cap)
    if code.k <= 16:
        return min(w.bit_count() for w in codeword_ints(code)[1:])
    # low 16 message bits tabulated, high bits looped
    split = code.k - 16
    low = _span_ints(code.G.rows[split:])
    high = _span_ints(code.G.rows[:split])
    nw = (code.n + 63) // 64

    def words(x):
        return [(x >> (64 * i)) & 0xFFFFFFFFFFFFFFFF for i in range(nw)]

    table = np.array([words(w) for w in low], dtype=np.uint64)
    best = code.n
    for idx, h in enumerate(high):
        wts = _popcount_rows(table ^ np.array(words(h), dtype=np.uint64))
        if idx == 0:
            wts = wts[1:]
        best = min(best, int(wts.min()))
    return best
