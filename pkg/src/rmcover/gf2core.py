"""Bit-packed GF(2) vectors and matrices.

A ``BitVector`` stores its coordinates in a Python int, coordinate ``j`` at
bit ``j``.  A ``BitMatrix`` is a stack of such rows; read column-wise it is a
length-``n`` vector over GF(2^t) whose ``j``-th symbol has row 0 as its low bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_LENGTH = 1 << 20


class Infeasible(ValueError):
    """The right-hand side is not in the column space of the system."""


class MatrixFormatError(ValueError):
    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _mask(n: int) -> int:
    return (1 << n) - 1


def _int_to_bits(x: int, n: int) -> np.ndarray:
    if n == 0:
        return np.zeros(0, dtype=np.uint8)
    raw = np.frombuffer(x.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n]


def _bits_to_int(bits: np.ndarray) -> int:
    packed = np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


@dataclass(frozen=True)
class BitVector:
    n: int
    bits: int = 0

    def __post_init__(self):
        if not 0 <= self.n <= MAX_LENGTH:
            raise ValueError(f"length {self.n} outside [0, {MAX_LENGTH}]")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError("bits set beyond the vector length")

    @classmethod
    def from_string(cls, s: str) -> BitVector:
        return cls(len(s), int(s[::-1], 2) if s else 0)

    @classmethod
    def from_support(cls, n: int, support: Iterable[int]) -> BitVector:
        bits = 0
        for i in support:
            bits |= 1 << i
        return cls(n, bits)

    @classmethod
    def ones(cls, n: int) -> BitVector:
        return cls(n, _mask(n))

    def to_string(self) -> str:
        return format(self.bits, f"0{self.n}b")[::-1] if self.n else ""

    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        return [i for i in range(self.n) if self.bits >> i & 1]

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return self.bits >> i & 1

    def __xor__(self, other: BitVector) -> BitVector:
        if self.n != other.n:
            raise ValueError("length mismatch")
        return BitVector(self.n, self.bits ^ other.bits)

    def __len__(self) -> int:
        return self.n

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class BitMatrix:
    """A t x n binary matrix, rows packed as ints."""

    n: int
    rows: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= self.n <= MAX_LENGTH:
            raise ValueError(f"length {self.n} outside [0, {MAX_LENGTH}]")
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        for r in self.rows:
            if r < 0 or r >> self.n:
                raise ValueError("bits set beyond the row length")

    @property
    def t(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.n)

    @classmethod
    def zeros(cls, t: int, n: int) -> BitMatrix:
        return cls(n, (0,) * t)

    @classmethod
    def from_rows(cls, rows: Sequence[BitVector], n: int | None = None) -> BitMatrix:
        if n is None:
            if not rows:
                raise ValueError("cannot infer length of an empty row list")
            n = rows[0].n
        if any(r.n != n for r in rows):
            raise ValueError("rows of unequal length")
        return cls(n, tuple(r.bits for r in rows))

    @classmethod
    def from_strings(cls, rows: Sequence[str], n: int | None = None) -> BitMatrix:
        vecs = [BitVector.from_string(s) for s in rows]
        return cls.from_rows(vecs, n if n is not None else (vecs[0].n if vecs else 0))

    @classmethod
    def from_array(cls, a) -> BitMatrix:
        a = np.asarray(a, dtype=np.uint8)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls(a.shape[1], tuple(_bits_to_int(row & 1) for row in a))

    @classmethod
    def from_columns(cls, symbols: Sequence[int], t: int) -> BitMatrix:
        rows = [0] * t
        for j, s in enumerate(symbols):
            if s >> t:
                raise ValueError(f"symbol {s} does not fit in {t} bits")
            for i in range(t):
                if s >> i & 1:
                    rows[i] |= 1 << j
        return cls(len(symbols), tuple(rows))

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, tuple(1 << i for i in range(n)))

    def row(self, i: int) -> BitVector:
        return BitVector(self.n, self.rows[i])

    def row_vectors(self) -> list[BitVector]:
        return [BitVector(self.n, r) for r in self.rows]

    def column(self, j: int) -> int:
        """Column ``j`` as a GF(2^t) symbol (row 0 is the low bit)."""
        s = 0
        for i, r in enumerate(self.rows):
            s |= (r >> j & 1) << i
        return s

    def columns(self) -> list[int]:
        return [self.column(j) for j in range(self.n)]

    def column_vector(self, j: int) -> BitVector:
        return BitVector(self.t, self.column(j))

    def transpose(self) -> BitMatrix:
        return BitMatrix(self.t, tuple(self.column(j) for j in range(self.n)))

    def to_strings(self) -> list[str]:
        return [BitVector(self.n, r).to_string() for r in self.rows]

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.t, self.n), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            out[i] = _int_to_bits(r, self.n)
        return out

    def to_text(self) -> str:
        return format_matrix(self)

    def hstack(self, other: BitMatrix) -> BitMatrix:
        if self.t != other.t:
            raise ValueError("row count mismatch")
        return BitMatrix(self.n + other.n, tuple(a | b << self.n for a, b in zip(self.rows, other.rows)))

    def vstack(self, other: BitMatrix) -> BitMatrix:
        if self.n != other.n:
            raise ValueError("column count mismatch")
        return BitMatrix(self.n, self.rows + other.rows)

    def split(self) -> tuple[BitMatrix, BitMatrix]:
        if self.n % 2:
            raise ValueError(f"cannot split {self.n} columns in half")
        h = self.n // 2
        lo = _mask(h)
        return BitMatrix(h, tuple(r & lo for r in self.rows)), BitMatrix(h, tuple(r >> h for r in self.rows))

    def mul_vec(self, v: BitVector) -> BitVector:
        """M . v^T over GF(2)."""
        if v.n != self.n:
            raise ValueError("length mismatch")
        out = 0
        for i, r in enumerate(self.rows):
            out |= ((r & v.bits).bit_count() & 1) << i
        return BitVector(self.t, out)

    def syndromes(self, v: BitMatrix) -> BitMatrix:
        """Rowwise ``self . row^T`` for every row of ``v``; shape v.t x self.t."""
        return BitMatrix(self.t, tuple(self.mul_vec(BitVector(self.n, r)).bits for r in v.rows))

    def __xor__(self, other: BitMatrix) -> BitMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return BitMatrix(self.n, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    __add__ = __xor__
    __sub__ = __xor__

    def __str__(self) -> str:
        return "\n".join(self.to_strings())


def weight(v: BitVector) -> int:
    return v.weight()


def t_weight(v: BitMatrix) -> int:
    """Size of the union of the row supports."""
    acc = 0
    for r in v.rows:
        acc |= r
    return acc.bit_count()


def t_distance(u: BitMatrix, v: BitMatrix) -> int:
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch {u.shape} vs {v.shape}")
    return t_weight(u ^ v)


def _rref(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form, leftmost pivots. Returns (rows, pivot columns)."""
    rows = list(rows)
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        bit = 1 << col
        p = next((i for i in range(top, len(rows)) if rows[i] & bit), None)
        if p is None:
            continue
        rows[top], rows[p] = rows[p], rows[top]
        piv = rows[top]
        for i in range(len(rows)):
            if i != top and rows[i] & bit:
                rows[i] ^= piv
        pivots.append(col)
        top += 1
        if top == len(rows):
            break
    return rows[:top], pivots


def rank(M: BitMatrix | Sequence[BitVector]) -> int:
    if isinstance(M, BitMatrix):
        rows, n = list(M.rows), M.n
    else:
        rows = [v.bits for v in M]
        n = max((v.n for v in M), default=0)
    return len(_rref(rows, n)[0])


def solve(H: BitMatrix, s: BitVector) -> BitVector:
    """Some v with H . v^T = s^T.

    Deterministic: leftmost-pivot elimination with every free variable set
    to zero. Raises ``Infeasible`` if no solution exists.
    """
    if s.n != H.t:
        raise ValueError(f"right-hand side has length {s.n}, expected {H.t}")
    n = H.n
    aug = [r | (s.bits >> i & 1) << n for i, r in enumerate(H.rows)]
    red, pivots = _rref(aug, n + 1)
    if pivots and pivots[-1] == n:
        raise Infeasible("target not in the column space")
    v = 0
    for row, col in zip(red, pivots):
        if row >> n & 1:
            v |= 1 << col
    return BitVector(n, v)


def span_contains(columns: Sequence[BitVector], targets: Sequence[BitVector]) -> bool:
    """True iff every target lies in the GF(2) span of ``columns``."""
    lengths = {v.n for v in columns} | {v.n for v in targets}
    if len(lengths) > 1:
        raise ValueError("vectors of unequal length")
    n = lengths.pop() if lengths else 0
    basis, pivots = _rref([v.bits for v in columns], n)
    for tv in targets:
        x = tv.bits
        for row, col in zip(basis, pivots):
            if x >> col & 1:
                x ^= row
        if x:
            return False
    return True


def nullspace(M: BitMatrix) -> BitMatrix:
    """Basis (as rows) of {x : M . x^T = 0}."""
    n = M.n
    red, pivots = _rref(list(M.rows), n)
    pivset = set(pivots)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        x = 1 << f
        for row, col in zip(red, pivots):
            if row >> f & 1:
                x |= 1 << col
        basis.append(x)
    return BitMatrix(n, tuple(basis))


def format_matrix(M: BitMatrix) -> str:
    """Shared text format: a ``t n`` header followed by t lines of n bits."""
    return "\n".join([f"{M.t} {M.n}", *M.to_strings()]) + "\n"


def parse_matrix(text: str) -> BitMatrix:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise MatrixFormatError("empty input, expected a 't n' header", 1)
    head = lines[0].split()
    if len(head) != 2 or not all(h.isdigit() for h in head):
        raise MatrixFormatError(f"bad header {lines[0]!r}, expected 't n'", 1, 1)
    t, n = int(head[0]), int(head[1])
    body = lines[1:]
    if len(body) != t:
        raise MatrixFormatError(f"expected {t} rows, found {len(body)}", len(lines) + 1)
    rows = []
    for i, line in enumerate(body, start=2):
        line = line.strip()
        for j, ch in enumerate(line, start=1):
            if ch not in "01":
                raise MatrixFormatError(f"unexpected character {ch!r}", i, j)
        if len(line) != n:
            raise MatrixFormatError(f"row has {len(line)} entries, expected {n}", i, len(line) + 1)
        rows.append(line)
    return BitMatrix.from_strings(rows, n)
