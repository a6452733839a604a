"""Exact generalized covering radii of small codes.

Three routes that share no code path beyond the matrices themselves:

* ``exact_rt_geometric`` – coset leaders of the t-fold syndrome space, found
  by a breadth-first search in order of increasing t-weight;
* ``exact_rt_span`` – the smallest r such that every t-tuple of syndromes
  sits inside the span of some r columns of H;
* ``exact_rt_lifted`` – the ordinary covering radius of the code read over
  GF(2^t), by repeated Hamming-ball dilation of the codeword set.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .gf2core import BitMatrix, _rref, t_distance
from .rmcode import DEFAULT_CAP, CapExceeded, LinearCode, enumerate_codewords, rm

SPAN_MAX_N = 12
SPAN_MAX_BITS = 16

METHODS = ("geometric", "span", "lifted")
METHOD_ALIASES = {"rt2": "geometric", "rt1": "span", "rt3": "lifted"}


@dataclass(frozen=True)
class RadiusReport:
    t: int
    code: LinearCode
    exact: int
    oracle: str
    witness: BitMatrix | None = None

    @property
    def r(self) -> int | None:
        return getattr(self.code, "r", None)

    @property
    def m(self) -> int | None:
        return getattr(self.code, "m", None)


def closed_form_exact(t: int, r: int, m: int) -> int | None:
    """Known exact values of R_t(r, m); None where no closed form applies."""
    if t < 1 or not 0 <= r <= m:
        raise ValueError(f"invalid parameters t={t}, r={r}, m={m}")
    if r == m:
        return 0
    if r == m - 1:
        return 1
    if r == m - 2:
        return min(t, m) + 1
    if r == 0:
        return (1 << m) - (1 << max(m - t, 0))
    return None


def _column_ints(M: BitMatrix) -> list[int]:
    return [M.column(j) for j in range(M.n)]


def _syndrome_depths(code: LinearCode, t: int) -> np.ndarray:
    """Coset-leader t-weight for every packed t-fold syndrome."""
    mp = code.n - code.k
    size = 1 << (t * mp)
    cols = _column_ints(code.H)
    gens = set()
    for h in cols:
        for a in range(1, 1 << t):
            g = 0
            for i in range(t):
                if a >> i & 1:
                    g |= h << (i * mp)
            if g:
                gens.add(g)
    gens_arr = np.array(sorted(gens), dtype=np.int64)
    depth = np.full(size, -1, dtype=np.int16)
    depth[0] = 0
    frontier = np.zeros(1, dtype=np.int64)
    d = 0
    block = max(1, (1 << 22) // max(1, gens_arr.size))
    while frontier.size:
        d += 1
        found = []
        for start in range(0, frontier.size, block):
            cand = (frontier[start:start + block, None] ^ gens_arr[None, :]).ravel()
            cand = cand[depth[cand] < 0]
            if cand.size:
                cand = np.unique(cand)
                depth[cand] = d
                found.append(cand)
        frontier = np.concatenate(found) if found else np.zeros(0, dtype=np.int64)
    if (depth < 0).any():
        raise ValueError("parity-check matrix is not full rank")
    return depth


def _least_deepest(code: LinearCode, t: int, depth: np.ndarray, radius: int) -> BitMatrix:
    """Lexicographically least t x n matrix (rows read as bit strings) of maximal depth."""
    n, mp = code.n, code.n - code.k
    cols = _column_ints(code.H)
    total = t * n
    # key bit p is text position q = total-1-p, i.e. row q // n, column q % n
    contrib = []
    for p in range(total):
        q = total - 1 - p
        contrib.append(cols[q % n] << ((q // n) * mp))
    low_bits = min(total, 16)
    table = np.zeros(1, dtype=np.int64)
    for p in range(low_bits):
        table = np.concatenate([table, table ^ contrib[p]])
    for hi in range(1 << (total - low_bits)):
        s = 0
        for p in range(low_bits, total):
            if hi >> (p - low_bits) & 1:
                s ^= contrib[p]
        hits = np.flatnonzero(depth[table ^ s] == radius)
        if hits.size:
            key = hi << low_bits | int(hits[0])
            text = format(key, f"0{total}b")
            return BitMatrix.from_strings([text[i * n:(i + 1) * n] for i in range(t)], n)
    raise AssertionError("no syndrome attains the maximal depth")


def exact_rt_geometric(code: LinearCode, t: int, cap: int = DEFAULT_CAP) -> RadiusReport:
    """max over v of min over c in C^t of d_t(v, c), with a deepest witness."""
    if t < 1:
        raise ValueError("t must be positive")
    if t * code.n > cap:
        raise CapExceeded("t*n", t * code.n, cap)
    if code.k == code.n:
        return RadiusReport(t, code, 0, "geometric", BitMatrix.zeros(t, code.n))
    depth = _syndrome_depths(code, t)
    radius = int(depth.max())
    witness = _least_deepest(code, t, depth, radius)
    return RadiusReport(t, code, radius, "geometric", witness)


def exact_rt_span(code: LinearCode, t: int, max_n: int = SPAN_MAX_N,
                  max_bits: int = SPAN_MAX_BITS) -> int:
    """Smallest r such that any t syndromes lie in the span of some r columns of H."""
    if t < 1:
        raise ValueError("t must be positive")
    mp = code.n - code.k
    if mp == 0:
        return 0
    if code.n > max_n:
        raise CapExceeded("n", code.n, max_n)
    if t * mp > max_bits:
        raise CapExceeded("t*(n-k)", t * mp, max_bits)
    cols = _column_ints(code.H)
    covered = np.zeros(1 << (t * mp), dtype=bool)
    seen: set[tuple[int, ...]] = set()
    for r in range(0, code.n + 1):
        for subset in combinations(range(code.n), r):
            basis, _ = _rref([cols[j] for j in subset], mp)
            key = tuple(basis)
            if key in seen:
                continue
            seen.add(key)
            elems = np.zeros(1, dtype=np.int64)
            for b in basis:
                elems = np.concatenate([elems, elems ^ b])
            keys = elems
            for i in range(1, t):
                keys = (keys[:, None] ^ (elems[None, :] << (i * mp))).ravel()
            covered[keys] = True
        if covered.all():
            return r
    raise ValueError("parity-check matrix is not full rank")


def exact_rt_lifted(code: LinearCode, t: int, cap: int = DEFAULT_CAP) -> int:
    """Covering radius of the code over GF(2^t) generated by the same binary G."""
    if t < 1:
        raise ValueError("t must be positive")
    n = code.n
    if t * n > cap:
        raise CapExceeded("t*n", t * n, cap)
    if n == 0:
        return 0
    # symbol j occupies index bits [t(n-1-j), t(n-j)); axis j of the reshaped cube
    gens = []
    for g in code.G.rows:
        for i in range(t):
            idx = 0
            for j in range(n):
                if g >> j & 1:
                    idx |= 1 << (i + t * (n - 1 - j))
            gens.append(idx)
    words = np.zeros(1, dtype=np.int64)
    for g in gens:
        words = np.concatenate([words, words ^ g])
    covered = np.zeros(1 << (t * n), dtype=bool)
    covered[words] = True
    cube = covered.reshape((1 << t,) * n)
    radius = 0
    while not cube.all():
        grown = cube.copy()
        for axis in range(n):
            grown |= cube.any(axis=axis, keepdims=True)
        cube = grown
        radius += 1
    return radius


def exact_rt(code: LinearCode, t: int, method: str = "geometric", cap: int | None = None) -> int:
    method = METHOD_ALIASES.get(method, method)
    if method == "geometric":
        return exact_rt_geometric(code, t, cap if cap is not None else DEFAULT_CAP).exact
    if method == "lifted":
        return exact_rt_lifted(code, t, cap if cap is not None else DEFAULT_CAP)
    if method == "span":
        if cap is None:
            return exact_rt_span(code, t)
        return exact_rt_span(code, t, max_n=max(cap, SPAN_MAX_N), max_bits=max(cap, SPAN_MAX_BITS))
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def exact_rm(t: int, r: int, m: int, method: str = "geometric", cap: int | None = None) -> int:
    return exact_rt(rm(r, m), t, method, cap)


def within_caps(code: LinearCode, t: int, method: str = "geometric") -> bool:
    method = METHOD_ALIASES.get(method, method)
    if method == "span":
        mp = code.n - code.k
        return mp == 0 or (code.n <= SPAN_MAX_N and t * mp <= SPAN_MAX_BITS)
    return t * code.n <= DEFAULT_CAP


def distance_to_code(v: BitMatrix, code: LinearCode, cap: int = DEFAULT_CAP) -> int:
    """d_t(v, C^t) by scanning every element of C^t."""
    return min(t_distance(v, c) for c in enumerate_codewords(code, v.t, cap))

