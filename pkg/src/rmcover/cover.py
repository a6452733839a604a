"""A t-covering algorithm for RM(r, m) with a per-call radius certificate.

``cover_recursive`` walks the (u, u+v) decomposition down to RM(1, m') and
RM(m', m') leaves; the RM(1, m') leaves are solved by an exhaustive joint
search over RM(1, m')^t.  ``cover_subadditive`` does the same row by row.
``cover`` runs both and keeps the closer answer.

The batched functions work on uint8 arrays of shape (B, t, 2^m); the
``BitMatrix`` wrappers are thin shims over them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bounds import best_upper_bound
from .exactradius import closed_form_exact, exact_rt_geometric, within_caps
from .gf2core import BitMatrix
from .rmcode import DEFAULT_CAP, CapExceeded, codeword_array, rm

BRANCHES = ("recursive", "subadditive", "majority")
_CHUNK = 1 << 22


@dataclass(frozen=True)
class CoverResult:
    codeword: BitMatrix
    distance: int
    guarantee: int
    path: str

    def as_dict(self) -> dict:
        return {
            "codeword": self.codeword.to_strings(),
            "distance": self.distance,
            "guarantee": self.guarantee,
            "branch": self.path,
        }


def _order(n: int) -> int:
    m = n.bit_length() - 1
    if n < 1 or 1 << m != n:
        raise ValueError(f"length {n} is not a power of two")
    return m


def _check_batch(V: np.ndarray, r: int, lowest: int = 1) -> int:
    if V.ndim != 3:
        raise ValueError("expected an array of shape (B, t, 2^m)")
    m = _order(V.shape[2])
    if not lowest <= r <= m:
        raise ValueError(f"r={r} outside [{lowest}, {m}]")
    return m


def _pack(a: np.ndarray) -> np.ndarray:
    """Pack the last axis (bits) into little-endian words of min(max(n, 8), 64) bits."""
    n = a.shape[-1]
    width = max(8, min(64, n))
    total = -(-n // width) * width
    if n != total:
        pad = np.zeros(a.shape[:-1] + (total - n,), dtype=np.uint8)
        a = np.concatenate([a, pad], axis=-1)
    return np.packbits(a, axis=-1, bitorder="little").view(f"<u{width // 8}")


@lru_cache(maxsize=16)
def _rm1_tables(m: int) -> tuple[np.ndarray, np.ndarray]:
    words = codeword_array(rm(1, m))
    return words, _pack(words)


def _base_r1(V: np.ndarray, m: int, cap: int) -> np.ndarray:
    """Joint argmin over RM(1, m)^t; ties go to the least tuple in message order."""
    B, t, n = V.shape
    if t * (m + 1) > cap:
        raise CapExceeded("t*(m+1)", t * (m + 1), cap)
    words, packed = _rm1_tables(m)
    K, w = packed.shape
    out = np.empty_like(V)
    if t == 1:
        Vp = _pack(V[:, 0, :])
        cols = np.ascontiguousarray(packed.T)
        step = max(1, (1 << 18) // K)
        for s in range(0, B, step):
            blk = Vp[s:s + step]
            d = np.zeros((blk.shape[0], K), dtype=np.int32)
            for k in range(w):
                d += np.bitwise_count(blk[:, k, None] ^ cols[k][None, :])
            out[s:s + step, 0, :] = words[d.argmin(axis=1)]
        return out
    for b in range(B):
        Vp = _pack(V[b])
        diffs = [Vp[i][None, :] ^ packed for i in range(t)]
        pre = diffs[0]
        for i in range(1, t - 1):
            pre = (pre[:, None, :] | diffs[i][None, :, :]).reshape(-1, w)
        pre = np.ascontiguousarray(pre.T)
        last = np.ascontiguousarray(diffs[t - 1].T)
        step = max(1, _CHUNK // K)
        best, best_idx = n + 1, 0
        for s in range(0, pre.shape[1], step):
            d = np.bitwise_count(pre[0, s:s + step, None] | last[0][None, :])
            if w > 1:
                d = d.astype(np.uint16)
            for k in range(1, w):
                d += np.bitwise_count(pre[k, s:s + step, None] | last[k][None, :])
            j = int(d.argmin())
            if d.flat[j] < best:
                best, best_idx = int(d.flat[j]), s * K + j
        for i in range(t - 1, -1, -1):
            best_idx, c = divmod(best_idx, K)
            out[b, i] = words[c]
    return out


def _recursive(V: np.ndarray, r: int, m: int, cap: int) -> np.ndarray:
    if r == m:
        return V.copy()
    if r == 1:
        return _base_r1(V, m, cap)
    h = V.shape[2] // 2
    c1 = _recursive(V[:, :, :h], r, m - 1, cap)
    c2 = _recursive(V[:, :, h:] ^ c1, r - 1, m - 1, cap)
    return np.concatenate([c1, c1 ^ c2], axis=2)


def cover_recursive_many(V: np.ndarray, r: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    V = np.asarray(V, dtype=np.uint8)
    m = _check_batch(V, r)
    return _recursive(V, r, m, cap)


def cover_subadditive_many(V: np.ndarray, r: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    V = np.asarray(V, dtype=np.uint8)
    m = _check_batch(V, r)
    B, t, n = V.shape
    return _recursive(V.reshape(B * t, 1, n), r, m, cap).reshape(B, t, n)


def t_distances(V: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Row-support-union sizes of V - C, one per batch entry."""
    return np.any(V != C, axis=1).sum(axis=1)


def _majority(V: np.ndarray) -> np.ndarray:
    B, t, n = V.shape
    weights = (1 << np.arange(t, dtype=np.int64))[None, :, None]
    symbols = (V.astype(np.int64) * weights).sum(axis=1)
    out = np.empty_like(V)
    for b in range(B):
        counts = np.bincount(symbols[b], minlength=1 << t)
        best = int(counts.argmax())
        for i in range(t):
            out[b, i, :] = best >> i & 1
    return out


def cover_many(V: np.ndarray, r: int, cap: int = DEFAULT_CAP):
    """Batched ``cover``: returns (codewords, distances, branch names)."""
    V = np.asarray(V, dtype=np.uint8)
    m = _check_batch(V, r, lowest=0)
    B, t, _ = V.shape
    if r == 0:
        C = _majority(V)
        return C, t_distances(V, C), ["majority"] * B
    C = _recursive(V, r, m, cap)
    d = t_distances(V, C)
    branches = ["recursive"] * B
    if t > 1:
        Cs = cover_subadditive_many(V, r, cap)
        ds = t_distances(V, Cs)
        better = ds < d
        C[better] = Cs[better]
        d = np.where(better, ds, d)
        branches = ["subadditive" if x else "recursive" for x in better]
    return C, d, branches


def _as_batch(v: BitMatrix) -> np.ndarray:
    return v.to_array()[None]


def cover_recursive(v: BitMatrix, r: int, cap: int = DEFAULT_CAP) -> BitMatrix:
    return BitMatrix.from_array(cover_recursive_many(_as_batch(v), r, cap)[0])


def cover_subadditive(v: BitMatrix, r: int, cap: int = DEFAULT_CAP) -> BitMatrix:
    return BitMatrix.from_array(cover_subadditive_many(_as_batch(v), r, cap)[0])


def cover(v: BitMatrix, r: int, cap: int = DEFAULT_CAP) -> CoverResult:
    if v.t < 1:
        raise ValueError("need at least one row")
    C, d, branches = cover_many(_as_batch(v), r, cap)
    m = _order(v.n)
    return CoverResult(BitMatrix.from_array(C[0]), int(d[0]), guarantee(v.t, r, m), branches[0])


# ------------------------------------------------------------- certificate

@lru_cache(maxsize=None)
def _r1_leaf(t: int, m: int) -> int:
    # the leaf is an exact argmin, so any certified bound on R_t(1, m) holds
    best = best_upper_bound(t, 1, m).integer_form
    code = rm(1, m)
    if within_caps(code, t):
        best = min(best, exact_rt_geometric(code, t).exact)
    return best


@lru_cache(maxsize=None)
def _recursion_certificate(t: int, r: int, m: int) -> int:
    if r == m:
        return 0
    if r == 1:
        return _r1_leaf(t, m)
    return _recursion_certificate(t, r - 1, m - 1) + _recursion_certificate(t, r, m - 1)


def guarantee(t: int, r: int, m: int) -> int:
    """A radius that ``cover`` never exceeds at (t, r, m).

    The recursive branch is bounded by summing leaf certificates along the
    (u, u+v) tree; the subadditive branch by t times the t = 1 tree.
    """
    if t < 1 or not 0 <= r <= m:
        raise ValueError(f"invalid parameters t={t}, r={r}, m={m}")
    if r == 0:
        return closed_form_exact(t, 0, m)
    rec = _recursion_certificate(t, r, m)
    if t == 1:
        return rec
    return min(rec, t * _recursion_certificate(1, r, m))


def predicted_cost(t: int, r: int, m: int) -> float:
    """Leading-order operation count of ``cover``, up to a constant factor."""
    if t < 1 or not 1 <= r <= m:
        raise ValueError(f"invalid parameters t={t}, r={r}, m={m}")
    q2 = 2.0 ** (t + 1)
    return t * 2.0 ** t * q2 ** (m + 1) * (q2 - 1) ** (-r) + t * m * 2.0 ** m
