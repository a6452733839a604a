"""Access planning for batches of linear queries.

Storage holds the n combinations given by the columns of H.  To answer t
queries s_1..s_t, pick any v with H v_j^T = s_j^T, cover v by a codeword
tuple c, and read only the columns in the union of supports of v - c: the
rows of v - c say how to combine them.

For RM(m-2, m) the columns of H are exactly the vectors on an affine
hyperplane f(h) = 1, so a least access set comes straight from a basis of
the query span; that plan replaces the cover-based one when it is smaller.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cover import cover_many, guarantee
from .gf2core import BitMatrix, BitVector, _rref, solve
from .rmcode import DEFAULT_CAP, RMCode, rm


@dataclass(frozen=True)
class QueryBatch:
    queries: BitMatrix
    code: RMCode

    def __post_init__(self):
        if self.queries.n != self.code.H.t:
            raise ValueError(f"queries have length {self.queries.n}, H has {self.code.H.t} rows")

    @property
    def t(self) -> int:
        return self.queries.t


@dataclass(frozen=True)
class AccessPlan:
    indices: tuple[int, ...]
    coefficients: BitMatrix
    bound: int

    def as_dict(self) -> dict:
        return {
            "indices": [i + 1 for i in self.indices],
            "coefficients": self.coefficients.to_strings(),
            "bound": self.bound,
        }


@lru_cache(maxsize=64)
def _right_inverse(r: int, m: int) -> np.ndarray:
    # solve() is linear in its right-hand side, so its answers on unit vectors
    # give a matrix P with solve(H, s) = P s
    H = rm(r, m).H
    cols = [solve(H, BitVector(H.t, 1 << k)).bits for k in range(H.t)]
    return BitMatrix(H.n, tuple(cols)).to_array().T.astype(np.int64)


def _lift(batches: list[QueryBatch]) -> np.ndarray:
    code = batches[0].code
    S = np.stack([b.queries.to_array() for b in batches]).astype(np.int64)
    P = _right_inverse(code.r, code.m)
    return ((S @ P.T) & 1).astype(np.uint8)


def _plan_from(e: np.ndarray, bound: int) -> AccessPlan:
    idx = np.flatnonzero(e.any(axis=0))
    coeffs = BitMatrix.from_array(e[:, idx]) if idx.size else BitMatrix.zeros(e.shape[0], 0)
    return AccessPlan(tuple(int(i) for i in idx), coeffs, bound)


@lru_cache(maxsize=64)
def _affine_form(r: int, m: int) -> tuple[int, dict[int, int]]:
    H = rm(r, m).H
    cols = H.columns()
    f = solve(H.transpose(), BitVector.ones(H.n)).bits
    return f, {c: j for j, c in enumerate(cols)}


def _hyperplane_plan(batch: QueryBatch, bound: int) -> AccessPlan:
    code = batch.code
    f, where = _affine_form(code.r, code.m)
    basis, _ = _rref(list(batch.queries.rows), code.H.t)
    odd = [u for u in basis if (u & f).bit_count() & 1]
    if odd:
        pts = [u if (u & f).bit_count() & 1 else u ^ odd[0] for u in basis]
    else:
        h0 = code.H.column(0)
        pts = [h0] + [h0 ^ u for u in basis]
    idx = sorted(where[p] for p in pts)
    A = BitMatrix.from_columns([code.H.column(j) for j in idx], code.H.t)
    coeffs = BitMatrix(len(idx), tuple(solve(A, s).bits for s in batch.queries.row_vectors()))
    return AccessPlan(tuple(idx), coeffs, bound)


def plan(batch: QueryBatch, cap: int = DEFAULT_CAP) -> AccessPlan:
    return plan_many([batch], cap)[0]


def plan_many(batches: list[QueryBatch], cap: int = DEFAULT_CAP) -> list[AccessPlan]:
    """Plan several batches that share a code and a query count."""
    if not batches:
        return []
    code, t = batches[0].code, batches[0].t
    if any(b.code != code or b.t != t for b in batches):
        raise ValueError("batches must share a code and a query count")
    V = _lift(batches)
    C, _, _ = cover_many(V, code.r, cap)
    bound = guarantee(t, code.r, code.m)
    plans = [_plan_from(v ^ c, bound) for v, c in zip(V, C)]
    if code.r == code.m - 2:
        bound = min(bound, min(t, code.m) + 1)
        plans = [_pick(p, _hyperplane_plan(b, bound)) for p, b in zip(plans, batches)]
    return plans


def _pick(from_cover: AccessPlan, exact: AccessPlan) -> AccessPlan:
    if len(from_cover.indices) <= len(exact.indices):
        return AccessPlan(from_cover.indices, from_cover.coefficients, exact.bound)
    return exact


def verify(p: AccessPlan, batch: QueryBatch) -> bool:
    """Rebuild every query from the chosen columns and check the size bound."""
    H = batch.code.H
    if p.coefficients.shape != (batch.t, len(p.indices)):
        return False
    if len(set(p.indices)) != len(p.indices) or any(not 0 <= i < H.n for i in p.indices):
        return False
    cols = [H.column(i) for i in p.indices]
    for row, target in zip(p.coefficients.rows, batch.queries.rows):
        acc = 0
        for k, col in enumerate(cols):
            if row >> k & 1:
                acc ^= col
        if acc != target:
            return False
    return len(p.indices) <= p.bound
