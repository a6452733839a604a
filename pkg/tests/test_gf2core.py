import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rmcover.gf2core import (
    BitMatrix, BitVector, Infeasible, MatrixFormatError, format_matrix, nullspace,
    parse_matrix, rank, solve, span_contains, t_distance, t_weight, weight,
)


def bv(s):
    return BitVector.from_string(s)


def bm(*rows):
    return BitMatrix.from_strings(list(rows))


@st.composite
def matrices(draw, max_t=4, max_n=10, t=None, n=None):
    t = draw(st.integers(0, max_t)) if t is None else t
    n = draw(st.integers(1, max_n)) if n is None else n
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=t, max_size=t))
    return BitMatrix(n, tuple(rows))


def test_weight_examples():
    assert weight(BitVector(8, 0)) == 0
    assert weight(BitVector.ones(8)) == 8
    assert weight(bv("10110000")) == 3


def test_string_roundtrip_and_bit_order():
    v = bv("1011")
    assert v.support() == [0, 2, 3]
    assert v.to_string() == "1011"
    assert v[1] == 0


def test_vector_rejects_stray_bits():
    with pytest.raises(ValueError):
        BitVector(3, 0b1000)


def test_t_weight_examples():
    assert t_weight(BitMatrix.zeros(2, 4)) == 0
    assert t_weight(bm("1000", "0100")) == 2
    assert t_weight(bm("1100", "0110")) == 3


def test_t_distance_examples():
    u = bm("1101", "0110")
    assert t_distance(u, u) == 0
    assert t_distance(BitMatrix.zeros(2, 4), u) == t_weight(u)
    swapped = bm("0110", "1101")
    assert t_distance(u, swapped) == weight(bv("1101") ^ bv("0110"))
    with pytest.raises(ValueError):
        t_distance(u, BitMatrix.zeros(3, 4))


def test_t_weight_is_symbol_weight_exhaustive():
    for t in (1, 2, 3):
        for n in (1, 4, 8):
            if t * n > 12:
                continue
            for bits in range(1 << (t * n)):
                rows = tuple(bits >> (i * n) & ((1 << n) - 1) for i in range(t))
                M = BitMatrix(n, rows)
                assert t_weight(M) == sum(1 for s in M.columns() if s)


def test_columns_low_row_is_low_bit():
    M = bm("10", "11")
    assert M.columns() == [0b11, 0b10]
    assert BitMatrix.from_columns(M.columns(), 2) == M


@settings(max_examples=200)
@given(st.data())
def test_t_distance_is_a_metric(data):
    t = data.draw(st.integers(1, 3))
    n = data.draw(st.integers(1, 10))
    a, b, c = (data.draw(matrices(t=t, n=n)) for _ in range(3))
    assert t_distance(a, b) == t_distance(b, a)
    assert (t_distance(a, b) == 0) == (a == b)
    assert t_distance(a, c) <= t_distance(a, b) + t_distance(b, c)


def test_rank_examples():
    assert rank(BitMatrix.identity(4)) == 4
    assert rank(bm("1010", "1010")) == 1
    assert rank(BitMatrix.zeros(3, 5)) == 0


def test_solve_examples():
    s = bv("1011")
    assert solve(BitMatrix.identity(4), s) == s
    H = bm("1101", "0111")
    assert solve(H, BitVector(2, 0)) == BitVector(4, 0)
    assert solve(bm("11"), bv("1")) == bv("10")


def test_solve_infeasible():
    H = bm("110", "110")
    with pytest.raises(Infeasible):
        solve(H, bv("10"))


@settings(max_examples=200)
@given(st.data())
def test_solve_reproduces_target_or_is_infeasible(data):
    H = data.draw(matrices(max_t=5, max_n=8))
    s = BitVector(H.t, data.draw(st.integers(0, (1 << H.t) - 1)))
    aug = BitMatrix(H.n + 1, tuple(r | (s.bits >> i & 1) << H.n for i, r in enumerate(H.rows)))
    feasible = rank(aug) == rank(H)
    try:
        v = solve(H, s)
    except Infeasible:
        assert not feasible
    else:
        assert feasible
        assert H.mul_vec(v) == s


def test_span_contains_examples():
    e1, e2 = bv("100"), bv("010")
    assert span_contains([e1], [BitVector(3, 0)])
    assert not span_contains([e1], [e2])
    assert span_contains([e1, e1 ^ e2], [e2])


@settings(max_examples=200)
@given(st.data())
def test_span_contains_matches_rank(data):
    n = data.draw(st.integers(1, 8))
    cols = [BitVector(n, x) for x in data.draw(st.lists(st.integers(0, (1 << n) - 1), max_size=5))]
    targets = [BitVector(n, x) for x in data.draw(st.lists(st.integers(0, (1 << n) - 1), max_size=3))]
    expected = rank(cols + targets) == rank(cols) if cols or targets else True
    assert span_contains(cols, targets) == expected


@settings(max_examples=100)
@given(matrices(max_t=5, max_n=9))
def test_nullspace_is_orthogonal_and_complete(M):
    N = nullspace(M)
    assert N.t == M.n - rank(M)
    assert rank(N) == N.t
    for x in N.rows:
        assert M.mul_vec(BitVector(M.n, x)).bits == 0


def test_split_and_stack():
    M = bm("1011", "0001")
    a, b = M.split()
    assert a.to_strings() == ["10", "00"] and b.to_strings() == ["11", "01"]
    assert a.hstack(b) == M
    with pytest.raises(ValueError):
        bm("101").split()


def test_array_roundtrip():
    a = np.array([[1, 0, 1], [0, 1, 1]], dtype=np.uint8)
    M = BitMatrix.from_array(a)
    assert M.to_strings() == ["101", "011"]
    assert (M.to_array() == a).all()
    assert M.transpose().transpose() == M


@settings(max_examples=100)
@given(matrices(max_t=4, max_n=12))
def test_text_format_roundtrip(M):
    assert parse_matrix(format_matrix(M)) == M


@pytest.mark.parametrize("text,line,col", [
    ("", 1, 0),
    ("2 x\n", 1, 1),
    ("2 3\n101\n", 3, 0),
    ("1 3\n1a1\n", 2, 2),
    ("1 3\n10\n", 2, 3),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(MatrixFormatError) as err:
        parse_matrix(text)
    assert err.value.line == line
    assert err.value.column == col


def test_exhaustive_small_rank_is_basis_size():
    for rows in itertools.product(range(8), repeat=3):
        span = {0}
        for r in rows:
            span |= {x ^ r for x in span}
        assert 1 << rank(BitMatrix(3, rows)) == len(span)
