from itertools import product

import numpy as np
import pytest

from rmcover.bounds import lb_ball_covering, ub_dual_distance
from rmcover.exactradius import (
    closed_form_exact, distance_to_code, exact_rm, exact_rt, exact_rt_geometric,
    exact_rt_lifted, exact_rt_span, within_caps,
)
from rmcover.gf2core import BitMatrix
from rmcover.rmcode import CapExceeded, random_code, rm


def test_geometric_examples():
    assert exact_rt_geometric(rm(0, 2), 1).exact == 2
    assert exact_rt_geometric(rm(1, 2), 2).exact == 1
    assert exact_rt_geometric(rm(1, 3), 1).exact == 2


def test_span_examples():
    for m in range(1, 4):
        for t in (1, 2, 3):
            assert exact_rt_span(rm(m - 1, m), t) == 1
    # min(t, m) + 1 at m = 2 belongs to r = m - 2 = 0; RM(1, 2) is the parity code
    assert exact_rt_span(rm(0, 2), 3) == 3
    assert exact_rt_span(rm(1, 2), 3) == 1
    assert exact_rt_span(rm(2, 2), 2) == 0


def test_lifted_examples():
    assert exact_rt_lifted(rm(0, 3), 2) == 6
    assert exact_rt_lifted(rm(2, 2), 3) == 0
    assert exact_rt_lifted(rm(1, 3), 2) == 3


def test_closed_form_examples():
    assert closed_form_exact(3, 0, 2) == 3
    assert closed_form_exact(5, 2, 4) == 5
    assert closed_form_exact(1, 1, 5) is None
    with pytest.raises(ValueError):
        closed_form_exact(1, 3, 2)


def test_closed_forms_agree_where_rows_overlap():
    # at m = 2, r = 0 is also r = m - 2; at m = 1, r = 0 is also r = m - 1
    for t in range(1, 6):
        assert closed_form_exact(t, 0, 2) == 4 - (1 << max(2 - t, 0)) == min(t, 2) + 1
        assert closed_form_exact(t, 0, 1) == 1


def brute_force_radius(code, t):
    n = code.n
    best, witness = -1, None
    for bits in product("01", repeat=t * n):
        s = "".join(bits)
        v = BitMatrix.from_strings([s[i * n:(i + 1) * n] for i in range(t)], n)
        d = distance_to_code(v, code)
        if d > best:
            best, witness = d, v
    return best, witness


@pytest.mark.parametrize("r,m,t", [(0, 2, 1), (1, 2, 1), (0, 2, 2), (1, 2, 2), (1, 3, 1), (0, 3, 1)])
def test_geometric_matches_definition_and_witness_is_least(r, m, t):
    code = rm(r, m)
    rep = exact_rt_geometric(code, t)
    best, witness = brute_force_radius(code, t)
    assert rep.exact == best
    # brute force scans in text order, so its first deepest word is the least one
    assert rep.witness == witness
    assert distance_to_code(rep.witness, code) == rep.exact


def test_witness_reaches_radius_on_random_codes():
    rng = np.random.default_rng(3)
    for _ in range(10):
        n = int(rng.integers(2, 7))
        code = random_code(n, int(rng.integers(0, n)), rng)
        for t in (1, 2):
            rep = exact_rt_geometric(code, t)
            assert distance_to_code(rep.witness, code) == rep.exact


def test_three_oracles_agree_on_small_codes():
    rng = np.random.default_rng(11)
    codes = [rm(r, m) for m in range(1, 4) for r in range(m + 1)]
    codes += [random_code(n, k, rng) for n, k in [(5, 2), (6, 3), (7, 1), (8, 4), (4, 0)]]
    for code in codes:
        for t in (1, 2):
            vals = {meth: exact_rt(code, t, meth) for meth in ("geometric", "span", "lifted")}
            assert len(set(vals.values())) == 1, (code, t, vals)


def test_method_aliases():
    assert exact_rm(1, 1, 3, "rt1") == exact_rm(1, 1, 3, "rt2") == exact_rm(1, 1, 3, "rt3") == 2
    with pytest.raises(ValueError):
        exact_rm(1, 1, 3, "nope")


def test_caps_are_errors():
    with pytest.raises(CapExceeded) as err:
        exact_rt_geometric(rm(1, 4), 2)
    assert err.value.cap == 24 and err.value.value == 32
    with pytest.raises(CapExceeded):
        exact_rt_lifted(rm(1, 5), 1)
    with pytest.raises(CapExceeded):
        exact_rt_span(rm(1, 4), 2)
    assert not within_caps(rm(1, 4), 2)
    value = exact_rt(rm(1, 4), 2, "geometric", cap=32)
    assert lb_ball_covering(2, 1, 4).integer_form <= value <= ub_dual_distance(2, 4).integer_form


def test_full_space_has_radius_zero():
    for t in (1, 2, 3):
        assert exact_rt_geometric(rm(2, 2), t).exact == 0
        assert exact_rt_span(rm(3, 3), t) == 0


def test_radius_monotone_and_subadditive_on_random_codes():
    rng = np.random.default_rng(5)
    for _ in range(8):
        n = int(rng.integers(2, 7))
        code = random_code(n, int(rng.integers(0, n + 1)), rng)
        vals = {t: exact_rt_geometric(code, t).exact for t in (1, 2, 3)}
        assert vals[1] <= vals[2] <= vals[3]
        assert vals[2] <= 2 * vals[1]
        assert vals[3] <= vals[1] + vals[2]
