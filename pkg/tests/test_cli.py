import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from rmcover import bounds, cli
from rmcover.cli import RunConfig, build_parser, main, run
from rmcover.gf2core import BitMatrix, format_matrix
from rmcover.rmcode import rm

GOLDEN = Path(__file__).parent / "golden"


def call(argv):
    cfg = RunConfig(**vars(build_parser().parse_args(argv.split())))
    return run(cfg)


def as_json(argv):
    code, out, err = call(argv + " --format json")
    assert code == 0, err
    return json.loads(out)


@pytest.mark.parametrize("name,argv", [
    ("bounds_1_1_3.json", "bounds --t 1 --r 1 --m 3 --format json"),
    ("bounds_2_2_8.csv", "bounds --t 2 --r 2 --m 8 --format csv"),
    ("exact_1_1_3.json", "exact --t 1 --r 1 --m 3 --method all --format json"),
    ("cover_2_1_3.json", "cover --t 2 --r 1 --m 3 --seed 0 --format json"),
    ("plan_2_1_4.json", "plan --t 2 --r 1 --m 4 --seed 0 --format json"),
    ("kappa_2_6.csv", "kappa --t 2 --m 6"),
])
def test_golden_outputs(name, argv):
    code, out, _ = call(argv)
    assert code == 0
    assert out == (GOLDEN / name).read_text()


def test_bounds_examples():
    rec = as_json("bounds --t 1 --r 1 --m 3")
    assert rec["exact"] == 2 and rec["best_upper"]["integer_form"] == 2
    for b in rec["bounds"]:
        assert {"source", "raw", "integer_form", "certified"} <= set(b)
    for t, m in [(1, 3), (2, 4), (3, 2)]:
        rec = as_json(f"bounds --t {t} --r {m} --m {m}")
        assert rec["exact"] == 0
        assert all(b["integer_form"] >= 0 for b in rec["bounds"] if b["kind"] == "upper")
    assert as_json("bounds --t 2 --r 0 --m 3")["exact"] == 6


def test_human_bounds_flags_uncertified_rows():
    code, out, _ = call("bounds --t 2 --r 2 --m 8")
    assert code == 0 and "certified" in out and bounds.ASYMPTOTIC_CAVEAT in out


def test_exact_examples():
    rec = as_json("exact --t 1 --r 1 --m 3 --method all")
    assert rec["exact"] == 2 and set(rec["methods"].values()) == {2}
    assert as_json("exact --t 2 --r 1 --m 2 --method all")["exact"] == 1
    assert as_json("exact --t 1 --r 3 --m 3 --method rt2")["exact"] == 0


def test_exact_cap_exit_code():
    code, out, err = call("exact --t 2 --r 1 --m 4")
    assert code == cli.EXIT_CAP and out == "" and "24" in err
    code, _, _ = call("exact --t 2 --r 1 --m 4 --cap-override 32")
    assert code == 0


def write(tmp_path, M):
    p = tmp_path / "in.txt"
    p.write_text(format_matrix(M))
    return str(p)


def test_cover_examples(tmp_path):
    rec = as_json(f"cover --r 1 --m 3 --input {write(tmp_path, BitMatrix.zeros(2, 8))}")
    assert rec["distance"] == 0
    c = BitMatrix(16, (rm(2, 4).G.rows[3], rm(2, 4).G.rows[0] ^ rm(2, 4).G.rows[5]))
    rec = as_json(f"cover --r 2 --m 4 --input {write(tmp_path, c)}")
    assert rec["distance"] == 0 and rec["codeword"] == c.to_strings()
    for seed in range(20):
        assert as_json(f"cover --t 1 --r 1 --m 3 --seed {seed}")["distance"] <= 2


def test_cover_input_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 4\n0101\n01x1\n")
    code, _, err = call(f"cover --r 1 --m 2 --input {bad}")
    assert code == cli.EXIT_USAGE
    assert "line 3" in err and "column 3" in err
    code, _, err = call(f"cover --r 1 --m 3 --input {write(tmp_path, BitMatrix.zeros(1, 4))}")
    assert code == cli.EXIT_USAGE and "columns" in err
    assert call("cover --r 1 --m 3")[0] == cli.EXIT_USAGE


def test_usage_errors():
    for argv in ("bounds --t 1 --r 4 --m 3", "bounds --t 0 --r 1 --m 3", "exact --t 1 --r 1 --m 3 --method nope",
                 "plan --t 1 --r 0 --m 3", "kappa --t 2 --m 1", "bounds --t 1 --m 3"):
        code, out, err = call(argv)
        assert code == cli.EXIT_USAGE and out == "" and err.startswith("error:"), argv
    with pytest.raises(SystemExit):
        build_parser().parse_args(["bounds", "--t", "x"])


def test_plan_round_trip(tmp_path):
    code = rm(1, 4)
    q = BitMatrix.from_array(np.random.default_rng(0).integers(0, 2, size=(3, code.H.t), dtype=np.uint8))
    rec = as_json(f"plan --r 1 --m 4 --input {write(tmp_path, q)}")
    assert len(rec["indices"]) <= rec["bound"]
    for row, s in zip(rec["coefficients"], q.rows):
        acc = 0
        for bit, i in zip(row, rec["indices"]):
            if bit == "1":
                acc ^= code.H.column(i - 1)
        assert acc == s


def test_kappa_csv_round_trip():
    code, out, _ = call("kappa --t 3 --m 8")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    pts = bounds.kappa_points(3, 8)
    got = [(float(r["rho"]), float(r["rate"]), r["source"].split(":")[0]) for r in rows if r["source"].startswith("rm(")]
    assert len(got) == len(pts)
    for (rho, rate, src), p in zip(got, pts):
        assert (rho, rate, src) == (round(p.rho, 6), round(p.rate, 6), p.source)


def test_kappa_human_makes_no_claim():
    code, out, _ = call("kappa --t 2 --m 10 --format human")
    assert code == 0 and "comparison against the entropy curve only" in out


def test_output_flag(tmp_path):
    out = tmp_path / "o.json"
    assert main(["exact", "--t", "1", "--r", "1", "--m", "3", "--format", "json", "--output", str(out)]) == 0
    assert json.loads(out.read_text())["exact"] == 2


def test_threads_do_not_change_results():
    a = call("cover --t 2 --r 2 --m 5 --seed 3 --format json")
    b = call("cover --t 2 --r 2 --m 5 --seed 3 --format json --threads 4")
    assert a == b


def test_selftest_passes_and_is_deterministic():
    a = call("selftest --seed 7 --format json")
    b = call("selftest --seed 7 --format json")
    assert a == b and a[0] == 0
    assert json.loads(a[1])["passed"]


def test_selftest_catches_sign_fault(monkeypatch):
    def broken(t, r, m):
        # the leading term enters with the wrong sign
        q = 2 ** t
        raw = -(1 - 1 / q) * 2 ** m - (q - 1) ** 0.5 / q * math.comb(m, r)
        return bounds.BoundValue(raw, math.floor(raw), True, "binomial")

    monkeypatch.setattr(bounds, "ub_binom", broken)
    results = {name: bad for name, _, bad in cli.run_selftest(0)}
    assert results["sandwich"]
    assert not results["closed-form regression"]
    code, out, _ = call("selftest --format json")
    assert code == cli.EXIT_INVARIANT and not json.loads(out)["passed"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rmcover", "exact", "--t", "1", "--r", "1", "--m", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "= 2" in proc.stdout
