"""Command-line front end.

Exit codes: 0 ok, 2 usage or input error, 3 exhaustive-search cap exceeded,
4 internal invariant violated.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import bounds, cover, exactradius, queryplanner
from .gf2core import BitMatrix, MatrixFormatError, parse_matrix
from .rmcode import DEFAULT_CAP, CapExceeded, random_code, rm

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_INVARIANT = 0, 2, 3, 4
FORMATS = ("human", "json", "csv")
SUBCOMMANDS = ("bounds", "exact", "cover", "plan", "kappa", "selftest")


class UsageError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    t: int | None = None
    r: int | None = None
    m: int | None = None
    method: str = "geometric"
    input: str | None = None
    output: str | None = None
    format: str = "human"
    seed: int = 0
    cap: int | None = None
    threads: int = 1

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}")
        if self.threads < 1:
            raise UsageError("--threads must be positive")
        if self.cap is not None and self.cap < 1:
            raise UsageError("--cap-override must be positive")
        need = {
            "bounds": "trm", "exact": "trm", "cover": "rm", "plan": "rm", "kappa": "tm", "selftest": "",
        }[self.subcommand]
        for name in need:
            if getattr(self, name) is None:
                raise UsageError(f"{self.subcommand} needs --{name}")
        if self.t is not None and self.t < 1:
            raise UsageError("--t must be at least 1")
        if self.m is not None and not 0 <= self.m <= 20:
            raise UsageError("--m must lie in [0, 20]")
        if self.r is not None and self.m is not None and not 0 <= self.r <= self.m:
            raise UsageError(f"--r must lie in [0, {self.m}]")
        if self.subcommand == "kappa" and self.m < 2:
            raise UsageError("kappa needs --m >= 2 (the largest m emitted)")
        if self.subcommand == "plan" and self.r < 1:
            raise UsageError("plan needs --r >= 1")
        method = exactradius.METHOD_ALIASES.get(self.method, self.method)
        if method not in exactradius.METHODS + ("all",):
            raise UsageError(f"unknown method {self.method!r}")

    @property
    def effective_cap(self) -> int:
        return self.cap if self.cap is not None else DEFAULT_CAP


# ------------------------------------------------------------------ helpers

def _table(rows: list[list], header: list[str]) -> str:
    cells = [header] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells) + "\n"


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _read_matrix(cfg: RunConfig, t: int | None, n: int, what: str) -> BitMatrix:
    if cfg.input is None:
        if t is None:
            raise UsageError(f"{cfg.subcommand} without --input needs --t for a random {what}")
        rng = np.random.default_rng(cfg.seed)
        return BitMatrix.from_array(rng.integers(0, 2, size=(t, n), dtype=np.uint8))
    text = sys.stdin.read() if cfg.input == "-" else open(cfg.input).read()
    M = parse_matrix(text)
    if M.n != n:
        raise UsageError(f"{what} has {M.n} columns, expected {n}")
    if t is not None and M.t != t:
        raise UsageError(f"{what} has {M.t} rows, but --t is {t}")
    if M.t < 1:
        raise UsageError(f"{what} has no rows")
    return M


# --------------------------------------------------------------- commands

def cmd_bounds(cfg: RunConfig) -> tuple[dict, str]:
    t, r, m = cfg.t, cfg.r, cfg.m
    certified = bounds.certified_upper_bounds(t, r, m)
    lower = bounds.lb_ball_covering(t, r, m)
    best = bounds.best_upper_bound(t, r, m)
    display = bounds.display_bounds(t, r, m)
    exact = exactradius.closed_form_exact(t, r, m)
    every = [lower] + certified + display
    rec = {
        "t": t, "r": r, "m": m,
        "exact": exact,
        "best_upper": best.as_dict(),
        "bounds": [b.as_dict() for b in every],
    }
    rows = [[b.source, b.kind, f"{b.raw:.6g}", b.integer_form, "yes" if b.certified else "no"] for b in every]
    header = ["source", "kind", "raw", "integer_form", "certified"]
    if cfg.format == "csv":
        return rec, _csv(rows, header)
    text = (f"R_{t}(RM({r},{m})): exact = {'unknown' if exact is None else exact}, "
            f"best certified upper = {best.integer_form} ({best.source})\n")
    text += _table(rows, header)
    if display:
        text += f"note: uncertified rows are {bounds.ASYMPTOTIC_CAVEAT}\n"
    return rec, text


def cmd_exact(cfg: RunConfig) -> tuple[dict, str]:
    code = rm(cfg.r, cfg.m)
    method = exactradius.METHOD_ALIASES.get(cfg.method, cfg.method)
    methods = exactradius.METHODS if method == "all" else (method,)
    values = {}
    witness = None
    for name in methods:
        if name == "geometric":
            rep = exactradius.exact_rt_geometric(code, cfg.t, cfg.effective_cap)
            values[name] = rep.exact
            witness = rep.witness
        else:
            values[name] = exactradius.exact_rt(code, cfg.t, name, cfg.cap)
    if len(set(values.values())) != 1:
        raise InvariantViolation(f"oracles disagree: {values}")
    value = next(iter(values.values()))
    rec = {
        "t": cfg.t, "r": cfg.r, "m": cfg.m,
        "exact": value,
        "methods": values,
        "witness": witness.to_strings() if witness is not None else None,
    }
    rows = [[k, v] for k, v in values.items()]
    if cfg.format == "csv":
        return rec, _csv(rows, ["method", "exact"])
    text = f"R_{cfg.t}(RM({cfg.r},{cfg.m})) = {value}\n" + _table(rows, ["method", "exact"])
    if witness is not None:
        text += "deepest word (lexicographically least):\n" + str(witness) + "\n"
    return rec, text


def cmd_cover(cfg: RunConfig) -> tuple[dict, str]:
    v = _read_matrix(cfg, cfg.t, 1 << cfg.m, "input matrix")
    res = cover.cover(v, cfg.r, cfg.effective_cap)
    code = rm(cfg.r, cfg.m)
    if any(code.H.mul_vec(row).bits for row in res.codeword.row_vectors()):
        raise InvariantViolation("cover returned a non-codeword row")
    if res.distance > res.guarantee:
        raise InvariantViolation(f"distance {res.distance} exceeds guarantee {res.guarantee}")
    rec = res.as_dict()
    if cfg.format == "csv":
        return rec, _csv([[res.distance, res.guarantee, res.path, " ".join(rec["codeword"])]],
                         ["distance", "guarantee", "branch", "codeword"])
    text = (f"distance {res.distance} <= guarantee {res.guarantee} via {res.path} branch\n"
            + res.codeword.to_text())
    return rec, text


def cmd_plan(cfg: RunConfig) -> tuple[dict, str]:
    code = rm(cfg.r, cfg.m)
    q = _read_matrix(cfg, cfg.t, code.H.t, "query matrix")
    batch = queryplanner.QueryBatch(q, code)
    p = queryplanner.plan(batch, cfg.effective_cap)
    if not queryplanner.verify(p, batch):
        raise InvariantViolation("plan failed verification")
    rec = p.as_dict()
    if cfg.format == "csv":
        rows = [[j, row] for j, row in enumerate(rec["coefficients"], start=1)]
        return rec, _csv(rows, ["query", "coefficients"])
    idx = " ".join(str(i) for i in rec["indices"]) or "(none)"
    text = f"read {len(p.indices)} of {code.n} stored combinations (bound {p.bound}): {idx}\n"
    for j, row in enumerate(rec["coefficients"], start=1):
        text += f"query {j}: {row or '(zero)'}\n"
    return rec, text


def cmd_kappa(cfg: RunConfig) -> tuple[dict | list, str]:
    pts = bounds.kappa_points(cfg.t, cfg.m)
    below = [p for p in pts if bounds.below_entropy(p, cfg.t)]
    rec = [{"rho": p.rho, "rate": p.rate, "source": p.source,
            "below_entropy": bounds.below_entropy(p, cfg.t)} for p in pts]
    if cfg.format == "csv":
        return rec, bounds.kappa_csv(cfg.t, cfg.m)
    text = (f"{len(pts)} points for t={cfg.t}, 2 <= m <= {cfg.m}; "
            f"{len(below)} lie strictly below 1 - H_2(rho/{cfg.t})\n")
    rows = [[f"{p.rho:.6f}", f"{p.rate:.6f}", p.source, p.bound.source] for p in below]
    if rows:
        text += _table(rows, ["rho", "rate", "point", "bound"])
    text += "this is a comparison against the entropy curve only\n"
    return rec, text


# ----------------------------------------------------------------- selftest

def _suite_closed_forms() -> tuple[int, list[str]]:
    checked, bad = 0, []
    for m in range(1, 4):
        for t in range(1, 4):
            for r in (0, m - 2, m - 1, m):
                if r < 0:
                    continue
                want = exactradius.closed_form_exact(t, r, m)
                got = exactradius.exact_rt_geometric(rm(r, m), t).exact
                checked += 1
                if got != want:
                    bad.append(f"R_{t}({r},{m}) = {got}, expected {want}")
    return checked, bad


def _suite_oracles(rng: np.random.Generator) -> tuple[int, list[str]]:
    checked, bad = 0, []
    codes = [(f"RM({r},{m})", rm(r, m)) for m in range(1, 4) for r in range(m + 1)]
    for i in range(10):
        n = int(rng.integers(2, 7))
        k = int(rng.integers(0, n + 1))
        codes.append((f"random#{i}", random_code(n, k, rng)))
    for name, code in codes:
        for t in (1, 2):
            vals = {meth: exactradius.exact_rt(code, t, meth) for meth in exactradius.METHODS}
            checked += 1
            if len(set(vals.values())) != 1:
                bad.append(f"{name}, t={t}: {vals}")
    return checked, bad


def _suite_sandwich() -> tuple[int, list[str]]:
    checked, bad = 0, []
    for m in range(1, 4):
        for r in range(m + 1):
            for t in range(1, 4):
                exact = exactradius.exact_rt_geometric(rm(r, m), t).exact
                lo = bounds.lb_ball_covering(t, r, m).integer_form
                checked += 1
                if lo > exact:
                    bad.append(f"lower {lo} > R_{t}({r},{m}) = {exact}")
                ups = []
                if r == 1 and m >= 2:
                    ups.append(bounds.ub_dual_distance(t, m))
                if r >= 1:
                    ups.append(bounds.ub_binom(t, r, m))
                    imp = bounds.ub_improved_binom(t, r, m)
                    if imp is not None:
                        ups.append(imp)
                ups.append(bounds.ub_dp(t, r, m))
                ups.append(bounds.best_upper_bound(t, r, m))
                for b in ups:
                    checked += 1
                    if b.integer_form < exact:
                        bad.append(f"{b.source} {b.integer_form} < R_{t}({r},{m}) = {exact}")
    return checked, bad


def _suite_cover(rng: np.random.Generator, samples: int = 200) -> tuple[int, list[str]]:
    checked, bad = 0, []
    for t in (1, 2):
        for m in range(1, 6):
            H_all = {r: rm(r, m).H.to_array().astype(np.int64) for r in range(m + 1)}
            for r in range(m + 1):
                V = rng.integers(0, 2, size=(samples, t, 1 << m), dtype=np.uint8)
                C, d, _ = cover.cover_many(V, r)
                g = cover.guarantee(t, r, m)
                checked += samples
                if ((C.astype(np.int64) @ H_all[r].T) % 2).any():
                    bad.append(f"non-codeword output at t={t}, r={r}, m={m}")
                if int(d.max()) > g:
                    bad.append(f"distance {int(d.max())} > guarantee {g} at t={t}, r={r}, m={m}")
    return checked, bad


def _suite_planner(rng: np.random.Generator, samples: int = 100) -> tuple[int, list[str]]:
    checked, bad = 0, []
    for t in (1, 2, 3):
        for m in range(1, 5):
            for r in range(1, m + 1):
                code = rm(r, m)
                batches = [queryplanner.QueryBatch(
                    BitMatrix.from_array(rng.integers(0, 2, size=(t, code.H.t), dtype=np.uint8)), code)
                    for _ in range(samples)]
                plans = queryplanner.plan_many(batches)
                checked += len(batches)
                for p, b in zip(plans, batches):
                    if not queryplanner.verify(p, b):
                        bad.append(f"plan failed at t={t}, r={r}, m={m}")
                        break
    return checked, bad


def run_selftest(seed: int = 0) -> list[tuple[str, int, list[str]]]:
    rng = np.random.default_rng(seed)
    out = []
    for name, fn in (
        ("closed-form regression", _suite_closed_forms),
        ("oracle equivalence", lambda: _suite_oracles(rng)),
        ("sandwich", _suite_sandwich),
        ("cover fuzz", lambda: _suite_cover(rng)),
        ("planner round-trip", lambda: _suite_planner(rng)),
    ):
        try:
            checked, bad = fn()
        except Exception as exc:  # a crash is a failure of that suite
            checked, bad = 0, [f"{type(exc).__name__}: {exc}"]
        out.append((name, checked, bad))
    return out


def cmd_selftest(cfg: RunConfig) -> tuple[dict, str]:
    results = run_selftest(cfg.seed)
    rec = {
        "seed": cfg.seed,
        "suites": [{"suite": n, "checked": c, "failures": len(b), "passed": not b, "details": b[:5]}
                   for n, c, b in results],
        "passed": all(not b for _, _, b in results),
    }
    rows = [[n, "PASS" if not b else "FAIL", c, len(b)] for n, c, b in results]
    header = ["suite", "status", "checked", "failures"]
    if cfg.format == "csv":
        return rec, _csv(rows, header)
    text = _table(rows, header)
    for n, _, b in results:
        for line in b[:5]:
            text += f"  {n}: {line}\n"
    return rec, text


COMMANDS = {
    "bounds": cmd_bounds, "exact": cmd_exact, "cover": cmd_cover,
    "plan": cmd_plan, "kappa": cmd_kappa, "selftest": cmd_selftest,
}


# -------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmcover", description="Generalized covering radii of Reed-Muller codes")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    helps = {
        "bounds": "every applicable bound on R_t(r, m)",
        "exact": "exact R_t(r, m) by exhaustive search",
        "cover": "cover a t x 2^m matrix by a codeword tuple",
        "plan": "plan which stored combinations to read for t queries",
        "kappa": "rate/radius points and the entropy curve as CSV",
        "selftest": "run the small-instance invariant suites",
    }
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--t", type=int)
        p.add_argument("--r", type=int)
        p.add_argument("--m", type=int, help="for kappa: the largest m emitted")
        p.add_argument("--method", default="geometric",
                       help="geometric|span|lifted|all (aliases rt2, rt1, rt3)")
        p.add_argument("--input", help="matrix file ('t n' header, then t rows of bits); '-' for stdin")
        p.add_argument("--output", help="write here instead of stdout")
        p.add_argument("--format", default="csv" if name == "kappa" else "human", choices=FORMATS)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cap-override", dest="cap", type=int)
        p.add_argument("--threads", type=int, default=1, help="accepted for scripting; results do not depend on it")
    return parser


def run(cfg: RunConfig) -> tuple[int, str, str]:
    """Returns (exit code, stdout text, stderr text)."""
    try:
        cfg.validate()
        rec, text = COMMANDS[cfg.subcommand](cfg)
    except (UsageError, MatrixFormatError) as exc:
        return EXIT_USAGE, "", f"error: {exc}\n"
    except CapExceeded as exc:
        return EXIT_CAP, "", f"cap exceeded: {exc} (raise it with --cap-override)\n"
    except InvariantViolation as exc:
        return EXIT_INVARIANT, "", f"invariant violated: {exc}\n"
    except (ValueError, OSError) as exc:
        return EXIT_USAGE, "", f"error: {exc}\n"
    if cfg.format == "json":
        text = json.dumps(rec, indent=2, sort_keys=True) + "\n"
    code = EXIT_OK
    if cfg.subcommand == "selftest" and not rec["passed"]:
        code = EXIT_INVARIANT
    return code, text, ""


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**vars(args))
    code, out, err = run(cfg)
    if err:
        sys.stderr.write(err)
    if out:
        if cfg.output:
            with open(cfg.output, "w") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
