"""Command-line front end.

    asymbasis construct {thm1,thm2,residue}
    asymbasis decompose {thm1,thm2} --n N
    asymbasis verify {thm1,thm2,lemma1a,lemma1c,theoremd,gadic}
    asymbasis report {rcount,growth,probe}

Exit codes: 0 success, 1 n outside the proven range, 2 invalid parameters,
3 internal invariant violation (the trace is dumped to stderr). Outputs
depend only on the arguments, so equal arguments give identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from collections import Counter
from dataclasses import dataclass

from asymbasis.decompose import (
    LABELS,
    InvariantViolation,
    OutOfRangeError,
    UnreachableCase,
    decompose_thm1,
    decompose_thm2,
    sample_for_case,
    verify_certificate,
)
from asymbasis.decompose.thm1 import spec_for
from asymbasis.gadic import (
    count_members,
    enumerate_members,
    evaluate,
    expand,
    from_decimal,
    to_decimal,
)
from asymbasis.partition import (
    PartitionError,
    Thm1Params,
    Thm2Params,
    check_hypotheses,
    interval_partition,
    residue_partition,
    thm1_partition,
    thm2_partition,
)
from asymbasis.sumset import (
    basis_bitset,
    hfold,
    minimality_probe,
    rep_table_csv,
)

EXIT_OK, EXIT_RANGE, EXIT_PARAMS, EXIT_BUG = 0, 1, 2, 3

# per-construction defaults: the smallest parameter sets used throughout the tests
THM1_DEFAULTS = dict(g=2, h=4, t=2, m1=65, gap=65)
THM2_DEFAULTS = dict(g=2, h=5, t=2, m=7)
THEOREMD_DEFAULTS = dict(g=3, h=4, t=2, N=3**12, B=200)


class UsageError(Exception):
    """Bad option combination; reported with exit code 2."""


@dataclass
class RunConfig:
    command: str
    target: str
    g: int | None
    h: int | None
    t: int | None
    m: int | None
    m1: int | None
    gap: int | None
    n: str | None
    N: int | None
    B: int | None
    samples: int | None
    seed: int
    max_exp: int | None
    out: str | None
    fmt: str

    def pick(self, name: str, defaults: dict):
        value = getattr(self, name)
        return defaults.get(name) if value is None else value

    def thm1(self) -> Thm1Params:
        d = THM1_DEFAULTS
        return Thm1Params(self.pick("g", d), self.pick("h", d), self.pick("t", d), self.pick("m1", d), self.pick("gap", d))

    def thm2(self) -> Thm2Params:
        d = THM2_DEFAULTS
        return Thm2Params(self.pick("g", d), self.pick("h", d), self.pick("t", d), self.pick("m", d))


# -- construct -----------------------------------------------------------------------


def cmd_construct(cfg: RunConfig) -> tuple[int, dict]:
    if cfg.target == "thm1":
        p = cfg.thm1()
        spec, g, h, t = thm1_partition(p), p.g, p.h, p.t
        params = {"g": g, "h": h, "t": t, "m1": p.m_start, "gap": p.m_gap}
    elif cfg.target == "thm2":
        p = cfg.thm2()
        spec, g, h, t = thm2_partition(p), p.g, p.h, p.t
        params = {"g": g, "h": h, "t": t, "m": p.m}
    else:
        h = cfg.h if cfg.h is not None else 2
        g = cfg.g if cfg.g is not None else 2
        t = cfg.t if cfg.t is not None else 1
        spec = residue_partition(h)
        params = {"g": g, "h": h, "t": t}
    return EXIT_OK, {
        "construction": cfg.target,
        "params": params,
        "partition": spec.to_json(),
        "hypotheses": check_hypotheses(spec, g, h, t).to_json(),
    }


# -- decompose -----------------------------------------------------------------------


def cmd_decompose(cfg: RunConfig) -> tuple[int, dict]:
    if cfg.n is None:
        raise UsageError("decompose needs --n")
    try:
        n = from_decimal(cfg.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if cfg.target == "thm1":
        p = cfg.thm1()
        spec = spec_for(p)
        cert = decompose_thm1(n, p)
    else:
        p = cfg.thm2()
        spec = thm2_partition(p)
        cert = decompose_thm2(n, p)
    verdict = verify_certificate(cert, spec, p.g)
    out = cert.to_json()
    out["verified"] = verdict.ok
    if not verdict.ok:
        out["failed_clause"] = verdict.clause
        out["detail"] = verdict.detail
    return (EXIT_OK if verdict.ok else EXIT_BUG), out


# -- verify --------------------------------------------------------------------------


def verify_thm2(p: Thm2Params, N: int, samples: int = 0, seed: int = 0) -> dict:
    """Decompose and certify every n in [h, N]; cross-check with the sumset oracle."""
    spec = thm2_partition(p)
    g, h = p.g, p.h
    memo: dict = {}
    failures = []
    cases: Counter = Counter()
    for n in range(h, N + 1):
        try:
            cert = decompose_thm2(n, p, memo)
        except InvariantViolation as exc:
            failures.append({"n": n, "error": str(exc)})
            continue
        cases[cert.trace.case] += 1
        v = verify_certificate(cert, spec, g)
        if not v.ok:
            failures.append({"n": n, "clause": v.clause, "detail": v.detail})
    oracle = hfold(basis_bitset([spec.predicate(0)], g, N), h, N)
    oracle_gaps = oracle.missing(h, N)
    rng = random.Random(seed)
    bignum_failures = []
    for _ in range(samples):
        n = rng.randrange(h, g**500)
        try:
            cert = decompose_thm2(n, p)
            v = verify_certificate(cert, spec, g)
            if not v.ok:
                bignum_failures.append(to_decimal(n))
        except InvariantViolation:
            bignum_failures.append(to_decimal(n))
    return {
        "check": "thm2",
        "params": {"g": g, "h": h, "t": p.t, "m": p.m},
        "range": [h, N],
        "decomposed": N - h + 1 - len(failures),
        "failures": failures[:20],
        "failure_count": len(failures),
        "oracle_covers": not oracle_gaps,
        "oracle_gaps": oracle_gaps[:20],
        "cases": dict(sorted(cases.items())),
        "bignum_samples": samples,
        "bignum_failures": bignum_failures[:20],
        "ok": not failures and not oracle_gaps and not bignum_failures,
    }


def verify_thm1(p: Thm1Params, samples: int, seed: int, max_exp: int | None = None) -> dict:
    """Sample every reachable case label, decompose, and certify."""
    spec = spec_for(p)
    rng = random.Random(seed)
    table = {}
    unreachable = {}
    total_fail = 0
    for label in LABELS:
        row = {"samples": 0, "valid": 0, "repairs": {}}
        repairs: Counter = Counter()
        try:
            for _ in range(samples):
                n = sample_for_case(label, p, rng, max_exp)
                row["samples"] += 1
                try:
                    cert = decompose_thm1(n, p, spec)
                except InvariantViolation:
                    continue
                v = verify_certificate(cert, spec, p.g)
                if v.ok and cert.trace.case == label and p.forbidden not in cert.parts:
                    row["valid"] += 1
                if cert.trace.repair:
                    repairs[cert.trace.repair] += 1
        except UnreachableCase as exc:
            unreachable[label] = str(exc)
            continue
        row["repairs"] = dict(sorted(repairs.items()))
        total_fail += row["samples"] - row["valid"]
        table[label] = row
    return {
        "check": "thm1",
        "params": {"g": p.g, "h": p.h, "t": p.t, "m1": p.m_start, "gap": p.m_gap},
        "seed": seed,
        "coverage": table,
        "unreachable": unreachable,
        "failure_count": total_fail,
        "ok": total_fail == 0 and all(r["samples"] == samples for r in table.values()),
    }


def verify_lemma1a(h: int, g: int, N: int) -> dict:
    """Pairwise disjointness of A_g(W_i) ∩ [1, N] for the residue partition."""
    spec = residue_partition(h)
    members = [set(enumerate_members(spec.predicate(i), g, N)) for i in range(h)]
    clashes = []
    for i in range(h):
        for j in range(i + 1, h):
            both = members[i] & members[j]
            if both:
                clashes.append({"cells": [i, j], "examples": sorted(both)[:10]})
    return {
        "check": "lemma1a",
        "g": g,
        "h": h,
        "N": N,
        "sizes": [len(s) for s in members],
        "violations": clashes,
        "ok": not clashes,
    }


def verify_lemma1c(h: int, g: int, N: int, C: int = 100) -> dict:
    """h-fold sumset of the union over the residue partition covers [C', N] with C' <= C."""
    spec = residue_partition(h)
    A = basis_bitset([spec.predicate(i) for i in range(h)], g, N)
    S = hfold(A, h, N)
    holes = S.missing(0, N)
    threshold = holes[-1] + 1 if holes else 0
    return {
        "check": "lemma1c",
        "g": g,
        "h": h,
        "N": N,
        "threshold": threshold,
        "bound": C,
        "gaps_below_threshold": holes[:50],
        "ok": threshold <= C,
    }


def theoremd_partition(h: int = 4, width: int = 2):
    """Cells take turns in runs of ``width`` consecutive positions."""
    return interval_partition(h, [(c * width, c * width + width - 1, c) for c in range(h)])


def verify_theoremd(g: int, h: int, t: int, N: int, B: int) -> dict:
    spec = theoremd_partition(h, t)
    hyp = check_hypotheses(spec, g, h, t)
    A = basis_bitset([spec.predicate(i) for i in range(h)], g, N)
    probe = minimality_probe(A, h, N, B)
    return {
        "check": "theoremd",
        "params": {"g": g, "h": h, "t": t, "N": N, "B": B},
        "partition": spec.to_json(),
        "hypotheses": hyp.to_json(),
        "probe": probe.to_json(),
        "ok": hyp.passes and hyp.regime == "minimal" and probe.all_nonempty,
    }


def verify_gadic(N: int, samples: int, seed: int, bases=(2, 3, 5, 10)) -> dict:
    rng = random.Random(seed)
    failures = []
    for g in bases:
        values = list(range(N + 1)) + [rng.randrange(g**1000) for _ in range(samples)]
        for n in values:
            e = expand(n, g)
            fs = [f for f, _ in e.terms]
            canonical = all(1 <= a < g for _, a in e.terms) and all(x > y for x, y in zip(fs, fs[1:]))
            if evaluate(e) != n or not canonical:
                failures.append({"g": g, "n": to_decimal(n)})
    return {
        "check": "gadic",
        "bases": list(bases),
        "exhaustive_to": N,
        "random_samples": samples,
        "failures": failures[:20],
        "ok": not failures,
    }


def cmd_verify(cfg: RunConfig) -> tuple[int, dict]:
    kind = cfg.target
    if kind == "thm2":
        out = verify_thm2(cfg.thm2(), cfg.N or 131072, cfg.samples or 0, cfg.seed)
    elif kind == "thm1":
        out = verify_thm1(cfg.thm1(), cfg.samples if cfg.samples is not None else 100, cfg.seed, cfg.max_exp)
    elif kind == "lemma1a":
        out = verify_lemma1a(cfg.h or 3, cfg.g or 2, cfg.N or 10**6)
    elif kind == "lemma1c":
        out = verify_lemma1c(cfg.h or 2, cfg.g or 2, cfg.N or 2**20, cfg.B if cfg.B is not None else 100)
    elif kind == "theoremd":
        d = THEOREMD_DEFAULTS
        out = verify_theoremd(cfg.pick("g", d), cfg.pick("h", d), cfg.pick("t", d), cfg.pick("N", d), cfg.pick("B", d))
    else:
        out = verify_gadic(cfg.N if cfg.N is not None else 10**4, cfg.samples if cfg.samples is not None else 50, cfg.seed)
    return (EXIT_OK if out["ok"] else EXIT_BUG), out


# -- report --------------------------------------------------------------------------


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def loglog_slope(xs, ys) -> float:
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    mx, my = sum(lx) / len(lx), sum(ly) / len(ly)
    num = sum((a - mx) * (b - my) for a, b in zip(lx, ly))
    den = sum((a - mx) ** 2 for a in lx)
    return num / den


def cmd_report(cfg: RunConfig):
    kind = cfg.target
    if kind == "rcount":
        g, h, N = cfg.g or 2, cfg.h or 2, cfg.N or 64
        X = basis_bitset([lambda f: True], g, N)
        text = rep_table_csv(X, h, N)
        rows = list(csv.reader(io.StringIO(text)))
        data = {"report": "rcount", "g": g, "h": h, "N": N, "rows": [[int(a), int(b)] for a, b in rows[1:]]}
        return EXIT_OK, data, text
    if kind == "growth":
        # W = positions congruent to 0 mod 2 unless --m says otherwise
        g, modulus = cfg.g or 2, cfg.m or 2
        top = cfg.N or 2**20
        xs = [2**j for j in range(8, top.bit_length()) if 2**j <= top]
        W = lambda f: f % modulus == 0  # noqa: E731
        counts = [count_members(W, g, x) for x in xs]
        slope = loglog_slope(xs, counts)
        text = _csv(["x", "count"], zip(xs, counts))
        data = {"report": "growth", "g": g, "modulus": modulus, "rows": [list(r) for r in zip(xs, counts)], "slope": round(slope, 6)}
        return EXIT_OK, data, text
    d = THEOREMD_DEFAULTS
    g, h, t, N, B = (cfg.pick(k, d) for k in ("g", "h", "t", "N", "B"))
    spec = theoremd_partition(h, t)
    A = basis_bitset([spec.predicate(i) for i in range(h)], g, N)
    probe = minimality_probe(A, h, N, B)
    return EXIT_OK, probe.to_json(), probe.to_csv()


# -- entry point -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--g", type=int)
    common.add_argument("--h", type=int)
    common.add_argument("--t", type=int)
    common.add_argument("--m", type=int, help="period block length (thm2) or modulus (report growth)")
    common.add_argument("--m1", type=int, help="first block anchor m_1 (thm1)")
    common.add_argument("--gap", type=int, help="anchor spacing m_(i+1) - m_i (thm1)")
    common.add_argument("--n", type=str, help="integer to decompose, in decimal")
    common.add_argument("--N", type=int, help="upper bound")
    common.add_argument("--B", type=int, help="probe bound (theoremd) or threshold bound (lemma1c)")
    common.add_argument("--samples", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-exp", dest="max_exp", type=int, help="largest exponent in thm1 samples")
    common.add_argument("--out", type=str, help="write to this file instead of stdout")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default=None)

    parser = argparse.ArgumentParser(prog="asymbasis", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    targets = {
        "construct": ("thm1", "thm2", "residue"),
        "decompose": ("thm1", "thm2"),
        "verify": ("thm1", "thm2", "lemma1a", "lemma1c", "theoremd", "gadic"),
        "report": ("rcount", "growth", "probe"),
    }
    for name, choices in targets.items():
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("target", choices=choices)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        target=args.target,
        g=args.g,
        h=args.h,
        t=args.t,
        m=args.m,
        m1=args.m1,
        gap=args.gap,
        n=args.n,
        N=args.N,
        B=args.B,
        samples=args.samples,
        seed=args.seed,
        max_exp=args.max_exp,
        out=args.out,
        fmt=args.fmt or ("csv" if args.command == "report" else "json"),
    )
    try:
        if cfg.fmt == "csv" and cfg.command != "report":
            raise UsageError("--format csv is only available for report")
        if cfg.command == "report":
            code, data, text = cmd_report(cfg)
            if cfg.fmt == "json":
                text = json.dumps(data, indent=2) + "\n"
        else:
            handler = {"construct": cmd_construct, "decompose": cmd_decompose, "verify": cmd_verify}[cfg.command]
            code, data = handler(cfg)
            text = json.dumps(data, indent=2) + "\n"
    except PartitionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except OutOfRangeError as exc:
        print(f"out of range: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        if exc.trace is not None:
            print(json.dumps(exc.trace.to_json(), indent=2), file=sys.stderr)
        return EXIT_BUG
    _emit(text, cfg.out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
