"""Channel-experiment command line.

Subcommands:

* ``gen``      -- write a parameter file (lrs / flrs / design / evasive),
                  deterministic for a given seed.
* ``run``      -- seeded encode/corrupt/decode trials; JSONL records plus
                  a summary JSON on stdout.
* ``verify``   -- exact design verification or evasive density check.
* ``distance`` -- exhaustive minimum sum-rank distance of an LRS file.

Exit codes: 0 success, 1 containment violation inside the guaranteed
radius, 2 invalid parameters / failed verification, 3 infeasible
enumeration.

Trial records are byte-stable: per-trial seeds fan out from the master
seed through a counter-keyed hash, and the JSONL rows contain only
deterministic fields (timing lives in the summary).
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
import time

import numpy as np

from . import designs as designs_mod
from . import flrs as flrs_mod
from . import lrs as lrs_mod
from . import lrs_decoder
from .gf import load_tower
from .metric import sample_error

EXIT_OK = 0
EXIT_CONTAINMENT = 1
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3


def trial_seed(master, index):
    key = hashlib.blake2b(str(master).encode(), digest_size=16).digest()
    raw = hashlib.blake2b(
        index.to_bytes(8, "big"), key=key, digest_size=8
    ).digest()
    return int.from_bytes(raw, "big")


def message_id(msg):
    payload = ",".join(v.to_hex() for v in msg).encode()
    return hashlib.blake2b(payload, digest_size=8).hexdigest()


@dataclasses.dataclass
class TrialRecord:
    trial: int
    seed: int
    message_id: str
    errors: int
    list_size: int | None
    contained: bool
    dim: int
    ms: float  # not serialized; aggregated into the summary

    def to_json(self):
        doc = dataclasses.asdict(self)
        doc.pop("ms")
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _load_params(path):
    text = open(path).read()
    doc = json.loads(text)
    family = doc.get("family")
    if family == "lrs":
        return "lrs", lrs_mod.params_from_json(text)
    if family == "flrs":
        return "flrs", flrs_mod.flrs_params_from_json(text)
    raise ValueError(f"unknown parameter family {family!r}")


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------

def cmd_gen(args):
    if args.family == "lrs":
        T = load_tower(args.h, args.n, args.m)
        blocks = [int(x) for x in args.blocks.split(",")]
        params = lrs_mod.demo_params(T, blocks, args.k, sigma_base=args.sigma_base)
        issues = params.validate()
        if issues:
            for code, msg in issues:
                print(f"invalid: [{code}] {msg}", file=sys.stderr)
            return EXIT_INVALID
        out = lrs_mod.params_to_json(params)
    elif args.family == "flrs":
        T = load_tower(args.h, args.n, args.m)
        n_blocks = args.N // args.lam
        params = flrs_mod.FlrsParams(
            T,
            args.lam,
            n_blocks,
            args.ell,
            args.k,
            epsilon=args.epsilon,
            evasive_seed=args.seed,
        )
        issues = params.validate()
        if issues:
            for code, msg in issues:
                print(f"invalid: [{code}] {msg}", file=sys.stderr)
            return EXIT_INVALID
        out = flrs_mod.flrs_params_to_json(params)
    elif args.family == "design":
        T = load_tower(args.h, args.n, args.m)
        design = designs_mod.random_design(
            T, args.M, args.s, args.epsilon, args.seed, A=args.A
        )
        try:
            ok, worst_W, worst = designs_mod.verify_design(design)
        except ValueError as exc:
            print(f"infeasible: {exc}", file=sys.stderr)
            return EXIT_INFEASIBLE
        design.stamp = {"seed": args.seed, "verdict": bool(ok), "worst_sum": worst}
        if not ok:
            print(
                f"generated design violates its bound (worst sum {worst} > A={design.A}); "
                "try another seed",
                file=sys.stderr,
            )
            return EXIT_INVALID
        out = designs_mod.design_to_json(design)
    elif args.family == "evasive":
        doc = {
            "kind": "evasive_set",
            "h": args.h,
            "n_sub": args.n,
            "m": args.m,
            "k": args.k,
            "epsilon": args.epsilon,
            "seed": args.seed,
        }
        out = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    else:
        raise ValueError(args.family)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------

def _run_lrs_trial(params, design, selection, s, e, seed):
    T = params.tower
    rng = np.random.default_rng(seed)
    if design is not None:
        msg = design.sample_message(selection, rng)
    else:
        msg = params.random_message(rng)
    cw = lrs_mod.encode(params, msg)
    err = sample_error(T, params.profile, e, rng)
    y = cw + err
    Q = lrs_decoder.interpolate(params, y, s)
    P = lrs_decoder.solve_key_equation(Q)
    if design is not None:
        space = designs_mod.intersect_periodic(P, design, selection, max_dim=design.A)
        if space is None:
            return msg, False, None, 0
        members = list(space.points()) if space.dim_h <= 20 else None
        contained = space.contains(msg)
        return msg, contained, None if members is None else len(members), space.dim_h
    contained = P.contains(msg)
    dim = P.coset_dim_q if P.coset_dim_q is not None else -1
    return msg, contained, None, dim


def _run_flrs_trial(params, evasive, s, e, seed):
    T = params.tower
    rng = np.random.default_rng(seed)
    msg = evasive.sample_member(rng)
    cw = flrs_mod.flrs_encode(params, msg)
    err = sample_error(T, params.profile, e, rng)
    y = cw + err
    Q = flrs_mod.flrs_interpolate(params, y, s)
    sol = flrs_mod.flrs_solve(Q, params)
    if sol.is_empty:
        return msg, False, 0, 0
    lst = designs_mod.intersect_evasive(evasive, sol.space)
    return msg, msg in lst, len(lst), sol.solution_dim()


def cmd_run(args):
    if args.config:
        cfg = json.loads(open(args.config).read())
        for key in ("params", "s", "errors", "trials", "seed", "out", "design"):
            if key in cfg and getattr(args, key, None) in (None, 0):
                setattr(args, key, cfg[key])
    if not args.params:
        print("a parameter file is required (--params or --config)", file=sys.stderr)
        return EXIT_INVALID
    try:
        family, params = _load_params(args.params)
    except (ValueError, KeyError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    issues = params.validate()
    if issues:
        for code, msg in issues:
            print(f"invalid: [{code}] {msg}", file=sys.stderr)
        return EXIT_INVALID
    design = selection = evasive = None
    if family == "lrs":
        if args.design:
            design = designs_mod.design_from_json(open(args.design).read())
            if design.M < params.k:
                print("design too small for the message length", file=sys.stderr)
                return EXIT_INVALID
            selection = tuple(range(params.k))
        radius = params.radius(args.s)
    else:
        evasive = params.evasive_set()
        radius = params.radius(args.s)
    e = args.errors
    asserted = e <= radius
    records = []
    feasible = params.profile.max_weight(params.tower)
    if e < 0 or e > feasible:
        print(f"error weight {e} infeasible (max {feasible})", file=sys.stderr)
        return EXIT_INVALID
    for i in range(args.trials):
        seed = trial_seed(args.seed, i)
        t0 = time.perf_counter()
        if family == "lrs":
            msg, contained, list_size, dim = _run_lrs_trial(
                params, design, selection, args.s, e, seed
            )
        else:
            msg, contained, list_size, dim = _run_flrs_trial(
                params, evasive, args.s, e, seed
            )
        ms = (time.perf_counter() - t0) * 1e3
        records.append(
            TrialRecord(i, seed, message_id(msg), e, list_size, contained, dim, ms)
        )
    lines = "".join(r.to_json() + "\n" for r in records)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(lines)
    else:
        sys.stdout.write(lines)
    contained_count = sum(r.contained for r in records)
    violations = sum(not r.contained for r in records) if asserted else 0
    list_sizes = [r.list_size for r in records if r.list_size is not None]
    summary = {
        "family": family,
        "trials": args.trials,
        "errors": e,
        "s": args.s,
        "radius": radius,
        "asserted": asserted,
        "containment_rate": contained_count / max(1, args.trials),
        "violations": violations,
        "max_list_size": max(list_sizes) if list_sizes else None,
        "max_dim": max((r.dim for r in records), default=0),
        "total_ms": round(sum(r.ms for r in records), 3),
    }
    print(json.dumps(summary, sort_keys=True))
    return EXIT_CONTAINMENT if violations else EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args):
    doc = json.loads(open(args.file).read())
    kind = doc.get("kind")
    if kind == "subspace_design":
        design = designs_mod.design_from_json(open(args.file).read())
        try:
            ok, worst_W, worst = designs_mod.verify_design(design)
        except ValueError as exc:
            print(f"infeasible: {exc}", file=sys.stderr)
            return EXIT_INFEASIBLE
        report = {
            "kind": kind,
            "ok": bool(ok),
            "A": design.A,
            "worst_sum": worst,
        }
        if not ok:
            report["witness"] = [[e.to_hex() for e in row] for row in worst_W]
        print(json.dumps(report, sort_keys=True))
        return EXIT_OK if ok else EXIT_INVALID
    if kind == "evasive_set":
        T = load_tower(doc["h"], doc["n_sub"], doc["m"])
        S = designs_mod.EvasiveSet(T, doc["k"], doc["epsilon"], doc["seed"])
        trials = args.trials or 100000
        if S.modulus > trials:
            print(
                f"infeasible: density 1/{S.modulus} needs more than {trials} draws",
                file=sys.stderr,
            )
            return EXIT_INFEASIBLE
        rng = np.random.default_rng(doc["seed"] ^ 0xD1CE)
        hits = sum(
            S.contains(tuple(T.random_element(rng) for _ in range(S.k)))
            for _ in range(trials)
        )
        p = 1.0 / S.modulus
        sd = (trials * p * (1 - p)) ** 0.5
        ok = abs(hits - trials * p) <= 3 * sd
        report = {
            "kind": kind,
            "ok": bool(ok),
            "hits": hits,
            "expected": trials * p,
            "three_sigma": 3 * sd,
            "trials": trials,
        }
        print(json.dumps(report, sort_keys=True))
        return EXIT_OK if ok else EXIT_INVALID
    print(f"unknown verification target {kind!r}", file=sys.stderr)
    return EXIT_INVALID


# ---------------------------------------------------------------------------
# distance
# ---------------------------------------------------------------------------

def cmd_distance(args):
    try:
        family, params = _load_params(args.params)
    except (ValueError, KeyError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if family != "lrs":
        print("distance enumeration is an LRS operation", file=sys.stderr)
        return EXIT_INVALID
    try:
        d = lrs_mod.min_distance_exhaustive(params, limit=args.limit)
    except ValueError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    singleton = params.n - params.k + 1
    print(
        json.dumps(
            {"min_distance": d, "singleton": singleton, "msrd": d == singleton},
            sort_keys=True,
        )
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="sumrank", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a parameter file")
    g.add_argument("--family", required=True,
                   choices=["lrs", "flrs", "design", "evasive"])
    g.add_argument("--h", type=int, default=2)
    g.add_argument("--n", type=int, default=4, help="subfield degree over F_h")
    g.add_argument("--m", type=int, default=2, help="top degree over the subfield")
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--blocks", default="4", help="comma-separated block lengths (lrs)")
    g.add_argument("--sigma-base", default="h", choices=["h", "q"])
    g.add_argument("--lam", type=int, default=3, help="folding parameter (flrs)")
    g.add_argument("--N", type=int, default=12, help="unfolded point count (flrs)")
    g.add_argument("--ell", type=int, default=2, help="conjugacy classes (flrs)")
    g.add_argument("--M", type=int, default=3, help="design size")
    g.add_argument("--s", type=int, default=1, help="design order")
    g.add_argument("--A", type=int, default=None, help="design bound override")
    g.add_argument("--epsilon", type=float, default=0.25)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="seeded channel experiment")
    r.add_argument("--config", default=None, help="JSON file with any of the flags")
    r.add_argument("--params", default=None)
    r.add_argument("--design", default=None, help="design file (lrs message restriction)")
    r.add_argument("--s", type=int, default=1)
    r.add_argument("--errors", type=int, default=0)
    r.add_argument("--trials", type=int, default=10)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", default=None)
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="verify a design or evasive file")
    v.add_argument("--file", required=True)
    v.add_argument("--trials", type=int, default=None, help="density draws (evasive)")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("distance", help="exhaustive minimum distance")
    d.add_argument("--params", required=True)
    d.add_argument("--limit", type=int, default=1 << 20)
    d.set_defaults(func=cmd_distance)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
