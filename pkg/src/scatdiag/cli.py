"""Command-line front door producing reproducible JSON artifacts.

Subcommands: scatter, mutate, g2r, dt, reps, verify.  Every payload is
schema-versioned, deterministically ordered and timestamp-free, so a fixed
configuration gives byte-identical output across runs.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .coeff import CoeffFn
from .lattice import Seed, mutate_seed, primitive
from .qp import Potential, SeedWithPotential, mutate_sp
from .torus import CLASSICAL, DT_TWIST, QUANTUM, GROUP, LIE, GradedElement
from . import scattering
from . import chambers as chambers_mod
from . import reps as reps_mod

SCHEMA = "scatdiag/1"

CONVENTIONS = {"quantum": QUANTUM, "classical": CLASSICAL, "dt": DT_TWIST}


def _load_seed(path):
    with open(path) as fh:
        data = json.load(fh)
    if "quiver" in data or "potential" in data:
        sp = SeedWithPotential.from_json(data)
        return sp.seed, sp
    return Seed.from_json(data), None


def _emit(payload, out):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _series_json(elem):
    return elem.serialize()


def cmd_scatter(args):
    seed, _ = _load_seed(args.seed)
    conv = CONVENTIONS[args.convention]
    build = {QUANTUM: scattering.quantum_cluster_sd,
             CLASSICAL: scattering.cluster_sd,
             DT_TWIST: scattering.dt_in_sd}[conv]
    sd = build(seed, args.order)
    mc = sd.minimal_complex()
    walls = []
    for cell in sorted(mc.walls(), key=lambda c: (c.normal, c.rays)):
        walls.append({
            "normal": list(cell.normal),
            "cone_generators": [list(r) for r in cell.rays],
            "cone_lineality": [list(r) for r in cell.lineality],
            "function": _series_json(cell.function),
        })
    chambers = [{"generator_rays": [list(r) for r in cell.rays]}
                for cell in sorted(mc.chambers(), key=lambda c: c.rays)]
    _emit({"schema": SCHEMA, "command": "scatter",
           "seed": seed.to_json(), "order": args.order,
           "convention": args.convention,
           "group_element": _series_json(sd.group_element()),
           "walls": walls, "chambers": chambers}, args.out)
    return 0


def cmd_mutate(args):
    seed, sp = _load_seed(args.seed)
    sign = 1 if args.sign == "+" else -1
    if sp is None:
        new_seed, change = mutate_seed(seed, args.vertex, sign)
        payload = {"schema": SCHEMA, "command": "mutate",
                   "vertex": args.vertex, "sign": args.sign,
                   "seed": new_seed.to_json(),
                   "basis_change": [list(r) for r in change]}
    else:
        sp2, change = mutate_sp(sp, args.vertex, sign)
        payload = {"schema": SCHEMA, "command": "mutate",
                   "vertex": args.vertex, "sign": args.sign,
                   "seed_with_potential": sp2.to_json(),
                   "basis_change": [list(r) for r in change]}
    _emit(payload, args.out)
    return 0


def cmd_g2r(args):
    seed, _ = _load_seed(args.seed)
    seq = chambers_mod.find_green_to_red(seed, args.depth,
                                         green_restricted=not args.unrestricted)
    payload = {"schema": SCHEMA, "command": "g2r", "seed": seed.to_json(),
               "depth": args.depth,
               "found": seq is not None,
               "sequence": list(seq) if seq is not None else None,
               "length": len(seq) if seq is not None else None}
    _emit(payload, args.out)
    return 0 if seq is not None or args.allow_missing else 1


def cmd_dt(args):
    seed, _ = _load_seed(args.seed)
    conv = CONVENTIONS[args.convention]
    seq = chambers_mod.find_green_to_red(seed, args.depth)
    if seq is None:
        _emit({"schema": SCHEMA, "command": "dt", "found": False}, args.out)
        return 1
    series = chambers_mod.dt_series(seed, seq, args.order, conv)
    _emit({"schema": SCHEMA, "command": "dt", "found": True,
           "sequence": list(seq), "order": args.order,
           "convention": args.convention,
           "series": _series_json(series)}, args.out)
    return 0


def cmd_reps(args):
    _, sp = _load_seed(args.seed)
    if sp is None:
        seed, _ = _load_seed(args.seed)
        sp = SeedWithPotential.make(seed)
    m = tuple(Fraction(x) for x in args.m.split(","))
    rows = []
    for p in args.primes:
        series = reps_mod.iq_wall_series(sp, m, args.order, p)
        rows.append({"p": p, "series": _series_json(series)})
    payload = {"schema": SCHEMA, "command": "reps",
               "m": [str(x) for x in m], "order": args.order,
               "primes": list(args.primes), "series": rows}
    _emit(payload, args.out)
    return 0


def _suite_psi_roundtrip(args):
    seed, _ = _load_seed(args.seed)
    conv = CONVENTIONS[args.convention]
    rng = random.Random(args.random_seed)
    n = seed.rank
    failures = []
    for trial in range(args.trials):
        eta = {}
        for _ in range(2):
            ray = tuple(rng.randint(0, 2) for _ in range(n))
            if not any(ray) or sum(ray) > args.order:
                continue
            ray = primitive(ray)
            lie = {}
            for kk in range(1, args.order // sum(ray) + 1):
                if rng.random() < 0.6:
                    lie[tuple(kk * x for x in ray)] = \
                        CoeffFn.from_fraction(rng.randint(-3, 3), rng.randint(1, 2))
            lie = {d: c for d, c in lie.items() if not c.is_zero()}
            if lie:
                eta[ray] = GradedElement(seed, args.order, conv, LIE, lie).exp()
        if not eta:
            continue
        sd = scattering.complete_from_initial(eta, seed, args.order, conv)
        if args.corrupt:
            g = sd.carrier
            bad = dict(g.coeffs)
            key = sorted(bad)[0]
            bad[key] = bad[key] + CoeffFn.from_int(1)
            sd = scattering.ScatDiagram(seed, args.order, conv,
                                        GradedElement(seed, args.order,
                                                      g.convention, GROUP, bad))
        back = scattering.psi_extract(sd)
        if back != eta:
            witness = sorted(set(back) ^ set(eta)) or sorted(
                n0 for n0 in eta if back.get(n0) != eta[n0])
            failures.append({"trial": trial, "witness_rays": [list(w) for w in witness]})
    return {"suite": "psi-roundtrip", "trials": args.trials,
            "passed": not failures, "failures": failures}


def _suite_mutation(args, seed_name="a2"):
    seed, _ = _load_seed(args.seed)
    conv = CONVENTIONS[args.convention]
    build = {QUANTUM: scattering.quantum_cluster_sd,
             CLASSICAL: scattering.cluster_sd,
             DT_TWIST: scattering.dt_in_sd}[conv]
    sd = build(seed, args.order)
    failures = []
    for k in range(1, seed.rank + 1):
        for sign in (1, -1):
            seed2, _ = mutate_seed(seed, k, sign)
            sd2 = build(seed2, args.order)
            report = scattering.mutate_sd_check(sd, k, sign, sd2, samples=args.trials)
            if not report.passed:
                failures.append({"k": k, "sign": sign,
                                 "witnesses": [str(f) for f in report.failures[:3]]})
    return {"suite": "mutation", "passed": not failures, "failures": failures}


def _suite_pentagon(args):
    seed, _ = _load_seed(args.seed)
    conv = CONVENTIONS[args.convention]
    seqs = chambers_mod.enumerate_green_to_red(seed, args.depth)
    if len(seqs) < 2:
        return {"suite": "pentagon", "passed": False,
                "failures": ["fewer than two green-to-red sequences"]}
    series = [chambers_mod.dt_series(seed, s, args.order, conv) for s in seqs]
    ok = all(s == series[0] for s in series)
    return {"suite": "pentagon", "passed": ok,
            "sequences": [list(s) for s in seqs],
            "failures": [] if ok else ["series differ between sequences"]}


SUITES = {"psi-roundtrip": _suite_psi_roundtrip,
          "mutation": _suite_mutation,
          "pentagon": _suite_pentagon}


def cmd_verify(args):
    if args.suite not in SUITES:
        sys.stderr.write("unknown suite %r (have: %s)\n"
                         % (args.suite, ", ".join(sorted(SUITES))))
        return 2
    report = SUITES[args.suite](args)
    payload = {"schema": SCHEMA, "command": "verify"}
    payload.update(report)
    _emit(payload, args.out)
    return 0 if report["passed"] else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="scatdiag",
                                 description="exact scattering diagrams for "
                                             "quivers with potential")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", required=True, help="seed or QP JSON file")
        p.add_argument("--order", type=int, default=6)
        p.add_argument("--convention", choices=sorted(CONVENTIONS), default="quantum")
        p.add_argument("--depth", type=int, default=6)
        p.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5])
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--out", default=None)
        p.add_argument("--random-seed", type=int, default=2024)
        p.add_argument("--trials", type=int, default=10)

    p = sub.add_parser("scatter", help="walls and chambers of the completed diagram")
    common(p)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("mutate", help="mutate a seed or seed-with-potential")
    common(p)
    p.add_argument("--vertex", type=int, required=True)
    p.add_argument("--sign", choices=["+", "-"], default="-")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("g2r", help="search for a green-to-red sequence")
    common(p)
    p.add_argument("--unrestricted", action="store_true")
    p.add_argument("--allow-missing", action="store_true")
    p.set_defaults(func=cmd_g2r)

    p = sub.add_parser("dt", help="refined DT series along a green-to-red sequence")
    common(p)
    p.set_defaults(func=cmd_dt)

    p = sub.add_parser("reps", help="finite-field counting series on a wall")
    common(p)
    p.add_argument("--m", required=True, help="stability covector, e.g. 1,-1")
    p.set_defaults(func=cmd_reps)

    p = sub.add_parser("verify", help="run a named verification suite")
    common(p)
    p.add_argument("--suite", required=True)
    p.add_argument("--corrupt", action="store_true",
                   help="negative control: perturb before verifying")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.order < 1:
        sys.stderr.write("order must be >= 1\n")
        return 2
    for p in getattr(args, "primes", []):
        if p < 2 or any(p % q == 0 for q in range(2, p)):
            sys.stderr.write("primes must be prime\n")
            return 2
    try:
        return args.func(args)
    except (ValueError, OSError, reps_mod.BudgetExceeded) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
