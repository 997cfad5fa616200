"""Command line entry point: ``normedvol <command> ...``.

Exit status is 0 on success, 1 when a verification claim fails and 2 on
invalid input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, bodies, harness
from .extremal import (
    SolverBudget,
    SolverStallError,
    max_cross_polytope,
    max_inscribed_polytope,
    min_circumscribed_parallelotope,
    santalo_point,
)
from .geometry import GeometryError, load_body, save_body
from .shadow import load_system, mr_profile, projection_cascade, volume_profile
from .volumes import VolumeKind, mu

log = logging.getLogger("normedvol")


def fmt(x) -> str:
    # shortest round-trip repr: never fewer than 12 significant digits for generic values
    return repr(float(x))


@dataclass
class RunConfig:
    command: str
    parameters: dict
    seed: int
    outputs: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "outputs": self.outputs,
            "rng": harness.RNG_NAME,
            "version": __version__,
        }


def _config(args) -> RunConfig:
    params = {k: v for k, v in vars(args).items() if k not in ("func",) and not k.startswith("_")}
    outputs = {k: params[k] for k in ("out", "csv", "svg", "json") if params.get(k)}
    return RunConfig(" ".join(a for a in (args.command, getattr(args, "sub", None)) if a),
                     params, int(getattr(args, "seed", 0) or 0), outputs)


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def _budget(args) -> SolverBudget:
    return SolverBudget(max_subsets=args.max_subsets, rng_seed=args.seed)


# -- bodies ------------------------------------------------------------------------

def cmd_bodies(args) -> int:
    P = bodies.make_body(args.kind, args.dim, args.n)
    if args.out:
        save_body(P, args.out)
    else:
        json.dump(P.to_dict(), sys.stdout)
        sys.stdout.write("\n")
    if args.svg:
        from .plotting import emit_svg
        emit_svg([P], args.svg, labels=["body"])
    return 0


# -- compute -----------------------------------------------------------------------

def cmd_compute(args) -> int:
    B = load_body(args.body)
    budget = _budget(args)
    cfg = _config(args)
    overlay = None
    if args.sub == "mu":
        if args.n is None or args.vol is None:
            raise GeometryError("compute mu needs --n and --vol")
        res = mu(B, args.n, VolumeKind(args.vol), budget)
        print(fmt(res.value))
        payload = res.to_dict()
        overlay = res.witness.object
    elif args.sub == "santalo":
        try:
            s = santalo_point(B, budget)
        except SolverStallError as exc:
            log.error("%s; best iterate %s", exc, exc.best)
            return 1
        print(" ".join(fmt(c) for c in s))
        payload = {"santalo_point": s.tolist()}
    else:
        if args.sub == "qn":
            if args.n is None:
                raise GeometryError("compute qn needs --n")
            w = max_inscribed_polytope(B, args.n, budget)
        elif args.sub == "cross":
            w = max_cross_polytope(B, budget)
        else:
            w = min_circumscribed_parallelotope(B, budget)
        print(fmt(w.value))
        payload = w.to_dict()
        overlay = w.object
    payload["run"] = cfg.to_dict()
    if args.out:
        _write_json(args.out, payload)
    if args.svg:
        from .plotting import emit_svg
        polys = [B] + ([overlay] if overlay is not None else [])
        emit_svg(polys, args.svg, labels=["body", "witness"][: len(polys)])
    return 0


# -- verify ------------------------------------------------------------------------

def cmd_verify(args) -> int:
    budget = _budget(args)
    reports = harness.run_suite(args.suite, args.tol, budget, args.seed)
    for r in reports:
        print(r.line())
    ok = all(r.passed for r in reports)
    print(f"{args.suite}: {sum(r.passed for r in reports)}/{len(reports)} passed")
    if args.json:
        _write_json(args.json, {"suite": args.suite, "pass": ok,
                                "reports": [r.to_dict() for r in reports],
                                "run": _config(args).to_dict()})
    if args.svg:
        from .plotting import save_svg, profile_figure
        errs = [max(r.rel_err, 1e-18) for r in reports]
        fig = profile_figure(np.arange(len(errs)), np.log10(errs), xlabel="claim", ylabel="log10 rel_err",
                             gid="rel-err")
        save_svg(fig, args.svg)
    return 0 if ok else 1


# -- search ------------------------------------------------------------------------

def cmd_search(args) -> int:
    params = json.loads(args.params) if args.params else None
    budget = _budget(args)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            res = harness.conjecture_search(args.samples, args.seed, params, fh, budget)
    else:
        res = harness.conjecture_search(args.samples, args.seed, params, sys.stdout, budget)
    m = res.minimum
    print(f"min product {fmt(m.product)} margin {fmt(m.margin)} at sample {m.sample_id} "
          f"(seed {m.seed}, hash {m.body_hash}); skipped {res.skipped}", file=sys.stderr)
    for rec in res.counterexamples:
        path = f"counterexample_{rec.sample_id}.json"
        payload = {"body": rec.body.to_dict(), "product": rec.product, "margin": rec.margin,
                   "sample_id": rec.sample_id, "seed": rec.seed, "run": _config(args).to_dict()}
        _write_json(path, payload)
        print(f"COUNTEREXAMPLE sample {rec.sample_id}: product {fmt(rec.product)} -> {path}", file=sys.stderr)
    if args.out:
        _write_json(args.out, {"minimum": {k: v for k, v in vars(m).items() if k != "body"},
                               "counterexamples": [r.sample_id for r in res.counterexamples],
                               "samples": len(res.records), "skipped": res.skipped,
                               "run": _config(args).to_dict()})
    if args.svg:
        from .plotting import histogram_figure, save_svg
        save_svg(histogram_figure([r.product for r in res.records], "λ(Q6)·λ(B°)", marker=8.0), args.svg)
    return 0


# -- shadow ------------------------------------------------------------------------

def cmd_shadow(args) -> int:
    if args.sub == "cascade":
        with open(args.system) as fh:
            data = json.load(fh)
        X = np.asarray(data["points"], float)
        f0 = float(np.linalg.norm(X, axis=1).sum())
        res = projection_cascade(data["normals"], X, args.rel_eps * f0, args.max_sweeps)
        print(f"{res.status} after {res.steps} steps; f = {fmt(res.trace[-1])}")
        payload = {"status": res.status, "steps": res.steps, "trace": res.trace,
                   "points": res.points.tolist()}
        x, y, ylabel = np.arange(len(res.trace)), res.trace, "f"
        code = 0
    else:
        ss = load_system(args.system)
        fn = volume_profile if args.sub == "profile" else mr_profile
        steps = args.steps or (201 if args.sub == "profile" else 51)
        tol = args.tol if args.tol is not None else (1e-8 if args.sub == "profile" else 1e-6)
        rep = fn(ss, args.t_min, args.t_max, steps, tol)
        for t, v in zip(rep.grid, rep.values):
            print(f"{fmt(t)},{fmt(v)}")
        print(f"min second difference {fmt(rep.min_second_difference)}; "
              f"{'PASS' if rep.passed else 'FAIL'}", file=sys.stderr)
        payload = rep.to_dict()
        x, y = rep.grid, rep.values
        ylabel = "volume" if args.sub == "profile" else "1/vol(polar)"
        code = 0 if rep.passed else 1
    payload["run"] = _config(args).to_dict()
    if args.out:
        _write_json(args.out, payload)
    if args.svg:
        from .plotting import profile_figure, save_svg
        save_svg(profile_figure(x, y, xlabel="step" if args.sub == "cascade" else "t", ylabel=ylabel), args.svg)
    return code


def _u64(text):
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="normedvol", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=_u64, default=0)
        sp.add_argument("--max-subsets", type=int, default=2_000_000)

    b = sub.add_parser("bodies", help="construct named bodies")
    bsub = b.add_subparsers(dest="sub", required=True)
    mk = bsub.add_parser("make")
    mk.add_argument("--kind", required=True, choices=sorted(bodies.KINDS))
    mk.add_argument("--dim", type=int, default=2)
    mk.add_argument("--n", type=int)
    mk.add_argument("--out")
    mk.add_argument("--svg")
    mk.set_defaults(func=cmd_bodies)

    c = sub.add_parser("compute", help="extremal objects and normed volumes")
    c.add_argument("sub", choices=["qn", "cross", "para", "santalo", "mu"])
    c.add_argument("--body", required=True)
    c.add_argument("--n", type=int)
    c.add_argument("--vol", choices=[k.value for k in VolumeKind])
    c.add_argument("--out")
    c.add_argument("--svg")
    common(c)
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=sorted(harness.SUITES))
    v.add_argument("--tol", type=float, default=1e-6)
    v.add_argument("--json")
    v.add_argument("--svg")
    common(v)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="randomized conjecture search")
    s.add_argument("sub", choices=["conjecture"])
    s.add_argument("--samples", type=int, required=True)
    s.add_argument("--csv")
    s.add_argument("--params", help="generator parameters as JSON")
    s.add_argument("--out")
    s.add_argument("--svg")
    common(s)
    s.set_defaults(func=cmd_search)

    sh = sub.add_parser("shadow", help="shadow-system profiles and the projection cascade")
    sh.add_argument("sub", choices=["profile", "mr", "cascade"])
    sh.add_argument("--system", required=True)
    sh.add_argument("--t-min", type=float, default=-1.0)
    sh.add_argument("--t-max", type=float, default=1.0)
    sh.add_argument("--steps", type=int, help="grid size (201 for profile, 51 for mr)")
    sh.add_argument("--tol", type=float, help="relative tolerance (1e-8 for profile, 1e-6 for mr)")
    sh.add_argument("--rel-eps", type=float, default=1e-6)
    sh.add_argument("--max-sweeps", type=int, default=10_000)
    sh.add_argument("--out")
    sh.add_argument("--svg")
    common(sh)
    sh.set_defaults(func=cmd_shadow)
    return p


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (GeometryError, ValueError, KeyError, OSError) as exc:
        print(f"normedvol: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
