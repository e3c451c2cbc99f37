"""Command-line interface: ``hermikron <subcommand> ...`` or ``python -m hermikron``.

Exit codes: 0 on success, 2 when a requested verification fails, 1 on error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import bundles, codim, experiments, infer, perturb
from .canonical import hkcf_from_json
from .errors import HermikronError
from .pencil import pencil_from_json, pencil_to_json

EXIT_OK, EXIT_ERROR, EXIT_VERIFY = 0, 1, 2


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _parse_desc(text: str) -> bundles.BundleDescriptor:
    if text.strip().startswith("{") or text.endswith(".json"):
        obj = json.loads(text) if text.strip().startswith("{") else _load_json(text)
        return bundles.BundleDescriptor(int(obj["n"]), int(obj["r"]), int(obj["c"]), int(obj["d"]))
    parts = [int(x) for x in text.split(",")]
    if len(parts) != 4:
        raise ValueError("descriptor must be 'n,r,c,d'")
    return bundles.BundleDescriptor(*parts)


def _load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def cmd_enumerate(args) -> int:
    r = args.r if args.r is not None else args.n
    descs = bundles.enumerate_regular(args.n) if r == args.n else bundles.enumerate_bounded(args.n, r)
    rows = []
    for d in descs:
        cf = bundles.codim_closed_form(d)
        rows.append({**d.as_dict(), "orbit": cf["orbit"], "bundle": cf["bundle"],
                     "leadingInertia": list(bundles.leading_inertia(d))})
    if args.csv:
        lines = ["n,r,c,d,alpha,s,codim_orbit,codim_bundle,pos,neg,zero"]
        for row in rows:
            cells = [row[k] for k in ("n", "r", "c", "d", "alpha", "s", "orbit", "bundle")]
            cells += row["leadingInertia"]
            lines.append(",".join("" if v is None else str(v) for v in cells))
        _emit(args, "\n".join(lines) + "\n")
    elif args.json:
        _emit(args, _dump({"n": args.n, "r": r, "count": len(rows),
                           "countFormula": bundles.count_formula(r), "bundles": rows}))
    else:
        lines = [f"{len(rows)} generic bundles for n={args.n}, r={r}"]
        lines += [f"  c={row['c']} d={row['d']}  codim orbit={row['orbit']} bundle={row['bundle']}"
                  for row in rows]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_codim(args) -> int:
    backend = "floating" if args.float else "exact"
    if args.verify_tables:
        checks = codim.verify_block_tables(args.kmax, backend)
        ok = all(c["ok"] for c in checks)
        _emit(args, _dump({"checks": checks, "ok": ok}))
        return EXIT_OK if ok else EXIT_VERIFY
    if args.hkcf:
        h = hkcf_from_json(_load_json(args.hkcf))
        desc = None
    elif args.desc:
        desc = _parse_desc(args.desc)
        h = bundles.realize(desc)
    else:
        raise ValueError("codim needs --hkcf FILE, --desc n,r,c,d or --verify-tables")
    res = codim.orbit_codim_bruteforce(h, backend, assemble=args.assemble)
    out = res.as_dict()
    status = EXIT_OK
    if desc is not None:
        cf = bundles.codim_closed_form(desc)
        out["closedForm"] = cf
        out["ok"] = cf["orbit"] == res.orbit_codim and cf["bundle"] == res.bundle_codim
        status = EXIT_OK if out["ok"] else EXIT_VERIFY
    _emit(args, _dump(out))
    return status


def _parse_params(text: str) -> dict:
    out: dict = {}
    if not text:
        return out
    for item in text.split(","):
        key, _, value = item.partition("=")
        key = key.strip()
        if key in ("k", "d", "m", "sign"):
            out[key] = int(value)
        elif key in ("eps", "a"):
            out[key] = float(value)
        elif key == "mu":
            out[key] = complex(value.replace("i", "j"))
        else:
            raise ValueError(f"unknown perturbation parameter {key!r}")
    return out


def cmd_perturb(args) -> int:
    spec = perturb.PerturbationSpec(args.family, **_parse_params(args.params))
    pencil, pred = spec.build()
    out = {"pencil": pencil_to_json(pencil), "prediction": pred.as_dict()}
    status = EXIT_OK
    if args.verify:
        checks = perturb.verify_perturbation(pencil, pred, args.seed)
        out["checks"] = checks
        out["ok"] = all(c["ok"] for c in checks)
        status = EXIT_OK if out["ok"] else EXIT_VERIFY
    _emit(args, _dump(out))
    return status


def cmd_infer(args) -> int:
    p = pencil_from_json(_load_json(args.pencil))
    report = infer.full_report(p, args.seed)
    out = report.as_dict()
    status = EXIT_OK
    if args.match:
        desc = _parse_desc(args.match)
        out["descriptor"] = desc.as_dict()
        out["match"] = infer.match_descriptor(report, desc)
        status = EXIT_OK if out["match"] else EXIT_VERIFY
    _emit(args, _dump(out))
    return status


def cmd_experiment(args) -> int:
    cfg = experiments.ExperimentConfig(
        kind=args.kind, n=args.n, trials=args.trials, seed=args.seed, r=args.r,
        shift=args.shift, generator=args.generator, verify=args.verify, out=args.out)
    rows = experiments.run(cfg, args.workers)
    if args.json:
        meta = {"kind": cfg.kind, "n": cfg.n, "r": cfg.r, "trials": cfg.trials, "seed": cfg.seed}
        if cfg.kind == "regular":
            meta["shift"] = cfg.shift
            meta["summary"] = experiments.summarize_regular(rows, cfg.n).__dict__ \
                if cfg.trials >= 150 else None
        else:
            meta["generator"] = cfg.generator
        payload = {"config": meta, "rows": [
            {"j": r.j, "realCount": r.real_count, "maxAbsImag": r.max_abs_imag,
             **({"c": r.c, "d": r.d} if r.d is not None else {}),
             **({"matched": r.matched} if r.matched is not None else {})} for r in rows]}
        _emit(args, _dump(payload))
    elif args.plotdata:
        if not args.out:
            raise ValueError("--plotdata needs --out")
        experiments.emit_plotdata(rows, args.out)
    else:
        _emit(args, experiments.csv_text(rows))
    if cfg.verify and not all(r.matched for r in rows):
        return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="master seed")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--csv", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, help="write output to this file")

    parser = argparse.ArgumentParser(prog="hermikron", parents=[common],
                                     description="Generic structures of Hermitian pencils.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list generic bundles")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, help="rank bound (default n, the regular case)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("codim", parents=[common], help="brute-force codimension")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--hkcf", help="canonical form JSON file")
    src.add_argument("--desc", help="bundle descriptor 'n,r,c,d' (compared to the closed form)")
    src.add_argument("--verify-tables", action="store_true", dest="verify_tables")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="rational elimination (default)")
    mode.add_argument("--float", action="store_true", help="singular values with a gap check")
    p.add_argument("--assemble", action="store_true", help="sum block and pair dimensions")
    p.add_argument("--kmax", type=int, default=4)
    p.set_defaults(func=cmd_codim)

    p = sub.add_parser("perturb", parents=[common], help="build and check a perturbation family")
    p.add_argument("--family", required=True, choices=perturb.FAMILIES)
    p.add_argument("--params", default="", help="comma list, e.g. 'k=3,a=0.5,sign=-1,eps=0.01,m=10'")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("infer", parents=[common], help="structure report of a pencil JSON file")
    p.add_argument("--pencil", required=True)
    p.add_argument("--match", help="descriptor 'n,r,c,d' or JSON file with n, r, c, d")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("experiment", parents=[common], help="seeded real-eigenvalue experiments")
    p.add_argument("kind", choices=("regular", "rank"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--trials", type=int, default=350)
    p.add_argument("--shift", default="jlogj", choices=sorted(experiments.SHIFTS))
    p.add_argument("--generator", default="g1", choices=experiments.GENERATORS)
    p.add_argument("--verify", action="store_true", help="rank kind: match reports to sampled (c, d)")
    p.add_argument("--plotdata", action="store_true", help="also write a plotting script stub")
    p.add_argument("--workers", type=int, help="override HERMIKRON_THREADS")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("seed", 0), ("json", False), ("csv", False), ("out", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        return args.func(args)
    except (HermikronError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
