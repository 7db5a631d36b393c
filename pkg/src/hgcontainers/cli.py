"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input/contract error,
3 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .core import ContainerError, SpreadViolation, min_spread_k
from .gen import KINDS, GenSpec, generate, uniform_measure
from .io import (
    certificate_to_doc,
    doc_to_certificate,
    hypergraph_measure_to_doc,
    load_instance,
    parse_rat,
    rat,
    read_json,
    transcript_to_doc,
    write_json,
)
from .oracle import BudgetExceeded, coverage_check, enumerate_independent, is_independent
from .theorem import TheoremConfig, build_family, capacity_T, run_theorem, verify_certificate

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _vertex_list(s: str) -> list[int]:
    s = s.strip()
    if not s:
        return []
    try:
        return sorted({int(x) for x in s.split(",")})
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated vertex ids, got {s!r}")


def _rational(s: str) -> Fraction:
    try:
        return parse_rat(s)
    except ContainerError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hgcontainers", description="Hypergraph containers with exact certificates.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("--spec", help="GenSpec JSON file (kind, params, seed)")
    g.add_argument("--kind", choices=KINDS)
    g.add_argument("--n", type=int)
    g.add_argument("--ell", type=int, default=3)
    g.add_argument("--m", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)

    s = sub.add_parser("spread", help="print the smallest K for which the measure is (p, K)-spread")
    s.add_argument("--instance", required=True)
    s.add_argument("--p", type=_rational, required=True)

    def common(sp):
        sp.add_argument("--instance", required=True)
        sp.add_argument("--p", type=_rational, required=True)
        sp.add_argument("--K", type=_rational, required=True)
        sp.add_argument("--epsilon", type=_rational, required=True)
        sp.add_argument("--budget", type=int, default=1_000_000)

    r = sub.add_parser("run", help="build certificates for independent sets")
    common(r)
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--independent-set", type=_vertex_list)
    src.add_argument("--all-maximal", action="store_true")
    src.add_argument("--all", action="store_true")
    r.add_argument("--out", required=True, help="output directory")
    r.add_argument("--seed", type=int, default=0, help="recorded in the report; the pipeline is deterministic")
    r.add_argument("--transcripts", action="store_true", help="also write lemma transcripts")

    v = sub.add_parser("verify", help="check a certificate")
    common(v)
    v.add_argument("--certificate", required=True)
    v.add_argument("--independent-set", type=_vertex_list,
                   help="defaults to the set recorded in the certificate")

    f = sub.add_parser("family", help="certificates for all maximal independent sets")
    common(f)
    f.add_argument("--out", required=True, help="output directory")
    f.add_argument("--check-coverage", action="store_true")
    f.add_argument("--workers", type=int, default=1)

    rr = sub.add_parser("rerun", help="repeat the command recorded in a report")
    rr.add_argument("--report", required=True)
    rr.add_argument("--out", required=True)
    return ap


def _config_echo(argv: list[str]) -> dict:
    kept, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--out":
            skip = True
            continue
        if a.startswith("--out="):
            continue
        kept.append(a)
    return {"argv": kept}


def cmd_gen(args) -> int:
    if args.spec:
        d = read_json(args.spec)
        spec = GenSpec(d["kind"], dict(d.get("params", {})), int(d.get("seed", 0)))
    else:
        if args.kind is None or args.n is None:
            raise ContainerError("gen needs --spec or --kind and --n")
        params = {"n": args.n}
        if args.kind in ("random_uniform", "edgeless"):
            params["ell"] = args.ell
        if args.kind == "random_uniform":
            if args.m is None:
                raise ContainerError("random_uniform needs --m")
            params["m"] = args.m
        spec = GenSpec(args.kind, params, args.seed)
    h = generate(spec)
    mu = uniform_measure(h) if h.edges else None
    write_json(args.out, hypergraph_measure_to_doc(h, mu))
    print(f"wrote {args.out}: {h.n_vertices} vertices, {len(h.edges)} edges")
    return EXIT_OK


def cmd_spread(args) -> int:
    inst = load_instance(args.instance, args.p, 1)
    print(rat(min_spread_k(inst.measure, args.p, inst.n)))
    return EXIT_OK


def _load(args):
    inst = load_instance(args.instance, args.p, args.K)
    return inst, TheoremConfig(args.epsilon)


def _case_summary(cert) -> list[str]:
    return ["/".join(rec.case_path) for rec in cert.trace]


def cmd_run(args, argv) -> int:
    inst, config = _load(args)
    if inst.spread_violation is not None:
        raise SpreadViolation(inst.spread_violation)
    if args.independent_set is not None:
        if not is_independent(inst.hypergraph, args.independent_set):
            raise ContainerError(f"{args.independent_set} is not independent")
        sets = [tuple(args.independent_set)]
    else:
        sets = enumerate_independent(inst.hypergraph, maximal_only=args.all_maximal, budget=args.budget)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records = []
    for k, s in enumerate(sets):
        cert = run_theorem(inst, config, s)
        name = f"cert_{k:04d}.json"
        write_json(out / name, certificate_to_doc(cert, s))
        if args.transcripts:
            write_json(out / f"transcript_{k:04d}.json", [transcript_to_doc(t) for t in cert.transcripts])
        checks = verify_certificate(inst, config, s, cert)
        records.append({
            "certificate": name,
            "independent_set": list(s),
            "fingerprint": list(cert.fingerprint),
            "container": sorted(cert.container),
            "iterations": cert.iterations,
            "cases": _case_summary(cert),
            "checks": {c.name: c.passed for c in checks.checks},
        })
    n = inst.n
    t_val = capacity_T(inst.ell, args.K, args.epsilon)
    report = {
        "tool": "hgcontainers",
        "version": __version__,
        "config": {**_config_echo(argv), "p": rat(args.p), "K": rat(args.K), "epsilon": rat(args.epsilon),
                   "seed": args.seed},
        "records": records,
        "aggregate": {
            "certificates": len(records),
            "distinct_fingerprints": len({frozenset(r["fingerprint"]) for r in records}),
            "max_fingerprint": max((len(r["fingerprint"]) for r in records), default=0),
            "min_container_ratio": rat(min((Fraction(len(r["container"]), n) for r in records), default=0)) if n else "0/1",
            "capacity_T_approx": f"~{t_val:.6f}",
        },
    }
    write_json(out / "report.json", report)
    print(f"{len(records)} certificate(s) written to {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    inst, config = _load(args)
    doc = read_json(args.certificate)
    cert = doc_to_certificate(doc)
    i_set = args.independent_set
    if i_set is None:
        if "independent_set" not in doc:
            raise ContainerError("certificate has no independent_set; pass --independent-set")
        i_set = doc["independent_set"]
    if inst.spread_violation is not None:
        raise SpreadViolation(inst.spread_violation)
    report = verify_certificate(inst, config, i_set, cert)
    for c in report.checks:
        line = f"{'PASS' if c.passed else 'FAIL'}  {c.name}"
        if not c.passed:
            label = "reconstruction mismatch" if c.name == "reconstruction" else "witness"
            line += f"  [{label}: {c.witness}]"
        print(line)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_family(args, argv) -> int:
    inst, config = _load(args)
    if inst.spread_violation is not None:
        raise SpreadViolation(inst.spread_violation)
    fam = build_family(inst, config, budget=args.budget, workers=args.workers)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    doc = {
        "tool": "hgcontainers",
        "version": __version__,
        "config": {**_config_echo(argv), "p": rat(args.p), "K": rat(args.K), "epsilon": rat(args.epsilon)},
        "maximal_independent_sets": fam.independent_sets,
        "family_size": fam.size,
        "count_bound": str(fam.count_bound),
        "certificates": [certificate_to_doc(c) for c in fam.certificates],
    }
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["fingerprint_size", "container_size", "container_mass", "iterations"])
    for c in fam.certificates:
        mass = inst.measure.mass(e for e in inst.hypergraph.edges if c.container.issuperset(e))
        w.writerow([len(c.fingerprint), len(c.container), rat(mass), c.iterations])
    (out / "family.csv").write_text(buf.getvalue(), encoding="utf-8")
    status = EXIT_OK
    if args.check_coverage:
        rep = coverage_check(inst, lambda s: run_theorem(inst, config, s), config=config, budget=args.budget)
        doc["coverage"] = rep.to_dict()
        verdict = "PASS" if rep.passed else "FAIL"
        print(f"family: {fam.size} certificate(s) from {fam.independent_sets} maximal independent set(s)")
        print(f"coverage: {verdict}")
        if not rep.passed:
            status = EXIT_VERIFY
    else:
        print(f"family: {fam.size} certificate(s) from {fam.independent_sets} maximal independent set(s)")
    write_json(out / "family.json", doc)
    return status


def cmd_rerun(args) -> int:
    report = read_json(args.report)
    try:
        argv = list(report["config"]["argv"])
    except (KeyError, TypeError):
        raise ContainerError("report carries no config echo")
    return main(argv + ["--out", args.out])


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "spread":
            return cmd_spread(args)
        if args.command == "run":
            return cmd_run(args, argv)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "family":
            return cmd_family(args, argv)
        return cmd_rerun(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SpreadViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ContainerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
