"""Command-line entry point.

stdout carries machine-readable output (JSON or CSV); diagnostics go to
stderr.  Exit codes: 0 success/accept, 1 reject/failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import TYPE_CHECKING, Any, Dict, List, Optional

if TYPE_CHECKING:
    from .graph_core import Graph

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_graph(args) -> Graph:
    from .graph_core import GraphError, decode_graph6
    if args.graph and args.file:
        raise UsageError("give the graph inline or with --file, not both")
    if args.graph:
        text = args.graph
    elif args.file:
        with open(args.file) as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    text = text.strip().splitlines()[0].strip() if text.strip() else ""
    if not text:
        raise UsageError("no graph6 input")
    try:
        return decode_graph6(text)
    except GraphError as exc:
        raise UsageError(f"bad graph6 input: {exc}") from None


def _emit(obj: Any, out: Optional[str]) -> None:
    text = obj if isinstance(obj, str) else json.dumps(obj, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _json_arg(raw: Optional[str], what: str) -> Dict[str, Any]:
    if not raw:
        return {}
    try:
        val = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} must be a JSON object: {exc}") from None
    if not isinstance(val, dict):
        raise UsageError(f"{what} must be a JSON object")
    return val


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    import random
    from .graph_core import encode_graph6
    from .p5_generators import GenSpec, GenerationError, family, random_composite, random_p5free
    lines = []
    try:
        for i in range(args.count):
            seed = args.seed + i
            if args.family == "mixed":
                g = random_composite(args.n, random.Random(seed))
            elif args.family:
                g = family(args.family, **_json_arg(args.params, "--params"))
            else:
                g = random_p5free(GenSpec(args.strategy, args.n, args.p, seed))
            lines.append(encode_graph6(g).decode())
    except (GenerationError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    _emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .chi_oracles import TooLarge, oracle_for
    from .graph_core import to_list
    g = _read_graph(args)
    orc = oracle_for(g)
    try:
        if args.cmd == "chi":
            wit = orc.coloring(g.full)
            classes: Dict[int, List[int]] = {}
            for v, c in zip(to_list(g.full), wit.colors):
                classes.setdefault(c, []).append(v)
            obj = {"chi": wit.k, "coloring": [classes[c] for c in sorted(classes)]}
        elif args.cmd == "omega":
            m = orc.clique(g.full)
            obj = {"omega": len(to_list(m)), "clique": to_list(m)}
        else:
            m = orc.stable(g.full)
            obj = {"alpha": len(to_list(m)), "stable": to_list(m)}
    except TooLarge as exc:
        print(f"oracle budget exceeded: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(obj, args.out)
    return EXIT_OK


def cmd_p5check(args) -> int:
    from .graph_core import find_induced_p5
    g = _read_graph(args)
    wit = find_induced_p5(g)
    _emit({"p5_free": wit is None, "witness": list(wit) if wit else None}, args.out)
    return EXIT_OK if wit is None else EXIT_FAIL


def cmd_lemma(args) -> int:
    from .procedure import LemmaFailure, PreconditionError
    from .verify_harness import LEMMAS, invoke
    if args.id not in LEMMAS:
        raise UsageError(f"unknown lemma {args.id!r}; known: {', '.join(sorted(LEMMAS))}")
    g = _read_graph(args)
    params = _json_arg(args.params, "--params")
    raw_sets = _json_arg(args.sets, "--sets")
    inputs = {}
    for name, members in raw_sets.items():
        if not isinstance(members, list) or not all(isinstance(v, int) and 0 <= v < g.n for v in members):
            raise UsageError(f"set {name} must list vertices of the graph")
        inputs[name] = sum(1 << v for v in set(members))
    try:
        cert = invoke(args.id, g, params, inputs, args.mode)
    except PreconditionError as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except LemmaFailure as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad parameters for {args.id}: {exc!r}") from None
    _emit(cert.to_json(), args.out)
    return EXIT_OK


def _load_certificate(path: str):
    from .certificate import Certificate, CertificateError
    try:
        with open(path) as fh:
            return Certificate.from_json(fh.read())
    except (OSError, ValueError, CertificateError) as exc:
        raise UsageError(f"cannot read certificate {path}: {exc}") from None


def cmd_verify(args) -> int:
    from .graph_core import decode_graph6
    from .verifier import verify_certificate
    cert = _load_certificate(args.cert)
    if args.graph or args.file:
        g = _read_graph(args)
    else:
        try:
            g = decode_graph6(cert.trace[0]["graph6"])
        except (IndexError, KeyError, TypeError):
            raise UsageError("certificate has no graph6 binding; pass the graph explicitly") from None
    v = verify_certificate(g, cert)
    _emit({"status": v.status, "reason": v.reason, "lemma": v.lemma, "bullet": v.bullet}, args.out)
    return EXIT_OK if v.ok else EXIT_FAIL


def cmd_campaign(args) -> int:
    from .verify_harness import LEMMAS, run_campaign
    if args.id not in LEMMAS:
        raise UsageError(f"unknown lemma {args.id!r}; known: {', '.join(sorted(LEMMAS))}")
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    rep = run_campaign(args.id, args.trials, args.seed, args.mode, args.workers, args.results)
    _emit(rep.csv_text(timing=args.timing), args.out)
    print(json.dumps(rep.summary(), sort_keys=True), file=sys.stderr)
    return EXIT_OK if rep.failed == 0 else EXIT_FAIL


def cmd_ledger(args) -> int:
    from .ledger import ledger
    led = ledger(args.a1)
    obj = led.as_dict()
    obj["violations"] = led.check()
    _emit(obj, args.out)
    return EXIT_OK if not obj["violations"] else EXIT_FAIL


def cmd_scan(args) -> int:
    from .verify_harness import extremal_scan, scan_csv
    rows, best = extremal_scan(args.trials, args.seed)
    _emit(scan_csv(rows), args.out)
    if best is not None:
        print(json.dumps({"instances": len(rows), "max_exponent": best.exponent, "argmax": best.graph6}),
              file=sys.stderr)
    return EXIT_OK


def cmd_replay(args) -> int:
    path = args.target
    if path.endswith(".json") and not os.path.exists(path[:-5] + ".g6"):
        from .verify_harness import replay_certificate
        from .verifier import verify_certificate
        from .graph_core import decode_graph6
        cert = _load_certificate(path)
        again = replay_certificate(cert)
        same = again.to_json() == cert.to_json()
        v = verify_certificate(decode_graph6(cert.trace[0]["graph6"]), again)
        _emit({"identical": same, "status": v.status, "reason": v.reason}, args.out)
        return EXIT_OK if same and v.ok else EXIT_FAIL
    from .verify_harness import replay_counterexample
    try:
        res = replay_counterexample(path)
    except OSError as exc:
        raise UsageError(f"cannot read counterexample {path}: {exc}") from None
    _emit({"lemma": res.lemma, "outcome": res.tag, "verified": res.verified, "detail": res.detail}, args.out)
    return EXIT_OK if res.tag == "pass" else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def _graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("graph", nargs="?", help="inline graph6 string (default: read stdin)")
    p.add_argument("--file", help="read graph6 from this file")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--mode", choices=("strict", "relaxed"), default=None)
    common.add_argument("--budget", type=int, default=None, help="vertex budget of the exact solvers")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out", help="write stdout output to this file")

    ap = argparse.ArgumentParser(prog="chiforge", description="Constructive chi-boundedness procedures for P5-free graphs")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gen", parents=[common], help="emit P5-free instances as graph6")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--strategy", choices=("repair", "rejection"), default="repair")
    p.add_argument("--family", help="named family, or 'mixed' for random substitution composites")
    p.add_argument("--params", help="JSON keyword arguments of the family")
    p.set_defaults(func=cmd_gen)

    for name in ("chi", "omega", "alpha"):
        p = sub.add_parser(name, parents=[common], help=f"exact {name} with a witness")
        _graph_args(p)
        p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("p5check", parents=[common], help="find an induced P5 (exit 1 if one exists)")
    _graph_args(p)
    p.set_defaults(func=cmd_p5check)

    p = sub.add_parser("lemma", parents=[common], help="run one procedure and print its certificate")
    p.add_argument("id")
    _graph_args(p)
    p.add_argument("--params", help='JSON parameters, e.g. {"eps": "1/4"}')
    p.add_argument("--sets", help='JSON input sets, e.g. {"in_A": [1, 2]}')
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("verify", parents=[common], help="re-verify a certificate (exit 1 on reject)")
    p.add_argument("cert")
    p.add_argument("--graph", dest="graph", help="graph6 override (default: the certificate's own binding)")
    p.add_argument("--file", help="read the graph6 override from a file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("campaign", parents=[common], help="property campaign; CSV report on stdout")
    p.add_argument("id")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--results", default=None, help="directory for counterexamples (graph6 + JSON)")
    p.add_argument("--timing", action="store_true", help="fill the millis column (breaks byte-identical reruns)")
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("ledger", parents=[common], help="print the exponent chain")
    p.add_argument("--a1", type=int, default=200)
    p.set_defaults(func=cmd_ledger)

    p = sub.add_parser("scan", parents=[common], help="chi versus omega table (CSV)")
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("replay", parents=[common], help="replay a certificate or a stored counterexample")
    p.add_argument("target")
    p.set_defaults(func=cmd_replay)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.budget is not None:
        if args.budget < 0:
            print("error: --budget must be nonnegative", file=sys.stderr)
            return EXIT_USAGE
        os.environ["CHIFORGE_SOLVE_BUDGET"] = str(args.budget)
    if args.workers < 1:
        print("error: --workers must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
