"""Batch front end: synthesize, evaluate and verify from the command line.

Exit codes: 0 all checks pass, 1 a certified clause failed, 2 malformed
input, 3 instance rejected by the engine's preconditions.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .arrow import arrow_cdh_synthesize
from .engine import SynthesisRun, certify
from .errors import DomainError, InstanceRejected, MalformedInput, UnsupportedCase
from .io import (
    canonical_json,
    cover_from_data,
    instance_from_data,
    instance_to_data,
    partition_dot,
    report_to_data,
    run_to_data,
    state_to_data,
)
from .points import format_point, parse_point

EXIT_OK = 0
EXIT_CLAUSE = 1
EXIT_PARSE = 2
EXIT_REJECTED = 3


def _out_dir(args) -> str:
    out = args.out or os.environ.get("CANTORSYNTH_OUTDIR", ".")
    os.makedirs(out, exist_ok=True)
    return out


def _load_json(path: str):
    try:
        with open(path) as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise MalformedInput(f"cannot read {path}: {e}")


def _write(path: str, data) -> None:
    with open(path, "w") as f:
        f.write(canonical_json(data))


def cmd_synthesize(args) -> int:
    data = _load_json(args.instance)
    instance = instance_from_data(data)
    out = _out_dir(args)
    t0 = time.time()
    if data.get("mode") == "arrow":
        result = arrow_cdh_synthesize(instance, args.stages)
        run, report = result.run, result.report
    else:
        run = SynthesisRun(instance)
        report = certify(run, args.stages, samples=args.samples, seed=args.seed)
    dump = run_to_data(run, args.stages)
    dump["config"] = {
        "mode": data.get("mode"),
        "stages": args.stages,
        "samples": args.samples,
        "seed": args.seed,
    }
    if data.get("mode") == "arrow":
        dump["arrow"] = instance_to_data(instance)
    _write(os.path.join(out, "dump.json"), dump)
    _write(os.path.join(out, "report.json"), report_to_data(report))
    if args.dot:
        words = [s for s, _ in run.states[args.stages].pieces]
        words += [a.base_src for a in run.states[args.stages].anchors]
        with open(os.path.join(out, "cover.dot"), "w") as f:
            f.write(partition_dot(words))
    print(f"stages={args.stages} clauses={'pass' if report.ok else 'FAIL'}", end=" ")
    print(f"anchors={len(run.states[args.stages].anchors)}")
    print(f"elapsed={time.time() - t0:.2f}s", file=sys.stderr)
    if not report.ok:
        for name in report.failed_clauses():
            print(f"failed clause {name}: {report.clauses[name]['detail']}")
        return EXIT_CLAUSE
    return EXIT_OK


def _reconstruct_run(dump) -> SynthesisRun:
    instance = instance_from_data(dump["instance"])
    run = SynthesisRun(instance)
    run.drive(dump["stages"])
    return run


def cmd_eval(args) -> int:
    dump = _load_json(args.dump)
    if dump.get("kind") != "synthesis-dump":
        raise MalformedInput("not a synthesis dump")
    x = parse_point(args.point, normalize=args.normalize)
    run = _reconstruct_run(dump)
    out = run.evaluate(x, args.k, inverse=args.inverse)
    if out[0] == "point":
        print(format_point(out[1]))
    else:
        print(f"[{out[1] or 'e'}]")
    return EXIT_OK


def cmd_verify(args) -> int:
    data = _load_json(args.file)
    kind = data.get("kind")
    if kind == "synthesis-dump":
        run = _reconstruct_run(data)
        mismatch = None
        for m, stored in enumerate(data["states"]):
            if canonical_json(stored) != canonical_json(state_to_data(run.states[m])):
                mismatch = f"stage {m} differs from its deterministic replay"
                break
        report = certify(run, data["stages"], samples=args.samples, seed=args.seed)
        report.clauses["replay"] = {
            "pass": mismatch is None,
            "detail": mismatch or "byte-identical replay",
        }
        for name, verdict in sorted(report.clauses.items()):
            mark = "pass" if verdict["pass"] else "FAIL"
            print(f"{name}: {mark} {'' if verdict['pass'] else verdict['detail']}")
        return EXIT_OK if report.ok else EXIT_CLAUSE
    if kind == "kr-cover":
        from .krcover import verify_kr_cover

        cover = cover_from_data(data)
        cert = verify_kr_cover(cover, depth=args.depth)
        for name, verdict in sorted(cert.clauses.items()):
            mark = "pass" if verdict["pass"] else "FAIL"
            print(f"({name}): {mark} {'' if verdict['pass'] else verdict['detail']}")
        return EXIT_OK if cert.ok else EXIT_CLAUSE
    raise MalformedInput(f"unknown file kind {kind!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cantorsynth",
        description="Synthesize and verify exact homeomorphisms of Cantor space",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synthesize", help="run an engine on an instance file")
    s.add_argument("--instance", required=True)
    s.add_argument("--mode", choices=["cdh", "ordered", "arrow"], default=None)
    s.add_argument("--stages", type=int, default=8)
    s.add_argument("--samples", type=int, default=50)
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--out", default=None)
    s.add_argument("--dot", action="store_true")
    s.set_defaults(func=cmd_synthesize)

    e = sub.add_parser("eval", help="evaluate a synthesized map at a point")
    e.add_argument("--dump", required=True)
    e.add_argument("--point", required=True)
    e.add_argument("--k", type=int, default=8)
    e.add_argument("--inverse", action="store_true")
    e.add_argument("--normalize", action="store_true")
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", help="re-verify a dump or cover file")
    v.add_argument("--file", required=True)
    v.add_argument("--depth", type=int, default=12)
    v.add_argument("--samples", type=int, default=50)
    v.add_argument("--seed", type=int, default=7)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "mode", None) and args.command == "synthesize":
        data = _load_json(args.instance)
        if data.get("mode") != args.mode:
            print(f"instance file has mode {data.get('mode')!r}", file=sys.stderr)
            return EXIT_PARSE
    try:
        return args.func(args)
    except MalformedInput as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (InstanceRejected, UnsupportedCase, DomainError) as e:
        print(f"rejected: {e}", file=sys.stderr)
        return EXIT_REJECTED


if __name__ == "__main__":
    sys.exit(main())
