"""Command line front end.

Subcommands:
    build        construct a subdivision and emit its document
    solve        color a subdivision and search it for solution faces
    verify-maps  run the randomized property suites for the numeric maps
    sweep        grid search logging hypergraph connectivity per instance
    replay       re-run a report's recorded config and compare the bytes

Reports are JSON Lines: a config record first, then one record per result.
With ``--out`` the records go to the file and a human summary is printed;
without it the records themselves go to stdout and the summary to stderr.

Exit codes: 0 success, 1 usage error, 2 failed property or replay mismatch,
3 no solution where one is guaranteed (a reproduction bundle is written).

Set ``SPERNER_LAB_LOG`` to a level name (``INFO``, ``DEBUG``, ...) to enable
logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from . import partitions as pt
from .proofmaps import boundary_winding, verify_suites
from .schemes import parse_scheme
from .solver import (
    NoSolutionError,
    SizeVector,
    SweepGrid,
    conjecture_sweep,
    find_solutions,
    instance_colorings,
    tree_shape,
    violation_bundle,
)

LOG = logging.getLogger("sperner_lab")

CONNECTIVITY_NOTE = (
    "connected means: every color is covered and the incidence graph of the"
    " face's color sets is connected"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad arguments; the contract wants 1
    def error(self, message):
        raise UsageError(message)


def _dump(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def _config_record(command: str, params: dict) -> dict:
    return {
        "record": "config",
        "command": command,
        "params": params,
        "connectivity": CONNECTIVITY_NOTE,
        "package": __version__,
        "numpy": np.__version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _int_list(text: str) -> list:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


def _align_tiebreaks(schemes: list, tiebreaks: list | None, n: int) -> list:
    """One tiebreak per scheme.  A single one broadcasts; random entries stay null.

    Named schemes get their tiebreak materialized (ascending when omitted) so
    that a config record pins the exact coloring it produced.
    """
    if not tiebreaks:
        aligned = [None] * len(schemes)
    elif len(tiebreaks) == 1:
        aligned = [list(tiebreaks[0]) for _ in schemes]
    elif len(tiebreaks) == len(schemes):
        aligned = [list(t) for t in tiebreaks]
    else:
        raise UsageError(
            f"{len(tiebreaks)} tiebreaks given for {len(schemes)} schemes"
        )
    out = []
    for name, tb in zip(schemes, aligned):
        if name == "random":
            if tb is not None:
                raise UsageError("random colorings take no tiebreak")
            out.append(None)
        else:
            scheme = parse_scheme(name, n, tuple(tb) if tb else None)
            out.append(list(scheme.tiebreak))
    return out


# ---------------------------------------------------------------------------
# command runners: params dict in, (records, status) out


def run_build(params: dict) -> tuple:
    pc = pt.build(params["n"], params["r"])
    doc = {"record": "complex"}
    doc.update(pt.partition_complex_to_doc(pc))
    summary = {
        "record": "summary",
        "vertices": len(pc.complex.vertices),
        "facets": len(pc.facets),
        "faces": len(pc.complex.faces) - 1,
    }
    return [_config_record("build", params), doc, summary], 0


def run_solve(params: dict) -> tuple:
    pc = pt.build(params["n"], params["r"])
    colorings = instance_colorings(
        pc, params["schemes"], params["tiebreaks"], params["seed"]
    )
    m = SizeVector.coerce(tuple(params["m"]))
    context = {
        "schemes": params["schemes"],
        "tiebreaks": params["tiebreaks"],
        "seed": params["seed"],
    }
    records = [_config_record("solve", params)]
    try:
        reports = find_solutions(
            pc, colorings, m, mode=params["mode"], context=context
        )
    except NoSolutionError as err:
        records.append({"record": "violation", "bundle": err.bundle})
        return records, 3
    full = [rep for rep in reports if rep.union_ok]
    shapes: dict = {}
    for rep in full:
        shape = tree_shape(rep.hypergraph)
        shapes[shape] = shapes.get(shape, 0) + 1
    for rep in reports:
        records.append({"record": "solution", **rep.to_record()})
    records.append(
        {
            "record": "summary",
            "solutions": len(reports),
            "full": len(full),
            "connected_any": any(rep.connected for rep in full),
            "shapes": shapes,
            "minimal": sum(1 for rep in reports if rep.minimal),
        }
    )
    status = 0
    if m.theorem_sized(pc.n) and not full:
        bundle = violation_bundle(pc, colorings, m, context)
        records.append({"record": "violation", "bundle": bundle})
        status = 3
    return records, status


def run_verify(params: dict) -> tuple:
    records = [_config_record("verify-maps", params)]
    suite_records, ok = verify_suites(
        samples=params["samples"],
        seed=params["seed"],
        n_colors=params["n"],
        m=tuple(params["m"]) if params["m"] else None,
    )
    records.extend(suite_records)
    if params["r"] is not None:
        pc = pt.build(3, params["r"])
        colorings = instance_colorings(
            pc, params["schemes"], params["tiebreaks"], params["seed"]
        )
        m = SizeVector.coerce(tuple(params["m"]))
        result = boundary_winding(pc, colorings, m)
        again = boundary_winding(pc, colorings, m, initial_depth=result.depth + 1)
        stable = again.winding == result.winding
        records.append(
            {
                "record": "winding",
                "r": params["r"],
                "winding": result.winding,
                "depth": result.depth,
                "samples": result.samples,
                "stable": stable,
                "pass": stable and result.winding == 1,
            }
        )
        ok = ok and stable and result.winding == 1
    records.append({"record": "summary", "pass": ok})
    return records, 0 if ok else 2


def run_sweep(params: dict, out_path: str | None = None, jobs: int = 1) -> tuple:
    scheme_sets = None
    if params["scheme_sets"]:
        n = params["ns"][0]
        scheme_sets = tuple(
            tuple(parse_scheme(name, n, tuple(tb)) for name, tb in zip(names, tbs))
            for names, tbs in params["scheme_sets"]
        )
    grid = SweepGrid(
        ns=tuple(params["ns"]),
        rs=tuple(params["rs"]),
        coloring_counts=tuple(params["coloring_counts"]),
        seeds=tuple(params["seeds"]),
        m=tuple(params["m"]) if params["m"] else None,
        scheme_sets=scheme_sets,
    )
    header = _config_record("sweep", params)
    try:
        summary = conjecture_sweep(grid, out_path=out_path, jobs=jobs, header=header)
    except NoSolutionError as err:
        return [header] + getattr(err, "records", []), 3
    records = [header] + summary["records"]
    records.append(
        {
            "record": "summary",
            "instances": summary["instances"],
            "ran": summary["ran"],
            "resumed": summary["resumed"],
            "candidates": summary["candidates"],
        }
    )
    return records, 0


def _rerun(command: str, params: dict) -> list:
    """Recompute the record stream for a stored config (no files touched)."""
    if command == "build":
        return run_build(params)[0]
    if command == "solve":
        return run_solve(params)[0]
    if command == "verify-maps":
        return run_verify(params)[0]
    if command == "sweep":
        records, _ = run_sweep(params, out_path=None, jobs=1)
        # the sweep log has no trailing summary record
        return [r for r in records if r.get("record") != "summary"]
    raise UsageError(f"cannot replay command {command!r}")


def _strip_timestamp(record: dict) -> dict:
    if record.get("record") == "config":
        record = {k: v for k, v in record.items() if k != "timestamp"}
    return record


def run_replay(in_path: str, out_path: str | None) -> tuple:
    with open(in_path, "r", encoding="utf-8") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines:
        raise UsageError(f"{in_path} is empty")
    old = [json.loads(line) for line in lines]
    if old[0].get("record") != "config":
        raise UsageError(f"{in_path} does not start with a config record")
    new = _rerun(old[0]["command"], old[0]["params"])
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            for rec in new:
                fh.write(_dump(rec) + "\n")
    want = [_dump(_strip_timestamp(r)) for r in old]
    got = [_dump(_strip_timestamp(r)) for r in new]
    if want == got:
        return ["match"], 0
    detail = f"line counts {len(want)} vs {len(got)}"
    for i, (a, b) in enumerate(zip(want, got)):
        if a != b:
            detail = f"first difference at record {i}"
            break
    return [f"mismatch: {detail}"], 2


# ---------------------------------------------------------------------------
# argument wiring


def _build_parser() -> _Parser:
    parser = _Parser(prog="sperner-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="construct a subdivision")
    b.add_argument("--n", type=int, required=True, help="interval count")
    b.add_argument("--r", type=int, required=True, help="subdivision resolution")
    b.add_argument("--out", help="report path (JSON Lines)")

    s = sub.add_parser("solve", help="search a colored subdivision")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--m", required=True, help="comma-separated size bounds")
    s.add_argument(
        "--scheme",
        action="append",
        required=True,
        help="'longest', 'ranked:2,4', or 'random'; repeat per coloring",
    )
    s.add_argument(
        "--tiebreak",
        action="append",
        help="permutation like 3,1,2,4; repeat per scheme or give one for all",
    )
    s.add_argument("--seed", type=int, default=0, help="seed for random colorings")
    s.add_argument(
        "--mode",
        choices=("all", "facets"),
        default="all",
        help="search every face, or facets plus their minimal subfaces",
    )
    s.add_argument("--out")

    v = sub.add_parser("verify-maps", help="randomized map property suites")
    v.add_argument("--samples", type=int, default=10000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--n", type=int, help="pin the color count")
    v.add_argument("--m", help="pin the size bounds")
    v.add_argument(
        "--r", type=int, help="also run the boundary winding check at this resolution"
    )
    v.add_argument("--scheme", action="append", help="colorings for the winding check")
    v.add_argument("--tiebreak", action="append")
    v.add_argument("--out")

    w = sub.add_parser("sweep", help="connectivity grid search")
    w.add_argument("--n", required=True, help="comma-separated interval counts")
    w.add_argument("--r", required=True, help="comma-separated resolutions")
    w.add_argument(
        "--colorings", default="1,2,3", help="coloring counts for random instances"
    )
    w.add_argument("--seeds", type=int, default=1, help="number of seeds per instance")
    w.add_argument("--seed", type=int, default=0, help="first seed")
    w.add_argument("--m", help="pin one size-bound vector")
    w.add_argument(
        "--scheme",
        action="append",
        help="run this one deterministic scheme set instead of random colorings",
    )
    w.add_argument("--tiebreak", action="append")
    w.add_argument("--jobs", type=int, default=1)
    w.add_argument("--out", help="append-only log; rerunning the same path resumes")

    rp = sub.add_parser("replay", help="re-run a report config and compare")
    rp.add_argument("--in", dest="in_path", required=True, help="existing report")
    rp.add_argument("--out", help="write the regenerated report here")

    return parser


def _params_from_args(args) -> dict:
    if args.command == "build":
        return {"n": args.n, "r": args.r}
    if args.command == "solve":
        tiebreaks = [_int_list(t) for t in args.tiebreak] if args.tiebreak else None
        return {
            "n": args.n,
            "r": args.r,
            "m": _int_list(args.m),
            "schemes": list(args.scheme),
            "tiebreaks": _align_tiebreaks(args.scheme, tiebreaks, args.n),
            "seed": args.seed,
            "mode": args.mode,
        }
    if args.command == "verify-maps":
        params = {
            "samples": args.samples,
            "seed": args.seed,
            "n": args.n,
            "m": _int_list(args.m) if args.m else None,
            "r": args.r,
            "schemes": list(args.scheme) if args.scheme else None,
            "tiebreaks": None,
        }
        if args.r is not None:
            if not args.scheme:
                raise UsageError("the winding check needs --scheme")
            if args.n not in (None, 3):
                raise UsageError("the winding check runs on three colors")
            if params["m"] is None:
                raise UsageError("the winding check needs --m")
            params["n"] = 3
            tiebreaks = (
                [_int_list(t) for t in args.tiebreak] if args.tiebreak else None
            )
            params["tiebreaks"] = _align_tiebreaks(args.scheme, tiebreaks, 3)
        elif args.scheme or args.tiebreak:
            raise UsageError("--scheme/--tiebreak only apply with --r (winding check)")
        return params
    if args.command == "sweep":
        ns = _int_list(args.n)
        scheme_sets = None
        if args.scheme:
            if len(ns) != 1:
                raise UsageError("a scheme sweep pins one interval count")
            if "random" in args.scheme:
                raise UsageError("sweep draws random colorings by default; omit --scheme")
            tiebreaks = (
                [_int_list(t) for t in args.tiebreak] if args.tiebreak else None
            )
            scheme_sets = [
                [list(args.scheme), _align_tiebreaks(args.scheme, tiebreaks, ns[0])]
            ]
        return {
            "ns": ns,
            "rs": _int_list(args.r),
            "coloring_counts": _int_list(args.colorings),
            "seeds": list(range(args.seed, args.seed + args.seeds)),
            "m": _int_list(args.m) if args.m else None,
            "scheme_sets": scheme_sets,
        }
    raise UsageError(f"unknown command {args.command!r}")


def _emit(records: list, out_path: str | None, summary_lines: list) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(_dump(rec) + "\n")
        for line in summary_lines:
            print(line)
    else:
        for rec in records:
            print(_dump(rec))
        for line in summary_lines:
            print(line, file=sys.stderr)


def _summarize(command: str, records: list, status: int) -> list:
    lines = []
    for rec in records:
        kind = rec.get("record")
        if kind == "summary":
            body = {k: v for k, v in rec.items() if k != "record"}
            lines.append(" ".join(f"{k}={v}" for k, v in sorted(body.items())))
        elif kind == "property":
            verdict = "info" if rec["pass"] is None else ("ok" if rec["pass"] else "FAIL")
            lines.append(f"{rec['name']}: {verdict} worst={rec['worst']:.3e}")
        elif kind == "winding":
            verdict = "ok" if rec["pass"] else "FAIL"
            lines.append(
                f"boundary winding: {verdict} value={rec['winding']}"
                f" depth={rec['depth']}"
            )
        elif kind == "violation":
            lines.append("no guaranteed solution found; reproduction bundle written")
    if status == 3 and not any(r.get("record") == "violation" for r in records):
        lines.append("no guaranteed solution found")
    return lines


def main(argv=None) -> int:
    level = os.environ.get("SPERNER_LAB_LOG")
    if level:
        logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO))
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "replay":
            lines, status = run_replay(args.in_path, args.out)
            for line in lines:
                print(line)
            return status
        params = _params_from_args(args)
        LOG.info("%s params=%s", args.command, params)
        if args.command == "sweep":
            records, status = run_sweep(params, out_path=args.out, jobs=args.jobs)
            if args.out:
                # the sweep appended to its own log; print only the summary
                for line in _summarize("sweep", records, status):
                    print(line)
            else:
                _emit(records, None, _summarize("sweep", records, status))
            return status
        runner = {
            "build": run_build,
            "solve": run_solve,
            "verify-maps": run_verify,
        }[args.command]
        records, status = runner(params)
        _emit(records, args.out, _summarize(args.command, records, status))
        return status
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except FileNotFoundError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
