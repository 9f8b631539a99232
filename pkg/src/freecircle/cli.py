"""Command-line front end.

Subcommands:

* ``analyze n m l --schedule "r=4:a->1"`` -- run one schedule to the stable
  page; print the Betti table, the stable-page support grid, the ring
  presentation sketch and the index report.  Exit 2 when the schedule is not
  free-consistent (the witness bidegree is printed).
* ``enumerate n m l`` -- list every free-consistent schedule, grouped by
  Betti table, with matched classification cases.
* ``verify --max L`` -- reconcile every signature up to L against the case
  tables and the product-space anchor.  Exit 3 on an engine-side mismatch.
* ``index n m l --schedule ...`` -- the index invariants and the
  non-existence statements for equivariant maps.

All behavior is controlled by flags; no environment variables are read.
Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .bu import index_report, render_index_report
from .fiber import SpaceSignature
from .oracle import load_annotations
from .pages import EngineError, certified_band
from .presentation import (
    betti_table,
    presentation_sketch,
    render_presentation,
    sketch_to_dict,
)
from .schedules import (
    check_freeness,
    enumerate_schedules,
    parse_schedule,
    render_schedule,
    run_schedule,
)
from .sweep import classify_schedule, run_verify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_FREE = 2
EXIT_MISMATCH = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common(p: _Parser, schedule_required: bool = False) -> None:
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("l", type=int)
    p.add_argument(
        "--schedule",
        default=None,
        required=schedule_required,
        help="differential schedule, e.g. \"r=4:a->1;r=2:c->ab\"",
    )
    p.add_argument("--window", type=int, default=None, help="even column bound")
    p.add_argument(
        "--format",
        choices=("text", "json", "markdown"),
        default="text",
        dest="fmt",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="freecircle")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run one schedule to the stable page")
    _add_common(p)

    p = sub.add_parser("enumerate", help="list free-consistent schedules")
    _add_common(p)

    p = sub.add_parser("verify", help="sweep signatures against the case tables")
    p.add_argument("--max", type=int, default=8, dest="max_l")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--annotations", default=None, help="annotation file path")
    p.add_argument("--window", type=int, default=None)
    p.add_argument(
        "--format", choices=("text", "json", "markdown"), default="text", dest="fmt"
    )

    p = sub.add_parser("index", help="index invariants of one schedule")
    _add_common(p, schedule_required=True)
    return parser


def _signature(args) -> SpaceSignature:
    return SpaceSignature(args.n, args.m, args.l)


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _grid_lines(stable, band) -> list[str]:
    """Stable-page support, one line per fiber degree, columns <= band."""
    degrees = sorted({q for (_, q) in stable.basis})
    cols = list(range(0, band + 1, 2))
    widths = [len(str(p)) for p in cols]
    lines = []
    for q in degrees:
        cells = []
        for p, w in zip(cols, widths):
            d = stable.dim(p, q)
            cells.append(("." if d == 0 else str(d)).rjust(w))
        lines.append(f"q={q:>2} | " + " ".join(cells))
    header = "  p    " + " ".join(str(p) for p in cols)
    return [f"stable-page support (columns 0..{band}, even):", header] + lines[::-1]


def cmd_analyze(args) -> int:
    sig = _signature(args)
    schedule = parse_schedule(sig, args.schedule or "")
    run = run_schedule(sig, schedule, args.window)
    verdict = check_freeness(run.stable)
    band = certified_band(sig, run.window)
    if not verdict.free_consistent:
        payload = {
            "schema": "freecircle.analyze/1",
            "signature": [sig.n, sig.m, sig.l],
            "schedule": render_schedule(sig, schedule),
            "free_consistent": False,
            "witness": list(verdict.witness),
            "top_nonzero_total_degree": verdict.top_nonzero_total_degree,
        }
        if args.fmt == "json":
            _emit_json(payload)
        else:
            print(f"signature ({sig.n},{sig.m},{sig.l})")
            print(f"schedule: {render_schedule(sig, schedule) or '(empty)'}")
            print(
                "NOT free-consistent: stable page survives at bidegree "
                f"(p,q)={verdict.witness} (total degree "
                f"{verdict.witness[0] + verdict.witness[1]} >= {sig.top_degree})"
            )
        return EXIT_NOT_FREE

    betti = betti_table(run.stable)
    sketch = presentation_sketch(run.stable)
    report = index_report(run)
    payload = {
        "schema": "freecircle.analyze/1",
        "signature": [sig.n, sig.m, sig.l],
        "schedule": render_schedule(sig, schedule),
        "free_consistent": True,
        "betti": {str(k): v for k, v in betti.items()},
        "stable_support": {
            f"{p},{q}": len(vs)
            for (p, q), vs in sorted(run.stable.basis.items())
            if vs and p <= band
        },
        "presentation": sketch_to_dict(sketch),
        "index": report.to_dict(),
    }
    if args.fmt == "json":
        _emit_json(payload)
        return EXIT_OK
    if args.fmt == "markdown":
        print(f"## analyze ({sig.n},{sig.m},{sig.l})")
        print(f"schedule: `{render_schedule(sig, schedule)}`")
        print("")
        print("| k | dim H^k |")
        print("|---|---------|")
        for k, v in betti.items():
            print(f"| {k} | {v} |")
        print("")
        print("```")
        for line in _grid_lines(run.stable, band):
            print(line)
        print("```")
        print("")
        print(f"presentation: `{render_presentation(sketch)}`")
        print("")
        for line in render_index_report(report).splitlines():
            print(f"- {line}")
        return EXIT_OK
    print(f"signature ({sig.n},{sig.m},{sig.l})")
    print(f"schedule: {render_schedule(sig, schedule)}")
    print("free-consistent: yes")
    print("Betti table H^k(X/G;Q):")
    print("  " + " ".join(f"{k}:{v}" for k, v in betti.items()))
    for line in _grid_lines(run.stable, band):
        print(line)
    print("presentation sketch:")
    print("  " + render_presentation(sketch))
    print("index report:")
    for line in render_index_report(report).splitlines():
        print(f"  {line}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    sig = _signature(args)
    result = enumerate_schedules(sig, args.window)
    annotations = load_annotations()
    classes = []
    for betti_key, recs in result.betti_classes():
        betti = dict(betti_key)
        cls = classify_schedule(sig, betti, annotations)
        classes.append(
            {
                "betti": {str(k): v for k, v in betti_key},
                "status": cls["status"],
                "labels": cls["labels"],
                "mismatch_degrees": cls.get("mismatch_degrees", []),
                "schedules": [
                    {
                        "schedule": render_schedule(sig, rec.schedule),
                        "char_class_exponent": rec.char_exponent,
                        "volovikov_index": rec.volovikov,
                    }
                    for rec in recs
                ],
            }
        )
    payload = {
        "schema": "freecircle.enumerate/1",
        "signature": [sig.n, sig.m, sig.l],
        "free_schedules": len(result.records),
        "rejected_branches": result.rejected,
        "inconsistent_branches": result.inconsistent,
        "no_admissible_pattern": result.no_admissible,
        "classes": classes,
    }
    if args.fmt == "json":
        _emit_json(payload)
        return EXIT_OK
    md = args.fmt == "markdown"
    if md:
        print(f"## enumerate ({sig.n},{sig.m},{sig.l})")
    else:
        print(f"signature ({sig.n},{sig.m},{sig.l})")
    if result.no_admissible:
        print("no admissible pattern: every differential is parity-blocked;")
        print("no free action pattern exists in this model")
    print(
        f"free-consistent schedules: {len(result.records)} "
        f"(rejected: {result.rejected} by freeness, "
        f"{result.inconsistent} by the Leibniz/t-linearity obstruction)"
    )
    for i, cls in enumerate(classes, 1):
        betti = ", ".join(f"{k}:{v}" for k, v in sorted(
            (int(k), v) for k, v in cls["betti"].items()
        ))
        tag = cls["status"]
        if cls["labels"]:
            tag += " " + ",".join(cls["labels"])
        head = f"class {i}: Betti {{{betti}}} [{tag}]"
        print(f"### {head}" if md else head)
        for sch in cls["schedules"]:
            line = (
                f"{sch['schedule']}   s={sch['char_class_exponent']} "
                f"i={sch['volovikov_index']}"
            )
            print(f"- `{line}`" if md else f"  {line}")
    return EXIT_OK


def cmd_verify(args) -> int:
    annotations = load_annotations(args.annotations)
    report = run_verify(args.max_l, jobs=args.jobs, annotations=annotations,
                        window=args.window)
    if args.fmt == "json":
        _emit_json(report)
    elif args.fmt == "markdown":
        t = report["totals"]
        print(f"## verify sweep (1 <= n <= m <= l <= {report['max']})")
        print("")
        print("| quantity | value |")
        print("|----------|-------|")
        for key in (
            "signatures", "free_schedules", "matches", "paper_side",
            "uncovered_out_of_regime", "engine_side", "kunneth_checked",
            "kunneth_mismatches",
        ):
            print(f"| {key} | {t[key]} |")
        print(f"| i_list_counterexamples | {len(t['i_list_counterexamples'])} |")
        print(f"| r_list_counterexamples | {len(t['r_list_counterexamples'])} |")
        print("")
        print(
            "engine-side clean: "
            + ("**yes**" if report["engine_side_clean"] else "**NO**")
        )
    else:
        t = report["totals"]
        print(f"verify sweep over 1 <= n <= m <= l <= {report['max']}")
        print(
            f"signatures: {t['signatures']}; free schedules: "
            f"{t['free_schedules']}"
        )
        print(
            f"matches: {t['matches']}; paper-side (annotated displays): "
            f"{t['paper_side']}; uncovered outside clean regime: "
            f"{t['uncovered_out_of_regime']}; engine-side: {t['engine_side']}"
        )
        print(
            f"product-space anchor: {t['kunneth_checked']} checked, "
            f"{t['kunneth_mismatches']} mismatches"
        )
        print(
            f"index-list counterexamples: i-list {len(t['i_list_counterexamples'])}, "
            f"r-list {len(t['r_list_counterexamples'])}"
        )
        for ce in t["i_list_counterexamples"]:
            print(
                f"  i(X)={ce['volovikov_index']} not in classical list for "
                f"{tuple(ce['signature'])} {ce['schedule']}"
            )
        for ce in t["r_list_counterexamples"]:
            print(
                f"  2s+1={ce['r_of_s']} not in classical list for "
                f"{tuple(ce['signature'])} {ce['schedule']}"
            )
        print("engine-side clean: " + ("yes" if report["engine_side_clean"] else "NO"))
    return EXIT_OK if report["engine_side_clean"] else EXIT_MISMATCH


def cmd_index(args) -> int:
    sig = _signature(args)
    schedule = parse_schedule(sig, args.schedule)
    run = run_schedule(sig, schedule, args.window)
    verdict = check_freeness(run.stable)
    if not verdict.free_consistent:
        print(
            f"schedule is not free-consistent (witness bidegree {verdict.witness}); "
            "index invariants require a free-consistent stable page",
            file=sys.stderr,
        )
        return EXIT_NOT_FREE
    report = index_report(run)
    if args.fmt == "json":
        _emit_json({"schema": "freecircle.index/1", **report.to_dict()})
    elif args.fmt == "markdown":
        print(f"## index report ({sig.n},{sig.m},{sig.l})")
        for line in render_index_report(report).splitlines():
            print(f"- {line}")
    else:
        print(f"signature ({sig.n},{sig.m},{sig.l})")
        print(f"schedule: {render_schedule(sig, schedule)}")
        print(render_index_report(report))
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "enumerate":
            return cmd_enumerate(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "index":
            return cmd_index(args)
    except (ValueError, EngineError) as exc:
        print(f"freecircle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
