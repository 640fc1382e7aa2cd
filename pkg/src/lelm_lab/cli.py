"""Command-line front end.

Usage::

    lelm-lab partition --n 2 --apparatus hadamard --stats boson --format json
    lelm-lab two-copy --n 2 --app1 hadamard --app2 hadamard+diagonal:all
    lelm-lab verify --n 1 --stats boson --trials 500 --seed 42
    lelm-lab signatures --n 1 --apparatus hadamard --format csv
    lelm-lab search --n 1 --restarts 4 --budget 500 --seed-hadamard --save-best best.json
    lelm-lab matrix --n 1 --apparatus uopt4

Exit codes: 0 success, 1 invariant or bound violation, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

import numpy as np

from .apparatus import (
    Apparatus,
    ApparatusFileError,
    apparatus_to_dict,
    compose,
    diagonal_rotation,
    hadamard_lr,
    load_apparatus,
    projective_separate,
    save_apparatus,
    uopt_n1,
)
from .bellcore import MAX_N, BellLabel, Statistics
from .detection import DEFAULT_EPS, signature_table
from .partition import (
    BoundMode,
    Partition,
    class_signature_report,
    partition_classes,
    two_copy_partition,
    verify_bound,
)
from .search import CampaignConfig, CampaignReport, bound_campaign, hill_climb

log = logging.getLogger("lelm_lab")

CLI_MAX_N = 5
BUILTINS = ("hadamard", "separate-projective", "uopt4", "identity")


class UsageError(Exception):
    pass


class InvariantError(Exception):
    pass


def resolve_apparatus(spec: str, n: int, max_n: int = MAX_N, tol: float = 1e-9) -> Apparatus:
    """Turn ``hadamard+diagonal:all``-style text, or a file path, into an apparatus.

    Factors joined by ``+`` multiply left to right, so the rightmost factor
    acts on the input first.
    """
    if os.path.exists(spec):
        app = load_apparatus(spec, tol, max_n)
        if app.n != n:
            raise UsageError(f"{spec} holds an n={app.n} apparatus but --n is {n}")
        return app
    result = None
    for part in spec.split("+"):
        part = part.strip()
        if part == "hadamard":
            factor = hadamard_lr(n)
        elif part in ("separate-projective", "identity"):
            factor = projective_separate(n)
        elif part == "uopt4":
            if n != 1:
                raise UsageError("uopt4 is only defined for n=1")
            factor = uopt_n1()
        elif part.startswith("diagonal:"):
            which = part.split(":", 1)[1]
            if which == "all":
                subset = range(n)
            else:
                try:
                    subset = [int(v) for v in which.split(",") if v]
                except ValueError as exc:
                    raise UsageError(f"bad variable list in {part!r}") from exc
            try:
                factor = diagonal_rotation(n, subset)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        else:
            raise UsageError(
                f"unknown apparatus {part!r}; expected a file path, one of "
                f"{', '.join(BUILTINS)}, or diagonal:<vars|all>"
            )
        result = factor if result is None else compose(result, factor)
    if result is None:
        raise UsageError("empty apparatus specifier")
    return result


def label_text(label: BellLabel, fmt: str) -> str:
    return label.unicode() if fmt == "text" else label.ascii()


def outcome_list(outcomes) -> list[list[int]]:
    return [[o.i, o.j] for o in sorted(outcomes)]


def partition_dict(p: Partition) -> dict:
    return {
        "classCount": p.class_count,
        "complete": p.is_complete(),
        "classes": [[b.ascii() for b in c] for c in p.classes],
    }


def emit(doc, fmt: str, text: str, rows: list[list] | None = None, header=None) -> None:
    out = sys.stdout
    if fmt == "json":
        out.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=True) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write(text if text.endswith("\n") else text + "\n")


def partition_rows(p: Partition) -> list[list]:
    return [[k + 1, b.ascii()] for k, c in enumerate(p.classes) for b in c]


def cmd_partition(args) -> int:
    app = resolve_apparatus(args.apparatus, args.n, args.max_n, args.tolerance)
    table = signature_table(app, args.stats, args.tolerance)
    _check_completeness(table)
    p = partition_classes(table)
    report = class_signature_report(table, p)
    bound = verify_bound(p, args.n)
    doc = {
        "n": args.n,
        "stats": args.stats.value,
        "apparatus": args.apparatus,
        **partition_dict(p),
        "bound": bound.to_dict(),
        "classOutcomes": [
            {"members": [b.ascii() for b in c.members],
             "owned": outcome_list(c.owned), "shared": outcome_list(c.shared)}
            for c in report
        ],
    }
    lines = [f"n={args.n}  stats={args.stats.value}  apparatus={args.apparatus}",
             f"classCount: {p.class_count}  (one-copy bound {bound.bound})"]
    for k, c in enumerate(report, 1):
        members = ", ".join(label_text(b, "text") for b in c.members)
        outs = " ".join(map(str, sorted(c.owned)))
        lines.append(f"  class {k}: {{{members}}}  outcomes: {outs}")
    emit(doc, args.format, "\n".join(lines), partition_rows(p), ["class", "label"])
    if not bound.passed:
        raise InvariantError(f"class count {p.class_count} exceeds bound {bound.bound}")
    return 0


def cmd_two_copy(args) -> int:
    app1 = resolve_apparatus(args.app1, args.n, args.max_n, args.tolerance)
    app2 = resolve_apparatus(args.app2, args.n, args.max_n, args.tolerance)
    p = two_copy_partition(app1, app2, args.stats, args.tolerance)
    doc = {"n": args.n, "stats": args.stats.value, "app1": args.app1, "app2": args.app2,
           **partition_dict(p)}
    lines = [f"n={args.n}  stats={args.stats.value}  app1={args.app1}  app2={args.app2}",
             f"classCount: {p.class_count} of {4**args.n}  complete={str(p.is_complete()).lower()}"]
    for k, c in enumerate(p.classes, 1):
        lines.append(f"  class {k}: {{{', '.join(b.unicode() for b in c)}}}")
    emit(doc, args.format, "\n".join(lines), partition_rows(p), ["class", "label"])
    return 0


def _campaign_output(report: CampaignReport, args, title: str) -> None:
    doc = report.to_dict()
    hist = ", ".join(f"{k}: {v}" for k, v in sorted(report.histogram.items()))
    lines = [
        f"{title}: n={args.n}  stats={args.stats.value}  mode={report.config.mode.value}  "
        f"trials={report.config.trials}  seed={report.config.seed}",
        f"histogram (classCount: trials): {hist}",
        f"maxObserved: {report.max_observed}  bound: {report.bound}",
        f"violations: {len(report.violations)}",
    ]
    rows = [[k, v] for k, v in sorted(report.histogram.items())]
    emit(doc, args.format, "\n".join(lines), rows, ["classCount", "trials"])


def cmd_verify(args) -> int:
    cfg = CampaignConfig(args.n, args.stats, args.trials, args.seed, args.mode)
    report = bound_campaign(cfg)
    _campaign_output(report, args, "verify")
    return 1 if report.violations else 0


def cmd_search(args) -> int:
    cfg = CampaignConfig(args.n, args.stats, args.restarts, args.seed, args.mode)
    starts = []
    if args.seed_hadamard:
        if cfg.mode is BoundMode.SEPARATE_CHANNEL:
            raise UsageError("--seed-hadamard mixes channels; not valid with --mode separate")
        starts.append(hadamard_lr(args.n))
    for spec in args.start or []:
        starts.append(resolve_apparatus(spec, args.n, args.max_n, args.tolerance))
    report = hill_climb(cfg, args.budget, args.step_scale, starts)
    if args.save_best:
        try:
            save_apparatus(report.best_apparatus, args.save_best)
        except OSError as exc:
            raise UsageError(f"cannot write {args.save_best}: {exc}") from exc
    _campaign_output(report, args, "search")
    return 1 if report.violations else 0


def _check_completeness(table) -> None:
    sums = table.probabilities.sum(axis=1)
    worst = float(np.max(np.abs(sums - 1.0)))
    if worst > 1e-9:
        raise InvariantError(f"outcome probabilities sum to 1 only within {worst:.3g}")


def cmd_signatures(args) -> int:
    app = resolve_apparatus(args.apparatus, args.n, args.max_n, args.tolerance)
    table = signature_table(app, args.stats, args.tolerance)
    _check_completeness(table)
    rows = [[B.ascii(), o.i, o.j, amp.real, amp.imag, p] for B, o, amp, p in table.rows()]
    doc = {
        "n": args.n,
        "stats": args.stats.value,
        "apparatus": args.apparatus,
        "tolerance": args.tolerance,
        "rows": [{"label": r[0], "i": r[1], "j": r[2], "re": r[3], "im": r[4],
                  "probability": r[5]} for r in rows],
    }
    lines = [f"n={args.n}  stats={args.stats.value}  apparatus={args.apparatus}"]
    for B in table.labels:
        outs = " ".join(map(str, sorted(table.support(B))))
        lines.append(f"  {B.unicode():<{4 * args.n + 2}} {outs}")
    emit(doc, args.format, "\n".join(lines), rows,
         ["label", "i", "j", "re", "im", "probability"])
    return 0


def cmd_matrix(args) -> int:
    app = resolve_apparatus(args.apparatus, args.n, args.max_n, args.tolerance)
    rows = [[i + 1, m + 1, z.real, z.imag]
            for i, row in enumerate(app.U) for m, z in enumerate(row)]
    with np.printoptions(precision=4, suppress=True, linewidth=160):
        text = f"n={app.n}  apparatus={args.apparatus}\n{app.U}"
    emit(apparatus_to_dict(app), args.format, text, rows, ["i", "m", "re", "im"])
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=1, help="number of two-state variables")
    common.add_argument("--stats", type=Statistics, choices=list(Statistics),
                        default=Statistics.BOSON, metavar="{boson,fermion}")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tolerance", type=float, default=DEFAULT_EPS,
                        help="amplitude magnitude treated as nonzero")
    common.add_argument("--allow-large", action="store_true",
                        help=f"permit n > {CLI_MAX_N} (tables grow as 16^n)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="lelm-lab",
        description="Hyper-Bell state distinguishability for linear-optics style apparatuses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", parents=[common], help="distinguishable classes")
    p.add_argument("--apparatus", default="hadamard")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("two-copy", parents=[common], help="classes using two copies")
    p.add_argument("--app1", default="hadamard")
    p.add_argument("--app2", default="hadamard+diagonal:all")
    p.set_defaults(func=cmd_two_copy)

    p = sub.add_parser("verify", parents=[common], help="fuzz the class bound with Haar samples")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--mode", choices=("one-copy", "separate"), default="one-copy")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("signatures", parents=[common], help="full detection amplitude table")
    p.add_argument("--apparatus", default="hadamard")
    p.set_defaults(func=cmd_signatures)

    p = sub.add_parser("search", parents=[common], help="hill climb on class count")
    p.add_argument("--budget", type=int, default=500)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--step-scale", type=float, default=0.3)
    p.add_argument("--mode", choices=("one-copy", "separate"), default="one-copy")
    p.add_argument("--seed-hadamard", action="store_true",
                   help="use the L/R Hadamard apparatus as the first restart")
    p.add_argument("--start", action="append", metavar="APPARATUS",
                   help="explicit start apparatus (repeatable)")
    p.add_argument("--save-best", metavar="PATH")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("matrix", parents=[common], help="print an apparatus unitary")
    p.add_argument("--apparatus", default="hadamard")
    p.set_defaults(func=cmd_matrix)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    args.max_n = MAX_N if args.allow_large else CLI_MAX_N
    if not 1 <= args.n <= args.max_n:
        parser.error(f"--n must lie in 1..{args.max_n}"
                     + ("" if args.allow_large else " (use --allow-large for more)"))
    if args.tolerance <= 0:
        parser.error("--tolerance must be positive")
    if getattr(args, "mode", None) is not None:
        args.mode = BoundMode.SEPARATE_CHANNEL if args.mode == "separate" else BoundMode.ONE_COPY
    for name in ("trials", "restarts", "budget"):
        if getattr(args, name, 1) < 1:
            parser.error(f"--{name} must be >= 1")
    if getattr(args, "step_scale", 0.0) < 0:
        parser.error("--step-scale must be >= 0")
    try:
        return args.func(args)
    except (UsageError, ApparatusFileError, OSError) as exc:
        print(f"lelm-lab: error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"lelm-lab: invariant failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
