"""Command-line surface: every pipeline artifact reachable as a subcommand.

Exit codes: 0 success, 1 usage or configuration error, 2 data or parse
error, 3 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .cliques import build_graph, clique_stats, report_to_json
from .errors import (
    ConfigError,
    DegeneracyError,
    DimensionMismatchError,
    EmptySampleError,
    GraphTooLargeError,
    IndivProbeError,
    LexiconError,
    MissingPhraseError,
    TableError,
    ZeroNormError,
)
from .lexicon import filter_by_categories, load_lexicon
from .metrics import sig6
from .phrases import QuantityRange, phrase_manifest, write_manifest
from .pipeline import RunConfig, run_pipeline
from .stats import parse_pvalue_csv
from .store import write_table
from .synth import SynthConfig, config_from_json, synth_table

JOBS_ENV = "INDIV_PROBE_JOBS"

_USAGE_ERRORS = (ConfigError, GraphTooLargeError)
_DATA_ERRORS = (
    LexiconError,
    TableError,
    MissingPhraseError,
    EmptySampleError,
    DimensionMismatchError,
    ZeroNormError,
    OSError,
    UnicodeDecodeError,
    json.JSONDecodeError,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the contract wants 1
    def error(self, message):
        raise _UsageError(message)


def _parse_table_arg(value: str) -> tuple[str, Path]:
    model_id, sep, path = value.partition("=")
    if not sep or not model_id or not path:
        raise ConfigError(f"--table expects MODEL_ID=PATH, got {value!r}")
    return model_id, Path(path)


def _parse_multiplier_arg(value: str) -> tuple[str, float]:
    name, sep, raw = value.partition("=")
    if not sep or not name:
        raise ConfigError(f"--multiplier expects CATEGORY=FACTOR, got {value!r}")
    try:
        factor = float(raw)
    except ValueError:
        raise ConfigError(f"--multiplier factor must be a number, got {raw!r}") from None
    return name, factor


def _parse_categories(value: str | None) -> tuple[str, ...] | None:
    if value is None:
        return None
    names = tuple(c.strip() for c in value.split(",") if c.strip())
    if not names:
        raise ConfigError("--categories given but names are empty")
    return names


def _resolve_jobs(value: int | None) -> int:
    if value is not None:
        return value
    raw = os.environ.get(JOBS_ENV)
    if raw is None:
        return 1
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{JOBS_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="indiv-probe",
        description=(
            "Measure how embedding models distinguish quantities of objects: "
            "distance heatmaps, per-noun individuation values, class "
            "significance matrices, and equivalence-graph cliques."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "manifest", help="write the phrase list an embedding provider must cover"
    )
    p.add_argument("--lexicon", required=True, type=Path, help="TSV noun lexicon")
    p.add_argument("--quantities", default="2..11", help="range LO..HI (default 2..11)")
    p.add_argument("--categories", help="comma-separated category filter")
    p.add_argument("--out", required=True, type=Path, help="manifest file to write")
    p.set_defaults(func=_cmd_manifest)

    p = sub.add_parser("analyze", help="run the full measurement pipeline")
    p.add_argument("--lexicon", required=True, type=Path, help="TSV noun lexicon")
    p.add_argument(
        "--table",
        action="append",
        required=True,
        metavar="MODEL_ID=PATH",
        help="embedding table (JSON Lines); repeatable for multi-model runs",
    )
    p.add_argument("--categories", help="comma-separated category filter")
    p.add_argument("--quantities", default="2..11", help="range LO..HI (default 2..11)")
    p.add_argument("--proxy-T", dest="horizon", type=int, default=10,
                   help="proxy horizon T (default 10)")
    p.add_argument("--alpha", type=float, default=0.05,
                   help="significance threshold (default 0.05)")
    p.add_argument("--test", choices=("mannwhitney", "welch"), default="mannwhitney")
    p.add_argument("--sum-upper", choices=("inclusive", "exclusive"),
                   default="inclusive",
                   help="proxy sum ends at T (inclusive) or T-1 (exclusive)")
    p.add_argument("--anchor", type=int, default=2,
                   help="row quantity for the inversion count (default 2)")
    p.add_argument("--out", required=True, type=Path, help="output directory")
    p.add_argument("--jobs", type=int, default=None,
                   help=f"worker threads (default ${JOBS_ENV} or 1)")
    p.add_argument("--backend", choices=("auto", "numba", "numpy"), default=None,
                   help="kernel backend override (default $INDIV_PROBE_BACKEND)")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser(
        "synth", help="generate a synthetic table with known behavior"
    )
    p.add_argument("--lexicon", required=True, type=Path, help="TSV noun lexicon")
    p.add_argument("--out", required=True, type=Path, help="table file to write")
    p.add_argument("--config", type=Path,
                   help="JSON config; explicit flags below override its values")
    p.add_argument("--beta", type=float, help="angular rate (default 0.5)")
    p.add_argument("--dimension", type=int, help="vector size (default 16)")
    p.add_argument("--noise-sigma", type=float, help="Gaussian noise scale (default 0)")
    p.add_argument("--seed", type=int, help="generator seed (default 0)")
    p.add_argument("--quantities", help="range LO..HI (default 2..11)")
    p.add_argument(
        "--multiplier",
        action="append",
        default=[],
        metavar="CATEGORY=FACTOR",
        help="per-category scaling of beta; repeatable, replaces the config map",
    )
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser(
        "cliques", help="re-run graph analysis on a saved p-value matrix"
    )
    p.add_argument("--pvalues", required=True, type=Path, help="pvalues.csv from analyze")
    p.add_argument("--alpha", type=float, default=0.05,
                   help="significance threshold (default 0.05)")
    p.add_argument("--out", type=Path, help="JSON file (default: stdout)")
    p.set_defaults(func=_cmd_cliques)

    p = sub.add_parser(
        "compare", help="side-by-side table over a multi-model analyze run"
    )
    p.add_argument("--run", required=True, type=Path, help="analyze output directory")
    p.add_argument("--out", type=Path, help="CSV file (default: stdout)")
    p.set_defaults(func=_cmd_compare)

    return parser


def _cmd_manifest(args) -> int:
    lex = load_lexicon(args.lexicon)
    cats = _parse_categories(args.categories)
    if cats is not None:
        lex = filter_by_categories(lex, cats)
    manifest = phrase_manifest(lex, QuantityRange.parse(args.quantities))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_manifest(manifest, args.out)
    print(
        f"wrote {args.out}: {len(manifest.phrases)} phrases "
        f"({manifest.record_count} noun-quantity records)"
    )
    return 0


def _cmd_analyze(args) -> int:
    cfg = RunConfig(
        lexicon_path=args.lexicon,
        tables=tuple(_parse_table_arg(t) for t in args.table),
        output_dir=args.out,
        categories=_parse_categories(args.categories),
        quantities=QuantityRange.parse(args.quantities),
        horizon=args.horizon,
        alpha=args.alpha,
        test=args.test,
        sum_upper=args.sum_upper,
        anchor=args.anchor,
        jobs=_resolve_jobs(args.jobs),
        backend=args.backend,
    )
    report = run_pipeline(cfg)
    for m in report.models:
        print(
            f"{m.model_id}: {m.nouns_covered}/{m.nouns_total} nouns, "
            f"{len(m.classes)} classes, {m.cliques.count} cliques "
            f"(avg size {sig6(m.cliques.avg_size)}), "
            f"avg class std {sig6(m.average_class_std)}, "
            f"{m.inversions} inversions -> {m.directory}"
        )
    return 0


def _cmd_synth(args) -> int:
    if args.config is not None:
        base = config_from_json(args.config.read_text(encoding="utf-8"))
    else:
        base = SynthConfig(
            beta=0.5, dimension=16, noise_sigma=0.0, seed=0,
            quantities=QuantityRange(2, 11),
        )
    multipliers: dict[str, float] = {}
    for raw in args.multiplier:
        name, factor = _parse_multiplier_arg(raw)
        if name in multipliers:
            raise ConfigError(f"duplicate --multiplier for {name!r}")
        multipliers[name] = factor
    cfg = SynthConfig(
        beta=args.beta if args.beta is not None else base.beta,
        dimension=args.dimension if args.dimension is not None else base.dimension,
        noise_sigma=(
            args.noise_sigma if args.noise_sigma is not None else base.noise_sigma
        ),
        seed=args.seed if args.seed is not None else base.seed,
        quantities=(
            QuantityRange.parse(args.quantities)
            if args.quantities is not None
            else base.quantities
        ),
        category_multipliers=multipliers or base.category_multipliers,
    )
    lex = load_lexicon(args.lexicon)
    table = synth_table(cfg, lex)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_table(table, args.out)
    print(f"wrote {args.out}: {len(table)} phrases, dimension {table.dimension}")
    return 0


def _cmd_cliques(args) -> int:
    with open(args.pvalues, encoding="utf-8", newline="") as fh:
        matrix = parse_pvalue_csv(fh)
    report = clique_stats(build_graph(matrix, alpha=args.alpha))
    text = report_to_json(report)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text, encoding="utf-8")
        print(f"wrote {args.out}: {report.count} cliques")
    return 0


def _cmd_compare(args) -> int:
    summaries = sorted(args.run.glob("*/summary.json"))
    if not summaries:
        raise ConfigError(f"no summary.json found under {args.run}")
    rows = []
    for path in summaries:
        s = json.loads(path.read_text(encoding="utf-8"))
        rows.append(
            [
                s["model_id"],
                len(s["classes"]),
                s["cliques"]["count"],
                sig6(s["cliques"]["avg_size"]),
                sig6(s["average_class_std"]),
                s["inversions"]["count"],
            ]
        )
    rows.sort(key=lambda r: r[0])
    out = sys.stdout if args.out is None else open(args.out, "w", encoding="utf-8", newline="")
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(
            ["model_id", "classes", "cliques", "avg_clique_size",
             "avg_class_std", "inversions"]
        )
        w.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
            print(f"wrote {args.out}: {len(rows)} models")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except _USAGE_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except _DATA_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except DegeneracyError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except IndivProbeError as e:  # anything new defaults to a data problem
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
