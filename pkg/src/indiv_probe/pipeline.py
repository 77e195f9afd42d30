"""End-to-end orchestration: lexicon and embedding tables in, per-model
artifact directories out.

Per model the pipeline emits, under `<output_dir>/<model_id>/`:

* heatmap.csv    averaged, min-max normalized quantity distance matrix
* proxies.csv    per-noun individuation values, grouped by class
* pvalues.csv    pairwise class significance matrix, least individuated
                 class (highest mean) in the first row
* cliques.json   maximal cliques of the p > alpha equivalence graph
* summary.json   config echo, coverage and exclusion counts, class
                 means/stds, clique stats, inversion count, timestamp

Determinism contract: identical inputs and config give byte-identical
CSV/JSON artifacts for any worker count. Per-noun work is chunked in
fixed sizes and reduced in chunk order, so the floating-point result
does not depend on scheduling; `generated_at` in summary.json is the
single non-reproducible field.
"""

from __future__ import annotations

import json
import shutil
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .cliques import CliqueReport, build_graph, clique_stats, report_to_json
from .errors import ConfigError, DegeneracyError
from .kernels import consecutive_profile, distance_stack
from .lexicon import Lexicon, NounEntry, filter_by_categories, load_lexicon
from .metrics import (
    DEGENERATE_SIM_TOL,
    ClassProxy,
    ProxyScore,
    QuantityMatrix,
    class_proxy,
    average_class_std,
    inversion_count,
    matrix_to_csv,
    minmax_normalize,
    scores_to_csv,
    sig6,
)
from .phrases import PhraseManifest, QuantityRange, phrase_manifest, render_phrase, write_manifest
from .stats import PValueMatrix, pvalue_matrix, pvalues_to_csv
from .store import EmbeddingTable, load_table, validate_coverage

__all__ = [
    "CHUNK_NOUNS",
    "RunConfig",
    "ModelReport",
    "RunReport",
    "run_pipeline",
    "emit_manifest",
]

# fixed chunk size: reduction order must not depend on --jobs
CHUNK_NOUNS = 256

_TESTS = ("mannwhitney", "welch")
_SUM_MODES = ("inclusive", "exclusive")


@dataclass(frozen=True)
class RunConfig:
    """Everything a pipeline run depends on; validated up front."""

    lexicon_path: Path
    tables: tuple[tuple[str, Path], ...]
    output_dir: Path
    categories: tuple[str, ...] | None = None
    quantities: QuantityRange = QuantityRange(2, 11)
    horizon: int = 10
    alpha: float = 0.05
    test: str = "mannwhitney"
    sum_upper: str = "inclusive"
    anchor: int = 2
    jobs: int = 1
    backend: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "lexicon_path", Path(self.lexicon_path))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        object.__setattr__(
            self, "tables", tuple((str(m), Path(p)) for m, p in self.tables)
        )
        if self.categories is not None:
            object.__setattr__(self, "categories", tuple(self.categories))
        if self.horizon < 4:
            raise ConfigError(f"proxy horizon must be at least 4, got {self.horizon}")
        if self.sum_upper not in _SUM_MODES:
            raise ConfigError(
                f"sum_upper must be one of {_SUM_MODES}, got {self.sum_upper!r}"
            )
        if self.test not in _TESTS:
            raise ConfigError(f"test must be one of {_TESTS}, got {self.test!r}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.quantities.lo != 2:
            raise ConfigError(
                "quantity range must start at 2 (the proxy denominator "
                f"compares quantities 2 and 3), got {self.quantities}"
            )
        needed = self.horizon + 1 if self.sum_upper == "inclusive" else self.horizon
        if self.quantities.hi < needed:
            raise ConfigError(
                f"quantity range must reach {needed} for horizon {self.horizon} "
                f"({self.sum_upper}), got {self.quantities}"
            )
        if not self.quantities.lo <= self.anchor <= self.quantities.hi - 2:
            raise ConfigError(
                f"anchor must leave at least two larger quantities in "
                f"{self.quantities}, got {self.anchor}"
            )
        if self.jobs < 1:
            raise ConfigError(f"jobs must be at least 1, got {self.jobs}")
        seen: set[str] = set()
        for model_id, _ in self.tables:
            safe = _safe_name(model_id)
            if not safe:
                raise ConfigError(f"model id {model_id!r} is empty after sanitizing")
            if safe in seen:
                raise ConfigError(
                    f"model ids collide on output directory name {safe!r}"
                )
            seen.add(safe)


@dataclass(frozen=True)
class ModelReport:
    """Computed artifacts for one embedding table."""

    model_id: str
    table_model_id: str
    dimension: int
    heatmap: QuantityMatrix
    classes: tuple[ClassProxy, ...]
    pvalues: PValueMatrix
    cliques: CliqueReport
    average_class_std: float
    inversions: int
    nouns_total: int
    nouns_covered: int
    excluded_coverage: int
    excluded_degenerate: int
    directory: Path


@dataclass(frozen=True)
class RunReport:
    config: RunConfig
    models: tuple[ModelReport, ...]
    generated_at: str


def _safe_name(model_id: str) -> str:
    return "".join(c if c.isalnum() or c in "._-" else "_" for c in model_id).strip(".")


def _load_filtered_lexicon(cfg: RunConfig) -> Lexicon:
    lex = load_lexicon(cfg.lexicon_path)
    if cfg.categories is not None:
        lex = filter_by_categories(lex, cfg.categories)
    return lex


def emit_manifest(cfg: RunConfig, out_path: Path | None = None) -> tuple[Path, PhraseManifest]:
    """Write the phrase manifest for the configured lexicon and range."""
    lex = _load_filtered_lexicon(cfg)
    manifest = phrase_manifest(lex, cfg.quantities)
    path = Path(out_path) if out_path is not None else cfg.output_dir / "manifest.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    write_manifest(manifest, path)
    return path, manifest


def run_pipeline(cfg: RunConfig) -> RunReport:
    """Run every configured model through the full measurement path."""
    if not cfg.tables:
        raise ConfigError("no embedding tables configured")
    lex = _load_filtered_lexicon(cfg)
    manifest = phrase_manifest(lex, cfg.quantities)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    generated_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    models = []
    for model_id, path in cfg.tables:
        table = load_table(path)
        subdir = cfg.output_dir / _safe_name(model_id)
        try:
            models.append(
                _analyze_model(cfg, lex, manifest, model_id, table, subdir, generated_at)
            )
        except BaseException:
            # never leave a half-written artifact directory behind
            shutil.rmtree(subdir, ignore_errors=True)
            raise
    return RunReport(config=cfg, models=tuple(models), generated_at=generated_at)


def _noun_phrases(entry: NounEntry, quantities: QuantityRange) -> list[str]:
    return [render_phrase(n, entry) for n in quantities]


def _chunk_arrays(
    table: EmbeddingTable, entries: list[NounEntry], quantities: QuantityRange
) -> np.ndarray:
    return np.stack([table.rows(_noun_phrases(e, quantities)) for e in entries])


def _analyze_model(
    cfg: RunConfig,
    lex: Lexicon,
    manifest: PhraseManifest,
    model_id: str,
    table: EmbeddingTable,
    subdir: Path,
    generated_at: str,
) -> ModelReport:
    coverage = validate_coverage(table, manifest)
    covered = [e for e in lex if e.singular in coverage.covered_nouns]
    if not covered:
        raise DegeneracyError(
            f"model {model_id!r}: no noun is covered over {cfg.quantities}"
        )

    chunks = [covered[i : i + CHUNK_NOUNS] for i in range(0, len(covered), CHUNK_NOUNS)]

    def job(entries: list[NounEntry]) -> tuple[np.ndarray, np.ndarray]:
        vecs = _chunk_arrays(table, entries, cfg.quantities)
        dists = distance_stack(vecs, backend=cfg.backend)
        profile = consecutive_profile(vecs, backend=cfg.backend)
        return dists.sum(axis=0), profile

    q = len(cfg.quantities)
    dist_total = np.zeros((q, q))
    profiles: list[np.ndarray] = []
    if cfg.jobs == 1:
        results = map(job, chunks)
        for dist_sum, profile in results:
            dist_total = dist_total + dist_sum
            profiles.append(profile)
    else:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            futures = [pool.submit(job, chunk) for chunk in chunks]
            # reduce in submission order, not completion order
            for fut in futures:
                dist_sum, profile = fut.result()
                dist_total = dist_total + dist_sum
                profiles.append(profile)

    matrix = QuantityMatrix(
        quantities=tuple(cfg.quantities), values=dist_total / len(covered)
    )
    heatmap = minmax_normalize(matrix)

    profile = np.concatenate(profiles, axis=0)
    upper = cfg.horizon if cfg.sum_upper == "inclusive" else cfg.horizon - 1
    denom = profile[:, 0]
    usable = np.abs(denom) > DEGENERATE_SIM_TOL
    numer = profile[:, 1 : upper - 1].sum(axis=1)
    score_by_noun: dict[str, ProxyScore] = {}
    for i, entry in enumerate(covered):
        if not usable[i]:
            continue
        score_by_noun[entry.singular] = ProxyScore(
            noun=entry.singular,
            value=float(numer[i] / (cfg.horizon * denom[i])),
            horizon=cfg.horizon,
        )
    excluded_degenerate = len(covered) - len(score_by_noun)

    classes = []
    for cat in sorted(lex.categories()):
        members = [
            score_by_noun[lex.entries[i].singular]
            for i in lex.category_index[cat]
            if lex.entries[i].singular in score_by_noun
        ]
        if not members:
            raise DegeneracyError(
                f"model {model_id!r}: category {cat!r} has no usable nouns "
                "after exclusions"
            )
        classes.append(class_proxy(members, cat))
    if not classes:
        raise DegeneracyError(
            f"model {model_id!r}: lexicon carries no categories to aggregate"
        )

    if len(classes) == 1:
        pvalues = PValueMatrix(
            classes=(classes[0].category,), values=np.ones((1, 1))
        )
    else:
        pvalues = pvalue_matrix(classes, test=cfg.test)
    graph = build_graph(pvalues, alpha=cfg.alpha)
    cliques = clique_stats(graph)
    avg_std = average_class_std(classes)

    anchor_row = heatmap.row(cfg.anchor)
    anchor_pos = heatmap.quantities.index(cfg.anchor)
    inversions = inversion_count(anchor_row[anchor_pos + 1 :])

    by_name = {c.category: c for c in classes}
    row_order = [by_name[name] for name in pvalues.classes]

    report = ModelReport(
        model_id=model_id,
        table_model_id=table.model_id,
        dimension=table.dimension,
        heatmap=heatmap,
        classes=tuple(row_order),
        pvalues=pvalues,
        cliques=cliques,
        average_class_std=avg_std,
        inversions=inversions,
        nouns_total=len(lex),
        nouns_covered=len(covered),
        excluded_coverage=len(lex) - len(covered),
        excluded_degenerate=excluded_degenerate,
        directory=subdir,
    )
    _write_artifacts(cfg, report, generated_at)
    return report


def _round6(x: float) -> float:
    return float(sig6(float(x)))


def _write_artifacts(cfg: RunConfig, rep: ModelReport, generated_at: str) -> None:
    rep.directory.mkdir(parents=True, exist_ok=True)
    with open(rep.directory / "heatmap.csv", "w", encoding="utf-8", newline="") as fh:
        matrix_to_csv(rep.heatmap, fh)
    with open(rep.directory / "proxies.csv", "w", encoding="utf-8", newline="") as fh:
        scores_to_csv(rep.classes, fh)
    with open(rep.directory / "pvalues.csv", "w", encoding="utf-8", newline="") as fh:
        pvalues_to_csv(rep.pvalues, fh)
    with open(rep.directory / "cliques.json", "w", encoding="utf-8") as fh:
        fh.write(report_to_json(rep.cliques))
    summary = _summary_payload(cfg, rep, generated_at)
    with open(rep.directory / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _summary_payload(cfg: RunConfig, rep: ModelReport, generated_at: str) -> dict:
    # jobs and backend are execution details, not analysis config: leaving
    # them out keeps summaries byte-identical across worker counts
    table_path = dict(cfg.tables)[rep.model_id]
    return {
        "model_id": rep.model_id,
        "table_model_id": rep.table_model_id,
        "dimension": rep.dimension,
        "config": {
            "lexicon": str(cfg.lexicon_path),
            "table": str(table_path),
            "categories": list(cfg.categories) if cfg.categories is not None else None,
            "quantities": str(cfg.quantities),
            "proxy_horizon": cfg.horizon,
            "sum_upper": cfg.sum_upper,
            "test": cfg.test,
            "alpha": _round6(cfg.alpha),
            "anchor": cfg.anchor,
        },
        "coverage": {
            "nouns_total": rep.nouns_total,
            "nouns_covered": rep.nouns_covered,
            "excluded_missing_phrases": rep.excluded_coverage,
            "excluded_degenerate_denominator": rep.excluded_degenerate,
        },
        "classes": [
            {
                "category": c.category,
                "count": len(c.scores),
                "mean": _round6(c.mean),
                "std": _round6(c.std),
                "degenerate_std": c.degenerate_std,
            }
            for c in rep.classes
        ],
        "average_class_std": _round6(rep.average_class_std),
        "cliques": {
            "count": rep.cliques.count,
            "avg_size": _round6(rep.cliques.avg_size),
        },
        "inversions": {
            "anchor": cfg.anchor,
            "count": rep.inversions,
            "pairs": (cfg.quantities.hi - cfg.anchor)
            * (cfg.quantities.hi - cfg.anchor - 1)
            // 2,
        },
        "generated_at": generated_at,
    }
