"""Toolkit for measuring how embedding models encode object quantity.

Feed it a noun lexicon and phrase->vector tables from any model; it
renders numeral phrases, computes pairwise quantity contrasts, a
per-noun individuation value, class-level statistics with pairwise
significance tests, and maximal cliques of the resulting equivalence
graph. A synthetic generator with closed-form expected values serves
as the built-in oracle for the full path.
"""

from .cliques import (
    CliqueReport,
    EquivalenceGraph,
    build_graph,
    clique_stats,
    maximal_cliques,
    report_to_json,
)
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
from .kernels import active_backend, consecutive_profile, distance_stack
from .lexicon import (
    Lexicon,
    NounEntry,
    ParseReport,
    category_sizes,
    filter_by_categories,
    load_lexicon,
    parse_lexicon,
    serialize_lexicon,
)
from .metrics import (
    ClassProxy,
    ProxyScore,
    QuantityMatrix,
    average_class_std,
    average_matrices,
    class_proxy,
    cosine_similarity,
    individuation_proxy,
    inversion_count,
    minmax_normalize,
    quantity_distance_matrix,
)
from .phrases import PhraseManifest, QuantityRange, phrase_manifest, render_phrase
from .pipeline import ModelReport, RunConfig, RunReport, emit_manifest, run_pipeline
from .stats import PValueMatrix, mann_whitney_p, pvalue_matrix, welch_p
from .store import (
    CoverageReport,
    EmbeddingTable,
    load_table,
    parse_table,
    serialize_table,
    table_from_records,
    validate_coverage,
    write_table,
)
from .synth import SynthConfig, config_from_json, effective_beta, oracle_proxy, synth_table

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # lexicon
    "NounEntry", "Lexicon", "ParseReport", "parse_lexicon", "serialize_lexicon",
    "load_lexicon", "filter_by_categories", "category_sizes",
    # phrases
    "QuantityRange", "PhraseManifest", "render_phrase", "phrase_manifest",
    # embedding store
    "EmbeddingTable", "CoverageReport", "parse_table", "serialize_table",
    "load_table", "write_table", "table_from_records", "validate_coverage",
    # kernels
    "distance_stack", "consecutive_profile", "active_backend",
    # metrics
    "QuantityMatrix", "ProxyScore", "ClassProxy", "cosine_similarity",
    "quantity_distance_matrix", "average_matrices", "minmax_normalize",
    "individuation_proxy", "class_proxy", "average_class_std", "inversion_count",
    # stats
    "PValueMatrix", "mann_whitney_p", "welch_p", "pvalue_matrix",
    # cliques
    "EquivalenceGraph", "CliqueReport", "build_graph", "maximal_cliques",
    "clique_stats", "report_to_json",
    # synth
    "SynthConfig", "config_from_json", "synth_table", "oracle_proxy", "effective_beta",
    # pipeline
    "RunConfig", "RunReport", "ModelReport", "run_pipeline", "emit_manifest",
    # errors
    "IndivProbeError", "ConfigError", "LexiconError", "TableError",
    "MissingPhraseError", "DimensionMismatchError", "ZeroNormError",
    "EmptySampleError", "DegeneracyError", "GraphTooLargeError",
]
