"""Phrase -> vector tables and their JSON Lines interchange format.

One record per line: ``{"phrase": "2 apples", "vector": [0.1, ...]}``.
An optional first line ``{"model_id": "...", "dimension": N}`` names the
model. Vectors are stored exactly as provided (no re-normalization);
cosine downstream handles scale. Tables are immutable after parsing and
safe for concurrent lookups.

Providers that serve embeddings live (rather than via files) should
implement the documented wire contract: HTTP POST ``/embed`` with body
``{"model_id": s, "phrases": [s...]}`` answered by
``{"dimension": d, "vectors": [[...] ...]}`` in request order. File
ingestion remains the only path this module itself performs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .errors import MissingPhraseError, TableError
from .phrases import PhraseManifest

__all__ = [
    "EmbeddingTable",
    "CoverageReport",
    "parse_table",
    "serialize_table",
    "load_table",
    "write_table",
    "validate_coverage",
]


@dataclass(frozen=True)
class EmbeddingTable:
    """Immutable phrase -> vector map with a uniform dimension."""

    model_id: str
    dimension: int
    _index: dict[str, int] = field(repr=False)
    _matrix: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, phrase: str) -> bool:
        return phrase in self._index

    @property
    def phrases(self) -> tuple[str, ...]:
        return tuple(self._index)

    def lookup(self, phrase: str) -> np.ndarray:
        """Vector for an exact phrase string (read-only view)."""
        try:
            return self._matrix[self._index[phrase]]
        except KeyError:
            raise MissingPhraseError(phrase) from None

    def rows(self, phrases: Iterable[str]) -> np.ndarray:
        """Stack of vectors for the given phrases, in the given order."""
        idx = []
        for p in phrases:
            if p not in self._index:
                raise MissingPhraseError(p)
            idx.append(self._index[p])
        return self._matrix[np.asarray(idx, dtype=np.intp)]


def _make_table(model_id: str, dimension: int, index: dict[str, int], matrix: np.ndarray) -> EmbeddingTable:
    matrix = np.ascontiguousarray(matrix, dtype=np.float64)
    matrix.setflags(write=False)
    return EmbeddingTable(model_id=model_id, dimension=dimension, _index=index, _matrix=matrix)


def table_from_records(
    records: Iterable[tuple[str, Iterable[float]]], model_id: str = "unknown"
) -> EmbeddingTable:
    """Build a table in-memory; applies the same validation as parse_table."""
    index: dict[str, int] = {}
    vectors: list[np.ndarray] = []
    dimension = None
    for phrase, vec in records:
        v = np.asarray(list(vec), dtype=np.float64)
        dimension = _check_record(phrase, v, dimension, index, line=None)
        index[phrase] = len(vectors)
        vectors.append(v)
    if not vectors:
        raise TableError("table contains no records")
    return _make_table(model_id, dimension, index, np.stack(vectors))


def _check_record(
    phrase, v: np.ndarray, dimension: int | None, index: dict[str, int], line: int | None
) -> int:
    if not isinstance(phrase, str) or not phrase:
        raise TableError("record has no usable 'phrase' string", line)
    if phrase in index:
        raise TableError(f"duplicate phrase {phrase!r}", line)
    if v.ndim != 1 or v.size == 0:
        raise TableError(f"vector for {phrase!r} is empty or not flat", line)
    if not np.all(np.isfinite(v)):
        raise TableError(f"non-finite vector component for {phrase!r}", line)
    if dimension is None:
        dimension = int(v.size)
    elif v.size != dimension:
        raise TableError(
            f"dimension mismatch for {phrase!r}: got {v.size}, expected {dimension}", line
        )
    if float(np.dot(v, v)) == 0.0:
        raise TableError(f"zero-norm vector for {phrase!r}", line)
    return dimension


def parse_table(stream: Iterable[str] | str) -> EmbeddingTable:
    """Parse JSON Lines into an EmbeddingTable.

    `stream` is a string or an iterable of lines (e.g. an open file).
    Errors carry 1-based line numbers.
    """
    if isinstance(stream, str):
        stream = stream.splitlines()
    model_id = "unknown"
    declared_dim: int | None = None
    dimension: int | None = None
    index: dict[str, int] = {}
    vectors: list[np.ndarray] = []
    first_record = True
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TableError(f"invalid JSON: {exc.msg}", lineno) from None
        if not isinstance(obj, dict):
            raise TableError("line is not a JSON object", lineno)
        if first_record and "phrase" not in obj:
            # header line
            model_id = str(obj.get("model_id", model_id))
            if "dimension" in obj:
                declared_dim = int(obj["dimension"])
                if declared_dim <= 0:
                    raise TableError("declared dimension must be positive", lineno)
            first_record = False
            continue
        first_record = False
        if "phrase" not in obj or "vector" not in obj:
            raise TableError("record needs 'phrase' and 'vector' fields", lineno)
        vec = obj["vector"]
        if not isinstance(vec, list):
            raise TableError("'vector' is not a JSON array", lineno)
        try:
            v = np.asarray(vec, dtype=np.float64)
        except (TypeError, ValueError):
            raise TableError("'vector' has non-numeric entries", lineno) from None
        dimension = _check_record(obj["phrase"], v, dimension or declared_dim, index, lineno)
        index[obj["phrase"]] = len(vectors)
        vectors.append(v)
    if not vectors:
        raise TableError("table contains no records")
    return _make_table(model_id, dimension, index, np.stack(vectors))


def serialize_table(table: EmbeddingTable) -> Iterator[str]:
    """Yield JSON Lines for a table, header first.

    Floats are written with Python's shortest round-trip repr, so
    parse(serialize(t)) reproduces every vector bit-exactly.
    """
    yield json.dumps({"model_id": table.model_id, "dimension": table.dimension})
    for phrase, i in table._index.items():
        row = table._matrix[i]
        yield json.dumps({"phrase": phrase, "vector": [float(x) for x in row]})


def load_table(path) -> EmbeddingTable:
    with open(path, encoding="utf-8") as fh:
        return parse_table(fh)


def write_table(table: EmbeddingTable, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in serialize_table(table):
            fh.write(line + "\n")


@dataclass(frozen=True)
class CoverageReport:
    """How well a table services a manifest."""

    missing: tuple[str, ...]          # manifest phrases absent from the table
    extra: tuple[str, ...]            # table phrases absent from the manifest
    covered_nouns: frozenset[str]     # singulars with every quantity present
    uncovered_nouns: frozenset[str]   # singulars with >= 1 phrase missing

    @property
    def complete(self) -> bool:
        return not self.missing


def validate_coverage(table: EmbeddingTable, manifest: PhraseManifest) -> CoverageReport:
    missing = tuple(p for p in manifest.phrases if p not in table)
    manifest_set = set(manifest.phrases)
    extra = tuple(p for p in table.phrases if p not in manifest_set)
    bad_nouns: set[str] = set()
    all_nouns: set[str] = set()
    for phrase, records in manifest.provenance.items():
        present = phrase in table
        for singular, _ in records:
            all_nouns.add(singular)
            if not present:
                bad_nouns.add(singular)
    return CoverageReport(
        missing=missing,
        extra=extra,
        covered_nouns=frozenset(all_nouns - bad_nouns),
        uncovered_nouns=frozenset(bad_nouns),
    )
