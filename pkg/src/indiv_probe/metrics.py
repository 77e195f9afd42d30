"""Numeric measures over embedding tables.

Two distance conventions coexist deliberately and must not be merged:

* quantity-contrast matrices use cosine *distance* (1 - similarity),
  because they report how far apart two quantities land;
* the individuation proxy uses raw cosine *similarity*, summed over
  adjacent quantities and normalized by the 2-vs-3 similarity.

The per-noun proxy is

    value = sum_{n=3}^{U} cos(v_n, v_{n+1}) / (H * cos(v_2, v_3))

with horizon H and U = H (``sum_upper="inclusive"``, the default, which
needs quantities up to H+1) or U = H - 1 (``"exclusive"``, which stops
at quantity H). Higher values mean the model separates neighboring high
quantities poorly relative to the 2-vs-3 contrast, i.e. the noun behaves
as less individuated. With every embedding identical the value is
exactly (H - 2) / H.

Nouns whose 2-vs-3 similarity is within 1e-12 of zero have an undefined
proxy and raise DegeneracyError; aggregation layers exclude them and
report the count instead of aborting.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ConfigError,
    DegeneracyError,
    DimensionMismatchError,
    EmptySampleError,
    MissingPhraseError,
    ZeroNormError,
)
from .lexicon import NounEntry
from .phrases import QuantityRange, render_phrase
from .store import EmbeddingTable

__all__ = [
    "DEGENERATE_SIM_TOL",
    "QuantityMatrix",
    "ProxyScore",
    "ClassProxy",
    "cosine_similarity",
    "quantity_distance_matrix",
    "average_matrices",
    "minmax_normalize",
    "individuation_proxy",
    "class_proxy",
    "average_class_std",
    "inversion_count",
    "matrix_to_csv",
    "scores_to_csv",
    "sig6",
]

DEGENERATE_SIM_TOL = 1e-12


def sig6(x: float) -> str:
    """Fixed 6-significant-digit formatting used by every text artifact."""
    return f"{x:.6g}"


def cosine_similarity(u, v) -> float:
    """Cosine of the angle between u and v, clamped to [-1, 1]."""
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
        raise DimensionMismatchError(
            f"cosine needs equal-length flat vectors, got {a.shape} and {b.shape}"
        )
    na = math.sqrt(float(np.dot(a, a)))
    nb = math.sqrt(float(np.dot(b, b)))
    if na == 0.0 or nb == 0.0:
        raise ZeroNormError("cosine undefined for zero-norm vector")
    return min(1.0, max(-1.0, float(np.dot(a, b)) / (na * nb)))


@dataclass(frozen=True)
class QuantityMatrix:
    """Symmetric zero-diagonal matrix of contrast values keyed by quantity."""

    quantities: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        q = len(self.quantities)
        if v.shape != (q, q):
            raise DimensionMismatchError(
                f"matrix shape {v.shape} does not match {q} quantities"
            )
        if any(b <= a for a, b in zip(self.quantities, self.quantities[1:])):
            raise ConfigError("quantities must be strictly ascending")
        if not np.all(np.isfinite(v)):
            raise ConfigError("matrix has non-finite entries")
        if not np.array_equal(v, v.T):
            raise ConfigError("matrix is not symmetric")
        if np.any(np.diagonal(v) != 0.0):
            raise ConfigError("matrix diagonal must be zero")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def row(self, quantity: int) -> np.ndarray:
        try:
            i = self.quantities.index(quantity)
        except ValueError:
            raise ConfigError(f"quantity {quantity} not on matrix axis") from None
        return self.values[i]


def quantity_distance_matrix(
    table: EmbeddingTable, entry: NounEntry, r: QuantityRange
) -> QuantityMatrix:
    """Pairwise cosine distances between the noun's quantity phrases."""
    vecs = _noun_rows(table, entry, range(r.lo, r.hi + 1))
    q = vecs.shape[0]
    norms = np.sqrt(np.einsum("qd,qd->q", vecs, vecs))
    if np.any(norms == 0.0):
        raise ZeroNormError(f"zero-norm vector for noun {entry.singular!r}")
    gram = (vecs @ vecs.T) / (norms[:, None] * norms[None, :])
    np.clip(gram, -1.0, 1.0, out=gram)
    dist = 1.0 - gram
    iu = np.triu_indices(q, k=1)
    out = np.zeros_like(dist)
    out[iu] = dist[iu]
    out[(iu[1], iu[0])] = dist[iu]
    return QuantityMatrix(quantities=tuple(r), values=out)


def average_matrices(ms: Sequence[QuantityMatrix]) -> QuantityMatrix:
    """Entrywise arithmetic mean; all inputs must share the quantity axis."""
    if not ms:
        raise EmptySampleError("no matrices to average")
    axis = ms[0].quantities
    for m in ms[1:]:
        if m.quantities != axis:
            raise DimensionMismatchError(
                f"quantity axes differ: {axis} vs {m.quantities}"
            )
    total = np.zeros_like(ms[0].values)
    for m in ms:
        total = total + m.values
    return QuantityMatrix(quantities=axis, values=total / len(ms))


def minmax_normalize(m: QuantityMatrix) -> QuantityMatrix:
    """Affinely map off-diagonal entries onto [0, 1]; diagonal stays zero.

    A constant off-diagonal (max == min) collapses to all zeros.
    """
    v = m.values.copy()
    q = v.shape[0]
    if q < 2:
        return QuantityMatrix(quantities=m.quantities, values=v)
    off = ~np.eye(q, dtype=bool)
    lo = v[off].min()
    hi = v[off].max()
    if hi == lo:
        v[off] = 0.0
    else:
        v[off] = (v[off] - lo) / (hi - lo)
    return QuantityMatrix(quantities=m.quantities, values=v)


@dataclass(frozen=True)
class ProxyScore:
    """Individuation proxy value for one noun at a given horizon."""

    noun: str
    value: float
    horizon: int

    def __post_init__(self):
        if self.horizon < 4:
            raise ConfigError(f"horizon must be >= 4, got {self.horizon}")
        if not math.isfinite(self.value):
            raise ConfigError(f"non-finite proxy value for {self.noun!r}")


def individuation_proxy(
    table: EmbeddingTable,
    entry: NounEntry,
    horizon: int = 10,
    sum_upper: str = "inclusive",
) -> ProxyScore:
    """Per-noun individuation proxy (see module docstring for the formula)."""
    if horizon < 4:
        raise ConfigError(f"horizon must be >= 4, got {horizon}")
    if sum_upper not in ("inclusive", "exclusive"):
        raise ConfigError(f"sum_upper must be inclusive or exclusive, got {sum_upper!r}")
    upper = horizon if sum_upper == "inclusive" else horizon - 1
    vecs = _noun_rows(table, entry, range(2, upper + 2))
    sims = _consecutive_sims(vecs)
    if abs(sims[0]) <= DEGENERATE_SIM_TOL:
        raise DegeneracyError(
            f"noun {entry.singular!r}: 2-vs-3 similarity within {DEGENERATE_SIM_TOL} of zero"
        )
    value = float(np.sum(sims[1:]) / (horizon * sims[0]))
    return ProxyScore(noun=entry.singular, value=value, horizon=horizon)


def _noun_rows(table: EmbeddingTable, entry: NounEntry, quantities: Iterable[int]) -> np.ndarray:
    rows = []
    for n in quantities:
        phrase = render_phrase(n, entry)
        try:
            rows.append(table.lookup(phrase))
        except MissingPhraseError:
            raise MissingPhraseError(
                phrase, detail=f"noun {entry.singular!r}, quantity {n}"
            ) from None
    return np.stack(rows)


def _consecutive_sims(vecs: np.ndarray) -> np.ndarray:
    a = vecs[:-1]
    b = vecs[1:]
    na = np.sqrt(np.einsum("qd,qd->q", a, a))
    nb = np.sqrt(np.einsum("qd,qd->q", b, b))
    if np.any(na == 0.0) or np.any(nb == 0.0):
        raise ZeroNormError("zero-norm vector in similarity profile")
    sims = np.einsum("qd,qd->q", a, b) / (na * nb)
    np.clip(sims, -1.0, 1.0, out=sims)
    return sims


@dataclass(frozen=True)
class ClassProxy:
    """Proxy-score sample for one category, with mean and sample std."""

    category: str
    scores: tuple[ProxyScore, ...]
    mean: float
    std: float
    degenerate_std: bool = False

    def __post_init__(self):
        if not self.scores:
            raise EmptySampleError(f"class {self.category!r} has no scores")
        values = [s.value for s in self.scores]
        if not math.isclose(self.mean, float(np.mean(values)), rel_tol=1e-9, abs_tol=1e-12):
            raise ConfigError(f"class {self.category!r}: mean does not match scores")
        expected_std = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
        if not math.isclose(self.std, expected_std, rel_tol=1e-9, abs_tol=1e-12):
            raise ConfigError(f"class {self.category!r}: std does not match scores")

    @property
    def values(self) -> np.ndarray:
        return np.array([s.value for s in self.scores], dtype=np.float64)


def class_proxy(scores: Sequence[ProxyScore], category: str) -> ClassProxy:
    """Aggregate per-noun scores into a class estimate.

    A single-member class gets std 0.0 with the degenerate flag set
    (the sample standard deviation is undefined there).
    """
    if not scores:
        raise EmptySampleError(f"class {category!r} has no scores")
    values = np.array([s.value for s in scores], dtype=np.float64)
    single = values.size == 1
    return ClassProxy(
        category=category,
        scores=tuple(scores),
        mean=float(np.mean(values)),
        std=0.0 if single else float(np.std(values, ddof=1)),
        degenerate_std=single,
    )


def average_class_std(classes: Sequence[ClassProxy]) -> float:
    """Arithmetic mean of per-class standard deviations."""
    if not classes:
        raise EmptySampleError("no classes")
    return float(np.mean([c.std for c in classes]))


def inversion_count(seq: Sequence[float]) -> int:
    """Monotonicity violations: index pairs i<j with seq[i] >= seq[j]."""
    if len(seq) < 2:
        raise ConfigError("need at least two values to count inversions")
    count = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] >= seq[j]:
                count += 1
    return count


# --------------------------------------------------------------------------
# text artifacts
# --------------------------------------------------------------------------

def matrix_to_csv(m: QuantityMatrix, fh) -> None:
    """CSV with a quantity header row/column, values at 6 significant digits."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["quantity", *[str(q) for q in m.quantities]])
    for i, q in enumerate(m.quantities):
        w.writerow([str(q), *[sig6(x) for x in m.values[i]]])


def scores_to_csv(classes: Sequence[ClassProxy], fh) -> None:
    """CSV `noun,category,value`, class-major in the given class order."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["noun", "category", "value"])
    for c in classes:
        for s in c.scores:
            w.writerow([s.noun, c.category, sig6(s.value)])
