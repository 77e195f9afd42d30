"""Equivalence graph over classes and its maximal cliques.

Two classes are connected when their pairwise p-value exceeds alpha
(strictly), i.e. when the test failed to tell them apart. Maximal
cliques of that graph are the sets of classes that are mutually
indistinguishable; their count and average size summarize how much
structure the embedding collapses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import ConfigError, DimensionMismatchError, GraphTooLargeError
from .metrics import sig6
from .stats import PValueMatrix

__all__ = [
    "MAX_VERTICES",
    "EquivalenceGraph",
    "CliqueReport",
    "build_graph",
    "maximal_cliques",
    "clique_stats",
    "report_to_json",
]

MAX_VERTICES = 64


@dataclass(frozen=True)
class EquivalenceGraph:
    """Undirected graph, vertices in fixed order, no self-loops."""

    vertices: tuple[str, ...]
    adjacency: np.ndarray
    alpha: float

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=bool)
        k = len(self.vertices)
        if adj.shape != (k, k):
            raise DimensionMismatchError(
                f"adjacency shape {adj.shape} does not match {k} vertices"
            )
        if len(set(self.vertices)) != k:
            raise ConfigError("vertex names must be distinct")
        if not np.array_equal(adj, adj.T):
            raise ConfigError("adjacency must be symmetric")
        if np.any(np.diagonal(adj)):
            raise ConfigError("self-loops are not allowed")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must be in (0, 1), got {self.alpha}")
        adj = adj.copy()
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)

    def __len__(self) -> int:
        return len(self.vertices)

    def neighbors(self, i: int) -> Iterator[int]:
        return iter(np.flatnonzero(self.adjacency[i]))


def build_graph(matrix: PValueMatrix, alpha: float = 0.05) -> EquivalenceGraph:
    """Edge between classes i and j iff p(i, j) > alpha (strict)."""
    adj = matrix.values > alpha
    np.fill_diagonal(adj, False)
    return EquivalenceGraph(vertices=matrix.classes, adjacency=adj, alpha=alpha)


def _bron_kerbosch(adj_bits: list[int], r: int, p: int, x: int, out: list[int]) -> None:
    if p == 0 and x == 0:
        out.append(r)
        return
    # pivot: vertex of P | X with the most neighbors inside P,
    # lowest index on ties
    best, best_deg = -1, -1
    scan = p | x
    while scan:
        u = (scan & -scan).bit_length() - 1
        scan &= scan - 1
        deg = (adj_bits[u] & p).bit_count()
        if deg > best_deg:
            best, best_deg = u, deg
    cand = p & ~adj_bits[best]
    while cand:
        vbit = cand & -cand
        v = vbit.bit_length() - 1
        cand &= cand - 1
        _bron_kerbosch(adj_bits, r | vbit, p & adj_bits[v], x & adj_bits[v], out)
        p &= ~vbit
        x |= vbit


def maximal_cliques(graph: EquivalenceGraph) -> tuple[tuple[str, ...], ...]:
    """All maximal cliques, largest first, then lexicographic by member names.

    Isolated vertices count as cliques of size 1. Bron-Kerbosch with
    pivoting over bitmask sets; refuses graphs beyond MAX_VERTICES.
    """
    k = len(graph)
    if k > MAX_VERTICES:
        raise GraphTooLargeError(
            f"{k} vertices exceeds the {MAX_VERTICES}-vertex limit"
        )
    if k == 0:
        return ()
    adj_bits = [
        int.from_bytes(
            np.packbits(graph.adjacency[i], bitorder="little").tobytes(), "little"
        )
        for i in range(k)
    ]
    found: list[int] = []
    _bron_kerbosch(adj_bits, 0, (1 << k) - 1, 0, found)
    names = graph.vertices
    cliques = [
        tuple(names[i] for i in range(k) if mask >> i & 1) for mask in found
    ]
    cliques.sort(key=lambda c: (-len(c), c))
    return tuple(cliques)


@dataclass(frozen=True)
class CliqueReport:
    alpha: float
    cliques: tuple[tuple[str, ...], ...]
    count: int = field(init=False)
    avg_size: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "count", len(self.cliques))
        sizes = [len(c) for c in self.cliques]
        avg = sum(sizes) / len(sizes) if sizes else 0.0
        object.__setattr__(self, "avg_size", avg)


def clique_stats(graph: EquivalenceGraph) -> CliqueReport:
    return CliqueReport(alpha=graph.alpha, cliques=maximal_cliques(graph))


def report_to_json(report: CliqueReport) -> str:
    payload = {
        "alpha": float(sig6(report.alpha)),
        "cliques": [list(c) for c in report.cliques],
        "count": report.count,
        "avg_size": float(sig6(report.avg_size)),
    }
    return json.dumps(payload, indent=2) + "\n"
