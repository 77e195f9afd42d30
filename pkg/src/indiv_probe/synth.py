"""Synthetic embedding tables with analytically known proxy values.

Each noun gets a planar curve of unit vectors v_n = (cos(b*ln n),
sin(b*ln n), 0, ..., 0), so the similarity of quantities n and m is
exactly cos(b*ln(m/n)): consecutive quantities get relatively closer
as n grows, a ratio-sensitive world. The angular rate b is the config
beta times an optional per-category multiplier, and oracle_proxy
evaluates the resulting individuation value in closed form without
touching the table pipeline, which makes the generator an independent
check of the whole measurement path.

Keeping b*ln(hi/2) below pi/2 keeps every pairwise similarity positive
and the proxy denominator safely away from zero. Inside that domain
the closed-form value strictly increases with b: scaled-up angles
shrink the 2-3 similarity faster than the later, smaller consecutive
gaps, so a larger b reads as less individuated at high quantities.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ConfigError, DegeneracyError
from .lexicon import Lexicon, NounEntry
from .phrases import QuantityRange, phrase_manifest
from .store import EmbeddingTable, table_from_records

__all__ = [
    "SynthConfig",
    "config_from_json",
    "effective_beta",
    "synth_table",
    "oracle_proxy",
]

_MIN_DENOMINATOR = 1e-9


@dataclass(frozen=True)
class SynthConfig:
    """Generator parameters; beta is the base angular rate per ln(n)."""

    beta: float
    dimension: int
    noise_sigma: float
    seed: int
    quantities: QuantityRange
    category_multipliers: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.beta) or self.beta < 0.0:
            raise ConfigError(f"beta must be a finite nonnegative real, got {self.beta}")
        if self.dimension < 2:
            raise ConfigError(f"dimension must be at least 2, got {self.dimension}")
        if not math.isfinite(self.noise_sigma) or self.noise_sigma < 0.0:
            raise ConfigError(f"noise_sigma must be nonnegative, got {self.noise_sigma}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")
        object.__setattr__(self, "category_multipliers", dict(self.category_multipliers))
        span = math.log(self.quantities.hi / 2.0)
        for label, rate in self._rates():
            if not math.isfinite(rate) or rate < 0.0:
                raise ConfigError(f"multiplier for {label} must be nonnegative")
            if rate * span >= math.pi / 2.0:
                raise ConfigError(
                    f"beta*ln(hi/2) = {rate * span:.4f} for {label} reaches pi/2; "
                    "similarities would change sign over the quantity range"
                )

    def _rates(self):
        yield "the default class", self.beta
        for name, mult in sorted(self.category_multipliers.items()):
            yield f"category {name!r}", self.beta * mult

    @property
    def model_id(self) -> str:
        return (
            f"synth:beta={self.beta:g}:sigma={self.noise_sigma:g}:seed={self.seed}"
        )


_CONFIG_KEYS = {
    "beta", "dimension", "noise_sigma", "seed", "quantities", "category_multipliers",
}


def config_from_json(text: str) -> SynthConfig:
    """Build a SynthConfig from a JSON document.

    Required keys: beta, dimension, seed, quantities (either "LO..HI"
    or [lo, hi]). Optional: noise_sigma (default 0), category_multipliers
    (default none).
    """
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ConfigError("synth config must be a JSON object")
    unknown = sorted(set(data) - _CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown synth config keys: {', '.join(unknown)}")
    missing = sorted({"beta", "dimension", "seed", "quantities"} - set(data))
    if missing:
        raise ConfigError(f"synth config missing keys: {', '.join(missing)}")
    raw = data["quantities"]
    if isinstance(raw, str):
        quantities = QuantityRange.parse(raw)
    elif isinstance(raw, (list, tuple)) and len(raw) == 2:
        quantities = QuantityRange(int(raw[0]), int(raw[1]))
    else:
        raise ConfigError(f"quantities must be \"LO..HI\" or [lo, hi], got {raw!r}")
    return SynthConfig(
        beta=float(data["beta"]),
        dimension=int(data["dimension"]),
        noise_sigma=float(data.get("noise_sigma", 0.0)),
        seed=int(data["seed"]),
        quantities=quantities,
        category_multipliers=dict(data.get("category_multipliers", {})),
    )


def effective_beta(cfg: SynthConfig, entry: NounEntry) -> float:
    """Noun's angular rate: beta times the multiplier of its alphabetically
    first category that has one, or beta itself."""
    for name in sorted(entry.categories):
        if name in cfg.category_multipliers:
            return cfg.beta * cfg.category_multipliers[name]
    return cfg.beta


def _noun_rng(cfg: SynthConfig, singular: str) -> np.random.Generator:
    # counter-based stream keyed by (seed, noun), independent of order
    digest = hashlib.blake2b(singular.encode("utf-8"), digest_size=8).digest()
    key = (cfg.seed << 64) | int.from_bytes(digest, "big")
    return np.random.Generator(np.random.Philox(key=key))


def synth_table(cfg: SynthConfig, nouns: Lexicon) -> EmbeddingTable:
    """Generate the table for every phrase of nouns x cfg.quantities.

    Deterministic under a fixed seed. When two nouns share a plural the
    first noun in lexicon order owns the phrase.
    """
    manifest = phrase_manifest(nouns, cfg.quantities)
    by_singular = {e.singular: e for e in nouns}
    records: list[tuple[str, np.ndarray]] = []
    cache: dict[str, np.ndarray] = {}
    for phrase in manifest.phrases:
        singular, n = manifest.provenance[phrase][0]
        entry = by_singular[singular]
        block = cache.get(singular)
        if block is None:
            block = _noun_block(cfg, entry)
            cache[singular] = block
        records.append((phrase, block[n - cfg.quantities.lo]))
    return table_from_records(records, model_id=cfg.model_id)


def _noun_block(cfg: SynthConfig, entry: NounEntry) -> np.ndarray:
    rate = effective_beta(cfg, entry)
    count = len(cfg.quantities)
    vecs = np.zeros((count, cfg.dimension))
    angles = rate * np.log(np.arange(cfg.quantities.lo, cfg.quantities.hi + 1))
    vecs[:, 0] = np.cos(angles)
    vecs[:, 1] = np.sin(angles)
    if cfg.noise_sigma > 0.0:
        rng = _noun_rng(cfg, entry.singular)
        vecs += rng.normal(0.0, cfg.noise_sigma, size=vecs.shape)
        norms = np.linalg.norm(vecs, axis=1, keepdims=True)
        if np.any(norms == 0.0):
            raise DegeneracyError(
                f"noise cancelled a vector for noun {entry.singular!r}"
            )
        vecs /= norms
    return vecs


def oracle_proxy(cfg: SynthConfig, horizon: int, *,
                 multiplier: float = 1.0, sum_upper: str = "inclusive") -> float:
    """Closed-form individuation value of a noiseless synth noun.

    Pure-scalar math, no table and no vector code: the independent
    reference the pipeline is checked against. `multiplier` evaluates a
    category's effective rate without building a dedicated config.
    """
    if cfg.noise_sigma != 0.0:
        raise ConfigError("oracle_proxy requires noise_sigma = 0")
    if horizon < 4:
        raise ConfigError(f"horizon must be at least 4, got {horizon}")
    if sum_upper not in ("inclusive", "exclusive"):
        raise ConfigError(f"sum_upper must be inclusive or exclusive, got {sum_upper!r}")
    rate = cfg.beta * multiplier
    denom = math.cos(rate * math.log(1.5))
    if abs(denom) < _MIN_DENOMINATOR:
        raise DegeneracyError(
            "similarity of quantities 2 and 3 is numerically zero"
        )
    upper = horizon if sum_upper == "inclusive" else horizon - 1
    total = sum(math.cos(rate * math.log((n + 1) / n)) for n in range(3, upper + 1))
    return total / (horizon * denom)
