"""Numeral-noun phrase rendering and the phrase manifest.

A phrase is the decimal digits of a quantity, one space, then the plural
form: ``"7 apples"``. No article, no punctuation, digits only (never
number words). The manifest is the complete, deduplicated list of
phrases an embedding provider must service, one phrase per line when
written to a file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .errors import ConfigError
from .lexicon import Lexicon, NounEntry

__all__ = [
    "QuantityRange",
    "PhraseManifest",
    "render_phrase",
    "phrase_manifest",
    "write_manifest",
]

_RANGE_RE = re.compile(r"^(\d+)\.\.(\d+)$")


@dataclass(frozen=True)
class QuantityRange:
    """Inclusive range of object quantities, lo..hi with lo >= 2."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 2:
            raise ConfigError(f"quantity lower bound must be >= 2, got {self.lo}")
        if self.hi < self.lo:
            raise ConfigError(f"empty quantity range {self.lo}..{self.hi}")
        if self.hi - self.lo > 1000:
            raise ConfigError("quantity range wider than 1000 (sanity bound)")

    def __iter__(self):
        return iter(range(self.lo, self.hi + 1))

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __str__(self) -> str:
        return f"{self.lo}..{self.hi}"

    @classmethod
    def parse(cls, text: str) -> "QuantityRange":
        m = _RANGE_RE.match(text.strip())
        if not m:
            raise ConfigError(f"bad quantity range {text!r}, expected LO..HI")
        return cls(int(m.group(1)), int(m.group(2)))


def render_phrase(n: int, entry: NounEntry) -> str:
    """Digits of n, a space, the plural form."""
    if n < 2:
        raise ConfigError(f"quantity must be >= 2, got {n}")
    return f"{n} {entry.plural}"


@dataclass(frozen=True)
class PhraseManifest:
    """Unique phrases plus provenance: phrase -> ((singular, quantity), ...).

    Two nouns sharing a plural form collapse to one phrase per quantity;
    both provenance records are retained. Ordering is deterministic:
    lexicon order major, quantity ascending minor, first occurrence wins.
    """

    phrases: tuple[str, ...]
    provenance: Mapping[str, tuple[tuple[str, int], ...]]

    @property
    def record_count(self) -> int:
        return sum(len(v) for v in self.provenance.values())


def phrase_manifest(lex: Lexicon, r: QuantityRange) -> PhraseManifest:
    if len(lex) == 0:
        raise ConfigError("empty lexicon")
    phrases: list[str] = []
    provenance: dict[str, list[tuple[str, int]]] = {}
    for entry in lex.entries:
        for n in r:
            p = render_phrase(n, entry)
            if p not in provenance:
                provenance[p] = []
                phrases.append(p)
            provenance[p].append((entry.singular, n))
    return PhraseManifest(
        phrases=tuple(phrases),
        provenance={p: tuple(v) for p, v in provenance.items()},
    )


def write_manifest(manifest: PhraseManifest, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in manifest.phrases:
            fh.write(p + "\n")
