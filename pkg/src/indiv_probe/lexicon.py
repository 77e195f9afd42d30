"""Noun lexicon: singular/plural pairs with category tags.

The interchange format is TSV, one entry per line::

    singular<TAB>plural<TAB>cat1,cat2,...

The third field is optional (an entry may carry no categories). Lines
starting with ``#`` and blank lines are ignored. Singular and plural
tokens are lowercased at parse time. Duplicate singulars keep the first
occurrence; the dropped lines are recorded in the parse report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import LexiconError

__all__ = [
    "NounEntry",
    "Lexicon",
    "ParseReport",
    "parse_lexicon",
    "serialize_lexicon",
    "load_lexicon",
    "filter_by_categories",
    "category_sizes",
]


@dataclass(frozen=True)
class NounEntry:
    """One noun: singular form, plural form, and its category tags."""

    singular: str
    plural: str
    categories: frozenset[str] = frozenset()

    def __post_init__(self):
        for name, tok in (("singular", self.singular), ("plural", self.plural)):
            if not tok:
                raise LexiconError(f"empty {name} token")
            if "\t" in tok or "\n" in tok or "\r" in tok:
                raise LexiconError(f"{name} token contains tab/newline: {tok!r}")
        for cat in self.categories:
            if not cat or "\t" in cat or "\n" in cat:
                raise LexiconError(f"bad category name: {cat!r}")


@dataclass(frozen=True)
class ParseReport:
    """What parse_lexicon dropped: (line number, singular) per duplicate."""

    duplicates: tuple[tuple[int, str], ...] = ()

    @property
    def duplicate_count(self) -> int:
        return len(self.duplicates)


@dataclass(frozen=True)
class Lexicon:
    """Ordered noun entries plus a category -> entry-index map.

    Immutable after construction; safe to share across workers.
    """

    entries: tuple[NounEntry, ...]
    category_index: Mapping[str, tuple[int, ...]] = field(default=None)  # type: ignore[assignment]
    parse_report: ParseReport = field(default_factory=ParseReport, compare=False)

    def __post_init__(self):
        seen: set[str] = set()
        for e in self.entries:
            if e.singular in seen:
                raise LexiconError(f"duplicate singular form: {e.singular!r}")
            seen.add(e.singular)
        if self.category_index is None:
            object.__setattr__(self, "category_index", _build_index(self.entries))
        elif dict(self.category_index) != _build_index(self.entries):
            raise LexiconError("category_index inconsistent with entries")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def categories(self) -> tuple[str, ...]:
        """Category names in order of first appearance."""
        return tuple(self.category_index)


def _build_index(entries: Iterable[NounEntry]) -> dict[str, tuple[int, ...]]:
    index: dict[str, list[int]] = {}
    for i, e in enumerate(entries):
        # frozenset order is not stable across runs; sort for determinism
        for cat in sorted(e.categories):
            index.setdefault(cat, []).append(i)
    return {c: tuple(ix) for c, ix in index.items()}


def parse_lexicon(text: str) -> Lexicon:
    """Parse a TSV document into a Lexicon.

    Raises LexiconError (with line number) for malformed lines and for an
    input containing no entries at all.
    """
    entries: list[NounEntry] = []
    seen: set[str] = set()
    duplicates: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise LexiconError(
                f"expected 2 or 3 tab-separated fields, got {len(fields)}", lineno
            )
        singular = fields[0].strip().lower()
        plural = fields[1].strip().lower()
        if not singular or not plural:
            raise LexiconError("empty singular or plural token", lineno)
        cats: frozenset[str] = frozenset()
        if len(fields) == 3 and fields[2].strip():
            names = [c.strip() for c in fields[2].split(",")]
            if any(not c for c in names):
                raise LexiconError("empty category name", lineno)
            cats = frozenset(names)
        if singular in seen:
            duplicates.append((lineno, singular))
            continue
        seen.add(singular)
        entries.append(NounEntry(singular=singular, plural=plural, categories=cats))
    if not entries:
        raise LexiconError("lexicon contains no entries")
    return Lexicon(
        entries=tuple(entries),
        category_index=None,
        parse_report=ParseReport(duplicates=tuple(duplicates)),
    )


def serialize_lexicon(lex: Lexicon) -> str:
    """Render a Lexicon back to its TSV form (categories sorted per entry)."""
    lines = []
    for e in lex.entries:
        if e.categories:
            lines.append(f"{e.singular}\t{e.plural}\t{','.join(sorted(e.categories))}")
        else:
            lines.append(f"{e.singular}\t{e.plural}")
    return "\n".join(lines) + "\n"


def load_lexicon(path) -> Lexicon:
    with open(path, encoding="utf-8") as fh:
        return parse_lexicon(fh.read())


def filter_by_categories(lex: Lexicon, cats: Iterable[str]) -> Lexicon:
    """Entries having at least one category in `cats`, in lexicon order.

    An entry tagged with several requested categories appears once in the
    result but stays indexed under each of them.
    """
    wanted = list(dict.fromkeys(cats))  # dedupe, keep order
    if not wanted:
        raise LexiconError("no categories requested")
    unknown = [c for c in wanted if c not in lex.category_index]
    if unknown:
        raise LexiconError(f"unknown categories: {', '.join(sorted(unknown))}")
    wanted_set = set(wanted)
    keep = [e for e in lex.entries if e.categories & wanted_set]
    trimmed = [
        NounEntry(e.singular, e.plural, frozenset(e.categories & wanted_set))
        for e in keep
    ]
    return Lexicon(entries=tuple(trimmed), category_index=None)


def category_sizes(lex: Lexicon) -> dict[str, int]:
    """Number of entries indexed under each category (multi-tag entries
    counted once per category)."""
    return {cat: len(ix) for cat, ix in lex.category_index.items()}
