#!/usr/bin/env python3
"""Regenerate the bundled noun lexicon (src/indiv_probe/data/table1_lexicon.tsv).

28521 pronounceable synthetic nouns carrying 12 overlapping category
tags with fixed sizes (see src/indiv_probe/data/categories.txt). The
categories nest the way taxonomies do: persons, animals, and plants are
organisms, organisms are living things, fruits are foods, and so on.
A deterministic pure function of the constants below; rerunning the
script reproduces the file byte for byte.
"""

from __future__ import annotations

from pathlib import Path

CONSONANTS = "bdfgklmnprstvz"
VOWELS = "aeiou"
SYLLABLES = [c + v for c in CONSONANTS for v in VOWELS]  # 70

# substrings never allowed inside a generated word
BLOCKED = ("fag", "nig", "kik", "dago", "paki", "rape", "puta", "pedo")

TOTAL = 28521
IDENTITY_PLURAL_EVERY = 97  # every 97th noun is its own plural (mass-style)

# [start, end] index zones per category; overlaps encode the taxonomy
ZONES = {
    "person": (0, 5860),  # 5861
    "fish": (5861, 6080),  # 220
    "animal": (5861, 7747),  # 1887
    "organism": (0, 8762),  # 8763
    "woody_plant": (7748, 8217),  # 470
    "vascular_plant": (7748, 8774),  # 1027
    "living_thing": (0, 8844),  # 8845
    "substance": (8845, 10241),  # 1397
    "fruit": (10242, 10444),  # 203
    "food": (10242, 10792),  # 551
    "nutrient": (10600, 10838),  # 239
    "body_part": (10839, 11701),  # 863
}


def word(i: int) -> str:
    return SYLLABLES[i // 4900 % 70] + SYLLABLES[i // 70 % 70] + SYLLABLES[i % 70]


def generate() -> list[str]:
    names: list[str] = []
    candidate = 0
    while len(names) < TOTAL:
        w = word(candidate)
        candidate += 1
        if any(b in w for b in BLOCKED):
            continue
        names.append(w)
    return names


def categories_for(i: int) -> list[str]:
    cats = [name for name, (lo, hi) in ZONES.items() if lo <= i <= hi]
    return sorted(cats)


def main() -> None:
    out = Path(__file__).resolve().parents[1] / "src/indiv_probe/data/table1_lexicon.tsv"
    names = generate()
    lines = []
    for i, singular in enumerate(names):
        plural = singular if i % IDENTITY_PLURAL_EVERY == 0 else singular + "s"
        cats = categories_for(i)
        if cats:
            lines.append(f"{singular}\t{plural}\t{','.join(cats)}")
        else:
            lines.append(f"{singular}\t{plural}")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")

    sizes = {name: hi - lo + 1 for name, (lo, hi) in ZONES.items()}
    print(f"wrote {out}: {len(names)} nouns, {sum(sizes.values())} tag instances")
    for name in sorted(sizes):
        print(f"  {name}: {sizes[name]}")


if __name__ == "__main__":
    main()
