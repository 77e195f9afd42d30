"""Lexicon parsing, filtering, and the bundled noun inventory."""

import pytest

from indiv_probe import (
    Lexicon,
    LexiconError,
    NounEntry,
    category_sizes,
    filter_by_categories,
    load_lexicon,
    parse_lexicon,
    serialize_lexicon,
)

SAMPLE = """\
# comment line

apple\tapples\tfruit,food
Water\tWATER\tsubstance
dog\tdogs\tanimal,living_thing
widget\twidgets
"""


def test_parse_basic_fields():
    lex = parse_lexicon(SAMPLE)
    assert len(lex) == 4
    assert lex.entries[0] == NounEntry("apple", "apples", frozenset({"fruit", "food"}))
    # tokens are lowercased
    assert lex.entries[1].singular == "water"
    assert lex.entries[1].plural == "water"
    assert lex.entries[3].categories == frozenset()


def test_round_trip():
    lex = parse_lexicon(SAMPLE)
    again = parse_lexicon(serialize_lexicon(lex))
    assert again.entries == lex.entries


def test_serialize_sorts_categories():
    text = serialize_lexicon(parse_lexicon("a\tas\tzeta,alpha\n"))
    assert text == "a\tas\talpha,zeta\n"


def test_categories_first_appearance_order():
    lex = parse_lexicon(SAMPLE)
    assert lex.categories() == ("food", "fruit", "substance", "animal", "living_thing")


def test_category_index_points_at_entries():
    lex = parse_lexicon(SAMPLE)
    assert lex.category_index["fruit"] == (0,)
    assert lex.category_index["living_thing"] == (2,)


def test_duplicates_keep_first_and_are_reported():
    lex = parse_lexicon("a\tas\tx\nb\tbs\tx\na\tAS2\tx\n")
    assert len(lex) == 2
    assert lex.entries[0].plural == "as"
    assert lex.parse_report.duplicates == ((3, "a"),)
    assert lex.parse_report.duplicate_count == 1


@pytest.mark.parametrize(
    "text,line",
    [
        ("onlyone\n", 1),
        ("a\tb\tc\td\n", 1),
        ("a\tas\tx\nb\t\ty\n", 2),
        ("a\tas\tx,,y\n", 1),
    ],
)
def test_malformed_lines_carry_line_numbers(text, line):
    with pytest.raises(LexiconError) as exc:
        parse_lexicon(text)
    assert exc.value.line == line
    assert f"line {line}:" in str(exc.value)


def test_no_entries_rejected():
    with pytest.raises(LexiconError):
        parse_lexicon("# nothing here\n\n")


def test_entry_validation():
    with pytest.raises(LexiconError):
        NounEntry("", "xs")
    with pytest.raises(LexiconError):
        NounEntry("x", "x\ts")
    with pytest.raises(LexiconError):
        NounEntry("x", "xs", frozenset({""}))


def test_lexicon_rejects_duplicate_singulars():
    with pytest.raises(LexiconError):
        Lexicon(entries=(NounEntry("a", "as"), NounEntry("a", "az")))


def test_lexicon_rejects_inconsistent_index():
    with pytest.raises(LexiconError):
        Lexicon(entries=(NounEntry("a", "as"),), category_index={"ghost": (0,)})


def test_filter_keeps_order_and_trims_tags():
    lex = parse_lexicon(SAMPLE)
    sub = filter_by_categories(lex, ["animal", "fruit"])
    assert [e.singular for e in sub] == ["apple", "dog"]
    assert sub.entries[0].categories == frozenset({"fruit"})
    assert sub.entries[1].categories == frozenset({"animal"})


def test_filter_dedupes_requests():
    lex = parse_lexicon(SAMPLE)
    sub = filter_by_categories(lex, ["fruit", "fruit"])
    assert [e.singular for e in sub] == ["apple"]


def test_filter_unknown_category():
    lex = parse_lexicon(SAMPLE)
    with pytest.raises(LexiconError, match="unknown categories: nope"):
        filter_by_categories(lex, ["nope"])
    with pytest.raises(LexiconError):
        filter_by_categories(lex, [])


def test_category_sizes_counts_entries_per_tag():
    lex = parse_lexicon(SAMPLE)
    assert category_sizes(lex) == {
        "fruit": 1, "food": 1, "substance": 1, "animal": 1, "living_thing": 1,
    }


def test_load_lexicon(tmp_path):
    p = tmp_path / "lex.tsv"
    p.write_text(SAMPLE, encoding="utf-8")
    assert len(load_lexicon(p)) == 4


# ---------------------------------------------------------------------------
# bundled inventory
# ---------------------------------------------------------------------------

BUNDLED_SIZES = {
    "animal": 1887,
    "body_part": 863,
    "fish": 220,
    "food": 551,
    "fruit": 203,
    "living_thing": 8845,
    "nutrient": 239,
    "organism": 8763,
    "person": 5861,
    "substance": 1397,
    "vascular_plant": 1027,
    "woody_plant": 470,
}


def test_bundled_lexicon_inventory(bundled_lexicon_path):
    lex = load_lexicon(bundled_lexicon_path)
    assert len(lex) == 28521
    assert category_sizes(lex) == BUNDLED_SIZES
    # tag instances: multi-tag nouns counted once per tag
    assert sum(category_sizes(lex).values()) == 30326
    assert lex.parse_report.duplicate_count == 0


def test_bundled_categories_file_matches_lexicon(data_dir, bundled_lexicon_path):
    names = (data_dir / "categories.txt").read_text(encoding="utf-8").split()
    lex = load_lexicon(bundled_lexicon_path)
    assert sorted(names) == sorted(lex.categories())
    assert names == sorted(names)
