import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sensehyper.lexicon import (
    InputError,
    IsARelation,
    Sense,
    SenseInventory,
    SenseTaxonomy,
    Synset,
    dump_synsets,
    load_gold,
    load_isa,
    load_synsets,
    normalize_word,
    write_taxonomy,
)


@pytest.mark.parametrize("raw, expected", [
    ("Fruit", "fruit"),
    ("  red   Fruit\t", "red fruit"),
    ("CHERRY RED", "cherry red"),
])
def test_normalize_word(raw, expected):
    assert normalize_word(raw) == expected


@given(st.text(min_size=1).filter(lambda s: s.strip()))
def test_normalize_word_is_idempotent(text):
    once = normalize_word(text)
    assert normalize_word(once) == once


@pytest.mark.parametrize("blank", ["", "   ", "\t\n"])
def test_normalize_rejects_empty(blank):
    with pytest.raises(ValueError):
        normalize_word(blank)


def test_sense_parse_and_str():
    sense = Sense.parse("Red Fruit#12")
    assert sense == Sense("red fruit", 12)
    assert str(sense) == "red fruit#12"
    with pytest.raises(ValueError):
        Sense.parse("apple")


def test_synset_rejects_repeated_word():
    with pytest.raises(ValueError):
        Synset("x", (Sense("a", 1), Sense("a", 2)))
    with pytest.raises(ValueError):
        Synset("x", ())


def test_load_single_synset(write):
    inv = load_synsets(write("s.tsv", "1\t3\tcherry, red fruit, fruit\n"))
    assert len(inv) == 1
    assert inv.n_senses == 3
    assert inv["1"].words == ("cherry", "red fruit", "fruit")


def test_first_seen_sense_numbering(write):
    inv = load_synsets(write("s.tsv", "a\t2\tfruit, food\nb\t2\tapple, fruit\n"))
    assert inv.senses_of("fruit") == {Sense("fruit", 1), Sense("fruit", 2)}
    assert inv["a"].sense_of("fruit") == Sense("fruit", 1)
    assert inv["b"].sense_of("fruit") == Sense("fruit", 2)


def test_two_column_form(write):
    inv = load_synsets(write("s.tsv", "a\tfruit, food\n\nb\tapple\n"))
    assert inv.ids == ["a", "b"]


def test_explicit_sense_ids(write):
    inv = load_synsets(write("s.tsv", "a\tfruit#3, food#1\n"))
    assert inv["a"].senses == (Sense("fruit", 3), Sense("food", 1))


def test_watset_style_counts_match_line_oracle(write):
    rng = random.Random(7)
    vocab = [f"word{i}" for i in range(40)] + ["multi word", "new york"]
    lines = []
    for i in range(100):
        words = rng.sample(vocab, rng.randint(1, 6))
        lines.append(f"{i}\t{len(words)}\t{', '.join(words)}")
    path = write("watset.tsv", "\n".join(lines) + "\n")

    # independent count straight from the raw text
    expected_total = 0
    expected_per_word = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            tokens = line.rstrip("\n").split("\t")[2].split(", ")
            expected_total += len(tokens)
            for t in tokens:
                expected_per_word[t] = expected_per_word.get(t, 0) + 1

    inv = load_synsets(path)
    assert len(inv) == 100
    assert sum(len(s) for s in inv) == inv.n_senses == expected_total
    for word, count in expected_per_word.items():
        assert len(inv.senses_of(word)) == count


def test_inventory_word_index_is_exact(write):
    inv = load_synsets(write("s.tsv", "a\tx, y\nb\ty, z\nc\tx\n"))
    for word in inv.vocabulary:
        listing = [s for s in inv if word in s.words]
        assert inv.synsets_with_word(word) == listing
        assert inv.senses_of(word) == {s.sense_of(word) for s in listing}


def test_synset_round_trip(tmp_path, write):
    inv = load_synsets(write("s.tsv", "1\t3\tcherry, red fruit, fruit\n2\tfruit, food\n"))
    out = tmp_path / "again.tsv"
    dump_synsets(inv, out)
    assert load_synsets(out) == inv


@pytest.mark.parametrize("text, lineno", [
    ("1\t3\ta, b\n", 1),
    ("1\ta\n2\tx\ty\tz\n", 2),
    ("1\tn\ta\n", 1),
    ("1\ta, a#2\n", 1),
    ("1\ta#1\n2\tb\n", 2),
    ("1\ta\n1\tb\n", 2),
    ("1\t \n", 1),
])
def test_malformed_synset_lines(write, text, lineno):
    with pytest.raises(InputError) as err:
        load_synsets(write("s.tsv", text))
    assert err.value.lineno == lineno


def test_sense_in_two_synsets_rejected(write):
    with pytest.raises(InputError):
        load_synsets(write("s.tsv", "1\ta#1\n2\ta#1, b#1\n"))


def test_missing_file_names_path(tmp_path):
    path = tmp_path / "absent.tsv"
    with pytest.raises(InputError, match="absent.tsv"):
        load_synsets(path)


def test_load_isa_cherry_relation(write):
    r = load_isa(write("r.tsv", "cherry\tcolor\ncherry\tfruit\n"), min_count=1)
    assert set(r) == {("cherry", "color"), ("cherry", "fruit")}


def test_load_isa_threshold(write):
    r = load_isa(write("r.tsv", "a\tb\t99\nc\td\t100\n"), min_count=100)
    assert ("a", "b") not in r
    assert r.counts == {("c", "d"): 100}
    assert r.dropped_below_min_count == 1


def test_load_isa_duplicates_sum(write):
    r = load_isa(write("r.tsv", "a\tb\n# comment\na\tb\nA\tB\n"))
    assert r.counts == {("a", "b"): 3}


def test_load_isa_drops_self_loops(write):
    r = load_isa(write("r.tsv", "a\tA\na\tb\n"))
    assert r.counts == {("a", "b"): 1}
    assert r.dropped_self_loops == 1


@pytest.mark.parametrize("text", ["a\tb\tmany\n", "a\tb\t0\n", "a\n", "a\tb\t1\tx\n"])
def test_load_isa_errors_carry_line(write, text):
    with pytest.raises(InputError) as err:
        load_isa(write("r.tsv", "ok\tfine\n" + text))
    assert err.value.lineno == 2


@given(st.lists(
    st.tuples(st.sampled_from("abcde"), st.sampled_from("abcde"), st.integers(1, 5)),
    max_size=30,
))
def test_isa_min_count_one_keeps_every_pair(rows):
    r = IsARelation.from_pairs(rows, min_count=1)
    expected = {}
    for hypo, hyper, c in rows:
        if hypo != hyper:
            expected[hypo, hyper] = expected.get((hypo, hyper), 0) + c
    assert r.counts == expected
    assert r.total_count <= sum(c for _, _, c in rows)


def test_load_gold(write):
    g = load_gold(write("g.tsv", "apple#2\tfruit#1\n"))
    assert g.edges == {(Sense("apple", 2), Sense("fruit", 1))}
    assert g.nodes == {Sense("apple", 2), Sense("fruit", 1)}


def test_load_gold_empty(write):
    g = load_gold(write("g.tsv", ""))
    assert len(g) == 0 and not g.nodes


def test_load_gold_deduplicates(write):
    lines = [f"w{i}#1\tw{i + 1}#1" for i in range(8)]
    lines += lines[:2]
    g = load_gold(write("g.tsv", "\n".join(lines) + "\n"))
    assert len(g) == 8


def test_load_gold_requires_sense_suffix(write):
    with pytest.raises(InputError) as err:
        load_gold(write("g.tsv", "a#1\tb#1\napple\tfruit#1\n"))
    assert err.value.lineno == 2


def test_write_taxonomy_is_sorted(tmp_path):
    edges = [(Sense("b", 1), Sense("a", 1)), (Sense("a", 2), Sense("c", 1)), (Sense("a", 10), Sense("c", 1))]
    path = tmp_path / "out.tsv"
    assert write_taxonomy(SenseTaxonomy(edges), path) == 3
    assert path.read_text().splitlines() == ["a#2\tc#1", "a#10\tc#1", "b#1\ta#1"]
    assert load_gold(path) == SenseTaxonomy(edges)


def test_inventory_rejects_duplicate_ids():
    s = Synset("1", (Sense("a", 1),))
    with pytest.raises(ValueError):
        SenseInventory([s, Synset("1", (Sense("b", 1),))])
