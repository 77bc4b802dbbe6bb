from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from issuelens.textprep import (
    flag_overlong,
    split_sentences,
    strip_markup,
    tokenize,
    tokenize_spans,
)

prose = st.text(alphabet=st.sampled_from(list("abcdefgh XYZ.,!?;:-'()\n0123")), max_size=120)
markup_bits = st.sampled_from([
    "{code}x = 1{code}", "{noformat}log line{noformat}", "https://example.org/a?b=1",
    "!screen.png!", "h2. Title\n", "||a||b||\n|1|2|\n", "```\nfenced\n```", "www.example.com",
])
mixed = st.lists(st.one_of(prose, markup_bits), max_size=6).map(" ".join)


def test_code_block_removed():
    clean = strip_markup("See {code}x=1{code} for details")
    assert clean.text == "See  for details"
    assert [r.kind for r in clean.removed_regions] == ["code_block"]


def test_url_removed():
    clean = strip_markup("Docs at https://example.org/a")
    assert clean.text == "Docs at "
    assert [r.kind for r in clean.removed_regions] == ["url"]


def test_plain_prose_unchanged():
    clean = strip_markup("Plain words, nothing else.")
    assert clean.text == "Plain words, nothing else." and clean.removed_regions == ()


def test_other_markup_kinds():
    raw = "h1. Heading\n!shot.png|thumbnail! and {noformat}raw{noformat}\n||a||b||"
    kinds = {r.kind for r in strip_markup(raw).removed_regions}
    assert {"header_markup", "image_ref", "noformat_block", "table_markup"} <= kinds


def test_unclosed_code_degrades_to_prose():
    assert "{code}" in strip_markup("broken {code} never closed").text


@given(mixed)
def test_strip_is_idempotent(raw):
    once = strip_markup(raw)
    assert strip_markup(once.text).removed_regions == ()


@given(mixed)
def test_regions_refer_to_original(raw):
    clean = strip_markup(raw)
    spans = sorted((r.start, r.end) for r in clean.removed_regions)
    for (s1, e1), (s2, _) in zip(spans, spans[1:]):
        assert e1 <= s2
    for r in clean.removed_regions:
        assert 0 <= r.start < r.end <= len(raw)
    tables = [r for r in clean.removed_regions if r.kind == "table_markup"]
    for i, ch in enumerate(clean.text):
        src = clean.source_index[i]
        # table sigils become a single space so cells stay separate words
        assert raw[src] == ch or (ch == " " and any(r.start <= src < r.end for r in tables))


def test_two_sentences():
    assert [s.text for s in split_sentences("It fails. Restart helps.")] == [
        "It fails.", "Restart helps."]


def test_version_number_does_not_split():
    sents = split_sentences("See v2.1. It fails.")
    assert [s.text for s in sents] == ["See v2.1.", "It fails."]


def test_abbreviation_guard():
    assert len(split_sentences("Use a guard, e.g. a lock. Then retry.")) == 2
    assert len(split_sentences("Use a guard, e.g. a lock.", abbreviations=frozenset())) == 2


def test_empty_text():
    assert split_sentences("") == [] and split_sentences("   \n") == []


@given(prose)
def test_sentences_partition_text(text):
    sents = split_sentences(text)
    covered = set()
    for s in sents:
        assert text[s.start:s.end] == s.text
        span = set(range(s.start, s.end))
        assert not covered & span
        covered |= span
    assert all(i in covered for i, ch in enumerate(text) if not ch.isspace())


def test_tokenize_examples():
    assert tokenize("the gate was opened.") == ["the", "gate", "was", "opened", "."]
    assert tokenize("up to 10 fired events") == ["up", "to", "10", "fired", "events"]
    assert tokenize("Wss4jSecurityInterceptor") == ["Wss4jSecurityInterceptor"]
    assert tokenize("isn't") == ["is", "n't"]


@given(prose)
def test_token_offsets_round_trip(text):
    for tok in tokenize_spans(text):
        assert text[tok.start:tok.end] == tok.text


def test_overlong_boundaries():
    assert not flag_overlong("x" * 10, 100)
    assert flag_overlong("x" * 101, 100)
    assert not flag_overlong("x" * 100, 100)
