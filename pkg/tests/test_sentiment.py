from __future__ import annotations

import math
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import T0, at
from issuelens.corpus import ChangeEvent, ChangeItem, Corpus, Issue
from issuelens.sentiment import (
    ANY_POS,
    SentimentLexicon,
    TrendRecord,
    TrendSkipped,
    description_trend,
    load_lexicon_tsv,
    load_lexicon_xml,
    reference_lexicon_path,
    score_polarity,
    score_tokens,
    trend_between,
    trend_report,
    trend_rows,
    trend_statistics,
    write_lexicon_tsv,
)

TOY = SentimentLexicon({("great", ANY_POS): 0.8, ("bad", ANY_POS): -0.6,
                        ("fine", ANY_POS): 0.4}, intensifiers={"very": 1.3})


def test_empty_text():
    assert score_polarity("", TOY) == 0.0


def test_single_entry():
    assert score_polarity("great", TOY) == 0.8


def test_negated_entry():
    assert score_polarity("not great", TOY) == pytest.approx(-0.4, abs=0)


def test_negation_window_is_three_tokens():
    assert score_polarity("not a b great", TOY) == -0.4
    assert score_polarity("not a b c great", TOY) == 0.8


def test_mean_aggregation():
    assert score_polarity("great but bad", TOY) == pytest.approx((0.8 - 0.6) / 2)


def test_intensifier_hits_next_entry_only():
    assert score_polarity("very fine", TOY) == pytest.approx(0.52)
    assert score_polarity("very fine and fine", TOY) == pytest.approx((0.52 + 0.4) / 2)
    assert score_polarity("very great", TOY) == pytest.approx(1.0)  # clamped


def test_unknown_words_are_neutral():
    assert score_polarity("zzz qqq the and", TOY) == 0.0


@given(st.sampled_from(["great", "fine"]), st.sampled_from(["not", "never", "n't", "cannot"]))
def test_negation_sign_rule(word, neg):
    assert score_polarity(f"{neg} {word}", TOY) == -0.5 * TOY.polarity(word)


@given(st.text(max_size=200))
def test_scores_bounded(polarity, text):
    s = score_polarity(text, polarity)
    assert -1.0 <= s <= 1.0 and not math.isnan(s)


@given(st.lists(st.sampled_from(["great", "bad", "fine", "very", "not", "x"]), max_size=25))
def test_token_scores_bounded(tokens):
    assert -1.0 <= score_tokens(tokens, TOY) <= 1.0


@given(st.sampled_from(["It works great.", "This is bad", "fine, very fine", "meh"]),
       st.sampled_from(["https://example.org/great", "http://bad.example.com/x?y=1",
                        "www.fine.io"]))
def test_url_does_not_change_score(text, url):
    assert score_polarity(f"{text} {url}", TOY) == score_polarity(text, TOY)


def test_lexicon_rejects_out_of_range():
    with pytest.raises(ValueError):
        SentimentLexicon({("x", ANY_POS): 1.5})
    with pytest.raises(ValueError):
        SentimentLexicon({}, intensifiers={"very": 0.0})


def test_tsv_round_trip(tmp_path):
    path = tmp_path / "lex.tsv"
    write_lexicon_tsv(TOY, path, header="toy")
    back = load_lexicon_tsv(path)
    assert dict(back.entries) == dict(TOY.entries)
    assert dict(back.intensifiers) == dict(TOY.intensifiers)
    assert back.negations == TOY.negations


def test_tsv_errors(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("great\t*\tnot-a-number\n")
    with pytest.raises(ValueError):
        load_lexicon_tsv(path)


def test_pos_qualified_entries(tagger):
    lex = SentimentLexicon({("light", "JJ"): 0.4, ("light", "NN"): 0.0})
    assert lex.pos_qualified
    assert lex.polarity("light", "JJ") == 0.4 and lex.polarity("light") is None


def test_xml_loader(tmp_path):
    path = tmp_path / "lex.xml"
    path.write_text(
        '<sentiment>\n'
        '<word form="good" pos="JJ" polarity="0.7" intensity="1.0" />\n'
        '<word form="good" pos="JJ" polarity="0.5" intensity="1.0" />\n'
        '<word form="very" pos="RB" polarity="0.2" intensity="1.3" />\n'
        '</sentiment>\n')
    lex = load_lexicon_xml(path)
    assert lex.polarity("good") == pytest.approx(0.6)
    assert lex.intensifiers["very"] == pytest.approx(1.3)


# ---------------------------------------------------------------- trends

def _evolved(key, first, last):
    return Issue(key, "T", description=last, created=T0, changelog=(
        ChangeEvent("e", "u", at(5), (ChangeItem("description", first, last),)),))


def test_trend_is_last_minus_first():
    rec = trend_between("T-1", "bad", "great", TOY)
    assert rec.trend == rec.last_score - rec.first_score == 0.8 - (-0.6)


@given(st.sampled_from(["great", "bad", "not fine", "x", ""]),
       st.sampled_from(["fine", "very bad", "great great", "y"]))
def test_trend_antisymmetry(a, b):
    assert trend_between("k", a, b, TOY).trend == -trend_between("k", b, a, TOY).trend


def test_identical_texts_trend_zero():
    assert description_trend(_evolved("T-1", "great fix", "great fix"), TOY).trend == 0.0


def test_examples_drop(examples, polarity):
    removed_suitable = description_trend(examples["ALPHA-10"], polarity)
    rewritten = description_trend(examples["ALPHA-11"], polarity)
    assert removed_suitable.trend < 0 and rewritten.trend < 0
    assert removed_suitable.trend == pytest.approx(-0.55, abs=1e-9)
    assert rewritten.trend == pytest.approx(-0.8, abs=1e-9)


def test_reference_lexicon_magnitudes(examples):
    path = reference_lexicon_path()
    if path is None:
        pytest.skip("reference XML lexicon not installed")
    lex = load_lexicon_xml(path)
    assert description_trend(examples["ALPHA-10"], lex).trend == pytest.approx(-0.55, abs=0.15)
    assert description_trend(examples["ALPHA-11"], lex).trend == pytest.approx(-0.8, abs=0.15)


def test_skip_reasons():
    with pytest.raises(TrendSkipped, match="no description evolution"):
        description_trend(Issue("T-1", "T", description="x", created=T0), TOY)
    with pytest.raises(TrendSkipped, match="overlong"):
        description_trend(_evolved("T-2", "a " * 50, "b"), TOY, limit=20)


def test_statistics_arithmetic():
    recs = [TrendRecord(f"k{i}", 0.0, t, t, "", "") for i, t in enumerate((-0.5, 0.0, 0.1))]
    stats = trend_statistics(recs)
    assert stats.mean_trend == pytest.approx(-0.4 / 3)
    assert stats.median_trend == 0.0 and stats.count == 3


def test_toward_neutral():
    stats = trend_statistics([TrendRecord("k", 0.6, 0.1, -0.5, "", "")])
    assert stats.fraction_toward_neutral == 1.0


def test_empty_report():
    report = trend_report(Corpus((Issue("T-1", "T", description="x", created=T0),)), TOY)
    assert report.records == () and report.statistics is None
    assert trend_statistics([]) is None


def test_report_over_examples(examples, polarity):
    report = trend_report(examples, polarity)
    keys = [r.issue_key for r in report.records]
    assert keys == sorted(keys) and {"ALPHA-10", "ALPHA-11"} <= set(keys)
    assert trend_rows(report.records)[0][0] == keys[0]
    assert report.statistics.count == len(report.records)


def test_shipped_lexicon_has_notice():
    from issuelens import sentiment
    data = Path(sentiment.__file__).parent / "data" / "sentiment-lexicon.tsv"
    head = data.read_text(encoding="utf-8").split("\n", 8)[:8]
    assert any("PDDL" in line for line in head if line.startswith("#"))
