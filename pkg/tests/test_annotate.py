from __future__ import annotations

import gzip

import pytest
from hypothesis import given
from hypothesis import strategies as st

from issuelens.annotate import (
    DELIM,
    PENN_TAGS,
    HypernymLexicon,
    LexiconNotLoadedError,
    PerceptronTagger,
    SidecarError,
    SidecarTagger,
    StreamError,
    TaggedToken,
    VbgRole,
    classify_vbg_role,
    hypernym_paths,
    lemmatize,
    parse_tagged_stream,
    pos_tag,
    read_sidecar,
    render_tagged_stream,
    sanitize_word,
    vbg_roles,
)
from issuelens.textprep import tokenize


# ---------------------------------------------------------------- tagging

def test_passive_example_tags(tagger):
    tagged = pos_tag(["the", "gate", "was", "opened"], tagger)
    assert [t.pos for t in tagged] == ["DT", "NN", "VBD", "VBN"]
    assert tagged[2].lemma == "be" and tagged[3].lemma == "open"


def test_gerund_first_token(tagger):
    assert pos_tag(["Powering", "down", "the", "cab", "radio"], tagger)[0].pos == "VBG"


def test_single_noun(tagger):
    assert pos_tag(["disconnection"], tagger)[0].pos == "NN"


def test_empty_input_rejected(tagger):
    with pytest.raises(ValueError):
        pos_tag([], tagger)


words = st.text(alphabet=st.characters(whitelist_categories=("L", "N", "P")), min_size=1,
                max_size=12)


@given(st.lists(words, min_size=1, max_size=15))
def test_tags_closed_set_and_deterministic(tagger, tokens):
    first = pos_tag(tokens, tagger)
    assert first == pos_tag(tokens, tagger)
    assert all(t.pos in PENN_TAGS and t.lemma for t in first)


def test_weights_round_trip(tagger, tmp_path):
    path = tmp_path / "w.json.gz"
    tagger.save(path)
    clone = PerceptronTagger.load(path)
    sent = tokenize("The engine returns up to 10 fired events while logging is enabled.")
    assert clone.tag(sent) == tagger.tag(sent)


def test_training_learns_toy_corpus():
    data = [[("the", "DT"), ("dog", "NN"), ("runs", "VBZ")],
            [("a", "DT"), ("cat", "NN"), ("sleeps", "VBZ")]] * 5
    t = PerceptronTagger()
    t.train(data, n_iter=5)
    assert t.tag(["the", "cat", "runs"]) == ["DT", "NN", "VBZ"]


# ---------------------------------------------------------------- lemmas

@pytest.mark.parametrize("word,pos,lemma", [
    ("was", "VBD", "be"), ("been", "VBN", "be"), ("is", "VBZ", "be"), ("'s", "VBZ", "be"),
    ("opened", "VBN", "open"), ("need", "VBP", "need"), ("creating", "VBG", "create"),
    ("using", "VBG", "use"), ("caused", "VBD", "cause"), ("hoping", "VBG", "hope"),
    ("singing", "VBG", "sing"), ("stopped", "VBD", "stop"), ("ran", "VBD", "run"),
    ("analyses", "NNS", "analysis"), ("deployments", "NNS", "deployment"),
    ("children", "NNS", "child"), ("Issues", "NNS", "issue"), ("returns", "VBZ", "return"),
])
def test_lemmas(word, pos, lemma):
    assert lemmatize(word, pos) == lemma


def test_unknown_word_lemma_is_lowercase():
    assert lemmatize("Wss4jSecurityInterceptor", "NNP") == "wss4jsecurityinterceptor"


# ---------------------------------------------------------------- stream

def test_render_examples():
    assert render_tagged_stream([TaggedToken("gate", "NN", "gate")]) == "gate°NN°gate"
    pair = [TaggedToken("was", "VBD", "be"), TaggedToken("opened", "VBN", "open")]
    assert render_tagged_stream(pair) == "was°VBD°be opened°VBN°open"


def test_render_rejects_delimiter():
    with pytest.raises(StreamError):
        render_tagged_stream([TaggedToken("a°b", "NN", "a")])
    with pytest.raises(StreamError):
        parse_tagged_stream("gate°NN")


token_parts = st.text(alphabet=st.characters(blacklist_characters=DELIM,
                                             blacklist_categories=("Zs", "Zl", "Zp", "Cc")),
                      min_size=1, max_size=8)
tagged_tokens = st.builds(TaggedToken, token_parts, st.sampled_from(sorted(PENN_TAGS)), token_parts)


@given(st.lists(tagged_tokens, max_size=20))
def test_stream_round_trip(tokens):
    tokens = [t for t in tokens if not any(ch.isspace() for ch in t.word + t.lemma)]
    rendered = render_tagged_stream(tokens)
    assert rendered.count(DELIM) == 2 * len(tokens)
    assert parse_tagged_stream(rendered) == tokens


@given(st.text(max_size=10))
def test_sanitized_words_encode(word):
    clean = sanitize_word(word)
    assert render_tagged_stream([TaggedToken(clean, "NN", "x")])


# ---------------------------------------------------------------- hypernyms

def test_disconnection_is_action_like(hypernyms):
    paths = hypernym_paths("disconnection", hypernyms)
    assert any({"ACT", "EVENT"} & set(p) for p in paths)
    assert hypernyms.is_action_like("Disconnection")


def test_table_has_non_action_sense(hypernyms):
    paths = hypernym_paths("table", hypernyms)
    furniture = [p for p in paths if "FURNITURE" in p]
    assert furniture and not any({"EVENT", "PROCESS", "ACT"} & set(p) for p in furniture)


def test_unknown_lemma(hypernyms):
    assert hypernym_paths("zzxqv", hypernyms) == frozenset()


def test_lexicon_required():
    with pytest.raises(LexiconNotLoadedError):
        hypernym_paths("table", None)


def test_paths_end_at_root(hypernyms):
    for lemma in ("disconnection", "deployment", "termination", "city", "table"):
        for p in hypernym_paths(lemma, hypernyms):
            # the first element names the synset, which may differ from the lemma
            assert len(p) >= 2 and p[-1] == "ENTITY" and all(x.isupper() for x in p if x.isalpha())


def test_tsv_round_trip(tmp_path):
    lex = HypernymLexicon({"run": [("RUN", "ACT", "EVENT", "ENTITY")],
                           "city": [("CITY", "REGION", "LOCATION", "ENTITY")]})
    path = tmp_path / "h.tsv.gz"
    lex.to_tsv(path)
    back = HypernymLexicon.from_tsv(path)
    assert dict(back.items()) == dict(lex.items())
    assert gzip.decompress(path.read_bytes()).decode().count("\n") == 2


def test_wordnet_loader_on_tiny_files(tmp_path):
    # two-synset toy database in the data.noun / index.noun layout
    (tmp_path / "data.noun").write_text(
        "00000001 03 n 01 entity 0 000 | root\n"
        "00000002 04 n 01 cutoff 0 001 @ 00000001 n 0000 | a cut\n")
    (tmp_path / "index.noun").write_text("cutoff n 1 1 @ 1 0 00000002\n")
    lex = HypernymLexicon.from_wordnet(tmp_path)
    assert lex.hypernym_paths("cutoff") == frozenset({("CUTOFF", "ENTITY")})


# ---------------------------------------------------------------- VBG roles

def tt(sentence):
    from issuelens.annotate import default_tagger
    return pos_tag(tokenize(sentence), default_tagger())


def role_of(sentence, word):
    tagged = tt(sentence)
    index = [t.word for t in tagged].index(word)
    return classify_vbg_role(tagged, index)


def test_roles_of_examples():
    assert role_of("the service is running", "running") is VbgRole.ROOT_VERB
    assert role_of("Powering down the cab radio shall cause the disconnection", "Powering") \
        is VbgRole.NOMINAL
    assert role_of("the running water stopped", "running") is not VbgRole.NOMINAL
    assert role_of("logging should be enabled by editing the file", "editing") \
        is VbgRole.ADVERBIAL_MODIFIER


def test_role_errors():
    tagged = tt("the gate was opened")
    with pytest.raises(ValueError):
        classify_vbg_role(tagged, 1)
    with pytest.raises(IndexError):
        classify_vbg_role(tagged, 10)


@given(st.lists(st.sampled_from(sorted(PENN_TAGS)), min_size=1, max_size=12))
def test_every_vbg_gets_one_role(tag_seq):
    tagged = [TaggedToken(f"w{i}", t, "be" if t.startswith("VB") and i % 3 == 0 else f"w{i}")
              for i, t in enumerate(tag_seq)]
    roles = vbg_roles(tagged)
    assert set(roles) == {i for i, t in enumerate(tag_seq) if t == "VBG"}
    assert all(isinstance(r, VbgRole) for r in roles.values())


# ---------------------------------------------------------------- sidecar

def test_sidecar_tagger(tmp_path):
    path = tmp_path / "s.tsv"
    path.write_text("the\tDT\ngate\tNN\nwas\tVBD\topened\n\nok\tUH\n")
    sents = read_sidecar(path)
    assert len(sents) == 2 and sents[0][2].lemma == "opened"
    assert sents[0][1].lemma == "gate"
    sc = SidecarTagger(sents)
    assert sc.tag(["the", "gate", "was"]) == ["DT", "NN", "VBD"]
    with pytest.raises(SidecarError):
        sc.tag(["unknown"])


def test_sidecar_malformed(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("just-a-word\n")
    with pytest.raises(SidecarError, match=":1:"):
        read_sidecar(path)
