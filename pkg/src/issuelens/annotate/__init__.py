"""POS tags, lemmas, the ``word°TAG°lemma`` stream, hypernyms and VBG roles."""

from .hypernyms import (
    ACTION_LABELS,
    HypernymLexicon,
    LexiconNotLoadedError,
    default_lexicon,
    hypernym_paths,
)
from .lemma import lemmatize
from .sidecar import SidecarError, SidecarTagger, read_sidecar
from .stream import (
    DELIM,
    PENN_TAGS,
    StreamError,
    TaggedToken,
    parse_tagged_stream,
    pos_tag,
    render_tagged_stream,
    sanitize_word,
)
from .tagger import PerceptronTagger, default_tagger
from .vbg import VbgRole, classify_vbg_role, vbg_roles

__all__ = [
    "ACTION_LABELS", "DELIM", "PENN_TAGS", "HypernymLexicon", "LexiconNotLoadedError",
    "PerceptronTagger", "SidecarError", "SidecarTagger", "StreamError", "TaggedToken",
    "VbgRole", "classify_vbg_role", "default_lexicon", "default_tagger", "hypernym_paths",
    "lemmatize", "parse_tagged_stream", "pos_tag", "read_sidecar", "render_tagged_stream",
    "sanitize_word", "vbg_roles",
]
