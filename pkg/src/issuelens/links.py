"""Text similarity of linked issues, summarised per link type.

TF-IDF is computed here. Dense embeddings from any other model are read
from a sidecar file of ``key<TAB>v1 v2 ...`` lines.
"""

from __future__ import annotations

import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import Corpus, Issue, select_linked_issues
from .textprep import strip_markup, tokenize

_PUNCT_ONLY = re.compile(r"^[^\w]+$")


class EmbeddingError(ValueError):
    pass


def document_terms(text: str, stop_words: frozenset[str] = frozenset()) -> list[str]:
    """Markup-stripped, lowercased tokens without pure-punctuation tokens."""
    words = (t.lower() for t in tokenize(strip_markup(text).text))
    return [w for w in words if not _PUNCT_ONLY.match(w) and w not in stop_words]


def issue_text(issue: Issue) -> str:
    return f"{issue.summary} {issue.description}"


@dataclass(frozen=True)
class DocumentVector:
    """Either ``sparse`` (term id -> weight) or ``dense`` is set."""

    sparse: Mapping[int, float] | None = None
    dense: tuple[float, ...] | None = None
    norm: float = field(default=0.0)

    @classmethod
    def from_sparse(cls, weights: Mapping[int, float]) -> "DocumentVector":
        clean = {k: float(v) for k, v in sorted(weights.items()) if v != 0.0}
        return cls(sparse=clean, norm=math.sqrt(math.fsum(v * v for v in clean.values())))

    @classmethod
    def from_dense(cls, values: Sequence[float] | np.ndarray) -> "DocumentVector":
        arr = np.asarray(values, dtype=float)
        if arr.ndim != 1:
            raise EmbeddingError("dense vectors must be one-dimensional")
        dense = tuple(float(x) for x in arr)
        return cls(dense=dense, norm=math.sqrt(math.fsum(x * x for x in dense)))

    @property
    def is_dense(self) -> bool:
        return self.dense is not None


@dataclass(frozen=True)
class TfidfModel:
    vocabulary: Mapping[str, tuple[int, int]]  # term -> (id, document frequency)
    n_documents: int
    stop_words: frozenset[str] = frozenset()

    def idf(self, term: str) -> float:
        _, df = self.vocabulary[term]
        return math.log((1 + self.n_documents) / (1 + df)) + 1.0


def fit_tfidf(documents: Iterable[str], stop_words: Iterable[str] = ()) -> TfidfModel:
    """Vocabulary and document frequencies; term ids follow sorted term order."""
    stop = frozenset(w.lower() for w in stop_words)
    docs = list(documents)
    if not docs or not any(d.strip() for d in docs):
        raise ValueError("cannot fit TF-IDF on an empty corpus")
    df: Counter[str] = Counter()
    for d in docs:
        df.update(set(document_terms(d, stop)))
    vocab = {t: (i, df[t]) for i, t in enumerate(sorted(df))}
    return TfidfModel(vocab, len(docs), stop)


def embed_document(model: TfidfModel, text: str) -> DocumentVector:
    """Raw term count times idf, L2-normalised. Unknown terms are ignored."""
    counts = Counter(t for t in document_terms(text, model.stop_words) if t in model.vocabulary)
    raw = {model.vocabulary[t][0]: c * model.idf(t) for t, c in counts.items()}
    norm = math.sqrt(math.fsum(v * v for v in raw.values()))
    if norm == 0.0:
        return DocumentVector.from_sparse({})
    return DocumentVector.from_sparse({k: v / norm for k, v in raw.items()})


def cosine_similarity(a: DocumentVector, b: DocumentVector) -> float:
    """dot(a, b) / (|a| |b|), clamped to [-1, 1]; 0 if either vector is zero."""
    if a.is_dense != b.is_dense:
        raise EmbeddingError("cannot compare a sparse vector with a dense one")
    if a.is_dense and len(a.dense) != len(b.dense):
        raise EmbeddingError(f"dimension mismatch: {len(a.dense)} vs {len(b.dense)}")
    if a.norm == 0.0 or b.norm == 0.0:
        return 0.0
    if a.is_dense:
        dot = math.fsum(x * y for x, y in zip(a.dense, b.dense))
    else:
        shared = sorted(a.sparse.keys() & b.sparse.keys())
        dot = math.fsum(a.sparse[k] * b.sparse[k] for k in shared)
    return max(-1.0, min(1.0, dot / (a.norm * b.norm)))


@dataclass(frozen=True)
class ExternalEmbeddings:
    vectors: Mapping[str, tuple[float, ...]]
    dim: int
    unmatched: tuple[str, ...] = ()


def load_external_embeddings(path: str | Path, corpus: Corpus | None = None) -> ExternalEmbeddings:
    """Read ``key<TAB>v1 v2 ...`` lines. All vectors must share one length."""
    vectors: dict[str, tuple[float, ...]] = {}
    dim = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            key, tab, rest = line.partition("\t")
            key = key.strip()
            if not tab or not key:
                raise EmbeddingError(f"{path}:{lineno}: expected key<TAB>values")
            try:
                values = np.array([float(x) for x in rest.split()], dtype=float)
            except ValueError:
                raise EmbeddingError(f"{path}:{lineno}: non-numeric value for {key}") from None
            if values.size == 0 or not np.all(np.isfinite(values)):
                raise EmbeddingError(f"{path}:{lineno}: empty or non-finite vector for {key}")
            if dim is None:
                dim = values.size
            elif values.size != dim:
                raise EmbeddingError(
                    f"{path}:{lineno}: {key} has dimension {values.size}, expected {dim}")
            if key in vectors:
                raise EmbeddingError(f"{path}:{lineno}: duplicate key {key}")
            vectors[key] = tuple(float(x) for x in values)
    unmatched = tuple(sorted(k for k in vectors if corpus is not None and k not in corpus))
    return ExternalEmbeddings(vectors, dim or 0, unmatched)


@dataclass(frozen=True)
class LinkSimilarityRecord:
    link_type: str
    source_key: str
    target_key: str
    similarity: float


@dataclass(frozen=True)
class TypeDistribution:
    link_type: str
    count: int
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float


def per_type_distributions(records: Iterable[LinkSimilarityRecord]) -> list[TypeDistribution]:
    """Five-number summary plus mean per link type, highest median first."""
    groups: dict[str, list[float]] = defaultdict(list)
    for r in records:
        groups[r.link_type].append(r.similarity)
    out = []
    for link_type, values in groups.items():
        arr = np.array(values, dtype=float)
        q = np.percentile(arr, [0, 25, 50, 75, 100], method="linear")
        out.append(TypeDistribution(link_type, arr.size, *(float(x) for x in q),
                                    math.fsum(values) / arr.size))
    return sorted(out, key=lambda d: (-d.median, d.link_type))


@dataclass(frozen=True)
class LinkAnalysis:
    provider: str
    records: tuple[LinkSimilarityRecord, ...]
    distributions: tuple[TypeDistribution, ...]
    missing_vector: int = 0  # pairs skipped because an endpoint had no sidecar vector
    dangling: int = 0
    duplicates: int = 0
    unmatched_keys: tuple[str, ...] = ()


PROVIDERS = ("tfidf", "external")
FIT_SCOPES = ("linked", "tracker")


def analyze_links(corpus: Corpus, year: int, provider: str = "tfidf",
                  sidecar: str | Path | None = None, fit_scope: str = "linked",
                  stop_words: Iterable[str] = ()) -> LinkAnalysis:
    """Cosine similarity of every selected link pair, grouped by link type.

    ``fit_scope="linked"`` fits TF-IDF on the issues taking part in the
    selected links; ``"tracker"`` fits on every issue of their trackers.
    """
    if provider not in PROVIDERS:
        raise ValueError(f"unknown provider {provider!r}; choose from {PROVIDERS}")
    if fit_scope not in FIT_SCOPES:
        raise ValueError(f"unknown fit scope {fit_scope!r}; choose from {FIT_SCOPES}")
    if provider == "external" and sidecar is None:
        raise ValueError("the external provider needs an embeddings sidecar file")
    selection = select_linked_issues(corpus, year)
    endpoints = {i.key: i for _, s, t in selection for i in (s, t)}
    records = []
    missing = 0
    unmatched: tuple[str, ...] = ()
    if provider == "tfidf":
        if fit_scope == "linked":
            fit_issues = [endpoints[k] for k in sorted(endpoints)]
        else:
            trackers = {i.tracker for i in endpoints.values()}
            fit_issues = sorted((i for i in corpus if i.tracker in trackers), key=lambda i: i.key)
        vectors = {}
        if fit_issues and any(issue_text(i).strip() for i in fit_issues):
            model = fit_tfidf(issue_text(i) for i in fit_issues)
            vectors = {k: embed_document(model, issue_text(i)) for k, i in sorted(endpoints.items())}
    else:
        ext = load_external_embeddings(sidecar, corpus)
        unmatched = ext.unmatched
        vectors = {k: DocumentVector.from_dense(v) for k, v in ext.vectors.items()}
    for link, source, target in selection:
        a, b = vectors.get(source.key), vectors.get(target.key)
        if a is None or b is None:
            missing += 1
            continue
        records.append(LinkSimilarityRecord(link.link_type, source.key, target.key,
                                            cosine_similarity(a, b)))
    records.sort(key=lambda r: (r.link_type, r.source_key, r.target_key))
    return LinkAnalysis(provider, tuple(records), tuple(per_type_distributions(records)),
                        missing, selection.dangling, selection.duplicates, unmatched)


DISTRIBUTION_HEADER = ("link_type", "count", "min", "q1", "median", "q3", "max", "mean")
RECORD_HEADER = ("link_type", "source", "target", "similarity")


def distribution_rows(dists: Iterable[TypeDistribution]) -> list[tuple]:
    return [(d.link_type, d.count, d.min, d.q1, d.median, d.q3, d.max, d.mean) for d in dists]


def record_rows(records: Iterable[LinkSimilarityRecord]) -> list[tuple]:
    return [(r.link_type, r.source_key, r.target_key, r.similarity) for r in records]
