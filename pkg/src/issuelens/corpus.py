"""Typed issue corpus: loading, field histories, snapshots and selections."""

from __future__ import annotations

import json
import logging
import random
import re
from collections import Counter
from dataclasses import dataclass, field, fields, replace
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator

import jsonschema

log = logging.getLogger(__name__)


class CorpusError(Exception):
    """Raised for unreadable inputs and strict-mode schema failures."""


class UnknownTrackerError(KeyError):
    pass


@dataclass(frozen=True)
class Comment:
    id: str
    author: str
    created: datetime
    body: str = ""


@dataclass(frozen=True)
class ChangeItem:
    field: str
    from_value: str | None = None
    to_value: str | None = None


@dataclass(frozen=True)
class ChangeEvent:
    id: str
    author: str
    created: datetime
    items: tuple[ChangeItem, ...]


@dataclass(frozen=True)
class IssueLink:
    link_type: str
    direction: str  # "outward" | "inward", relative to the issue holding it
    source_key: str
    target_key: str


@dataclass(frozen=True)
class Issue:
    key: str
    tracker: str
    project: str = ""
    summary: str = ""
    description: str = ""
    issue_type: str = ""
    status: str = ""
    priority: str | None = None
    resolution: str | None = None
    created: datetime | None = None
    resolved: datetime | None = None
    labels: frozenset[str] = frozenset()
    environment: str | None = None
    versions_affected: frozenset[str] = frozenset()
    versions_fixed: frozenset[str] = frozenset()
    creator: str = ""
    reporter: str = ""
    assignee: str | None = None
    components: frozenset[str] = frozenset()
    parent: str | None = None
    comments: tuple[Comment, ...] = ()
    changelog: tuple[ChangeEvent, ...] = ()
    links: tuple[IssueLink, ...] = ()


@dataclass(frozen=True)
class IssueSnapshot:
    key: str
    tracker: str
    as_of: datetime
    project: str = ""
    summary: str = ""
    description: str = ""
    issue_type: str = ""
    status: str = ""
    priority: str | None = None
    resolution: str | None = None
    created: datetime | None = None
    resolved: datetime | None = None
    labels: frozenset[str] = frozenset()
    environment: str | None = None
    versions_affected: frozenset[str] = frozenset()
    versions_fixed: frozenset[str] = frozenset()
    creator: str = ""
    reporter: str = ""
    assignee: str | None = None
    components: frozenset[str] = frozenset()
    parent: str | None = None
    comments: tuple[Comment, ...] = ()
    links: tuple[IssueLink, ...] = ()


# Scalar and free-text fields that have a reconstructable history.
SCALAR_FIELDS = ("summary", "description", "issue_type", "status", "priority",
                 "resolution", "environment", "assignee", "reporter", "parent",
                 "project")
# Set-valued fields; Jira logs each added or removed member as its own item,
# except labels which are logged as whole space-separated lists.
SET_FIELDS = ("labels", "versions_fixed", "versions_affected", "components")

_FIELD_ALIASES = {
    "issuetype": "issue_type",
    "type": "issue_type",
    "fixversion": "versions_fixed",
    "fixversions": "versions_fixed",
    "version": "versions_affected",
    "versions": "versions_affected",
    "affectsversion": "versions_affected",
    "affectsversions": "versions_affected",
    "component": "components",
    "components": "components",
    "label": "labels",
    "labels": "labels",
    "parentlink": "parent",
}


def canonical_field(name: str) -> str | None:
    """Map a changelog field name ("issuetype", "Fix Version") to an Issue attribute."""
    squashed = re.sub(r"[\s_/-]+", "", name).lower()
    if squashed in _FIELD_ALIASES:
        return _FIELD_ALIASES[squashed]
    for f in SCALAR_FIELDS:
        if f.replace("_", "") == squashed:
            return f
    return None


# ---------------------------------------------------------------- timestamps

_TS = re.compile(
    r"^(\d{4}-\d{2}-\d{2})[T ](\d{2}:\d{2}(?::\d{2})?)(\.\d+)?\s*(Z|[+-]\d{2}:?\d{2})$")


def parse_timestamp(value: str) -> datetime:
    """Parse ISO-8601 timestamps with a mandatory zone.

    Accepts the Jira REST form ``2021-03-04T10:11:12.000+0000`` as well as
    ``Z`` and ``+hh:mm`` offsets.
    """
    m = _TS.match(value.strip())
    if not m:
        raise ValueError(f"not an ISO-8601 timestamp with zone: {value!r}")
    date, clock, frac, zone = m.groups()
    if zone == "Z":
        zone = "+00:00"
    elif ":" not in zone:
        zone = zone[:3] + ":" + zone[3:]
    frac = (frac or "")[:7].ljust(7, "0") if frac else ""
    return datetime.fromisoformat(f"{date}T{clock}{frac}{zone}")


def format_timestamp(value: datetime | None) -> str:
    return "" if value is None else value.isoformat()


# ---------------------------------------------------------------- loading

def load_schema() -> dict:
    ref = resources.files("issuelens").joinpath("data/issue.schema.json")
    return json.loads(ref.read_text(encoding="utf-8"))


_VALIDATOR: jsonschema.Draft202012Validator | None = None


def _validator() -> jsonschema.Draft202012Validator:
    global _VALIDATOR
    if _VALIDATOR is None:
        _VALIDATOR = jsonschema.Draft202012Validator(load_schema())
    return _VALIDATOR


def _ts_or_none(value):
    return None if value in (None, "") else parse_timestamp(value)


def issue_from_record(rec: dict) -> Issue:
    """Build an Issue from one export record (already schema-valid)."""
    key = rec["key"]
    comments = sorted(
        (Comment(str(c["id"]), c.get("author") or "", parse_timestamp(c["created"]), c.get("body") or "")
         for c in rec.get("comments", [])),
        key=lambda c: c.created)
    events = []
    for ev in rec.get("changelog", []):
        items = tuple(ChangeItem(it["field"], it.get("fromString"), it.get("toString"))
                      for it in ev["items"])
        events.append(ChangeEvent(str(ev["id"]), ev.get("author") or "", parse_timestamp(ev["created"]), items))
    events.sort(key=lambda e: e.created)
    links = []
    for ln in rec.get("links", []):
        other = ln["otherKey"]
        if other == key:
            log.warning("%s: dropping self-link of type %s", key, ln["type"])
            continue
        if ln["direction"] == "outward":
            links.append(IssueLink(ln["type"], "outward", key, other))
        else:
            links.append(IssueLink(ln["type"], "inward", other, key))
    return Issue(
        key=key,
        tracker=rec["tracker"],
        project=rec.get("project") or "",
        summary=rec.get("summary") or "",
        description=rec.get("description") or "",
        issue_type=rec.get("issue_type") or "",
        status=rec.get("status") or "",
        priority=rec.get("priority"),
        resolution=rec.get("resolution"),
        created=_ts_or_none(rec.get("created")),
        resolved=_ts_or_none(rec.get("resolved")),
        labels=frozenset(rec.get("labels") or ()),
        environment=rec.get("environment"),
        versions_affected=frozenset(rec.get("versions_affected") or ()),
        versions_fixed=frozenset(rec.get("versions_fixed") or ()),
        creator=rec.get("creator") or "",
        reporter=rec.get("reporter") or "",
        assignee=rec.get("assignee"),
        components=frozenset(rec.get("components") or ()),
        parent=rec.get("parent"),
        comments=tuple(comments),
        changelog=tuple(events),
        links=tuple(links),
    )


def issue_to_record(issue: Issue) -> dict:
    """Inverse of issue_from_record (links are written from this issue's side)."""
    def other(link: IssueLink) -> str:
        return link.target_key if link.direction == "outward" else link.source_key

    return {
        "key": issue.key,
        "tracker": issue.tracker,
        "project": issue.project,
        "summary": issue.summary,
        "description": issue.description,
        "issue_type": issue.issue_type,
        "status": issue.status,
        "priority": issue.priority,
        "resolution": issue.resolution,
        "created": format_timestamp(issue.created) or None,
        "resolved": format_timestamp(issue.resolved) or None,
        "labels": sorted(issue.labels),
        "environment": issue.environment,
        "versions_affected": sorted(issue.versions_affected),
        "versions_fixed": sorted(issue.versions_fixed),
        "creator": issue.creator,
        "reporter": issue.reporter,
        "assignee": issue.assignee,
        "components": sorted(issue.components),
        "parent": issue.parent,
        "comments": [{"id": c.id, "author": c.author, "created": c.created.isoformat(), "body": c.body}
                     for c in issue.comments],
        "changelog": [{"id": e.id, "author": e.author, "created": e.created.isoformat(),
                       "items": [{"field": i.field, "fromString": i.from_value, "toString": i.to_value}
                                 for i in e.items]}
                      for e in issue.changelog],
        "links": [{"type": ln.link_type, "direction": ln.direction, "otherKey": other(ln)}
                  for ln in issue.links],
    }


@dataclass(frozen=True)
class Corpus:
    """Immutable collection of issues keyed by issue key."""

    issues: tuple[Issue, ...]
    warnings: tuple[str, ...] = ()
    cleaning: tuple[tuple[str, int], ...] = ()
    _by_key: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        by_key = {}
        for issue in self.issues:
            if issue.key in by_key:
                raise CorpusError(f"duplicate issue key {issue.key}")
            by_key[issue.key] = issue
        object.__setattr__(self, "_by_key", by_key)

    def __len__(self) -> int:
        return len(self.issues)

    def __iter__(self) -> Iterator[Issue]:
        return iter(self.issues)

    def __contains__(self, key: str) -> bool:
        return key in self._by_key

    def get(self, key: str) -> Issue | None:
        return self._by_key.get(key)

    def __getitem__(self, key: str) -> Issue:
        return self._by_key[key]

    @property
    def trackers(self) -> list[str]:
        return sorted({i.tracker for i in self.issues})

    def by_tracker(self, tracker: str) -> list[Issue]:
        return [i for i in self.issues if i.tracker == tracker]

    def removed(self) -> dict[str, int]:
        return dict(self.cleaning)


def _iter_input_files(path: Path) -> list[Path]:
    if path.is_dir():
        return sorted(p for p in path.rglob("*") if p.is_file() and p.suffix in (".jsonl", ".ndjson", ".json"))
    return [path]


def load_corpus(path: str | Path, strict: bool = False) -> Corpus:
    """Load newline-delimited issue records from a file or a directory.

    Invalid records are skipped with a warning, or raise CorpusError when
    ``strict`` is set. The error names the file and 1-based record line.
    """
    path = Path(path)
    if not path.exists():
        raise CorpusError(f"input path does not exist: {path}")
    validator = _validator()
    issues: list[Issue] = []
    warnings: list[str] = []
    seen: set[str] = set()
    for file in _iter_input_files(path):
        try:
            fh = open(file, encoding="utf-8")
        except OSError as exc:
            raise CorpusError(f"cannot read {file}: {exc}") from exc
        with fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                problem = None
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError as exc:
                    problem = f"invalid JSON ({exc.msg})"
                else:
                    errors = sorted(validator.iter_errors(rec), key=lambda e: list(e.path))
                    if errors:
                        err = errors[0]
                        where = "/".join(str(p) for p in err.path) or "<record>"
                        problem = f"{where}: {err.message}"
                    else:
                        try:
                            issue = issue_from_record(rec)
                        except ValueError as exc:
                            problem = str(exc)
                        else:
                            if issue.key in seen:
                                problem = f"duplicate key {issue.key}"
                if problem is not None:
                    msg = f"{file}: record {lineno}: {problem}"
                    if strict:
                        raise CorpusError(msg)
                    log.warning(msg)
                    warnings.append(msg)
                    continue
                seen.add(issue.key)
                issues.append(issue)
    issues.sort(key=lambda i: (i.tracker, i.key))
    return Corpus(tuple(issues), tuple(warnings))


def write_corpus(issues: Iterable[Issue], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for issue in issues:
            fh.write(json.dumps(issue_to_record(issue), sort_keys=True) + "\n")


# ---------------------------------------------------------------- histories

@dataclass(frozen=True)
class HistoryInconsistency:
    key: str
    field: str
    replayed: str | None
    stored: str | None


def _field_items(issue: Issue, attr: str) -> list[tuple[datetime, ChangeItem]]:
    return [(ev.created, item) for ev in issue.changelog for item in ev.items
            if canonical_field(item.field) == attr]


def _same(a: str | None, b: str | None) -> bool:
    return (a or "") == (b or "")


def reconstruct_field_history(issue: Issue, field_name: str,
                              diagnostics: list | None = None) -> list[tuple[datetime, str | None]]:
    """Every value a scalar field has held, oldest first.

    Entry 0 is the creation-time value: the ``from`` side of the earliest
    change, or the stored value if the field never changed. When the last
    replayed value disagrees with the stored one the history is still
    returned and a HistoryInconsistency is appended to ``diagnostics``.
    """
    attr = canonical_field(field_name) or field_name
    if attr not in SCALAR_FIELDS:
        raise ValueError(f"unknown or non-scalar field: {field_name!r}")
    if issue.created is None:
        raise ValueError(f"{issue.key} has no created timestamp")
    stored = getattr(issue, attr)
    changes = _field_items(issue, attr)
    if not changes:
        return [(issue.created, stored)]
    history = [(issue.created, changes[0][1].from_value)]
    history.extend((ts, item.to_value) for ts, item in changes)
    if not _same(history[-1][1], stored):
        note = HistoryInconsistency(issue.key, attr, history[-1][1], stored)
        log.debug("inconsistent history: %s", note)
        if diagnostics is not None:
            diagnostics.append(note)
    return history


def history_is_consistent(issue: Issue, field_name: str) -> bool:
    notes: list = []
    reconstruct_field_history(issue, field_name, notes)
    return not notes


def _split_labels(value: str | None) -> set[str]:
    return set((value or "").split())


def _set_value_at(issue: Issue, attr: str, t: datetime) -> frozenset[str]:
    # undo, newest first, every change made after t
    value = set(getattr(issue, attr))
    for ts, item in reversed(_field_items(issue, attr)):
        if ts <= t:
            break
        if attr == "labels":
            value = _split_labels(item.from_value)
            continue
        if item.to_value:
            value.discard(item.to_value)
        if item.from_value:
            value.add(item.from_value)
    return frozenset(value)


def snapshot_at(issue: Issue, t: datetime) -> IssueSnapshot:
    """State of ``issue`` as of ``t`` (changes made exactly at ``t`` included).

    ``resolved`` is not tracked by Jira changelogs and is carried unchanged.
    """
    if issue.created is None:
        raise ValueError(f"{issue.key} has no created timestamp")
    if t < issue.created:
        raise ValueError(f"{issue.key}: {t.isoformat()} is before creation {issue.created.isoformat()}")
    values = {}
    for attr in SCALAR_FIELDS:
        value = None
        for ts, v in reconstruct_field_history(issue, attr):
            if ts > t:
                break
            value = v
        if attr in ("summary", "description", "issue_type", "status", "project", "reporter"):
            value = value or ""
        values[attr] = value
    for attr in SET_FIELDS:
        values[attr] = _set_value_at(issue, attr, t)
    return IssueSnapshot(
        key=issue.key, tracker=issue.tracker, as_of=t,
        created=issue.created, resolved=issue.resolved, creator=issue.creator,
        comments=tuple(c for c in issue.comments if c.created <= t),
        links=issue.links, **values)


def current_snapshot(issue: Issue, t: datetime) -> IssueSnapshot:
    """Stored state packaged as a snapshot; used to compare against replay."""
    data = {f.name: getattr(issue, f.name) for f in fields(IssueSnapshot)
            if f.name not in ("as_of",) and hasattr(issue, f.name)}
    return IssueSnapshot(as_of=t, **data)


# ---------------------------------------------------------------- selections

def select_user_stories(corpus: Corpus, tracker: str,
                        case_sensitive: bool = False) -> list[tuple[str, str]]:
    """(key, description) of Story issues whose description contains "as a"."""
    if tracker not in corpus.trackers:
        raise UnknownTrackerError(tracker)
    rows = []
    for issue in corpus.by_tracker(tracker):
        if issue.issue_type.lower() != "story":
            continue
        desc = issue.description
        hit = "as a" in desc if case_sensitive else "as a" in desc.lower()
        if hit:
            rows.append((issue.key, desc))
    return sorted(rows)


REMOVAL_REASONS = ("missing created", "impossible dates", "empty description")


def _removal_reason(issue: Issue) -> str | None:
    if issue.created is None:
        return "missing created"
    if issue.resolved is not None and issue.resolved < issue.created:
        return "impossible dates"
    if not issue.description.strip():
        return "empty description"
    return None


def sample_and_clean(corpus: Corpus, n_per_tracker: int, seed: int = 42) -> Corpus:
    """Seeded sample of up to ``n_per_tracker`` issues per tracker, then cleaned.

    Keys are sorted before a per-tracker ``random.Random`` shuffle so the
    sample only depends on (keys, seed). Removal counts per reason are kept
    on the returned corpus (``Corpus.removed()``).
    """
    if n_per_tracker < 1:
        raise ValueError("n_per_tracker must be >= 1")
    kept = []
    removed = Counter({reason: 0 for reason in REMOVAL_REASONS})
    for tracker in corpus.trackers:
        issues = sorted(corpus.by_tracker(tracker), key=lambda i: i.key)
        rng = random.Random(f"{seed}:{tracker}")
        rng.shuffle(issues)
        for issue in issues[:n_per_tracker]:
            reason = _removal_reason(issue)
            if reason:
                removed[reason] += 1
            else:
                kept.append(issue)
    kept.sort(key=lambda i: (i.tracker, i.key))
    return Corpus(tuple(kept), corpus.warnings, tuple((r, removed[r]) for r in REMOVAL_REASONS))


@dataclass(frozen=True)
class DescriptionVersion:
    key: str
    version: int
    timestamp: datetime
    text: str


def select_evolved_descriptions(corpus: Corpus) -> list[DescriptionVersion]:
    """One row per description version of issues whose description changed."""
    rows = []
    for issue in sorted(corpus, key=lambda i: i.key):
        if issue.created is None or not _field_items(issue, "description"):
            continue
        history = reconstruct_field_history(issue, "description")
        rows.extend(DescriptionVersion(issue.key, n, ts, text or "")
                    for n, (ts, text) in enumerate(history))
    return rows


@dataclass
class LinkSelection:
    records: list[tuple[IssueLink, Issue, Issue]]
    dangling: int = 0
    duplicates: int = 0

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


def select_linked_issues(corpus: Corpus, year: int) -> LinkSelection:
    """Links whose source issue was created in ``year`` (UTC).

    Both endpoints must be in the corpus; links to missing issues are
    counted as dangling. The copies Jira keeps on both ends of a link
    collapse to one record per (type, unordered pair).
    """
    sel = LinkSelection([])
    seen = set()
    for issue in sorted(corpus, key=lambda i: i.key):
        for link in issue.links:
            source = corpus.get(link.source_key)
            target = corpus.get(link.target_key)
            if source is None or target is None:
                sel.dangling += 1
                continue
            if source.created is None or source.created.astimezone(timezone.utc).year != year:
                continue
            ident = (link.link_type, frozenset((link.source_key, link.target_key)))
            if ident in seen:
                sel.duplicates += 1
                continue
            seen.add(ident)
            sel.records.append((replace(link, direction="outward"), source, target))
    return sel


# ---------------------------------------------------------------- statistics

def corpus_statistics(corpus: Corpus) -> dict:
    per_tracker: dict[str, dict] = {}
    for tracker in corpus.trackers:
        issues = corpus.by_tracker(tracker)
        types = Counter(i.issue_type or "<none>" for i in issues)
        per_tracker[tracker] = {
            "issues": len(issues),
            "issue_types": dict(sorted(types.items())),
            "comments": sum(len(i.comments) for i in issues),
            "change_events": sum(len(i.changelog) for i in issues),
            "links": sum(len(i.links) for i in issues),
        }
    stats = {
        "issues": len(corpus),
        "trackers": per_tracker,
        "warnings": len(corpus.warnings),
    }
    if corpus.cleaning:
        stats["removed"] = corpus.removed()
    return stats

