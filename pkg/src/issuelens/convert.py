"""Map Jira REST issue documents (as found in public Jira dataset dumps) to input records.

Handles the usual REST layout (``fields``, ``changelog.histories``,
``fields.comment.comments`` or a flattened ``fields.comments`` list,
``fields.issuelinks``) and mongoexport's ``{"$date": ...}`` wrappers.
Anything missing becomes null or empty; records are schema-checked by
``load_corpus`` afterwards, not here.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Iterator


def _date(value: Any) -> str | None:
    if isinstance(value, dict) and "$date" in value:
        value = value["$date"]
        if isinstance(value, dict) and "$numberLong" in value:
            value = int(value["$numberLong"])
    if value is None or value == "":
        return None
    if isinstance(value, (int, float)):
        return datetime.fromtimestamp(value / 1000, tz=timezone.utc).isoformat()
    return str(value)


def _name(value: Any) -> str | None:
    """Jira wraps most values as objects with ``name``/``displayName``/``value``."""
    if value is None:
        return None
    if isinstance(value, dict):
        for k in ("name", "displayName", "value", "key"):
            if value.get(k) is not None:
                return str(value[k])
        return None
    return str(value)


def _names(values: Any) -> list[str]:
    out = [_name(v) for v in values or []]
    return sorted({v for v in out if v})


def _comments(fields: dict) -> list[dict]:
    raw = fields.get("comments")
    if raw is None:
        raw = (fields.get("comment") or {}).get("comments", [])
    out = []
    for c in raw or []:
        created = _date(c.get("created"))
        if created is None or c.get("id") is None:
            continue
        out.append({"id": str(c["id"]), "author": _name(c.get("author")), "created": created,
                    "body": c.get("body") or ""})
    return out


def _changelog(doc: dict) -> list[dict]:
    out = []
    for h in (doc.get("changelog") or {}).get("histories", []) or []:
        items = [{"field": it["field"], "fromString": it.get("fromString"),
                  "toString": it.get("toString")}
                 for it in h.get("items", []) or []
                 if it.get("field") and (it.get("fromString") is not None
                                         or it.get("toString") is not None)]
        created = _date(h.get("created"))
        if items and created is not None and h.get("id") is not None:
            out.append({"id": str(h["id"]), "author": _name(h.get("author")),
                        "created": created, "items": items})
    return out


def _links(fields: dict) -> list[dict]:
    out = []
    for ln in fields.get("issuelinks") or []:
        link_type = _name(ln.get("type"))
        if not link_type:
            continue
        if ln.get("outwardIssue"):
            out.append({"type": link_type, "direction": "outward",
                        "otherKey": ln["outwardIssue"]["key"]})
        elif ln.get("inwardIssue"):
            out.append({"type": link_type, "direction": "inward",
                        "otherKey": ln["inwardIssue"]["key"]})
    return out


def convert_issue(doc: dict, tracker: str) -> dict:
    fields = doc.get("fields") or {}
    parent = fields.get("parent")
    return {
        "key": doc["key"],
        "tracker": tracker,
        "project": _name(fields.get("project")),
        "summary": fields.get("summary"),
        "description": fields.get("description"),
        "issue_type": _name(fields.get("issuetype")),
        "status": _name(fields.get("status")),
        "priority": _name(fields.get("priority")),
        "resolution": _name(fields.get("resolution")),
        "created": _date(fields.get("created")),
        "resolved": _date(fields.get("resolutiondate")),
        "labels": sorted(set(fields.get("labels") or [])),
        "environment": fields.get("environment"),
        "versions_affected": _names(fields.get("versions")),
        "versions_fixed": _names(fields.get("fixVersions")),
        "creator": _name(fields.get("creator")),
        "reporter": _name(fields.get("reporter")),
        "assignee": _name(fields.get("assignee")),
        "components": _names(fields.get("components")),
        "parent": parent.get("key") if isinstance(parent, dict) else parent,
        "comments": _comments(fields),
        "changelog": _changelog(doc),
        "links": _links(fields),
    }


def iter_documents(path: str | Path) -> Iterator[dict]:
    """JSON lines, or a single JSON array."""
    with open(path, encoding="utf-8") as fh:
        head = fh.read(1)
        while head and head.isspace():
            head = fh.read(1)
        fh.seek(0)
        if head == "[":
            yield from json.load(fh)
            return
        for line in fh:
            if line.strip():
                yield json.loads(line)


def convert_file(src: str | Path, dst: str | Path, tracker: str) -> int:
    n = 0
    with open(dst, "w", encoding="utf-8") as out:
        for doc in iter_documents(src):
            out.write(json.dumps(convert_issue(doc, tracker), sort_keys=True) + "\n")
            n += 1
    return n


def convert_documents(docs: Iterable[dict], tracker: str) -> list[dict]:
    return [convert_issue(d, tracker) for d in docs]
