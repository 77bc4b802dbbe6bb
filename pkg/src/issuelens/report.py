"""Atomic file output, tabular exports and run provenance."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence

from . import __version__


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    """Write to a temp file in the target directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def atomic_write_text(path: str | Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def tsv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Tab-separated text; fields holding tabs, quotes or newlines are quoted."""
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="\t", lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else _cell(v) for v in row])
    return buf.getvalue()


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return repr(round(value, 12))
    # the csv module cannot write NUL, which does turn up in scraped comments
    return str(value).replace("\x00", "\ufffd")


def write_tsv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    atomic_write_text(path, tsv_text(header, rows))


def read_tsv(path: str | Path) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh, delimiter="\t"))


def input_digest(path: str | Path) -> str:
    """sha256 over a file, or over every file under a directory (sorted by relative name)."""
    path = Path(path)
    h = hashlib.sha256()
    if path.is_dir():
        for f in sorted(p for p in path.rglob("*") if p.is_file()):
            h.update(f.relative_to(path).as_posix().encode("utf-8") + b"\0")
            h.update(f.read_bytes())
            h.update(b"\0")
    else:
        h.update(path.read_bytes())
    return "sha256:" + h.hexdigest()


def build_report(command: str, config: dict, digest: str, summary: dict, payload: Any) -> dict:
    # no timestamps: identical inputs must give identical reports
    return {
        "command": command,
        "tool_version": __version__,
        "input_digest": digest,
        "config": config,
        "summary": summary,
        "payload": payload,
    }


def write_json(path: str | Path, obj: Any) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
