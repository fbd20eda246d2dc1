"""Deterministic report writers.

Every report embeds the configuration snapshot that produced it: JSON reports
carry it under a "config" key, CSV reports as leading "# key = value" comment
lines (readable by pandas with comment="#"). Keys are emitted sorted and
floats with repr, so identical inputs yield byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def write_csv_report(path, snapshot: Mapping, columns: Sequence[str], rows: Iterable[Sequence]):
    path = Path(path)
    lines = [f"# {key} = {_fmt(snapshot[key])}" for key in sorted(snapshot)]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _csv_cell(value) -> str:
    text = _fmt(value)
    if any(ch in text for ch in ',"\n'):
        text = '"' + text.replace('"', '""') + '"'
    return text


def write_json_report(path, snapshot: Mapping, payload: Mapping):
    path = Path(path)
    doc = {"config": dict(snapshot), **payload}
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")
