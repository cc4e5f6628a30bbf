"""Hierarchical document model and lossless conversion from the syntax tree.

Documents are plain Python values: ``None``, ``bool``, numbers, strings,
lists, and insertion-ordered dicts.  A converted entry keeps the shape of
the source: keywords stay keywords, block content becomes nested objects,
and tabular data is stored column-oriented so that ``DATA.TABLE.<heading>``
addresses one column directly.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Sequence

from .errors import JsonSyntaxError, PathThroughScalar
from .syntax import (
    WARNING,
    BibBlock,
    CommonBlock,
    DataBlock,
    Diagnostic,
    ExforEntry,
)


class _Missing:
    """Sentinel distinguishing an unresolvable path from a stored null."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "<missing>"

    def __bool__(self) -> bool:
        return False


MISSING = _Missing()


def split_path(path: str | Sequence[str]) -> tuple[str, ...]:
    """Normalize a dotted path like ``BIB.REACTION`` into its segments."""
    if isinstance(path, str):
        segments = tuple(path.split("."))
    else:
        segments = tuple(path)
    if not segments or any(seg == "" for seg in segments):
        raise ValueError(f"invalid path {path!r}: empty segment")
    return segments


def get_path(doc: Any, path: str | Sequence[str], default: Any = MISSING) -> Any:
    """Resolve a dotted path; digit segments index arrays.

    Returns ``default`` (the MISSING sentinel unless overridden) when any
    step fails, so a stored null remains distinguishable from absence.
    """
    node = doc
    for seg in split_path(path):
        if isinstance(node, dict):
            if seg not in node:
                return default
            node = node[seg]
        elif isinstance(node, list) and seg.isdigit():
            index = int(seg)
            if index >= len(node):
                return default
            node = node[index]
        else:
            return default
    return node


def set_path(doc: Any, path: str | Sequence[str], value: Any) -> Any:
    """Return a copy of ``doc`` with ``path`` set to ``value``.

    Objects along the path are copied, intermediate objects are created as
    needed, and untouched branches are shared with the input.
    """
    return _set(doc, split_path(path), value)


def _set(node: Any, segments: tuple[str, ...], value: Any) -> Any:
    seg, rest = segments[0], segments[1:]
    if isinstance(node, dict):
        updated = dict(node)
        updated[seg] = value if not rest else _set(node.get(seg, {}), rest, value)
        return updated
    if isinstance(node, list) and seg.isdigit():
        index = int(seg)
        if index >= len(node):
            raise PathThroughScalar(f"array index {seg} out of range")
        updated_list = list(node)
        updated_list[index] = value if not rest else _set(node[index], rest, value)
        return updated_list
    raise PathThroughScalar(f"cannot descend into {type(node).__name__} at segment {seg!r}")


def to_json_text(doc: Any, pretty: bool = False) -> str:
    """Serialize a document to JSON text, preserving key order.

    Missing table cells are stored as ``null``; NaN and infinities are
    rejected because they are not valid JSON.
    """
    if pretty:
        return json.dumps(doc, ensure_ascii=False, allow_nan=False, indent=2)
    return json.dumps(doc, ensure_ascii=False, allow_nan=False, separators=(",", ":"))


def from_json_text(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise JsonSyntaxError(f"invalid JSON: {exc}") from None


def entry_to_document(entry: ExforEntry, diagnostics: list[Diagnostic] | None = None) -> dict:
    """Convert a parsed entry into its document form.

    The result has the shape ``{ID, SUBENT: [...]}`` with one object per
    subentry record, placeholders included.  Conversion keeps every keyword,
    pointer, heading, unit, text line, and numeric value of the source.
    """
    return {
        "ID": entry.entry_id,
        "SUBENT": [_subentry_to_object(sub, diagnostics) for sub in entry.subentries],
    }


def _subentry_to_object(sub, diagnostics: list[Diagnostic] | None) -> dict:
    obj: dict[str, Any] = {"ID": sub.subent_id}
    if sub.is_nosubent:
        obj["NOSUBENT"] = True
        return obj
    if sub.bib is not None:
        obj["BIB"] = _bib_to_object(sub.bib)
    if sub.common is not None:
        obj["COMMON"] = _common_to_object(sub.common)
    if sub.data is not None:
        obj["DATA"] = _data_to_object(sub.data, diagnostics)
    return obj


def _bib_to_object(bib: BibBlock) -> dict:
    grouped: dict[str, list[tuple[str | None, str]]] = {}
    for item in bib.items:
        grouped.setdefault(item.keyword, []).append((item.pointer, item.text))

    out: dict[str, Any] = {}
    for keyword, pairs in grouped.items():
        if len(pairs) == 1 and pairs[0][0] is None:
            out[keyword] = pairs[0][1]
            continue
        # pointered values become an object keyed by pointer character;
        # pointer-less text lands under the empty key
        value: dict[str, str] = {}
        for pointer, text in pairs:
            key = pointer or ""
            value[key] = value[key] + "\n" + text if key in value else text
        out[keyword] = value
    return out


def _common_to_object(common: CommonBlock) -> dict:
    return {
        "DESCR": list(common.headings),
        "UNIT": list(common.units),
        "VALUE": list(common.values),
    }


def _data_to_object(data: DataBlock, diagnostics: list[Diagnostic] | None) -> dict:
    keys = _column_keys(data.headings, diagnostics)
    table: dict[str, list] = {}
    for index, key in enumerate(keys):
        table[key] = [row[index] for row in data.rows]
    return {
        "DESCR": list(data.headings),
        "UNIT": list(data.units),
        "TABLE": table,
    }


def _column_keys(headings: Iterable[str], diagnostics: list[Diagnostic] | None) -> list[str]:
    """Disambiguate colliding column headings with ``#2``, ``#3``, ... suffixes."""
    seen: dict[str, int] = {}
    keys: list[str] = []
    for heading in headings:
        count = seen.get(heading, 0) + 1
        seen[heading] = count
        if count == 1:
            keys.append(heading)
        else:
            keys.append(f"{heading}#{count}")
            if diagnostics is not None:
                diagnostics.append(
                    Diagnostic(WARNING, "DuplicateColumn", 0,
                               f"column heading {heading!r} repeats; "
                               f"stored as {heading}#{count}"))
    return keys
