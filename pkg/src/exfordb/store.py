"""NDJSON-backed document collection with an in-memory ID index.

One JSON document per line, UTF-8, LF line endings.  Writes append only;
a repeated ID supersedes the earlier line (last writer wins) and
:meth:`DocumentStore.compact` rewrites the file with live versions only,
via a temp file and an atomic rename.  The index is rebuilt by a full scan
on open, so the file itself is the whole persistent state.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator

from .document import to_json_text
from .errors import CorruptLine, StoreError
from .syntax import WARNING, Diagnostic


@dataclass
class IngestReport:
    inserted: int = 0
    replaced: int = 0
    rejected: int = 0
    warnings: list[Diagnostic] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.inserted + self.replaced + self.rejected


class DocumentStore:
    """Collection of documents persisted at ``data_path``."""

    def __init__(self, data_path: str | Path):
        self.data_path = Path(data_path)
        self._index: dict[str, int] = {}
        self._size = 0
        self.diagnostics: list[Diagnostic] = []
        if self.data_path.exists():
            self._build_index()

    @property
    def doc_count(self) -> int:
        return len(self._index)

    def _build_index(self) -> None:
        self._index.clear()
        offset = 0
        with open(self.data_path, "rb") as fh:
            for line_no, raw in enumerate(fh, start=1):
                doc_id = self._line_id(raw, line_no, self.diagnostics)
                if doc_id is not None:
                    self._index[doc_id] = offset
                offset += len(raw)
        self._size = offset

    @staticmethod
    def _line_id(raw: bytes, line_no: int,
                 diagnostics: list[Diagnostic] | None) -> str | None:
        if not raw.strip():
            return None
        try:
            doc = json.loads(raw.decode("utf-8"))
            doc_id = doc["ID"]
            if not isinstance(doc_id, str):
                raise KeyError("ID")
            return doc_id
        except (ValueError, KeyError, TypeError):
            if diagnostics is not None:
                diagnostics.append(
                    Diagnostic(WARNING, "CorruptLine", line_no,
                               "stored line is not a JSON document with a string ID"))
            return None

    def ingest(self, docs: Iterable[dict]) -> IngestReport:
        """Append documents, replacing any earlier version of the same ID.

        Documents without a string ID are rejected with a warning.  On an
        I/O failure a :class:`StoreError` carrying the partial report is
        raised; everything already written stays valid.
        """
        report = IngestReport()
        try:
            with open(self.data_path, "ab") as fh:
                for doc in docs:
                    doc_id = doc.get("ID") if isinstance(doc, dict) else None
                    if not isinstance(doc_id, str) or not doc_id:
                        report.rejected += 1
                        report.warnings.append(
                            Diagnostic(WARNING, "MissingId", 0,
                                       "document without a string ID rejected"))
                        continue
                    payload = (to_json_text(doc) + "\n").encode("utf-8")
                    fh.write(payload)
                    if doc_id in self._index:
                        report.replaced += 1
                    else:
                        report.inserted += 1
                    self._index[doc_id] = self._size
                    self._size += len(payload)
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as exc:
            raise StoreError(f"ingest failed: {exc}", report=report) from exc
        return report

    def get_by_id(self, doc_id: str) -> dict | None:
        """Fetch one document by ID through the index; None when absent."""
        offset = self._index.get(doc_id)
        if offset is None:
            return None
        with open(self.data_path, "rb") as fh:
            fh.seek(offset)
            raw = fh.readline()
        try:
            return json.loads(raw.decode("utf-8"))
        except ValueError as exc:
            raise CorruptLine(f"indexed line for {doc_id!r} is corrupt: {exc}") from None

    def scan(self, diagnostics: list[Diagnostic] | None = None) -> Iterator[dict]:
        """Yield live documents in file order, skipping superseded versions.

        The file is streamed, never loaded whole.  Corrupt lines are
        reported to ``diagnostics`` and skipped.
        """
        if not self.data_path.exists():
            return
        offset = 0
        with open(self.data_path, "rb") as fh:
            for line_no, raw in enumerate(fh, start=1):
                line_offset = offset
                offset += len(raw)
                if not raw.strip():
                    continue
                try:
                    doc = json.loads(raw.decode("utf-8"))
                    doc_id = doc["ID"]
                    if not isinstance(doc_id, str):
                        raise KeyError("ID")
                except (ValueError, KeyError, TypeError):
                    if diagnostics is not None:
                        diagnostics.append(
                            Diagnostic(WARNING, "CorruptLine", line_no,
                                       "stored line is not a JSON document; skipped"))
                    continue
                if self._index.get(doc_id) == line_offset:
                    yield doc

    def compact(self) -> "DocumentStore":
        """Rewrite the file with live versions only.

        The new content is written to a temp file and atomically renamed
        over the original, so the data is never only half-written.  Readers
        holding the old file keep their snapshot.
        """
        if not self.data_path.exists():
            return self
        tmp_path = self.data_path.with_name(self.data_path.name + ".compact.tmp")
        new_index: dict[str, int] = {}
        offset = 0
        try:
            with open(tmp_path, "wb") as out:
                for doc in self.scan():
                    payload = (to_json_text(doc) + "\n").encode("utf-8")
                    out.write(payload)
                    new_index[doc["ID"]] = offset
                    offset += len(payload)
                out.flush()
                os.fsync(out.fileno())
            os.replace(tmp_path, self.data_path)
        except OSError as exc:
            tmp_path.unlink(missing_ok=True)
            raise StoreError(f"compact failed: {exc}") from exc
        self._index = new_index
        self._size = offset
        return self
