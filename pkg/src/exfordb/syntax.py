"""Lexing and parsing of EXFOR exchange-format text.

The exchange format is line oriented.  Each physical line carries record
content in columns 1-66 and a system-identification area in columns 67-80.
Content is organized in fields of eleven characters, at most six per line.
A small set of system keywords in the first field delimits the structure:

    ENTRY ... ENDENTRY            one experiment
      SUBENT ... ENDSUBENT        one data set of the experiment
        BIB ... ENDBIB            keyword/value bibliography block
        COMMON ... ENDCOMMON      constants shared by all data points
        DATA ... ENDDATA          the measurement table
      NOSUBENT                    placeholder for a removed subentry

Block headers carry two counter fields (N1, N2) declaring the block's item
and line counts.  Hand-edited archives routinely violate these counters, so
every structural rule here is checked but tolerated: violations surface as
:class:`Diagnostic` records and parsing continues on the observed structure.

Numeric fields follow Fortran conventions, including the E-less exponent
form where a sign directly follows the mantissa (``1.234+5`` means
``1.234e+5``).  Blank numeric fields denote missing values.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence

from .errors import MalformedNumber

CONTENT_WIDTH = 66
FIELD_WIDTH = 11
MAX_FIELDS = 6
LINE_WIDTH = 80

ERROR = "error"
WARNING = "warning"

_ENTRY_ID_RE = re.compile(r"[A-Z0-9]{5}$")
_SUBENT_ID_RE = re.compile(r"[A-Z0-9]{8}$")


@dataclass(frozen=True)
class Diagnostic:
    """One problem found while parsing; ``line_no`` 0 marks end-of-input."""

    severity: str
    code: str
    line_no: int
    message: str

    def __str__(self) -> str:
        return f"{self.line_no}: {self.severity}: {self.code}: {self.message}"


@dataclass(frozen=True)
class RawLine:
    """One physical line split into content (cols 1-66) and ident (67-80)."""

    content: str
    ident: str = ""
    line_no: int = 0


@dataclass(frozen=True)
class CounterPair:
    n1: int
    n2: int


@dataclass(frozen=True)
class BibItem:
    keyword: str
    pointer: str | None
    text: str


@dataclass(frozen=True)
class BibBlock:
    items: tuple[BibItem, ...]
    declared: CounterPair


@dataclass(frozen=True)
class CommonBlock:
    headings: tuple[str, ...]
    units: tuple[str, ...]
    values: tuple[float | None, ...]
    declared: CounterPair


@dataclass(frozen=True)
class DataBlock:
    headings: tuple[str, ...]
    units: tuple[str, ...]
    rows: tuple[tuple[float | None, ...], ...]
    declared: CounterPair


@dataclass(frozen=True)
class ExforSubentry:
    subent_id: str
    bib: BibBlock | None = None
    common: CommonBlock | None = None
    data: DataBlock | None = None
    is_nosubent: bool = False


@dataclass(frozen=True)
class ExforEntry:
    entry_id: str
    subentries: tuple[ExforSubentry, ...]


@dataclass
class ParseResult:
    """One unit yielded by :func:`parse_stream`.

    ``entry`` is None when the source chunk had no usable envelope; the
    diagnostics then explain what was skipped.
    """

    entry: ExforEntry | None
    diagnostics: list[Diagnostic] = field(default_factory=list)


class RecordKind(Enum):
    ENTRY = "ENTRY"
    SUBENT = "SUBENT"
    NOSUBENT = "NOSUBENT"
    BIB = "BIB"
    ENDBIB = "ENDBIB"
    COMMON = "COMMON"
    ENDCOMMON = "ENDCOMMON"
    DATA = "DATA"
    ENDDATA = "ENDDATA"
    ENDSUBENT = "ENDSUBENT"
    ENDENTRY = "ENDENTRY"
    CONTENT = "CONTENT"


_SYSTEM_KEYWORDS = {kind.value: kind for kind in RecordKind if kind is not RecordKind.CONTENT}

# Records that terminate block content collection even when the block's own
# END record is missing.  BIB/COMMON/DATA are deliberately absent: a column
# heading such as "DATA" in field 1 of a table line must stay content.
_ENVELOPE_KINDS = {
    RecordKind.ENTRY,
    RecordKind.ENDENTRY,
    RecordKind.SUBENT,
    RecordKind.ENDSUBENT,
    RecordKind.NOSUBENT,
}


def split_line(raw: str, line_no: int = 0, diagnostics: list[Diagnostic] | None = None) -> RawLine:
    """Split one physical line (no trailing newline) at the column-66 boundary.

    Lines longer than 80 characters are tolerated: a ``LineTooLong`` warning
    is recorded and the ident is truncated at column 80.
    """
    if len(raw) > LINE_WIDTH and diagnostics is not None:
        diagnostics.append(
            Diagnostic(WARNING, "LineTooLong", line_no,
                       f"line has {len(raw)} characters, limit is {LINE_WIDTH}")
        )
    return RawLine(content=raw[:CONTENT_WIDTH], ident=raw[CONTENT_WIDTH:LINE_WIDTH], line_no=line_no)


def split_text(text: str, diagnostics: list[Diagnostic] | None = None) -> list[RawLine]:
    """Split input text into :class:`RawLine` records with 1-based numbering."""
    return [
        split_line(raw, line_no, diagnostics)
        for line_no, raw in enumerate(text.splitlines(), start=1)
    ]


def slice_fields(line: RawLine) -> list[str]:
    """Cut the line content into eleven-character fields.

    Every returned field is padded to exactly eleven characters, so joining
    them reproduces the content padded to a multiple of eleven.  At most six
    fields fit in the 66 content columns.
    """
    return _slice_content(line.content)


def _slice_content(content: str) -> list[str]:
    nfields = min(MAX_FIELDS, math.ceil(len(content) / FIELD_WIDTH))
    return [
        content[i * FIELD_WIDTH:(i + 1) * FIELD_WIDTH].ljust(FIELD_WIDTH)
        for i in range(nfields)
    ]


def parse_fortran_number(field: str) -> float | None:
    """Parse an eleven-character numeric field; blank means missing.

    Accepts standard decimal and exponent notation plus the E-less Fortran
    form where the exponent sign directly follows the mantissa.  Raises
    :class:`MalformedNumber` for anything else that is non-blank.
    """
    text = field.strip()
    if not text:
        return None
    for i in range(1, len(text)):
        if text[i] in "+-" and text[i - 1] in "0123456789.":
            text = text[:i] + "E" + text[i:]
            break
    try:
        return float(text)
    except ValueError:
        raise MalformedNumber(f"cannot parse numeric field {field.strip()!r}") from None


def classify_record(line: RawLine) -> RecordKind:
    """Decide the record kind from the first eleven-character field."""
    keyword = line.content[:FIELD_WIDTH].strip()
    return _SYSTEM_KEYWORDS.get(keyword, RecordKind.CONTENT)


def _field(line: RawLine, index: int) -> str:
    start = index * FIELD_WIDTH
    return line.content[start:start + FIELD_WIDTH]


def _counter(line: RawLine, index: int, diagnostics: list[Diagnostic]) -> int | None:
    """Read one counter field from a block header; None when unusable."""
    try:
        value = parse_fortran_number(_field(line, index))
    except MalformedNumber as exc:
        diagnostics.append(Diagnostic(WARNING, "MalformedNumber", line.line_no, str(exc)))
        return None
    if value is None:
        return None
    if value < 0 or not float(value).is_integer():
        diagnostics.append(
            Diagnostic(WARNING, "MalformedNumber", line.line_no,
                       f"counter field holds {value!r}, expected a non-negative integer")
        )
        return None
    return int(value)


def _header_counters(line: RawLine, diagnostics: list[Diagnostic]) -> tuple[int | None, int | None]:
    return _counter(line, 1, diagnostics), _counter(line, 2, diagnostics)


def _mismatch(diags: list[Diagnostic], line_no: int, what: str, declared: int, observed: int) -> None:
    diags.append(
        Diagnostic(WARNING, "CounterMismatch", line_no,
                   f"{what}: declared {declared}, observed {observed}")
    )


def parse_bib_block(lines: Sequence[RawLine], declared: CounterPair) -> tuple[BibBlock, list[Diagnostic]]:
    """Parse the content records between BIB and ENDBIB.

    A non-blank first field starts a new item; a blank one continues the
    current item's text.  A pointer character sits in column 11 of the
    keyword field.  Consecutive pointered items with blank keyword columns
    inherit the keyword in force.
    """
    diagnostics: list[Diagnostic] = []
    items: list[BibItem] = []
    current_keyword: str | None = None
    current_pointer: str | None = None
    current_text: list[str] = []

    def flush() -> None:
        nonlocal current_text
        if current_keyword is not None:
            items.append(BibItem(current_keyword, current_pointer, "\n".join(current_text)))
        current_text = []

    for line in lines:
        kwfield = line.content[:FIELD_WIDTH]
        value = line.content[FIELD_WIDTH:].rstrip()
        if kwfield.strip() == "":
            if current_keyword is None:
                diagnostics.append(
                    Diagnostic(ERROR, "DanglingContinuation", line.line_no,
                               "continuation line before any keyword")
                )
                continue
            current_text.append(value)
            continue

        keyword = kwfield[:FIELD_WIDTH - 1].strip()
        pointer: str | None = None
        tail = kwfield[FIELD_WIDTH - 1:FIELD_WIDTH]
        if tail and tail != " ":
            if tail.isalpha() and len(keyword) == FIELD_WIDTH - 1:
                # an eleven-character keyword; the final letter is no pointer
                keyword = keyword + tail
            else:
                pointer = tail
        if not keyword:
            if current_keyword is None:
                diagnostics.append(
                    Diagnostic(ERROR, "DanglingContinuation", line.line_no,
                               "pointered line before any keyword")
                )
                continue
            keyword = current_keyword
        flush()
        current_keyword = keyword
        current_pointer = pointer
        current_text = [value]

    flush()

    distinct_keywords = len({item.keyword for item in items})
    if distinct_keywords != declared.n1:
        _mismatch(diagnostics, lines[0].line_no if lines else 0,
                  "BIB keyword count", declared.n1, distinct_keywords)
    if len(lines) != declared.n2:
        _mismatch(diagnostics, lines[0].line_no if lines else 0,
                  "BIB line count", declared.n2, len(lines))

    return BibBlock(tuple(items), declared), diagnostics


def _group_fields(lines: Sequence[RawLine], diagnostics: list[Diagnostic],
                  numeric: bool) -> list[str | float | None]:
    """Flatten a run of lines into trimmed field values, line by line."""
    out: list[str | float | None] = []
    for line in lines:
        for fld in slice_fields(line):
            if numeric:
                try:
                    out.append(parse_fortran_number(fld))
                except MalformedNumber as exc:
                    diagnostics.append(
                        Diagnostic(WARNING, "MalformedNumber", line.line_no, str(exc)))
                    out.append(None)
            else:
                out.append(fld.strip())
    return out


def _nonblank_count(values: list) -> int:
    count = len(values)
    while count and (values[count - 1] is None or values[count - 1] == ""):
        count -= 1
    return count


def parse_common_block(lines: Sequence[RawLine], declared: CounterPair) -> tuple[CommonBlock, list[Diagnostic]]:
    """Parse the content records between COMMON and ENDCOMMON.

    The block holds ``n1`` constants: first the headings, then the units,
    then the values, each group spanning ``ceil(n1/6)`` lines.  ``n2``
    declares the total line count of the block.
    """
    diagnostics: list[Diagnostic] = []
    n1 = declared.n1
    group = math.ceil(n1 / MAX_FIELDS) if n1 > 0 else 0
    first_line_no = lines[0].line_no if lines else 0

    heading_lines = lines[:group]
    unit_lines = lines[group:2 * group]
    value_lines = lines[2 * group:3 * group]

    headings = _group_fields(heading_lines, diagnostics, numeric=False)
    units = _group_fields(unit_lines, diagnostics, numeric=False)
    values = _group_fields(value_lines, diagnostics, numeric=True)

    observed_headings = _nonblank_count(headings)
    if observed_headings != n1:
        _mismatch(diagnostics, first_line_no, "COMMON field count", n1, observed_headings)
    if len(lines) != declared.n2:
        _mismatch(diagnostics, first_line_no, "COMMON line count", declared.n2, len(lines))
    if len(lines) != 3 * group:
        _mismatch(diagnostics, first_line_no,
                  "COMMON line count for declared field count", 3 * group, len(lines))

    width = max(n1, 0)
    return CommonBlock(
        headings=_pad_to(headings, width, ""),
        units=_pad_to(units, width, ""),
        values=_pad_to(values, width, None),
        declared=declared,
    ), diagnostics


def _pad_to(values: list, width: int, fill) -> tuple:
    out = list(values[:width])
    while len(out) < width:
        out.append(fill)
    return tuple(out)


def parse_data_block(lines: Sequence[RawLine], declared: CounterPair) -> tuple[DataBlock, list[Diagnostic]]:
    """Parse the content records between DATA and ENDDATA.

    ``n1`` columns and ``n2`` logical rows; headings and units each span one
    line group, and every logical row occupies ``ceil(n1/6)`` physical lines.
    The returned matrix is always rectangular: short groups are padded with
    missing cells and reported as ``RaggedRow``.
    """
    diagnostics: list[Diagnostic] = []
    n1 = declared.n1
    group = math.ceil(n1 / MAX_FIELDS) if n1 > 0 else 1
    first_line_no = lines[0].line_no if lines else 0

    headings = _group_fields(lines[:group], diagnostics, numeric=False)
    units = _group_fields(lines[group:2 * group], diagnostics, numeric=False)

    observed_headings = _nonblank_count(headings)
    if observed_headings != n1:
        _mismatch(diagnostics, first_line_no, "DATA column count", n1, observed_headings)

    rows: list[tuple[float | None, ...]] = []
    body = lines[2 * group:]
    for start in range(0, len(body), group):
        chunk = body[start:start + group]
        if len(chunk) < group:
            diagnostics.append(
                Diagnostic(WARNING, "RaggedRow", chunk[0].line_no,
                           f"row group has {len(chunk)} of {group} lines")
            )
        cells = _group_fields(chunk, diagnostics, numeric=True)
        row = list(cells[:n1])
        while len(row) < n1:
            row.append(None)
        rows.append(tuple(row))

    if len(rows) != declared.n2:
        _mismatch(diagnostics, first_line_no, "DATA row count", declared.n2, len(rows))
    expected_lines = (2 + declared.n2) * group
    if len(lines) != expected_lines:
        _mismatch(diagnostics, first_line_no,
                  "DATA line count for declared shape", expected_lines, len(lines))

    width = max(n1, 0)
    return DataBlock(
        headings=_pad_to(headings, width, ""),
        units=_pad_to(units, width, ""),
        rows=tuple(rows),
        declared=declared,
    ), diagnostics


class _Cursor:
    """Index-tracking view over the line list of one entry."""

    def __init__(self, lines: Sequence[RawLine]):
        self.lines = lines
        self.pos = 0

    def peek(self) -> RawLine | None:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def advance(self) -> RawLine:
        line = self.lines[self.pos]
        self.pos += 1
        return line


def _collect_block(cursor: _Cursor, end_kind: RecordKind,
                   diagnostics: list[Diagnostic]) -> list[RawLine]:
    """Collect content lines until the block's END record.

    Only envelope records abort collection early; a table line whose first
    column heading happens to equal a block keyword stays inside the block.
    """
    collected: list[RawLine] = []
    while True:
        line = cursor.peek()
        if line is None:
            diagnostics.append(
                Diagnostic(ERROR, "TruncatedInput", 0,
                           f"input ended before {end_kind.value}"))
            return collected
        kind = classify_record(line)
        if kind is end_kind:
            cursor.advance()
            return collected
        if kind in _ENVELOPE_KINDS:
            diagnostics.append(
                Diagnostic(ERROR, "TruncatedInput", line.line_no,
                           f"{kind.value} record before {end_kind.value}"))
            return collected
        collected.append(cursor.advance())


_BLOCK_KINDS = {
    RecordKind.BIB: (RecordKind.ENDBIB, parse_bib_block),
    RecordKind.COMMON: (RecordKind.ENDCOMMON, parse_common_block),
    RecordKind.DATA: (RecordKind.ENDDATA, parse_data_block),
}


def _parse_subentry(cursor: _Cursor, entry_id: str, strict: bool,
                    diagnostics: list[Diagnostic]) -> ExforSubentry:
    header = cursor.advance()
    subent_id = _field(header, 1).strip()
    _check_subent_id(subent_id, entry_id, header.line_no, diagnostics)
    if strict:
        _check_ident(header, entry_id, diagnostics)

    blocks: dict[RecordKind, object] = {}
    while True:
        line = cursor.peek()
        if line is None:
            diagnostics.append(
                Diagnostic(ERROR, "TruncatedInput", 0, "input ended before ENDSUBENT"))
            break
        kind = classify_record(line)
        if kind is RecordKind.ENDSUBENT:
            cursor.advance()
            break
        if kind in (RecordKind.SUBENT, RecordKind.NOSUBENT,
                    RecordKind.ENTRY, RecordKind.ENDENTRY):
            diagnostics.append(
                Diagnostic(ERROR, "TruncatedInput", line.line_no,
                           f"{kind.value} record before ENDSUBENT"))
            break
        if kind in _BLOCK_KINDS:
            end_kind, parser = _BLOCK_KINDS[kind]
            header_line = cursor.advance()
            if strict:
                _check_ident(header_line, entry_id, diagnostics)
            n1, n2 = _header_counters(header_line, diagnostics)
            content = _collect_block(cursor, end_kind, diagnostics)
            declared = CounterPair(
                n1 if n1 is not None else _observed_n1(kind, content),
                n2 if n2 is not None else _observed_n2(kind, content),
            )
            block, block_diags = parser(content, declared)
            diagnostics.extend(_renumber(block_diags, header_line.line_no))
            if kind in blocks:
                diagnostics.append(
                    Diagnostic(WARNING, "UnexpectedRecord", header_line.line_no,
                               f"duplicate {kind.value} block ignored"))
            else:
                blocks[kind] = block
            continue
        if line.content.strip():
            diagnostics.append(
                Diagnostic(WARNING, "UnexpectedRecord", line.line_no,
                           f"record {line.content[:FIELD_WIDTH].strip()!r} skipped"))
        cursor.advance()

    return ExforSubentry(
        subent_id=subent_id,
        bib=blocks.get(RecordKind.BIB),
        common=blocks.get(RecordKind.COMMON),
        data=blocks.get(RecordKind.DATA),
    )


def _renumber(diags: list[Diagnostic], fallback_line: int) -> list[Diagnostic]:
    """Give end-of-block diagnostics from empty blocks a real location."""
    return [
        d if d.line_no else Diagnostic(d.severity, d.code, fallback_line, d.message)
        for d in diags
    ]


def _observed_n1(kind: RecordKind, content: list[RawLine]) -> int:
    if kind is RecordKind.BIB:
        return sum(1 for line in content if line.content[:FIELD_WIDTH].strip())
    fields = _group_fields(content[:1], [], numeric=False) if content else []
    return _nonblank_count(fields)


def _observed_n2(kind: RecordKind, content: list[RawLine]) -> int:
    if kind is RecordKind.DATA:
        return max(len(content) - 2, 0)
    return len(content)


def _check_subent_id(subent_id: str, entry_id: str, line_no: int,
                     diagnostics: list[Diagnostic]) -> None:
    if not _SUBENT_ID_RE.match(subent_id) or not subent_id.startswith(entry_id):
        diagnostics.append(
            Diagnostic(WARNING, "IdMismatch", line_no,
                       f"subentry id {subent_id!r} does not extend entry id {entry_id!r}"))


def _check_ident(line: RawLine, entry_id: str, diagnostics: list[Diagnostic]) -> None:
    ident = line.ident.strip()
    if ident and not ident.startswith(entry_id):
        diagnostics.append(
            Diagnostic(WARNING, "IdentMismatch", line.line_no,
                       f"identification columns {ident!r} do not match entry {entry_id!r}"))


def _parse_entry_lines(lines: Sequence[RawLine], strict: bool) -> tuple[ExforEntry | None, list[Diagnostic]]:
    diagnostics: list[Diagnostic] = []
    cursor = _Cursor(lines)

    entry_line: RawLine | None = None
    junk_before = 0
    while cursor.peek() is not None:
        line = cursor.peek()
        if not line.content.strip():
            cursor.advance()
            continue
        if classify_record(line) is RecordKind.ENTRY:
            entry_line = cursor.advance()
            break
        if junk_before == 0:
            diagnostics.append(
                Diagnostic(ERROR, "MissingEnvelope", line.line_no,
                           "expected an ENTRY record"))
        junk_before += 1
        cursor.advance()

    if entry_line is None:
        diagnostics.append(
            Diagnostic(ERROR, "MissingEnvelope", 0, "no ENTRY record found"))
        return None, diagnostics

    entry_id = _field(entry_line, 1).strip()
    if not _ENTRY_ID_RE.match(entry_id):
        diagnostics.append(
            Diagnostic(WARNING, "IdMismatch", entry_line.line_no,
                       f"entry id {entry_id!r} is not a five-character accession number"))
    if strict:
        _check_ident(entry_line, entry_id, diagnostics)

    subentries: list[ExforSubentry] = []
    closed = False
    while cursor.peek() is not None:
        line = cursor.peek()
        kind = classify_record(line)
        if not line.content.strip():
            cursor.advance()
            continue
        if kind is RecordKind.SUBENT:
            subentries.append(_parse_subentry(cursor, entry_id, strict, diagnostics))
            continue
        if kind is RecordKind.NOSUBENT:
            header = cursor.advance()
            subent_id = _field(header, 1).strip()
            _check_subent_id(subent_id, entry_id, header.line_no, diagnostics)
            subentries.append(ExforSubentry(subent_id=subent_id, is_nosubent=True))
            continue
        if kind is RecordKind.ENDENTRY:
            cursor.advance()
            closed = True
            break
        if kind is RecordKind.ENTRY:
            diagnostics.append(
                Diagnostic(ERROR, "NestedEntry", line.line_no,
                           "ENTRY record inside an open entry"))
            cursor.advance()
            continue
        diagnostics.append(
            Diagnostic(WARNING, "UnexpectedRecord", line.line_no,
                       f"record {line.content[:FIELD_WIDTH].strip()!r} skipped"))
        cursor.advance()

    if not closed:
        diagnostics.append(
            Diagnostic(ERROR, "MissingEnvelope", 0, "no ENDENTRY record found"))
    else:
        trailing = [line for line in lines[cursor.pos:] if line.content.strip()]
        if trailing:
            diagnostics.append(
                Diagnostic(WARNING, "UnexpectedRecord", trailing[0].line_no,
                           f"{len(trailing)} content line(s) after ENDENTRY"))

    return ExforEntry(entry_id, tuple(subentries)), diagnostics


def parse_entry(text: str, strict: bool = False) -> tuple[ExforEntry | None, list[Diagnostic]]:
    """Parse the text of exactly one ENTRY...ENDENTRY envelope.

    Returns the entry (None when no ENTRY record exists) together with all
    diagnostics.  ``strict`` additionally cross-checks the identification
    columns 67-80 against the envelope ids.
    """
    diagnostics: list[Diagnostic] = []
    lines = split_text(text, diagnostics)
    entry, parse_diags = _parse_entry_lines(lines, strict)
    return entry, diagnostics + parse_diags


_SKIP_ENVELOPES = {"TRANS", "ENDTRANS", "REQUEST", "ENDREQUEST"}


def parse_stream(text: str, strict: bool = False) -> Iterator[ParseResult]:
    """Parse a concatenation of entries, yielding one result per entry.

    TRANS envelopes are skipped; DICTION sections and other unrecognized
    material outside entries are skipped with a warning carried by an
    entry-less :class:`ParseResult`.  A structurally broken entry is yielded
    with its diagnostics and never aborts the stream.
    """
    split_diags: list[Diagnostic] = []
    lines = split_text(text, split_diags)
    split_by_line = {d.line_no: d for d in split_diags}

    chunk: list[RawLine] | None = None
    junk: list[RawLine] = []
    in_diction = False

    def chunk_result(chunk_lines: list[RawLine]) -> ParseResult:
        entry, diags = _parse_entry_lines(chunk_lines, strict)
        for line in chunk_lines:
            if line.line_no in split_by_line:
                diags.insert(0, split_by_line[line.line_no])
        return ParseResult(entry, diags)

    def junk_result(junk_lines: list[RawLine]) -> ParseResult:
        first = junk_lines[0]
        return ParseResult(None, [
            Diagnostic(WARNING, "UnexpectedRecord", first.line_no,
                       f"skipped {len(junk_lines)} unrecognized line(s) outside any entry")
        ])

    for line in lines:
        keyword = line.content[:FIELD_WIDTH].strip()
        kind = classify_record(line)

        if chunk is not None:
            if kind is RecordKind.ENTRY:
                # unterminated entry; flush it and start over at this record
                yield chunk_result(chunk)
                chunk = [line]
                continue
            chunk.append(line)
            if kind is RecordKind.ENDENTRY:
                yield chunk_result(chunk)
                chunk = None
            continue

        if in_diction:
            if keyword == "ENDDICTION":
                in_diction = False
            continue

        if kind is RecordKind.ENTRY:
            if junk:
                yield junk_result(junk)
                junk = []
            chunk = [line]
            continue

        if not line.content.strip() or keyword in _SKIP_ENVELOPES:
            continue
        if keyword == "DICTION":
            in_diction = True
            junk.append(line)
            continue
        junk.append(line)

    if chunk is not None:
        yield chunk_result(chunk)
    if junk:
        yield junk_result(junk)
