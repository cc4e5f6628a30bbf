"""Builders for EXFOR exchange-format text used across the test suite.

Counters on block headers are always computed from the structure being
rendered, so builder output is consistent by construction and serves as the
independent reference when tests perturb counters on purpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

FIELD = 11
MAX_FIELDS = 6


def num_field(value: float | None) -> str:
    """Render one 11-character numeric field, blank for a missing value."""
    if value is None:
        return " " * FIELD
    text = f"{value:.4E}"
    assert len(text) <= FIELD, text
    return text.rjust(FIELD)


def sysrec(keyword: str, f2: object = "", f3: object = "", ident: str = "") -> str:
    """Render a system record: keyword field plus two 11-char fields."""
    line = f"{keyword:<{FIELD}}"
    for value in (f2, f3):
        if value == "" or value is None:
            line += " " * FIELD
        else:
            line += f"{value!s:>{FIELD}}"
    line = line.rstrip()
    if ident:
        line = line.ljust(66) + ident
    return line


def field_lines(cells: list[str]) -> list[str]:
    """Pack pre-rendered 11-char cells into lines of at most six fields."""
    lines = []
    for start in range(0, len(cells), MAX_FIELDS):
        lines.append("".join(cells[start:start + MAX_FIELDS]).rstrip())
    return lines


@dataclass
class Bib:
    # entries are (keyword, pointer, [text lines]); pointer may be ""
    items: list[tuple[str, str, list[str]]]

    def render(self) -> list[str]:
        lines = []
        for keyword, pointer, texts in self.items:
            head = f"{keyword:<{FIELD - 1}}{pointer or ' '}"
            lines.append((head + texts[0]).rstrip() if texts else head.rstrip())
            for text in texts[1:]:
                lines.append((" " * FIELD + text).rstrip())
        n1 = len({keyword for keyword, _, _ in self.items})
        return [sysrec("BIB", n1, len(lines))] + lines + [sysrec("ENDBIB", len(lines), 0)]


@dataclass
class Common:
    headings: list[str]
    units: list[str]
    values: list[float | None]

    def render(self) -> list[str]:
        body = (
            field_lines([f"{h:<{FIELD}}" for h in self.headings])
            + field_lines([f"{u:<{FIELD}}" for u in self.units])
            + field_lines([num_field(v) for v in self.values])
        )
        return [sysrec("COMMON", len(self.headings), len(body))] + body \
            + [sysrec("ENDCOMMON", len(body), 0)]


@dataclass
class Data:
    headings: list[str]
    units: list[str]
    rows: list[list[float | None]]

    def render(self) -> list[str]:
        body = (
            field_lines([f"{h:<{FIELD}}" for h in self.headings])
            + field_lines([f"{u:<{FIELD}}" for u in self.units])
        )
        groups = math.ceil(len(self.headings) / MAX_FIELDS)
        for row in self.rows:
            assert len(row) == len(self.headings)
            row_lines = field_lines([num_field(v) for v in row])
            while len(row_lines) < groups:
                row_lines.append("")
            body.extend(row_lines)
        return [sysrec("DATA", len(self.headings), len(self.rows))] + body \
            + [sysrec("ENDDATA", len(body), 0)]


@dataclass
class Sub:
    sub_no: int
    bib: Bib | None = None
    common: Common | None = None
    data: Data | None = None
    nosubent: bool = False


@dataclass
class Entry:
    entry_id: str
    subs: list[Sub] = field(default_factory=list)
    with_idents: bool = False

    def sub_id(self, sub: Sub) -> str:
        return f"{self.entry_id}{sub.sub_no:03d}"

    def render(self) -> str:
        seq = 1

        def ident() -> str:
            nonlocal seq
            if not self.with_idents:
                return ""
            tag = f"{self.entry_id}{seq:05d}"
            seq += 1
            return tag

        lines = [sysrec("ENTRY", self.entry_id, ident=ident())]
        for sub in self.subs:
            if sub.nosubent:
                lines.append(sysrec("NOSUBENT", self.sub_id(sub), 0, ident=ident()))
                continue
            lines.append(sysrec("SUBENT", self.sub_id(sub), ident=ident()))
            for block in (sub.bib, sub.common, sub.data):
                if block is not None:
                    lines.extend(block.render())
            lines.append(sysrec("ENDSUBENT"))
        lines.append(sysrec("ENDENTRY", len(self.subs), 0))
        return "\n".join(lines) + "\n"


def render_entries(*entries: Entry) -> str:
    return "".join(entry.render() for entry in entries)


def minimal_entry(entry_id: str = "12345") -> Entry:
    """Two-subentry entry: bib-only first, bib+data second."""
    return Entry(entry_id, [
        Sub(1, bib=Bib([("AUTHOR", "", ["(A.PERSON)"]),
                        ("INSTITUTE", "", ["(1USALAB)"])])),
        Sub(2,
            bib=Bib([("REACTION", "", ["(1-H-1(N,EL)1-H-1,,SIG)"])]),
            data=Data(["EN", "DATA"], ["MEV", "B"],
                      [[14.0, 2.1], [15.0, 2.0]])),
    ])
