"""Turn entry documents into self-contained subentry documents.

Subentries are the unit people actually work with, so each data subentry
becomes one document that inherits the shared material of its entry's first
subentry.  Three transformations run in order:

1. merge the first subentry's BIB into every later subentry, renaming
   colliding keywords with a ``_firstSub`` suffix;
2. broadcast COMMON constants (the subentry's own, then the first
   subentry's) as constant columns of the DATA table, keeping the COMMON
   blocks themselves in place;
3. standardize units, rewriting energies to MeV and cross sections to
   millibarn according to the rule table.

The rule table ships with defaults (``data/units.rules``) and can be
replaced by a user file of ``SOURCE TARGET FACTOR`` lines.  Compound units
such as ``B/KEV`` are derived factor by factor from the base rules; the
"/"-factorization is this package's convention, not part of the exchange
format.  Unknown units pass through untouched.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .syntax import WARNING, Diagnostic

COMMON_FIRST_SUB = "COMMON_firstSub"
FIRST_SUB_SUFFIX = "_firstSub"


@dataclass(frozen=True)
class UnitRule:
    source_unit: str
    target_unit: str
    factor: float


class UnitTable:
    """Lookup table from unit tokens to conversion rules."""

    def __init__(self, rules: dict[str, UnitRule]):
        self._rules = dict(rules)

    @classmethod
    def from_lines(cls, lines) -> "UnitTable":
        rules: dict[str, UnitRule] = {}
        for raw in lines:
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.split()
            if len(parts) != 3:
                raise ValueError(f"bad unit rule line: {raw.strip()!r}")
            source, target, factor_text = parts
            factor = float(factor_text)
            if factor <= 0:
                raise ValueError(f"unit rule factor must be positive: {raw.strip()!r}")
            if source in rules:
                raise ValueError(f"duplicate unit rule for {source!r}")
            rules[source] = UnitRule(source, target, factor)
        return cls(rules)

    @classmethod
    def load(cls, path: str | Path) -> "UnitTable":
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh)

    def rule_for(self, unit: str) -> UnitRule | None:
        """Resolve a trimmed unit token, deriving compound rules on demand."""
        unit = unit.strip()
        if unit in self._rules:
            return self._rules[unit]
        if "/" not in unit:
            return None
        parts = unit.split("/")
        base_rules = [self._rules.get(part) for part in parts]
        if all(rule is None for rule in base_rules):
            return None
        target_parts = []
        factor = 1.0
        for position, (part, rule) in enumerate(zip(parts, base_rules)):
            if rule is None:
                target_parts.append(part)
                continue
            target_parts.append(rule.target_unit)
            # parts after the first slash divide, so their factor inverts
            factor *= rule.factor if position == 0 else 1.0 / rule.factor
        return UnitRule(unit, "/".join(target_parts), factor)


@lru_cache(maxsize=1)
def default_unit_table() -> UnitTable:
    text = resources.files("exfordb").joinpath("data/units.rules").read_text(encoding="utf-8")
    return UnitTable.from_lines(text.splitlines())


def unit_conversion_rule(unit: str, table: UnitTable | None = None) -> UnitRule | None:
    """Rule for one unit token, or None when the unit passes through."""
    return (table or default_unit_table()).rule_for(unit)


def entry_to_subentry_documents(entry_doc: dict,
                                diagnostics: list[Diagnostic] | None = None) -> list[dict]:
    """Split an entry document into per-subentry documents.

    Every subentry from index 1 onward (placeholders excluded) yields one
    document carrying its own blocks plus the first subentry's BIB keywords,
    collisions renamed with the ``_firstSub`` suffix.  The first subentry's
    COMMON rides along for the later broadcast step: under ``COMMON`` when
    the subentry has none of its own, under ``COMMON_firstSub`` otherwise.
    """
    subents = entry_doc.get("SUBENT") or []
    first = subents[0] if subents else {}
    first_bib = first.get("BIB") or {}
    first_common = first.get("COMMON")

    documents: list[dict] = []
    for sub in subents[1:]:
        if sub.get("NOSUBENT"):
            continue
        doc: dict = {"ID": sub.get("ID"), "ENTRYID": entry_doc.get("ID")}

        merged_bib = copy.deepcopy(sub.get("BIB") or {})
        for keyword, value in first_bib.items():
            target = keyword + FIRST_SUB_SUFFIX if keyword in merged_bib else keyword
            merged_bib[target] = copy.deepcopy(value)
        if merged_bib:
            doc["BIB"] = merged_bib

        own_common = sub.get("COMMON")
        if own_common is not None:
            doc["COMMON"] = copy.deepcopy(own_common)
            if first_common is not None:
                doc[COMMON_FIRST_SUB] = copy.deepcopy(first_common)
        elif first_common is not None:
            doc["COMMON"] = copy.deepcopy(first_common)

        if "DATA" in sub:
            doc["DATA"] = copy.deepcopy(sub["DATA"])
        documents.append(doc)

    if not documents and diagnostics is not None:
        diagnostics.append(
            Diagnostic(WARNING, "EmptyEntry", 0,
                       f"entry {entry_doc.get('ID')!r} has no data subentries to merge into"))
    return documents


def merge_common_into_data(subdoc: dict,
                           diagnostics: list[Diagnostic] | None = None) -> dict:
    """Broadcast COMMON constants as constant columns of the DATA table.

    The subentry's own COMMON is applied first, then the first subentry's;
    an existing table column always wins and the skip is reported.  COMMON
    blocks stay in the document untouched.  Without a DATA block the
    document is returned unchanged.
    """
    data = subdoc.get("DATA")
    if data is None:
        return subdoc
    doc = copy.deepcopy(subdoc)
    data = doc["DATA"]
    table = data.get("TABLE")
    if not table:
        return doc
    nrows = len(next(iter(table.values())))

    for source_key in ("COMMON", COMMON_FIRST_SUB):
        block = doc.get(source_key)
        if not block:
            continue
        for name, unit, value in zip(block.get("DESCR", []),
                                     block.get("UNIT", []),
                                     block.get("VALUE", [])):
            if name in table:
                if diagnostics is not None:
                    diagnostics.append(
                        Diagnostic(WARNING, "ColumnCollision", 0,
                                   f"{source_key} field {name!r} collides with an "
                                   f"existing table column; column kept"))
                continue
            table[name] = [value] * nrows
            data["DESCR"].append(name)
            data["UNIT"].append(unit)
    return doc


def standardize_units(subdoc: dict, table: UnitTable | None = None,
                      diagnostics: list[Diagnostic] | None = None) -> dict:
    """Rewrite every recognized unit to its target, scaling the values.

    Applies to both COMMON blocks and all DATA columns.  Missing values stay
    missing and unknown units pass through, which makes the transformation
    idempotent: canonical units map to themselves with factor one.
    """
    table = table or default_unit_table()
    doc = copy.deepcopy(subdoc)

    for key in ("COMMON", COMMON_FIRST_SUB):
        block = doc.get(key)
        if not block:
            continue
        units = block.get("UNIT", [])
        values = block.get("VALUE", [])
        for i, unit in enumerate(units):
            rule = table.rule_for(unit)
            if rule is None:
                continue
            units[i] = rule.target_unit
            if i < len(values) and values[i] is not None:
                values[i] = values[i] * rule.factor

    data = doc.get("DATA")
    if data:
        units = data.get("UNIT", [])
        columns = list(data.get("TABLE", {}).values())
        for i, unit in enumerate(units):
            rule = table.rule_for(unit)
            if rule is None:
                continue
            units[i] = rule.target_unit
            if i < len(columns):
                column = columns[i]
                for j, value in enumerate(column):
                    if value is not None:
                        column[j] = value * rule.factor
    return doc


def normalize_entry(entry_doc: dict, table: UnitTable | None = None,
                    diagnostics: list[Diagnostic] | None = None) -> list[dict]:
    """Full pipeline: split, broadcast COMMON, standardize units."""
    documents = entry_to_subentry_documents(entry_doc, diagnostics)
    documents = [merge_common_into_data(doc, diagnostics) for doc in documents]
    return [standardize_units(doc, table, diagnostics) for doc in documents]
