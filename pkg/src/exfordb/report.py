"""Store summaries and their rendered figures.

The summary counts documents, entries, BIB keyword use, and unit use.  For
units two views exist: the tokens as stored, and the tokens after pushing
them through the current rule table.  Any token the table would still
change, or cannot handle at all, lands on the unconverted list; a store
ingested with the default rules should only show canonical and pass-through
units there.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .normalize import UnitTable, default_unit_table
from .store import DocumentStore


@dataclass
class StoreStats:
    doc_count: int
    entry_count: int
    keyword_counts: Counter
    unit_counts: Counter
    standardized_unit_counts: Counter
    unconverted_units: list[str]


def _iter_units(doc: dict):
    for key in ("COMMON", "COMMON_firstSub"):
        block = doc.get(key)
        if isinstance(block, dict):
            yield from (u for u in block.get("UNIT", []) if u)
    data = doc.get("DATA")
    if isinstance(data, dict):
        yield from (u for u in data.get("UNIT", []) if u)


def collect_stats(store: DocumentStore, table: UnitTable | None = None) -> StoreStats:
    table = table or default_unit_table()
    keyword_counts: Counter = Counter()
    unit_counts: Counter = Counter()
    standardized: Counter = Counter()
    entries: set[str] = set()
    doc_count = 0

    for doc in store.scan():
        doc_count += 1
        entry_id = doc.get("ENTRYID") or str(doc.get("ID", ""))[:5]
        if entry_id:
            entries.add(entry_id)
        bib = doc.get("BIB")
        if isinstance(bib, dict):
            keyword_counts.update(bib.keys())
        for unit in _iter_units(doc):
            unit_counts[unit] += 1
            rule = table.rule_for(unit)
            standardized[rule.target_unit if rule else unit] += 1

    unconverted = sorted(
        unit for unit in unit_counts
        if (rule := table.rule_for(unit)) is None
        or rule.target_unit != unit or rule.factor != 1.0
    )
    return StoreStats(
        doc_count=doc_count,
        entry_count=len(entries),
        keyword_counts=keyword_counts,
        unit_counts=unit_counts,
        standardized_unit_counts=standardized,
        unconverted_units=unconverted,
    )


def render_figures(stats: StoreStats, outdir: str | Path, top: int = 15) -> list[Path]:
    """Render the summary as PNG files; returns the paths written."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    fig, axes = plt.subplots(1, 2, figsize=(11, 4.5), sharey=False)
    for ax, counter, title in (
        (axes[0], stats.unit_counts, "units as stored"),
        (axes[1], stats.standardized_unit_counts, "units after rule table"),
    ):
        items = counter.most_common()
        labels = [name for name, _ in items]
        values = [count for _, count in items]
        ax.bar(range(len(items)), values, color="#4878a8")
        ax.set_xticks(range(len(items)))
        ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=8)
        ax.set_title(title)
        ax.set_ylabel("column count")
    fig.tight_layout()
    unit_path = outdir / "unit_histogram.png"
    fig.savefig(unit_path, dpi=150)
    plt.close(fig)
    written.append(unit_path)

    items = stats.keyword_counts.most_common(top)
    fig, ax = plt.subplots(figsize=(7, 0.35 * max(len(items), 4) + 1.2))
    ax.barh([name for name, _ in reversed(items)],
            [count for _, count in reversed(items)], color="#4878a8")
    ax.set_xlabel("documents")
    ax.set_title(f"top {len(items)} bibliography keywords")
    fig.tight_layout()
    keyword_path = outdir / "keyword_frequency.png"
    fig.savefig(keyword_path, dpi=150)
    plt.close(fig)
    written.append(keyword_path)

    return written
