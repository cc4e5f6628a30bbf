"""exfordb: EXFOR exchange-format files as a queryable document collection.

The pipeline runs in four stages, each usable on its own:

- :mod:`exfordb.syntax` parses EXFOR text into a faithful syntax tree;
- :mod:`exfordb.document` converts the tree losslessly into JSON-style
  documents and provides dotted-path access;
- :mod:`exfordb.normalize` splits entries into self-contained subentry
  documents with merged bibliography, broadcast constants, and
  standardized units;
- :mod:`exfordb.store` and :mod:`exfordb.query` persist the documents as
  NDJSON and evaluate JSON-object queries over them.
"""

__version__ = "0.1.0"

from .document import (
    MISSING,
    entry_to_document,
    from_json_text,
    get_path,
    set_path,
    to_json_text,
)
from .normalize import (
    UnitRule,
    UnitTable,
    default_unit_table,
    entry_to_subentry_documents,
    merge_common_into_data,
    normalize_entry,
    standardize_units,
    unit_conversion_rule,
)
from .query import QueryExpr, find, find_one, match_document, parse_query
from .store import DocumentStore, IngestReport
from .syntax import (
    BibBlock,
    BibItem,
    CommonBlock,
    CounterPair,
    DataBlock,
    Diagnostic,
    ExforEntry,
    ExforSubentry,
    ParseResult,
    RawLine,
    RecordKind,
    classify_record,
    parse_entry,
    parse_fortran_number,
    parse_stream,
    slice_fields,
    split_line,
)

__all__ = [
    "MISSING",
    "BibBlock",
    "BibItem",
    "CommonBlock",
    "CounterPair",
    "DataBlock",
    "Diagnostic",
    "DocumentStore",
    "ExforEntry",
    "ExforSubentry",
    "IngestReport",
    "ParseResult",
    "QueryExpr",
    "RawLine",
    "RecordKind",
    "UnitRule",
    "UnitTable",
    "classify_record",
    "default_unit_table",
    "entry_to_document",
    "entry_to_subentry_documents",
    "find",
    "find_one",
    "from_json_text",
    "get_path",
    "match_document",
    "merge_common_into_data",
    "normalize_entry",
    "parse_entry",
    "parse_fortran_number",
    "parse_query",
    "parse_stream",
    "set_path",
    "slice_fields",
    "split_line",
    "standardize_units",
    "to_json_text",
    "unit_conversion_rule",
]
