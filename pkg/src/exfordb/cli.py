"""Command-line front end.

Subcommands cover the whole pipeline: ``convert`` (EXFOR text to NDJSON
entry documents), ``validate`` (parse and report diagnostics only),
``ingest`` (parse, convert, normalize, store), ``query`` (search the
store), and ``stats`` (summarize the store, optionally with figures).

Data goes to standard output, diagnostics to standard error, so the tool
composes in shell pipelines.  Exit codes: 0 clean, 1 completed with
warnings, 2 structural failures in strict mode, 3 usage or I/O errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .document import entry_to_document, to_json_text
from .errors import ExforError
from .normalize import UnitTable, default_unit_table, normalize_entry
from .query import find, find_one, parse_query
from .report import collect_stats, render_figures
from .store import DocumentStore
from .syntax import Diagnostic, parse_stream

EXIT_OK = 0
EXIT_WARNINGS = 1
EXIT_STRICT_FAILURE = 2
EXIT_USAGE = 3

STORE_ENV_VAR = "EXFORDB_STORE"
_STRICT_FAILURE_CODES = {"CounterMismatch", "RaggedRow"}


class CliError(Exception):
    """Usage or I/O problem; maps to exit code 3."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="exfordb", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_flags(p, *, config=True, strict=False, out=False, store=False,
                  units=False, pretty=False):
        if config:
            p.add_argument("--config", metavar="PATH",
                           help="key=value file supplying defaults for the flags")
        if out:
            p.add_argument("--out", metavar="PATH", default=None,
                           help="write documents here instead of standard output")
        if store:
            p.add_argument("--store", metavar="PATH", default=None,
                           help=f"store file (default: ${STORE_ENV_VAR})")
        if units:
            p.add_argument("--units", metavar="PATH", default=None,
                           help="unit rule table replacing the built-in defaults")
        if strict:
            p.add_argument("--strict", action="store_true", default=None,
                           help="treat counter mismatches and ragged rows as failures")
        if pretty:
            p.add_argument("--pretty", action="store_true", default=None,
                           help="pretty-print documents instead of NDJSON")

    p = sub.add_parser("convert", help="convert EXFOR text to NDJSON entry documents")
    p.add_argument("inputs", nargs="+", metavar="INPUT", help="EXFOR files or directories")
    add_flags(p, out=True, strict=True, pretty=True)

    p = sub.add_parser("validate", help="parse and report diagnostics without output")
    p.add_argument("inputs", nargs="+", metavar="INPUT")
    add_flags(p, strict=True)

    p = sub.add_parser("ingest", help="parse, normalize, and store subentry documents")
    p.add_argument("inputs", nargs="+", metavar="INPUT")
    add_flags(p, store=True, units=True, strict=True)

    p = sub.add_parser("query", help="search the store with a JSON query")
    p.add_argument("query", metavar="QUERY",
                   help="JSON query object, or the path of a file containing one")
    add_flags(p, store=True, pretty=True)
    p.add_argument("--first", action="store_true", default=None,
                   help="print only the first match")
    p.add_argument("--count", action="store_true", default=None,
                   help="print only the number of matches")

    p = sub.add_parser("stats", help="summarize the store")
    add_flags(p, store=True, units=True)
    p.add_argument("--figdir", metavar="DIR", default=None,
                   help="also render summary figures as PNG files into DIR")

    return parser


def _load_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    config: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read config file: {exc}") from None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise CliError(f"{path}:{line_no}: expected key=value, got {raw.strip()!r}")
        config[key.strip()] = value.strip()
    return config


_TRUE_WORDS = {"1", "true", "yes", "on"}
_FALSE_WORDS = {"0", "false", "no", "off"}


def _setting(args, config: dict[str, str], name: str, default=None):
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in config:
        return config[name]
    return default


def _flag(args, config: dict[str, str], name: str) -> bool:
    value = _setting(args, config, name, False)
    if isinstance(value, bool):
        return value
    word = str(value).strip().lower()
    if word in _TRUE_WORDS:
        return True
    if word in _FALSE_WORDS:
        return False
    raise CliError(f"config value {name}={value!r} is not a boolean")


def _resolve_store_path(args, config, required: bool) -> Path | None:
    path = _setting(args, config, "store") or os.environ.get(STORE_ENV_VAR)
    if not path:
        if required:
            raise CliError(f"no store path: pass --store or set ${STORE_ENV_VAR}")
        return None
    return Path(path)


def _load_unit_table(args, config) -> UnitTable:
    path = _setting(args, config, "units")
    if not path:
        return default_unit_table()
    try:
        return UnitTable.load(path)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot load unit rules: {exc}") from None


def _expand_inputs(paths: list[str]) -> list[Path]:
    files: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            found = sorted(p for p in path.rglob("*") if p.is_file())
            if not found:
                raise CliError(f"directory {path} contains no files")
            files.extend(found)
        elif path.is_file():
            files.append(path)
        else:
            raise CliError(f"input not found: {path}")
    return files


def _print_diagnostics(path: Path, diags: list[Diagnostic]) -> None:
    for d in diags:
        print(f"{path}:{d.line_no}: {d.severity}: {d.code}: {d.message}", file=sys.stderr)


def _exit_code(diags: list[Diagnostic], strict: bool) -> int:
    if strict and any(
        d.code in _STRICT_FAILURE_CODES or d.severity == "error" for d in diags
    ):
        return EXIT_STRICT_FAILURE
    return EXIT_WARNINGS if diags else EXIT_OK


def _parse_files(files: list[Path], strict: bool):
    """Yield (path, result) over all inputs, reading files leniently."""
    for path in files:
        try:
            text = path.read_text(encoding="utf-8", errors="replace")
        except OSError as exc:
            raise CliError(f"cannot read {path}: {exc}") from None
        for result in parse_stream(text, strict=strict):
            yield path, result


def cmd_convert(args, config) -> int:
    strict = _flag(args, config, "strict")
    pretty = _flag(args, config, "pretty")
    files = _expand_inputs(args.inputs)
    out_path = _setting(args, config, "out")

    all_diags: list[Diagnostic] = []
    sink = open(out_path, "w", encoding="utf-8") if out_path else sys.stdout
    try:
        for path, result in _parse_files(files, strict):
            diags = list(result.diagnostics)
            if result.entry is not None:
                doc = entry_to_document(result.entry, diags)
                sink.write(to_json_text(doc, pretty=pretty) + "\n")
            _print_diagnostics(path, diags)
            all_diags.extend(diags)
    finally:
        if out_path:
            sink.close()
    return _exit_code(all_diags, strict)


def cmd_validate(args, config) -> int:
    strict = _flag(args, config, "strict")
    files = _expand_inputs(args.inputs)

    all_diags: list[Diagnostic] = []
    per_file: dict[Path, dict[str, list[Diagnostic]]] = {}
    for path, result in _parse_files(files, strict):
        diags = list(result.diagnostics)
        if result.entry is not None:
            entry_to_document(result.entry, diags)
        for d in diags:
            per_file.setdefault(path, {}).setdefault(d.code, []).append(d)
        all_diags.extend(diags)

    if per_file:
        print("file\tcode\tcount\tfirst")
        for path, by_code in per_file.items():
            for code, diags in sorted(by_code.items()):
                first = min(diags, key=lambda d: d.line_no)
                print(f"{path}\t{code}\t{len(diags)}\t{path}:{first.line_no}")
    print(f"checked {len(files)} file(s), {len(all_diags)} diagnostic(s)", file=sys.stderr)
    return _exit_code(all_diags, strict)


def cmd_ingest(args, config) -> int:
    strict = _flag(args, config, "strict")
    files = _expand_inputs(args.inputs)
    store_path = _resolve_store_path(args, config, required=True)
    table = _load_unit_table(args, config)
    store = DocumentStore(store_path)

    all_diags: list[Diagnostic] = []
    entries = 0
    documents = 0

    def pipeline():
        nonlocal entries, documents
        for path, result in _parse_files(files, strict):
            diags = list(result.diagnostics)
            if result.entry is not None:
                entries += 1
                entry_doc = entry_to_document(result.entry, diags)
                for doc in normalize_entry(entry_doc, table, diags):
                    documents += 1
                    yield doc
            _print_diagnostics(path, diags)
            all_diags.extend(diags)

    report = store.ingest(pipeline())
    all_diags.extend(report.warnings)
    print(f"entries\t{entries}")
    print(f"documents\t{documents}")
    print(f"inserted\t{report.inserted}")
    print(f"replaced\t{report.replaced}")
    print(f"rejected\t{report.rejected}")
    print(f"warnings\t{len(all_diags)}")
    return _exit_code(all_diags, strict)


def _open_store(args, config) -> DocumentStore:
    store_path = _resolve_store_path(args, config, required=True)
    if not store_path.exists():
        raise CliError(f"store not found: {store_path}")
    return DocumentStore(store_path)


def _read_query_text(raw: str) -> str:
    text = raw.strip()
    if not text.lstrip().startswith("{") and Path(raw).is_file():
        return Path(raw).read_text(encoding="utf-8")
    return text


def cmd_query(args, config) -> int:
    pretty = _flag(args, config, "pretty")
    first = _flag(args, config, "first")
    count = _flag(args, config, "count")
    store = _open_store(args, config)
    try:
        query = parse_query(_read_query_text(args.query))
    except ExforError as exc:
        raise CliError(f"bad query: {exc}") from None

    if first:
        doc = find_one(store, query)
        if doc is not None:
            print(to_json_text(doc, pretty=pretty))
        return EXIT_OK

    matches = 0
    for doc in find(store, query):
        matches += 1
        if not count:
            print(to_json_text(doc, pretty=pretty))
    if count:
        print(matches)
    return EXIT_OK


def cmd_stats(args, config) -> int:
    store = _open_store(args, config)
    table = _load_unit_table(args, config)
    stats = collect_stats(store, table)

    print(f"documents\t{stats.doc_count}")
    print(f"entries\t{stats.entry_count}")
    for keyword, n in stats.keyword_counts.most_common(10):
        print(f"keyword\t{keyword}\t{n}")
    for unit, n in sorted(stats.unit_counts.items()):
        print(f"unit_stored\t{unit}\t{n}")
    for unit, n in sorted(stats.standardized_unit_counts.items()):
        print(f"unit_standardized\t{unit}\t{n}")
    for unit in stats.unconverted_units:
        print(f"unconverted\t{unit}\t{stats.unit_counts[unit]}")

    figdir = _setting(args, config, "figdir")
    if figdir:
        for path in render_figures(stats, figdir):
            print(f"figure\t{path}")
    return EXIT_OK


_COMMANDS = {
    "convert": cmd_convert,
    "validate": cmd_validate,
    "ingest": cmd_ingest,
    "query": cmd_query,
    "stats": cmd_stats,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = {}
    try:
        config = _load_config(getattr(args, "config", None))
        return _COMMANDS[args.command](args, config)
    except CliError as exc:
        print(f"exfordb: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExforError as exc:
        print(f"exfordb: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
