"""Document queries in the familiar JSON-object style.

A query is a JSON object whose keys are dotted paths.  A scalar value
demands equality; an operator object supports ``$regex``, ``$lt``, ``$lte``,
``$gt``, ``$gte``, and ``$exists``.  Multiple keys, and multiple operators
under one key, conjoin.  Anything else is rejected loudly rather than
silently mis-evaluated.

Matching resolves paths like :func:`exfordb.document.get_path` and fans out
over a resolved array: the predicate holds if it holds for the array itself
or for any element.  Regular expressions use unanchored search semantics on
strings only; a conservative dialect without backreferences or lookaround
is enforced at parse time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Iterator

from .document import MISSING, from_json_text, get_path
from .errors import QueryError, UnsupportedOperator
from .store import DocumentStore
from .syntax import Diagnostic

EQ = "eq"
REGEX = "regex"
LT = "lt"
LTE = "lte"
GT = "gt"
GTE = "gte"
EXISTS = "exists"

_CMP_OPERATORS = {"$lt": LT, "$lte": LTE, "$gt": GT, "$gte": GTE}

# Python's re accepts these, but this engine promises a portable subset.
_UNSUPPORTED_REGEX = re.compile(r"\(\?<?[=!]|\\[1-9]")


@dataclass(frozen=True)
class PathPredicate:
    path: str
    op: str
    value: Any


@dataclass(frozen=True)
class QueryExpr:
    predicates: tuple[PathPredicate, ...]

    def __iter__(self):
        return iter(self.predicates)


def compile_regex(pattern: str) -> re.Pattern:
    if not isinstance(pattern, str):
        raise QueryError(f"$regex takes a pattern string, got {type(pattern).__name__}")
    if _UNSUPPORTED_REGEX.search(pattern):
        raise QueryError(
            f"pattern {pattern!r} uses lookaround or backreferences, "
            "which are outside the supported dialect")
    try:
        return re.compile(pattern)
    except re.error as exc:
        raise QueryError(f"invalid pattern {pattern!r}: {exc}") from None


def query_from_object(obj: Any) -> QueryExpr:
    """Build a query from an already-parsed JSON object."""
    if not isinstance(obj, dict):
        raise QueryError("a query must be a JSON object")
    predicates: list[PathPredicate] = []
    for path, condition in obj.items():
        if isinstance(condition, dict) and any(key.startswith("$") for key in condition):
            for operator, operand in condition.items():
                predicates.append(_operator_predicate(path, operator, operand))
        else:
            predicates.append(PathPredicate(path, EQ, condition))
    return QueryExpr(tuple(predicates))


def _operator_predicate(path: str, operator: str, operand: Any) -> PathPredicate:
    if not operator.startswith("$"):
        raise UnsupportedOperator(
            f"cannot mix operator and plain keys under {path!r} ({operator!r})")
    if operator == "$regex":
        return PathPredicate(path, REGEX, compile_regex(operand))
    if operator in _CMP_OPERATORS:
        if not _is_number(operand):
            raise QueryError(f"{operator} takes a number, got {operand!r}")
        return PathPredicate(path, _CMP_OPERATORS[operator], operand)
    if operator == "$exists":
        if not isinstance(operand, bool):
            raise QueryError(f"$exists takes a boolean, got {operand!r}")
        return PathPredicate(path, EXISTS, operand)
    raise UnsupportedOperator(f"operator {operator!r} is not supported")


def parse_query(text: str) -> QueryExpr:
    """Parse JSON query text into predicates; empty object matches all."""
    return query_from_object(from_json_text(text))


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def values_equal(a: Any, b: Any) -> bool:
    """Type-and-value equality, with int and float interchangeable."""
    if _is_number(a) and _is_number(b):
        return float(a) == float(b)
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b
    if type(a) is not type(b):
        return False
    if isinstance(a, list):
        return len(a) == len(b) and all(values_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, dict):
        return a.keys() == b.keys() and all(values_equal(v, b[k]) for k, v in a.items())
    return a == b


def _holds_directly(pred: PathPredicate, value: Any) -> bool:
    if pred.op == EQ:
        return values_equal(value, pred.value)
    if pred.op == REGEX:
        return isinstance(value, str) and pred.value.search(value) is not None
    if not _is_number(value):
        return False
    if pred.op == LT:
        return value < pred.value
    if pred.op == LTE:
        return value <= pred.value
    if pred.op == GT:
        return value > pred.value
    return value >= pred.value


def _predicate_holds(pred: PathPredicate, doc: Any) -> bool:
    resolved = get_path(doc, pred.path)
    if pred.op == EXISTS:
        return (resolved is not MISSING) is pred.value
    if resolved is MISSING:
        return False
    if _holds_directly(pred, resolved):
        return True
    if isinstance(resolved, list):
        return any(_holds_directly(pred, element) for element in resolved)
    return False


def match_document(query: QueryExpr, doc: Any) -> bool:
    """True iff every predicate holds; the empty query matches everything."""
    return all(_predicate_holds(pred, doc) for pred in query.predicates)


def find(store: DocumentStore, query: QueryExpr,
         diagnostics: list[Diagnostic] | None = None) -> Iterator[dict]:
    """Stream matching documents in store scan order."""
    for doc in store.scan(diagnostics):
        if match_document(query, doc):
            yield doc


def find_one(store: DocumentStore, query: QueryExpr) -> dict | None:
    """First match, taking the ID-index shortcut for a pure ID lookup."""
    if len(query.predicates) == 1:
        pred = query.predicates[0]
        if pred.op == EQ and pred.path == "ID" and isinstance(pred.value, str):
            return store.get_by_id(pred.value)
    return next(find(store, query), None)
