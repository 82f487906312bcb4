"""Text formats for problems, solutions and operators.

Problem files are line oriented::

    # comment
    objects 3
    labels 2
    object_names a b c        # optional
    label_names off on        # optional
    scope 0 1
    0 0 : 3
    0 1 : 7
    1 0 : -inf
    1 1 : +inf
    scope b c                 # objects by id or by name
    ...

Every scope is followed by exactly one entry per labeling of the scope.
Weights are decimal literals or ``-inf`` (BOTTOM) / ``+inf`` (TOP).
See ``docs/formats.md`` for the full grammar of all three formats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

import numpy as np

from .core import (
    BOTTOM,
    TOP,
    GeneralProblem,
    NonUniformOperator,
    ScopeTable,
    SolutionSet,
    merge_duplicate_scopes,
    validate,
)
from .reductions import DissimilarityMatrix


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Names:
    objects: tuple[str, ...] | None = None
    labels: tuple[str, ...] | None = None

    def object(self, i: int) -> str:
        return self.objects[i] if self.objects else str(i)

    def label(self, k: int) -> str:
        return self.labels[k] if self.labels else str(k)


# ---------------------------------------------------------------------------
# weights


def format_weight(w: float) -> str:
    w = float(w)
    if w == BOTTOM:
        return "-inf"
    if w == TOP:
        return "+inf"
    if w.is_integer():
        return str(int(w))
    return repr(w)


class _WeightReader:
    """Parses weight literals and refuses decimals that collapse at double precision."""

    def __init__(self) -> None:
        self.seen: dict[float, Decimal] = {}

    def __call__(self, token: str, line: int) -> float:
        if token == "-inf":
            return BOTTOM
        if token in ("+inf", "inf"):
            return TOP
        try:
            dec = Decimal(token)
        except InvalidOperation:
            raise ParseError(f"bad weight literal {token!r}", line) from None
        if not dec.is_finite():
            raise ParseError(f"bad weight literal {token!r}", line)
        w = float(dec)
        if math.isinf(w):
            raise ParseError(f"weight {token} is out of range", line)
        prev = self.seen.setdefault(w, dec)
        if prev != dec:
            raise ParseError(f"weights {prev} and {token} are indistinguishable at double precision", line)
        return w


# ---------------------------------------------------------------------------
# problems


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _header_int(parts, lineno) -> int:
    if len(parts) != 2:
        raise ParseError(f"'{parts[0]}' takes exactly one integer", lineno)
    try:
        v = int(parts[1])
    except ValueError:
        raise ParseError(f"'{parts[0]}' takes exactly one integer", lineno) from None
    if v < 1:
        raise ParseError(f"'{parts[0]}' must be positive", lineno)
    return v


def _resolve(token: str, names: tuple[str, ...] | None, size: int, what: str, lineno: int) -> int:
    if names and token in names:
        return names.index(token)
    try:
        v = int(token)
    except ValueError:
        raise ParseError(f"unknown {what} {token!r}", lineno) from None
    if not 0 <= v < size:
        raise ParseError(f"{what} id out of range: {v}", lineno)
    return v


def parse_problem_with_names(text: str | bytes) -> tuple[GeneralProblem, Names]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    weight = _WeightReader()
    num_objects = num_labels = None
    object_names = label_names = None
    scopes: list[tuple[tuple[int, ...], dict, int]] = []

    for lineno, line in _tokens(text):
        parts = line.split()
        head = parts[0]
        if head == "objects":
            num_objects = _header_int(parts, lineno)
        elif head == "labels":
            num_labels = _header_int(parts, lineno)
        elif head in ("object_names", "label_names"):
            names = tuple(parts[1:])
            if len(set(names)) != len(names):
                raise ParseError(f"duplicate name in {head}", lineno)
            if any(n.lstrip("-").isdigit() for n in names):
                raise ParseError(f"{head} must not be integers", lineno)
            if head == "object_names":
                object_names = names
            else:
                label_names = names
        elif head == "scope":
            if num_objects is None or num_labels is None:
                raise ParseError("'objects' and 'labels' must precede the first scope", lineno)
            objs = tuple(_resolve(t, object_names, num_objects, "object", lineno) for t in parts[1:])
            if not objs:
                raise ParseError("empty scope", lineno)
            if len(set(objs)) != len(objs):
                raise ParseError("repeated object in scope", lineno)
            scopes.append((objs, {}, lineno))
        elif ":" in line:
            if not scopes:
                raise ParseError("table entry before any scope", lineno)
            lhs, _, rhs = line.partition(":")
            objs, entries, _ = scopes[-1]
            labels = tuple(_resolve(t, label_names, num_labels, "label", lineno) for t in lhs.split())
            if len(labels) != len(objs):
                raise ParseError(f"entry has {len(labels)} labels, scope has {len(objs)} objects", lineno)
            if labels in entries:
                raise ParseError(f"duplicate entry {' '.join(map(str, labels))}", lineno)
            w = rhs.split()
            if len(w) != 1:
                raise ParseError("entry needs exactly one weight after ':'", lineno)
            entries[labels] = weight(w[0], lineno)
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno)

    if num_objects is None or num_labels is None:
        raise ParseError("missing 'objects' or 'labels' header")
    if object_names is not None and len(object_names) != num_objects:
        raise ParseError(f"object_names lists {len(object_names)} names for {num_objects} objects")
    if label_names is not None and len(label_names) != num_labels:
        raise ParseError(f"label_names lists {len(label_names)} names for {num_labels} labels")

    tables = []
    for index, (objs, entries, lineno) in enumerate(scopes):
        expected = num_labels ** len(objs)
        if len(entries) != expected:
            raise ParseError(
                f"incomplete table for scope {index} ({len(entries)} of {expected} entries)", lineno
            )
        values = np.empty((num_labels,) * len(objs))
        for x, w in entries.items():
            values[x] = w
        perm = sorted(range(len(objs)), key=lambda a: objs[a])
        tables.append(ScopeTable(tuple(objs[a] for a in perm), values.transpose(perm)))

    problem = merge_duplicate_scopes(GeneralProblem(num_objects, num_labels, tuple(tables)))
    errors = validate(problem)
    if errors:
        raise ParseError("; ".join(errors))
    return problem, Names(object_names, label_names)


def parse_problem(text: str | bytes) -> GeneralProblem:
    return parse_problem_with_names(text)[0]


def serialize_problem(p: GeneralProblem, names: Names | None = None) -> bytes:
    """Canonical text: merged scopes sorted by (size, ids), entries in lexicographic order."""
    p = merge_duplicate_scopes(p)
    out = [f"objects {p.num_objects}", f"labels {p.num_labels}"]
    if names and names.objects:
        out.append("object_names " + " ".join(names.objects))
    if names and names.labels:
        out.append("label_names " + " ".join(names.labels))
    for t in p.tables:
        out.append("scope " + " ".join(map(str, t.scope)))
        for x, w in t.entries():
            out.append(" ".join(map(str, x)) + " : " + format_weight(w))
    return ("\n".join(out) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# solutions


def _table(rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    return ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]


def _solution_record(sol: SolutionSet, names: Names, extra: dict | None) -> dict:
    rec: dict = {"status": sol.status.value, "d": sol.d}
    if sol.decline is not None:
        dc = sol.decline
        rec["decline"] = {
            "pivot": names.object(dc.pivot),
            "objects": [names.object(i) for i in dc.objects],
            "labeling": [names.label(v) for v in dc.labeling],
            "restricted_value": format_weight(dc.restricted_value),
            "extension_cost": format_weight(dc.extension_cost),
        }
    if extra:
        rec.update(extra)
    rec["labellings"] = [
        {"rank": r, "objective": format_weight(w), "labeling": [names.label(v) for v in x]}
        for r, (x, w) in enumerate(sol.labellings, start=1)
    ]
    return rec


def serialize_solution(
    sol: SolutionSet, names: Names | None = None, fmt: str = "table", extra: dict | None = None
) -> bytes:
    """Solution as an aligned text table (``fmt="table"``) or JSON (``fmt="json"``).

    ``extra`` adds scalar fields (e.g. filter results) after the header.
    """
    names = names or Names()
    rec = _solution_record(sol, names, extra)
    if fmt == "json":
        return (json.dumps(rec, indent=2) + "\n").encode("utf-8")
    if fmt != "table":
        raise ValueError(f"unknown solution format {fmt!r}")

    lines = [f"status {rec['status']}", f"d {rec['d']}"]
    for key, value in rec.get("decline", {}).items():
        lines.append(f"{key} {' '.join(value) if isinstance(value, list) else value}")
    for key, value in (extra or {}).items():
        lines.append(f"{key} {' '.join(map(str, value)) if isinstance(value, list) else value}")
    if rec["labellings"]:
        header = ["rank", "objective", "labeling"]
        rows = [header] + [
            [str(e["rank"]), e["objective"], " ".join(e["labeling"])] for e in rec["labellings"]
        ]
        lines.extend(_table(rows))
    return ("\n".join(lines) + "\n").encode("utf-8")


def serialize_witness(witness, names: Names | None = None) -> bytes:
    """Report of a declined order reduction."""
    names = names or Names()
    lines = [
        "status declined",
        "stage reduce",
        f"scope_index {witness.scope_index}",
        "scope " + " ".join(names.object(i) for i in witness.scope),
        "labeling " + " ".join(names.label(v) for v in witness.labeling),
        f"value {format_weight(witness.value)}",
        f"reconstructed {format_weight(witness.reconstructed)}",
    ]
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# dissimilarities


def parse_dissimilarity(text: str | bytes) -> DissimilarityMatrix:
    """``points N`` header, then ``s t : r`` lines; unlisted pairs are BOTTOM."""
    weight = _WeightReader()
    n = None
    values = {}
    for lineno, line in _tokens(text.decode("utf-8") if isinstance(text, bytes) else text):
        parts = line.split()
        if parts[0] == "points":
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise ParseError("'points' takes one positive integer", lineno)
            n = int(parts[1])
            continue
        if n is None:
            raise ParseError("'points' must come first", lineno)
        lhs, sep, rhs = line.partition(":")
        ids = lhs.split()
        if not sep or len(ids) != 2 or len(rhs.split()) != 1:
            raise ParseError("expected 's t : r'", lineno)
        try:
            s, t = int(ids[0]), int(ids[1])
        except ValueError:
            raise ParseError("point ids must be integers", lineno) from None
        if s == t or not (0 <= s < n and 0 <= t < n):
            raise ParseError("bad point pair", lineno)
        key = (min(s, t), max(s, t))
        if key in values:
            raise ParseError("duplicate pair", lineno)
        values[key] = weight(rhs.split()[0], lineno)
    if n is None:
        raise ParseError("missing 'points' header")
    return DissimilarityMatrix.from_upper(n, values)


# ---------------------------------------------------------------------------
# operators


def parse_operator(text: str | bytes) -> NonUniformOperator:
    """Operator file: ``objects``/``labels`` headers, then ``operator I`` blocks of ``a b c : v`` lines."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    num_objects = num_labels = None
    tables: dict[int, dict] = {}
    current = None
    for lineno, line in _tokens(text):
        parts = line.split()
        if parts[0] == "objects":
            num_objects = _header_int(parts, lineno)
        elif parts[0] == "labels":
            num_labels = _header_int(parts, lineno)
        elif parts[0] == "operator":
            if num_objects is None or num_labels is None:
                raise ParseError("'objects' and 'labels' must precede the first operator", lineno)
            if len(parts) != 2:
                raise ParseError("'operator' takes one object id", lineno)
            current = _resolve(parts[1], None, num_objects, "object", lineno)
            if current in tables:
                raise ParseError(f"operator {current} given twice", lineno)
            tables[current] = {}
        elif ":" in line:
            if current is None:
                raise ParseError("entry before any operator", lineno)
            lhs, _, rhs = line.partition(":")
            args = tuple(_resolve(t, None, num_labels, "label", lineno) for t in lhs.split())
            if len(args) != 3:
                raise ParseError("operator entries take three arguments", lineno)
            if args in tables[current]:
                raise ParseError("duplicate operator entry", lineno)
            val = rhs.split()
            if len(val) != 1:
                raise ParseError("entry needs exactly one label after ':'", lineno)
            tables[current][args] = _resolve(val[0], None, num_labels, "label", lineno)
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno)
    if num_objects is None or num_labels is None:
        raise ParseError("missing 'objects' or 'labels' header")
    out = np.zeros((num_objects, num_labels, num_labels, num_labels), dtype=np.int64)
    for obj in range(num_objects):
        entries = tables.get(obj)
        if entries is None or len(entries) != num_labels**3:
            raise ParseError(f"incomplete operator table for object {obj}")
        for args, v in entries.items():
            out[(obj,) + args] = v
    return NonUniformOperator(out)


def serialize_operator(op: NonUniformOperator) -> bytes:
    k = op.num_labels
    lines = [f"objects {op.num_objects}", f"labels {k}"]
    for obj in range(op.num_objects):
        lines.append(f"operator {obj}")
        for args in np.ndindex(k, k, k):
            lines.append(f"{args[0]} {args[1]} {args[2]} : {op.tables[(obj,) + args]}")
    return ("\n".join(lines) + "\n").encode("utf-8")


__all__ = [
    "ParseError",
    "Names",
    "format_weight",
    "parse_problem",
    "parse_problem_with_names",
    "serialize_problem",
    "serialize_solution",
    "serialize_witness",
    "parse_dissimilarity",
    "parse_operator",
    "serialize_operator",
]
