"""Reading and writing GroupFile documents.

A GroupFile is JSON::

    {"name": "Q8",
     "representation": {"kind": "permutation", "degree": 8,
                        "generators": [[1, 3, 5, 6, 2, 7, 0, 4], [2, 4, 3, 7, 6, 1, 5, 0]]}}

    {"name": "C2", "representation": {"kind": "cayley", "order": 2, "table": [[0, 1], [1, 0]]}}

``.json`` files hold one document; ``.jsonl`` files hold one per line.
Indices are 0-based.  Cayley tables whose identity is not at index 0 are
re-indexed (identity moved to 0, the other elements keep their relative
order).  Every ingested group is fully re-validated.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Union

import numpy as np

from .core import Group, group_from_permutations
from .errors import AutlError, InvalidGroup

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "GroupFile",
    "type": "object",
    "required": ["name", "representation"],
    "properties": {
        "name": {"type": "string"},
        "representation": {
            "oneOf": [
                {
                    "type": "object",
                    "required": ["kind", "degree", "generators"],
                    "properties": {
                        "kind": {"const": "permutation"},
                        "degree": {"type": "integer", "minimum": 1},
                        "generators": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
                    },
                },
                {
                    "type": "object",
                    "required": ["kind", "order", "table"],
                    "properties": {
                        "kind": {"const": "cayley"},
                        "order": {"type": "integer", "minimum": 1},
                        "table": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
                    },
                },
            ]
        },
    },
}


class GroupFileError(InvalidGroup):
    pass


@dataclass
class SkippedGroup:
    source: str
    reason: str


def normalise_identity(table: np.ndarray) -> np.ndarray:
    """Re-index so that the identity sits at index 0."""
    n = table.shape[0]
    ar = np.arange(n)
    rows = np.flatnonzero(np.all(table == ar, axis=1))
    ident = [int(e) for e in rows if np.array_equal(table[:, e], ar)]
    if not ident:
        raise GroupFileError("table has no two-sided identity element")
    e = ident[0]
    if e == 0:
        return table
    order = np.array([e] + [i for i in range(n) if i != e])
    pos = np.empty(n, dtype=np.int64)
    pos[order] = ar
    return pos[table[np.ix_(order, order)]]


def group_from_document(doc: dict, max_order: int = 2048) -> Group:
    if not isinstance(doc, dict):
        raise GroupFileError("document must be a JSON object")
    name = doc.get("name")
    rep = doc.get("representation")
    if not isinstance(name, str) or not isinstance(rep, dict):
        raise GroupFileError("document needs a string 'name' and an object 'representation'")
    kind = rep.get("kind")
    try:
        if kind == "permutation":
            degree = rep.get("degree")
            gens = rep.get("generators")
            if not isinstance(degree, int) or not isinstance(gens, list):
                raise GroupFileError(f"{name}: permutation representation needs integer 'degree' and list 'generators'")
            return group_from_permutations(degree, gens, label=name, cap=max_order)
        if kind == "cayley":
            order = rep.get("order")
            table = rep.get("table")
            if not isinstance(order, int) or not isinstance(table, list):
                raise GroupFileError(f"{name}: cayley representation needs integer 'order' and list 'table'")
            if order > max_order:
                raise GroupFileError(f"{name}: order {order} exceeds max order {max_order}")
            if len(table) != order or any(not isinstance(r, list) or len(r) != order for r in table):
                raise GroupFileError(f"{name}: table is not {order}x{order}")
            arr = np.array(table, dtype=np.int64)
            if arr.min() < 0 or arr.max() >= order:
                raise GroupFileError(f"{name}: table entries must lie in 0..{order - 1}")
            return Group(normalise_identity(arr), label=name)
    except GroupFileError:
        raise
    except (AutlError, ValueError, TypeError) as exc:
        raise GroupFileError(f"{name}: {exc}") from exc
    raise GroupFileError(f"{name}: unknown representation kind {kind!r}")


def iter_documents(path: Union[str, Path]) -> Iterator[tuple[str, dict]]:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".jsonl":
        for lineno, line in enumerate(text.splitlines(), 1):
            if line.strip():
                try:
                    yield f"{path}:{lineno}", json.loads(line)
                except json.JSONDecodeError as exc:
                    raise GroupFileError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc
    else:
        try:
            yield str(path), json.loads(text)
        except json.JSONDecodeError as exc:
            raise GroupFileError(f"{path}: invalid JSON ({exc.msg})") from exc


def load_groups(path: Union[str, Path], max_order: int = 2048) -> list[Group]:
    """All groups in one file; any bad document raises GroupFileError."""
    return [group_from_document(doc, max_order) for _, doc in iter_documents(path)]


def load_corpus_dir(directory: Union[str, Path], max_order: int = 2048) -> tuple[list[Group], list[SkippedGroup]]:
    """Every group under ``directory`` (sorted by file name); bad entries are skipped, not fatal."""
    groups: list[Group] = []
    skipped: list[SkippedGroup] = []
    files = sorted(p for p in Path(directory).rglob("*") if p.suffix in (".json", ".jsonl") and p.is_file())
    for f in files:
        if f.name == "schema.json":
            continue
        try:
            for src, doc in iter_documents(f):
                try:
                    G = group_from_document(doc, max_order)
                except GroupFileError as exc:
                    skipped.append(SkippedGroup(src, str(exc)))
                    continue
                groups.append(G)
        except (GroupFileError, OSError) as exc:
            skipped.append(SkippedGroup(str(f), str(exc)))
    return groups, skipped


def group_to_document(G: Group) -> dict:
    return {
        "name": G.label,
        "representation": {"kind": "cayley", "order": G.order, "table": G.table.tolist()},
    }
