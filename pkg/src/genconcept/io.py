"""Reading and writing contexts: Burmeister .cxt, CSV, and JSON documents.

The .cxt writer is canonical (LF line endings, uppercase X); reading a
canonical file and writing it back is byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .context import FormalContext
from .errors import FormatError

FORMAT_VERSION = 1


def read_cxt(text: str) -> FormalContext:
    lines = text.splitlines()
    if len(lines) < 4:
        raise FormatError("truncated .cxt file")
    if lines[0].strip() != "B":
        raise FormatError("first line of a .cxt file must be 'B'")
    name = lines[1]
    try:
        n_objects = int(lines[2])
        n_attributes = int(lines[3])
    except ValueError:
        raise FormatError("lines 3 and 4 must be the object and attribute counts") from None
    if n_objects < 0 or n_attributes < 0:
        raise FormatError("negative dimension in .cxt header")
    need = 4 + n_objects + n_attributes + n_objects
    if len(lines) < need:
        raise FormatError(f".cxt file needs {need} lines, found {len(lines)}")
    pos = 4
    objects = lines[pos:pos + n_objects]
    pos += n_objects
    attributes = lines[pos:pos + n_attributes]
    pos += n_attributes
    for label in (*objects, *attributes):
        if not label:
            raise FormatError("empty name line in .cxt file")
    rows = []
    for i in range(n_objects):
        line = lines[pos + i]
        if len(line) != n_attributes:
            raise FormatError(
                f"incidence row {i + 1} has {len(line)} cells, expected {n_attributes}"
            )
        row = 0
        for j, c in enumerate(line):
            if c in "Xx":
                row |= 1 << j
            elif c != ".":
                raise FormatError(f"bad incidence character {c!r} in row {i + 1}")
        rows.append(row)
    return FormalContext(tuple(objects), tuple(attributes), tuple(rows), name)


def write_cxt(ctx: FormalContext) -> str:
    lines = ["B", ctx.name, str(ctx.n_objects), str(ctx.n_attributes)]
    lines.extend(ctx.objects)
    lines.extend(ctx.attributes)
    for row in ctx.rows:
        lines.append(
            "".join("X" if row >> j & 1 else "." for j in range(ctx.n_attributes))
        )
    return "\n".join(lines) + "\n"


def read_csv_context(text: str, name: str = "") -> FormalContext:
    """Header row = attribute names, first column = object names, cells 0/1."""
    reader = csv.reader(io.StringIO(text))
    table = [row for row in reader if row]
    if not table:
        raise FormatError("empty CSV context")
    attributes = tuple(c.strip() for c in table[0][1:])
    objects = []
    rows = []
    for lineno, cells in enumerate(table[1:], start=2):
        if len(cells) != len(attributes) + 1:
            raise FormatError(f"CSV line {lineno} has {len(cells)} cells")
        objects.append(cells[0].strip())
        row = 0
        for j, cell in enumerate(cells[1:]):
            cell = cell.strip()
            if cell == "1":
                row |= 1 << j
            elif cell != "0":
                raise FormatError(f"CSV cell {cell!r} on line {lineno} is not 0/1")
        rows.append(row)
    return FormalContext(tuple(objects), attributes, tuple(rows), name)


def context_to_json(ctx: FormalContext) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "name": ctx.name,
        "objects": list(ctx.objects),
        "attributes": list(ctx.attributes),
        "incidence": [
            "".join("X" if row >> j & 1 else "." for j in range(ctx.n_attributes))
            for row in ctx.rows
        ],
    }


def context_from_json(doc: dict) -> FormalContext:
    try:
        objects = tuple(doc["objects"])
        attributes = tuple(doc["attributes"])
        incidence = doc["incidence"]
        name = doc.get("name", "")
    except (KeyError, TypeError):
        raise FormatError("context JSON needs objects, attributes, incidence") from None
    rows = []
    for i, line in enumerate(incidence):
        if len(line) != len(attributes):
            raise FormatError(f"incidence row {i} has wrong width")
        rows.append(sum(1 << j for j, c in enumerate(line) if c in "Xx"))
    return FormalContext(objects, attributes, tuple(rows), name)


def load_context(path: str | Path) -> FormalContext:
    """Dispatch on suffix: .cxt, .csv, or .json context documents."""
    path = Path(path)
    text = path.read_text()
    suffix = path.suffix.lower()
    if suffix == ".cxt":
        return read_cxt(text)
    if suffix == ".csv":
        return read_csv_context(text, name=path.stem)
    if suffix == ".json":
        return context_from_json(json.loads(text))
    raise FormatError(f"cannot infer context format from {path.name!r}")
