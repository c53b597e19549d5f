"""Plain-text artifact formats.

triangulation::

    triangulation <n> <m> <f>
    e <u> <v>          (m lines)
    f <a> <b> <c>      (f lines)
    outer <a> <b> <c>

packing::

    packing <n>
    <id> <x> <y> <r>   (n lines, 17 significant digits)

graph::

    graph <n> <m>
    <u> <v>            (m lines)

separator::

    x <value>
    S <ids...>
    inside <ids...>
    outside <ids...>
    cert <sum_rho_sq> <expected_bound> <cs_bound> <theorem_bound>

Blank lines are ignored on input.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import FormatError
from .graph import Graph
from .packing import Packing, Triangulation
from .separator import Certificate, SeparatorResult


def fmt_float(v: float) -> str:
    return format(float(v), ".17g")


def _lines(text: str) -> list[list[str]]:
    return [ln.split() for ln in text.splitlines() if ln.strip()]


def _ints(tokens, what: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"non-integer {what}: {' '.join(tokens)}") from None


def _floats(tokens, what: str) -> list[float]:
    try:
        return [float(t) for t in tokens]
    except ValueError:
        raise FormatError(f"non-numeric {what}: {' '.join(tokens)}") from None


def _header(rows, keyword: str, count: int) -> list[int]:
    if not rows or rows[0][0] != keyword or len(rows[0]) != count + 1:
        got = " ".join(rows[0]) if rows else "<empty>"
        raise FormatError(f"expected '{keyword}' header with {count} fields, got {got!r}")
    vals = _ints(rows[0][1:], f"{keyword} header")
    if any(v < 0 for v in vals):
        raise FormatError(f"negative count in {keyword} header")
    return vals


# -- triangulation ----------------------------------------------------------

def dumps_triangulation(t: Triangulation) -> str:
    out = [f"triangulation {t.n} {len(t.edges)} {len(t.faces)}"]
    out += [f"e {u} {v}" for u, v in t.edges]
    out += [f"f {a} {b} {c}" for a, b, c in t.faces]
    out.append("outer {} {} {}".format(*t.outer_face))
    return "\n".join(out) + "\n"


def loads_triangulation(text: str) -> Triangulation:
    rows = _lines(text)
    n, m, f = _header(rows, "triangulation", 3)
    body = rows[1:]
    if len(body) != m + f + 1:
        raise FormatError(f"expected {m + f + 1} body lines, got {len(body)}")
    edges, faces = [], []
    for row in body[:m]:
        if row[0] != "e" or len(row) != 3:
            raise FormatError(f"bad edge line {' '.join(row)!r}")
        edges.append(tuple(_ints(row[1:], "edge")))
    for row in body[m:m + f]:
        if row[0] != "f" or len(row) != 4:
            raise FormatError(f"bad face line {' '.join(row)!r}")
        faces.append(tuple(_ints(row[1:], "face")))
    last = body[-1]
    if last[0] != "outer" or len(last) != 4:
        raise FormatError(f"bad outer line {' '.join(last)!r}")
    return Triangulation(n, tuple(edges), tuple(faces), tuple(_ints(last[1:], "outer face")))


# -- packing ----------------------------------------------------------------

def dumps_packing(p: Packing) -> str:
    out = [f"packing {p.n}"]
    for i, ((x, y), r) in enumerate(zip(p.centers.tolist(), p.radii.tolist())):
        out.append(f"{i} {fmt_float(x)} {fmt_float(y)} {fmt_float(r)}")
    return "\n".join(out) + "\n"


def loads_packing(text: str) -> Packing:
    rows = _lines(text)
    (n,) = _header(rows, "packing", 1)
    body = rows[1:]
    if len(body) != n:
        raise FormatError(f"expected {n} disk lines, got {len(body)}")
    centers = np.zeros((n, 2))
    radii = np.zeros(n)
    seen = np.zeros(n, dtype=bool)
    for row in body:
        if len(row) != 4:
            raise FormatError(f"bad disk line {' '.join(row)!r}")
        (i,) = _ints(row[:1], "vertex id")
        x, y, r = _floats(row[1:], "disk")
        if not 0 <= i < n or seen[i]:
            raise FormatError(f"vertex id {i} out of range or repeated")
        seen[i] = True
        centers[i] = (x, y)
        radii[i] = r
    try:
        return Packing(centers, radii)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


# -- graph ------------------------------------------------------------------

def dumps_graph(g: Graph) -> str:
    edges = g.edges
    out = [f"graph {g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(out) + "\n"


def loads_graph(text: str) -> Graph:
    """Parse a graph file; a triangulation file is accepted too (its edge set is used)."""
    rows = _lines(text)
    if rows and rows[0][0] == "triangulation":
        t = loads_triangulation(text)
        return Graph.from_edges(t.n, t.edges)
    n, m = _header(rows, "graph", 2)
    body = rows[1:]
    if len(body) != m:
        raise FormatError(f"expected {m} edge lines, got {len(body)}")
    edges = []
    for row in body:
        if len(row) != 2:
            raise FormatError(f"bad edge line {' '.join(row)!r}")
        edges.append(tuple(_ints(row, "edge")))
    try:
        return Graph.from_edges(n, edges)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


# -- separator --------------------------------------------------------------

def dumps_separator(r: SeparatorResult) -> str:
    def ids(key, vs):
        return " ".join([key, *map(str, vs)])

    out = [f"x {fmt_float(r.x)}", ids("S", r.S), ids("inside", r.inside), ids("outside", r.outside)]
    c = r.certificate
    if c is not None:
        out.append("cert " + " ".join(fmt_float(v) for v in
                                      (c.sum_rho_sq, c.expected_bound, c.cs_bound, c.theorem_bound)))
    return "\n".join(out) + "\n"


def loads_separator(text: str) -> SeparatorResult:
    """Parse a separator file. The certificate's per-vertex radii are not stored, so
    ``certificate.rho`` is empty and ``expected_exact`` is NaN after a round trip."""
    fields: dict[str, list[str]] = {}
    for row in _lines(text):
        if row[0] in fields:
            raise FormatError(f"duplicate '{row[0]}' line")
        fields[row[0]] = row[1:]
    for key in ("x", "S", "inside", "outside"):
        if key not in fields:
            raise FormatError(f"missing '{key}' line")
    unknown = set(fields) - {"x", "S", "inside", "outside", "cert"}
    if unknown:
        raise FormatError(f"unknown line type {sorted(unknown)[0]!r}")
    if len(fields["x"]) != 1:
        raise FormatError("'x' line needs exactly one value")
    (x,) = _floats(fields["x"], "x")
    cert = None
    if "cert" in fields:
        vals = _floats(fields["cert"], "cert")
        if len(vals) != 4:
            raise FormatError("'cert' line needs four values")
        cert = Certificate(np.zeros(0), vals[0], vals[1], vals[2], vals[3], float("nan"))
    return SeparatorResult(
        x,
        tuple(_ints(fields["S"], "S")),
        tuple(_ints(fields["inside"], "inside")),
        tuple(_ints(fields["outside"], "outside")),
        None,
        cert,
    )


# -- paths ------------------------------------------------------------------

def _read(path) -> str:
    try:
        return Path(path).read_text()
    except UnicodeDecodeError:
        raise FormatError(f"{path}: not a text file") from None


def read_triangulation(path) -> Triangulation:
    return loads_triangulation(_read(path))


def read_packing(path) -> Packing:
    return loads_packing(_read(path))


def read_graph(path) -> Graph:
    return loads_graph(_read(path))


def read_separator(path) -> SeparatorResult:
    return loads_separator(_read(path))


def write_text(path, text: str) -> None:
    Path(path).write_text(text)
