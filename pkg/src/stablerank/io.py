"""Text formats for modules, barcodes, graphs and tables.

Module format::

    # comment
    r p box_1 .. box_r
    alpha a                      (optional, default 1)
    v_1 .. v_r dim               (one line per grid point, lexicographic)
    axis i                       (one block per axis)
    v_1 .. v_r : e_11 e_12 ...   (row-major step matrix at v along axis i)

Step lines between zero spaces may be omitted.  Rationals are written as
``p/q`` tokens everywhere.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .barcode import Barcode
from .frame import Frame, grid
from .hardness import Graph
from .linalg import Matrix, check_prime, rational
from .tame import TameModule


class FormatError(ValueError):
    """Input text does not follow the expected format."""


def q(x) -> str:
    """Exact rational token: ``3``, ``3/2``."""
    return str(Fraction(x))


def fmt_point(v: Sequence) -> str:
    return "(" + ",".join(q(x) for x in v) + ")"


def _prime(p: int) -> int:
    try:
        return check_prime(p)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def _lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _ints(tokens: Iterable[str], what: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise FormatError(f"expected integers in {what}") from exc


def parse_module(text: str) -> TameModule:
    lines = _lines(text)
    if not lines:
        raise FormatError("empty module description")
    head = _ints(lines[0].split(), "header")
    if len(head) < 3:
        raise FormatError("header must read 'r p box_1 .. box_r'")
    r, p, box = head[0], _prime(head[1]), tuple(head[2:])
    if len(box) != r:
        raise FormatError(f"header declares r={r} but gives {len(box)} box entries")
    idx = 1
    alpha = Fraction(1)
    if idx < len(lines) and lines[idx].startswith("alpha"):
        parts = lines[idx].split()
        if len(parts) != 2:
            raise FormatError("alpha line must read 'alpha a'")
        try:
            alpha = rational(parts[1])
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad resolution {parts[1]!r}") from exc
        idx += 1
    dims = {}
    points = list(grid(box))
    for v in points:
        if idx >= len(lines):
            raise FormatError(f"missing dimension line for {v}")
        vals = _ints(lines[idx].split(), "dimension line")
        if len(vals) != r + 1 or tuple(vals[:r]) != v:
            raise FormatError(f"expected dimension line for {v}, got {lines[idx]!r}")
        dims[v] = vals[r]
        idx += 1
    steps = {}
    axis = None
    while idx < len(lines):
        line = lines[idx]
        idx += 1
        if line.startswith("axis"):
            parts = line.split()
            if len(parts) != 2:
                raise FormatError("axis line must read 'axis i'")
            axis = _ints(parts[1:], "axis line")[0]
            if not 0 <= axis < r:
                raise FormatError(f"axis {axis} out of range")
            continue
        if axis is None or ":" not in line:
            raise FormatError(f"unexpected line {line!r}")
        left, right = line.split(":", 1)
        v = tuple(_ints(left.split(), "step point"))
        if v not in dims or v[axis] >= box[axis]:
            raise FormatError(f"step point {v} is not inside the box along axis {axis}")
        w = tuple(a + (1 if i == axis else 0) for i, a in enumerate(v))
        entries = _ints(right.split(), "step entries")
        shape = (dims[w], dims[v])
        if len(entries) != shape[0] * shape[1]:
            raise FormatError(f"step at {v} along axis {axis} needs {shape[0] * shape[1]} entries")
        steps[(axis, v)] = Matrix(np.array(entries, dtype=np.int64).reshape(shape), p)
    try:
        frame = Frame(r, box, p, dims, steps)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    return TameModule(frame, alpha)


def format_module(G: TameModule | Frame) -> str:
    if isinstance(G, Frame):
        G = TameModule(G, Fraction(1))
    F = G.frame
    out = [" ".join(str(x) for x in (F.r, F.p, *F.box))]
    if G.alpha != 1:
        out.append(f"alpha {q(G.alpha)}")
    for v in F.points():
        out.append(" ".join(str(x) for x in (*v, F.dims[v])))
    for axis in range(F.r):
        out.append(f"axis {axis}")
        for v in F.points():
            M = F.steps.get((axis, v))
            if M is None or M.rows == 0 or M.cols == 0:
                continue
            entries = " ".join(str(x) for x in M.data.reshape(-1))
            out.append(" ".join(str(x) for x in v) + " : " + entries)
    return "\n".join(out) + "\n"


def parse_barcode(text: str) -> Barcode:
    fin, inf = [], []
    for line in _lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"bar line must read 'birth death', got {line!r}")
        try:
            b = rational(parts[0])
            if parts[1] == "inf":
                inf.append(b)
            else:
                fin.append((b, rational(parts[1])))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad bar {line!r}") from exc
    try:
        return Barcode(fin, inf)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def format_barcode(bc: Barcode) -> str:
    lines = [f"{q(b)} {q(d)}" for b, d in bc.finite_bars] + [f"{q(b)} inf" for b in bc.infinite_bars]
    return "".join(line + "\n" for line in lines)


def parse_graph(text: str) -> tuple[Graph, int]:
    """Parse ``"n p"`` followed by ``"s t"`` edge lines (vertices 1..n)."""
    lines = _lines(text)
    if not lines:
        raise FormatError("empty graph description")
    head = _ints(lines[0].split(), "graph header")
    if len(head) != 2:
        raise FormatError("graph header must read 'n p'")
    n, p = head[0], _prime(head[1])
    edges = []
    for line in lines[1:]:
        e = _ints(line.split(), "edge line")
        if len(e) != 2:
            raise FormatError(f"edge line must read 's t', got {line!r}")
        edges.append(tuple(e))
    if len(set(tuple(sorted(e)) for e in edges)) != len(edges):
        raise FormatError("duplicate edge")
    try:
        return Graph(n, edges), p
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def format_graph(X: Graph, p: int) -> str:
    lines = [f"{X.n} {p}"] + [f"{s} {t}" for s, t in sorted(X.edges)]
    return "\n".join(lines) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([q(x) if isinstance(x, Fraction) else x for x in row])
    return buf.getvalue()
