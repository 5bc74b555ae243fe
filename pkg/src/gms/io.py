"""File formats: graphs, matrices, spaces, pencils, transition matrices, Kraus lists, reports.

Vertices are 1-based in every text format and 0-based in memory.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
from fractions import Fraction
from typing import Any

import numpy as np

from .exactmath import Matrix
from .fields import Field, GaussianRational, parse_field
from .graphcore import BipartiteGraph, Digraph, GraphFormatError, UndirectedGraph
from .matspace import MatrixSpace
from .symbolic import SymbolicMatrix


# scalars and matrices


def encode_scalar(x, field: Field):
    if field.kind == "Fp":
        return int(x)
    if field.kind == "Q":
        return int(x) if x.denominator == 1 else str(x)
    if field.kind == "Qi":
        return [encode_scalar(x.re, parse_field("Q")), encode_scalar(x.im, parse_field("Q"))]
    z = complex(x)
    return [z.real, z.imag]


def decode_scalar(v, field: Field):
    if field.kind == "Qi":
        if isinstance(v, list):
            return GaussianRational(Fraction(v[0]), Fraction(v[1]))
        return field(Fraction(v))
    if field.kind == "C64":
        if isinstance(v, list):
            return complex(v[0], v[1])
        return complex(v)
    if isinstance(v, str):
        return field(Fraction(v))
    return field(v)


def matrix_to_json(m: Matrix) -> dict:
    return {"field": m.field.tag, "rows": m.rows, "cols": m.cols,
            "entries": [[encode_scalar(x, m.field) for x in row] for row in m.grid]}


def matrix_from_json(d: dict, field: Field | None = None) -> Matrix:
    f = parse_field(d["field"]) if "field" in d else field
    if f is None:
        raise ValueError("matrix JSON needs a field")
    rows = [[decode_scalar(x, f) for x in row] for row in d["entries"]]
    r = d.get("rows", len(rows))
    c = d.get("cols", len(rows[0]) if rows else 0)
    return Matrix(rows, f, r, c)


def space_to_json(s: MatrixSpace) -> dict:
    return {"field": s.field.tag, "rows": s.rows, "cols": s.cols,
            "basis": [[[encode_scalar(x, s.field) for x in row] for row in b.grid]
                      for b in s.basis]}


def space_from_json(d: dict) -> MatrixSpace:
    f = parse_field(d["field"])
    mats = [Matrix([[decode_scalar(x, f) for x in row] for row in b], f, d["rows"], d["cols"])
            for b in d["basis"]]
    return MatrixSpace(mats, f, d["rows"], d["cols"])


def pencil_to_json(b: SymbolicMatrix) -> dict:
    return {"field": b.field.tag, "n": b.n, "m": b.m,
            "constant": matrix_to_json(b.constant),
            "coeffs": [matrix_to_json(c) for c in b.coeffs]}


def pencil_from_json(d: dict) -> SymbolicMatrix:
    f = parse_field(d["field"]) if "field" in d else None

    def mat(x):
        if isinstance(x, dict):
            return matrix_from_json(x, f)
        if f is None:
            raise ValueError("pencil JSON with bare grids needs a top-level field")
        return Matrix([[decode_scalar(v, f) for v in row] for row in x], f)

    const = mat(d["constant"])
    coeffs = [mat(c) for c in d["coeffs"]]
    b = SymbolicMatrix(const, coeffs)
    if "n" in d and d["n"] != b.n:
        raise ValueError(f"pencil declares n={d['n']} but its matrices are {b.n}x{b.n}")
    if "m" in d and d["m"] != b.m:
        raise ValueError(f"pencil declares m={d['m']} but lists {b.m} coefficient matrices")
    return b


# graphs


def graph_to_json(g) -> dict:
    if isinstance(g, Digraph):
        return {"kind": "digraph", "n": g.n, "arcs": [[i + 1, j + 1] for i, j in g.sorted_arcs()]}
    if isinstance(g, BipartiteGraph):
        return {"kind": "bipartite", "m": g.m, "n": g.n,
                "edges": [[i + 1, j + 1] for i, j in g.sorted_edges()]}
    if isinstance(g, UndirectedGraph):
        return {"kind": "undirected", "n": g.n,
                "edges": [[i + 1, j + 1] for i, j in sorted(g.edges)]}
    raise TypeError(f"not a graph: {type(g).__name__}")


def graph_from_json(d: dict):
    kind = d.get("kind", "digraph")
    pairs = [(int(a) - 1, int(b) - 1) for a, b in d.get("arcs", d.get("edges", []))]
    if kind == "digraph":
        return Digraph(d["n"], pairs)
    if kind == "bipartite":
        return BipartiteGraph(d["m"], d["n"], pairs)
    if kind == "undirected":
        return UndirectedGraph(d["n"], pairs)
    raise GraphFormatError(f"unknown graph kind {kind!r}")


def parse_graph_text(text: str):
    """Header line `digraph N`, `undirected N` or `bipartite M N`, then one `i j` pair per line.

    Blank lines and lines starting with # are ignored.
    """
    header = None
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            kind = parts[0].lower()
            try:
                sizes = [int(x) for x in parts[1:]]
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad sizes in header {line!r}") from None
            want = 2 if kind == "bipartite" else 1
            if kind not in ("digraph", "undirected", "bipartite") or len(sizes) != want:
                raise GraphFormatError(f"line {lineno}: expected a header like 'digraph 3', "
                                       f"'undirected 3' or 'bipartite 2 3', got {line!r}")
            header = (kind, sizes)
            continue
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected two vertex numbers, got {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: vertex numbers must be integers") from None
        kind, sizes = header
        lim = (sizes[0], sizes[1]) if kind == "bipartite" else (sizes[0], sizes[0])
        if not (1 <= a <= lim[0] and 1 <= b <= lim[1]):
            raise GraphFormatError(f"line {lineno}: pair ({a}, {b}) out of range")
        if kind == "undirected" and a == b:
            raise GraphFormatError(f"line {lineno}: undirected graphs carry no loops")
        pairs.append((a - 1, b - 1))
    if header is None:
        raise GraphFormatError("line 1: empty graph file")
    kind, sizes = header
    if kind == "digraph":
        return Digraph(sizes[0], pairs)
    if kind == "undirected":
        return UndirectedGraph(sizes[0], pairs)
    return BipartiteGraph(sizes[0], sizes[1], pairs)


def load_graph(path: str):
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return graph_from_json(json.loads(text))
    return parse_graph_text(text)


def load_json(path: str) -> Any:
    with open(path) as fh:
        return json.load(fh)


# quantum formats


def parse_transition_csv(text: str) -> np.ndarray:
    rows = [r for r in csv.reader(_io.StringIO(text)) if any(c.strip() for c in r)]
    try:
        return np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise ValueError(f"transition CSV: {exc}") from None


def kraus_to_json(ops) -> dict:
    return {"kraus": [[[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(k)]
                      for k in ops]}


def kraus_from_json(d: dict) -> list[np.ndarray]:
    return [np.array([[complex(re, im) for re, im in row] for row in k], dtype=complex)
            for k in d["kraus"]]


# reports


def jsonable(x):
    """Plain JSON values; infinities become the string "inf"."""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, GaussianRational):
        return [jsonable(x.re), jsonable(x.im)]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return jsonable(float(x))
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in items]
    if isinstance(x, Matrix):
        return matrix_to_json(x)
    if isinstance(x, MatrixSpace):
        return space_to_json(x)
    if isinstance(x, (Digraph, BipartiteGraph, UndirectedGraph)):
        return graph_to_json(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(x) -> str:
    return json.dumps(jsonable(x), sort_keys=True, separators=(",", ":"))


def from_report_value(v):
    """Inverse of jsonable for scalar report values."""
    if v == "inf":
        return math.inf
    if v == "-inf":
        return -math.inf
    return v
