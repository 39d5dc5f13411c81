"""Weighted-MaxCut instances: edge-list parsing, cut evaluation, exhaustive search.

Vertices are 1-indexed in graph files and 0-indexed everywhere else; the
conversion happens once, in :func:`parse_graph`.  A cut assignment is a string
of '0'/'1' whose position v is the subset label of vertex v, so basis-state
index l maps to the assignment via bit v = (l >> v) & 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BRUTE_FORCE_MAX_VERTICES = 24


class GraphFormatError(ValueError):
    """Malformed graph input; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class WeightedGraph:
    """A Weighted-MaxCut instance: vertex count plus undirected weighted edges.

    Edges are (i, j, weight) with 0-indexed endpoints, i != j, no duplicate
    undirected pair, and finite non-negative weights.
    """

    num_vertices: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.num_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        for i, j, w in self.edges:
            if i == j:
                raise ValueError(f"self-loop on vertex {i}")
            if not (0 <= i < self.num_vertices and 0 <= j < self.num_vertices):
                raise ValueError(f"edge ({i},{j}) out of range")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge ({i},{j})")
            seen.add(key)
            if not math.isfinite(w):
                raise ValueError(f"non-finite weight on edge ({i},{j})")
            if w < 0:
                raise ValueError(f"negative weight on edge ({i},{j})")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))


def assignment_from_index(index: int, num_vertices: int) -> str:
    """Bit string for basis-state index; position v holds vertex v's label."""
    return "".join(str((index >> v) & 1) for v in range(num_vertices))


def index_from_assignment(bits: str) -> int:
    return sum(1 << v for v, b in enumerate(bits) if b == "1")


def parse_graph(source) -> WeightedGraph:
    """Parse the edge-list format: header line |V|, then "i j w" lines.

    Lines starting with '#' and blank lines are ignored.  Vertex indices in
    the file are 1-based.  Raises GraphFormatError naming the offending line.
    """
    text = source.read() if hasattr(source, "read") else source
    num_vertices = None
    edges: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if num_vertices is None:
            try:
                num_vertices = int(line)
            except ValueError:
                raise GraphFormatError(line_no, f"expected vertex count, got {line!r}")
            if num_vertices < 1:
                raise GraphFormatError(line_no, "vertex count must be positive")
            continue

        parts = line.split()
        if len(parts) != 3:
            raise GraphFormatError(line_no, f"expected 'i j w', got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(line_no, f"bad vertex index in {line!r}")
        try:
            w = float(parts[2])
        except ValueError:
            raise GraphFormatError(line_no, f"bad weight in {line!r}")
        if not (1 <= i <= num_vertices):
            raise GraphFormatError(line_no, f"vertex {i} out of range 1..{num_vertices}")
        if not (1 <= j <= num_vertices):
            raise GraphFormatError(line_no, f"vertex {j} out of range 1..{num_vertices}")
        if i == j:
            raise GraphFormatError(line_no, f"self-loop on vertex {i}")
        if not math.isfinite(w):
            raise GraphFormatError(line_no, f"non-finite weight {parts[2]!r}")
        if w < 0:
            raise GraphFormatError(line_no, f"negative weight {w}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise GraphFormatError(line_no, f"duplicate edge ({i},{j})")
        seen.add(key)
        edges.append((i - 1, j - 1, w))

    if num_vertices is None:
        raise GraphFormatError(0, "empty input: missing vertex count")
    return WeightedGraph(num_vertices, tuple(edges))


def cut_value(g: WeightedGraph, bits: str) -> float:
    """Total weight of edges whose endpoints carry different labels."""
    if len(bits) != g.num_vertices:
        raise ValueError(f"assignment length {len(bits)} != {g.num_vertices} vertices")
    return float(sum(w for i, j, w in g.edges if bits[i] != bits[j]))


def cut_values_all(g: WeightedGraph, n: int | None = None) -> np.ndarray:
    """Cut value of every assignment, indexed by basis state (length 2**n).

    Padding qubits beyond |V| do not touch any edge, so their bits are inert.
    """
    if n is None:
        n = g.num_vertices
    if n < g.num_vertices:
        raise ValueError(f"need n >= {g.num_vertices} qubits, got {n}")
    idx = np.arange(1 << n, dtype=np.int64)
    values = np.zeros(1 << n, dtype=np.float64)
    for i, j, w in g.edges:
        values += w * (((idx >> i) ^ (idx >> j)) & 1)
    return values


def brute_force_max_cut(g: WeightedGraph) -> tuple[float, list[str]]:
    """Exact maximum cut by enumeration of all 2**|V| assignments.

    Returns the maximum value and every maximizing assignment, in ascending
    index order.  Guarded at BRUTE_FORCE_MAX_VERTICES vertices.
    """
    if g.num_vertices > BRUTE_FORCE_MAX_VERTICES:
        raise ValueError(
            f"brute force limited to {BRUTE_FORCE_MAX_VERTICES} vertices, "
            f"got {g.num_vertices}"
        )
    values = cut_values_all(g)
    best = float(values.max())
    argmax = np.flatnonzero(values == best)
    return best, [assignment_from_index(int(l), g.num_vertices) for l in argmax]
