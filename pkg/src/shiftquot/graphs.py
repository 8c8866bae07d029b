"""Finite directed graphs, exact integer matrices, path enumeration.

Everything here is immutable after construction and safe for concurrent
reads.  The adjacency convention is fixed once and for all: the entry at
(v, w) counts edges with source w and target v (row = target, column =
source).  All matrix computations downstream (dimension groups, K-theory)
depend on this orientation, so it is pinned by tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Raised for structurally invalid graphs or graph arguments."""


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix with exact (arbitrary precision) entries."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]]) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in row) for row in rows)
        r = len(data)
        c = len(data[0]) if r else 0
        if any(len(row) != c for row in data):
            raise GraphError("ragged matrix rows")
        return IntMatrix(r, c, data)

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def zero(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries[ij[0]][ij[1]]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols, self.rows,
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
        )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_shape(other)
        return IntMatrix(
            self.rows, self.cols,
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries)),
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_shape(other)
        return IntMatrix(
            self.rows, self.cols,
            tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries)),
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(-a for a in row) for row in self.entries))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise GraphError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        bt = other.transpose().entries
        return IntMatrix(
            self.rows, other.cols,
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in bt)
                for row in self.entries
            ),
        )

    def power(self, k: int) -> "IntMatrix":
        if self.rows != self.cols:
            raise GraphError("power of a non-square matrix")
        if k < 0:
            raise GraphError("negative matrix power")
        result = IntMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def entry_sum(self) -> int:
        return sum(sum(row) for row in self.entries)

    def determinant(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise GraphError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def _check_shape(self, other: "IntMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise GraphError("shape mismatch")


class Graph:
    """Finite directed graph with named vertices and edges.

    Vertex and edge order is fixed at construction; it determines matrix
    row/column indexing and the deterministic enumeration order used
    everywhere else.
    """

    __slots__ = ("vertices", "edges", "_src", "_dst", "vertex_index", "edge_index", "_out", "_in")

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]):
        self.vertices: tuple[str, ...] = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex id")
        self.vertex_index: dict[str, int] = {v: i for i, v in enumerate(self.vertices)}
        edge_list = [tuple(e) for e in edges]
        ids = [e[0] for e in edge_list]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate edge id")
        self._src: dict[str, str] = {}
        self._dst: dict[str, str] = {}
        for eid, s, t in edge_list:
            if s not in self.vertex_index:
                raise GraphError(f"edge {eid!r}: unknown source vertex {s!r}")
            if t not in self.vertex_index:
                raise GraphError(f"edge {eid!r}: unknown target vertex {t!r}")
            self._src[eid] = s
            self._dst[eid] = t
        self.edges: tuple[str, ...] = tuple(ids)
        self.edge_index: dict[str, int] = {e: i for i, e in enumerate(self.edges)}
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        inc: dict[str, list[str]] = {v: [] for v in self.vertices}
        for eid in self.edges:
            out[self._src[eid]].append(eid)
            inc[self._dst[eid]].append(eid)
        self._out = {v: tuple(es) for v, es in out.items()}
        self._in = {v: tuple(es) for v, es in inc.items()}

    def source(self, edge: str) -> str:
        return self._src[edge]

    def target(self, edge: str) -> str:
        return self._dst[edge]

    def has_edge(self, edge: str) -> bool:
        return edge in self._src

    def out_edges(self, vertex: str) -> tuple[str, ...]:
        return self._out[vertex]

    def in_edges(self, vertex: str) -> tuple[str, ...]:
        return self._in[vertex]

    def __repr__(self) -> str:  # pragma: no cover
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"


@dataclass(frozen=True)
class PathWord:
    """Nonempty edge sequence with matching endpoints."""

    edges: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.edges)


def validate_path(g: Graph, edges: Sequence[str]) -> None:
    for e in edges:
        if not g.has_edge(e):
            raise GraphError(f"unknown edge {e!r}")
    for a, b in zip(edges, edges[1:]):
        if g.target(a) != g.source(b):
            raise GraphError(f"edges {a!r},{b!r} are not composable")


def adjacency_matrix(g: Graph) -> IntMatrix:
    """Adjacency matrix in the (target, source) convention.

    Entry (v, w) counts edges with source w and target v.
    """
    n = len(g.vertices)
    data = [[0] * n for _ in range(n)]
    for e in g.edges:
        data[g.vertex_index[g.target(e)]][g.vertex_index[g.source(e)]] += 1
    return IntMatrix.from_rows(data)


def is_irreducible(g: Graph) -> bool:
    """True iff every ordered vertex pair is joined by a path (length >= 1)."""
    if not g.vertices:
        raise GraphError("empty graph")
    # reach[v] = set of vertices reachable from v by a nonempty path
    for v in g.vertices:
        seen: set[str] = set()
        stack = [g.target(e) for e in g.out_edges(v)]
        while stack:
            w = stack.pop()
            if w in seen:
                continue
            seen.add(w)
            stack.extend(g.target(e) for e in g.out_edges(w))
        if len(seen) != len(g.vertices):
            return False
    return True


def _bool_rows(m: IntMatrix) -> list[int]:
    # row i as a bitmask over columns
    return [sum(1 << j for j, x in enumerate(row) if x > 0) for row in m.entries]


def _bool_mul(a: list[int], b: list[int], n: int) -> list[int]:
    out = []
    for i in range(n):
        acc = 0
        row = a[i]
        j = 0
        while row:
            if row & 1:
                acc |= b[j]
            row >>= 1
            j += 1
        out.append(acc)
    return out


def is_primitive(g: Graph) -> tuple[bool, int | None]:
    """Test whether some power of the adjacency matrix is entrywise positive.

    Returns (True, k) with the least such exponent, or (False, None).  The
    search is capped at the Wielandt bound (d-1)^2 + 1; positivity is
    tracked by boolean powering so entries never blow up.
    """
    if not g.vertices:
        raise GraphError("empty graph")
    n = len(g.vertices)
    full = (1 << n) - 1
    a = _bool_rows(adjacency_matrix(g))
    bound = (n - 1) ** 2 + 1
    cur = a
    for k in range(1, bound + 1):
        if all(row == full for row in cur):
            return True, k
        cur = _bool_mul(cur, a, n)
    return False, None


def paths_of_length(
    g: Graph,
    n: int,
    src: str | None = None,
    dst: str | None = None,
) -> list[PathWord]:
    """All paths of length n, in lexicographic order by edge index.

    Optional endpoint filters restrict the initial and terminal vertex.
    """
    if n < 1:
        raise GraphError("path length must be >= 1")
    starts = [src] if src is not None else list(g.vertices)
    out: list[PathWord] = []

    def extend(prefix: list[str], at: str) -> None:
        if len(prefix) == n:
            if dst is None or at == dst:
                out.append(PathWord(tuple(prefix)))
            return
        for e in g.out_edges(at):
            prefix.append(e)
            extend(prefix, g.target(e))
            prefix.pop()

    for v in starts:
        if v not in g.vertex_index:
            raise GraphError(f"unknown vertex {v!r}")
        extend([], v)
    return out


WORD_SEP = "."


def word_id(edges: Sequence[str]) -> str:
    return WORD_SEP.join(edges)


def higher_block_graph(g: Graph, block: int) -> Graph:
    """Block recoding: vertices are words of length block-1, edges words of
    length block, with truncation source/target maps."""
    if block < 2:
        raise GraphError("block length must be >= 2")
    vertices = [word_id(p.edges) for p in paths_of_length(g, block - 1)]
    edges = [
        (word_id(p.edges), word_id(p.edges[:-1]), word_id(p.edges[1:]))
        for p in paths_of_length(g, block)
    ]
    return Graph(vertices, edges)
