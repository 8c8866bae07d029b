"""Seed data: a pair of disjoint embeddings of a small graph in a big one.

The seed is (G, H, xi0, xi1) where xi0, xi1: H -> G are injective graph
homomorphisms.  The conditions checked here:

  H0  xi0 and xi1 agree on vertices,
  H1  the edge images are disjoint,
  H2  every doubled edge has a spare parallel edge outside both images,

plus primitivity of G.  H0 and H1 make the superscript map and the
quotient graph well defined; H2 and primitivity drive all density and
completion arguments downstream.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .graphs import Graph, is_primitive


class EmbeddingError(ValueError):
    """Raised when seed data is structurally invalid or a precondition fails."""


def _check_homomorphism(
    name: str,
    h: Graph,
    g: Graph,
    vmap: Mapping[str, str],
    emap: Mapping[str, str],
) -> None:
    if set(vmap) != set(h.vertices):
        raise EmbeddingError(f"{name}: vertex map domain must be all of H^0")
    if set(emap) != set(h.edges):
        raise EmbeddingError(f"{name}: edge map domain must be all of H^1")
    for w, v in vmap.items():
        if v not in g.vertex_index:
            raise EmbeddingError(f"{name}: image vertex {v!r} not in G")
    for y, e in emap.items():
        if not g.has_edge(e):
            raise EmbeddingError(f"{name}: image edge {e!r} not in G")
        if g.source(e) != vmap[h.source(y)] or g.target(e) != vmap[h.target(y)]:
            raise EmbeddingError(f"{name}: edge {y!r} does not commute with endpoint maps")
    if len(set(vmap.values())) != len(vmap):
        raise EmbeddingError(f"{name}: vertex map not injective")
    if len(set(emap.values())) != len(emap):
        raise EmbeddingError(f"{name}: edge map not injective")


@dataclass(frozen=True, eq=False)
class EmbeddingPair:
    """Seed (G, H, xi0, xi1) with derived lookup tables.

    The pair must be structurally valid (two injective homomorphisms);
    conditions H0/H1/H2 are *reported* by check_standing_hypotheses, not
    enforced here.  Derived tables that require H1 (the superscript map,
    partners) are populated only when H1 actually holds.
    """

    g: Graph
    h: Graph
    xi0_vertices: dict[str, str]
    xi0_edges: dict[str, str]
    xi1_vertices: dict[str, str]
    xi1_edges: dict[str, str]

    def __post_init__(self) -> None:
        _check_homomorphism("xi0", self.h, self.g, self.xi0_vertices, self.xi0_edges)
        _check_homomorphism("xi1", self.h, self.g, self.xi1_vertices, self.xi1_edges)
        image0 = set(self.xi0_edges.values())
        image1 = set(self.xi1_edges.values())
        object.__setattr__(self, "_image0", frozenset(image0))
        object.__setattr__(self, "_image1", frozenset(image1))
        object.__setattr__(self, "_image", frozenset(image0 | image1))
        if image0 & image1:
            object.__setattr__(self, "_epsilon", None)
            object.__setattr__(self, "_partner", None)
            object.__setattr__(self, "_h_edge", None)
        else:
            eps: dict[str, int] = {}
            partner: dict[str, str] = {}
            h_edge: dict[str, str] = {}
            for y in self.h.edges:
                e0, e1 = self.xi0_edges[y], self.xi1_edges[y]
                eps[e0], eps[e1] = 0, 1
                partner[e0], partner[e1] = e1, e0
                h_edge[e0] = h_edge[e1] = y
            object.__setattr__(self, "_epsilon", eps)
            object.__setattr__(self, "_partner", partner)
            object.__setattr__(self, "_h_edge", h_edge)

    # -- membership helpers -------------------------------------------------

    @property
    def xi_image(self) -> frozenset[str]:
        """The set of doubled G-edges (union of both edge images)."""
        return self._image  # type: ignore[attr-defined]

    def in_image(self, edge: str) -> bool:
        return edge in self._image  # type: ignore[attr-defined]

    def partner(self, edge: str) -> str:
        """The other copy of the same H-edge (requires H1)."""
        if self._partner is None:  # type: ignore[attr-defined]
            raise EmbeddingError("partner map undefined: H1 fails")
        try:
            return self._partner[edge]  # type: ignore[attr-defined]
        except KeyError:
            raise EmbeddingError(f"edge {edge!r} is not in the embedded image") from None

    def h_edge_of(self, edge: str) -> str:
        if self._h_edge is None:  # type: ignore[attr-defined]
            raise EmbeddingError("pullback undefined: H1 fails")
        try:
            return self._h_edge[edge]  # type: ignore[attr-defined]
        except KeyError:
            raise EmbeddingError(f"edge {edge!r} is not in the embedded image") from None


def epsilon(p: EmbeddingPair, edge: str) -> int:
    """Superscript (0 or 1) of the embedding containing the given G-edge."""
    if p._epsilon is None:  # type: ignore[attr-defined]
        raise EmbeddingError("superscript map undefined: H1 fails")
    try:
        return p._epsilon[edge]  # type: ignore[attr-defined]
    except KeyError:
        raise EmbeddingError(f"edge {edge!r} is not in the embedded image") from None


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    witness: str | None = None


@dataclass(frozen=True)
class HypothesisReport:
    h0: CheckResult
    h1: CheckResult
    h2: CheckResult
    primitive: CheckResult
    h_has_cycle: bool  # informational: the small shift space is nonempty

    def standing(self) -> bool:
        return self.h0.passed and self.h1.passed and self.h2.passed and self.primitive.passed


def _h_has_cycle(h: Graph) -> bool:
    # cycle detection by iterated sink removal
    alive = set(h.vertices)
    changed = True
    while changed:
        changed = False
        for v in list(alive):
            deg = sum(1 for e in h.out_edges(v) if h.target(e) in alive)
            if deg == 0:
                alive.discard(v)
                changed = True
    return bool(alive)


def check_standing_hypotheses(p: EmbeddingPair) -> HypothesisReport:
    """Evaluate H0, H1, H2 and primitivity independently, with witnesses."""
    h0_bad = next(
        (w for w in p.h.vertices if p.xi0_vertices[w] != p.xi1_vertices[w]), None
    )
    h0 = CheckResult(h0_bad is None, h0_bad and f"vertex {h0_bad}")

    overlap = set(p.xi0_edges.values()) & set(p.xi1_edges.values())
    h1 = CheckResult(not overlap, f"shared image edge {sorted(overlap)[0]}" if overlap else None)

    h2_bad = None
    for y in p.h.edges:
        e0 = p.xi0_edges[y]
        spare = any(
            x not in p.xi_image
            and p.g.source(x) == p.g.source(e0)
            and p.g.target(x) == p.g.target(e0)
            for x in p.g.edges
        )
        if not spare:
            h2_bad = y
            break
    h2 = CheckResult(h2_bad is None, h2_bad and f"edge {h2_bad}")

    prim, exponent = is_primitive(p.g)
    primitive = CheckResult(prim, None if prim else "no power of the adjacency matrix is positive")
    _ = exponent
    return HypothesisReport(h0, h1, h2, primitive, _h_has_cycle(p.h))


@dataclass(frozen=True, eq=False)
class QuotientGraph:
    """The graph obtained by gluing each doubled edge pair into one edge."""

    graph: Graph
    tau: dict[str, str]  # G-edge -> quotient edge

    def fiber(self, quotient_edge: str) -> tuple[str, ...]:
        return self._fiber[quotient_edge]  # type: ignore[attr-defined]

    def __post_init__(self) -> None:
        fib: dict[str, list[str]] = {}
        for e, q in self.tau.items():
            fib.setdefault(q, []).append(e)
        object.__setattr__(
            self, "_fiber", {q: tuple(sorted(es)) for q, es in fib.items()}
        )


def quotient_graph(p: EmbeddingPair) -> QuotientGraph:
    """Identify xi0(y) with xi1(y) for every H-edge y.

    Quotient edge ids: merged edges are named after the H-edge, untouched
    edges after themselves, both with a prime suffix.
    """
    rep = check_standing_hypotheses(p)
    if not rep.h0.passed or not rep.h1.passed:
        raise EmbeddingError("quotient graph needs H0 and H1")
    tau: dict[str, str] = {}
    edges: list[tuple[str, str, str]] = []
    for y in p.h.edges:
        q = y + "'"
        e0 = p.xi0_edges[y]
        edges.append((q, p.g.source(e0), p.g.target(e0)))
        tau[e0] = q
        tau[p.xi1_edges[y]] = q
    for e in p.g.edges:
        if e not in p.xi_image:
            q = e + "'"
            edges.append((q, p.g.source(e), p.g.target(e)))
            tau[e] = q
    ids = [e[0] for e in edges]
    if len(set(ids)) != len(ids):
        raise EmbeddingError("quotient edge naming clash; rename seed edges")
    return QuotientGraph(Graph(p.g.vertices, edges), tau)


# -- completion tables -------------------------------------------------------


@dataclass(frozen=True)
class VertexCompletion:
    """Per-vertex data for building stratum approximants.

    xi_tail: an infinite forward path inside the embedded image, as a
        (lead-in, cycle) pair of G-edges, or None when no such tail exists.
    nonxi_path_to_tail: shortest path using only spare edges to a vertex
        that has a xi-tail (None if the small graph has no cycle).
    nearest_nonxi: shortest path (any edges) to a vertex with an outgoing
        spare edge, plus that edge.
    min_forced_path: a path to a xi-tail vertex minimizing the number of
        spare edges used; min_forced is that count.
    """

    vertex: str
    xi_tail: tuple[tuple[str, ...], tuple[str, ...]] | None
    nonxi_path_to_tail: tuple[str, ...] | None
    nearest_nonxi: tuple[tuple[str, ...], str] | None
    min_forced_path: tuple[str, ...] | None
    min_forced: int | None


@dataclass(frozen=True)
class CompletionTables:
    per_vertex: dict[str, VertexCompletion]

    def __getitem__(self, vertex: str) -> VertexCompletion:
        return self.per_vertex[vertex]


def _h_tail_witness(h: Graph) -> dict[str, tuple[tuple[str, ...], tuple[str, ...]]]:
    """For each H-vertex that can reach an H-cycle: (path-to-cycle, cycle)."""
    # vertices on a cycle, by BFS back to self
    on_cycle: dict[str, tuple[str, ...]] = {}
    for v in h.vertices:
        # BFS for shortest closed path v -> v
        parent: dict[str, tuple[str, str] | None] = {}
        q = deque()
        for e in h.out_edges(v):
            w = h.target(e)
            if w == v:
                on_cycle[v] = (e,)
                break
            if w not in parent:
                parent[w] = (v, e)
                q.append(w)
        if v in on_cycle:
            continue
        found: tuple[str, ...] | None = None
        while q and found is None:
            u = q.popleft()
            for e in h.out_edges(u):
                w = h.target(e)
                if w == v:
                    path = [e]
                    node = u
                    while node != v:
                        prev, edge = parent[node]  # type: ignore[misc]
                        path.append(edge)
                        node = prev
                    found = tuple(reversed(path))
                    break
                if w not in parent:
                    parent[w] = (u, e)
                    q.append(w)
        if found:
            on_cycle[v] = found
    # backward closure: shortest path to any cycle vertex
    result: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {}
    for v, cyc in on_cycle.items():
        result[v] = ((), cyc)
    frontier = deque(on_cycle)
    while frontier:
        w = frontier.popleft()
        for e in h.edges:
            if h.target(e) == w:
                u = h.source(e)
                if u not in result:
                    lead, cyc = result[w]
                    result[u] = ((e,) + lead, cyc)
                    frontier.append(u)
    return result


@lru_cache(maxsize=None)
def completion_tables(p: EmbeddingPair) -> CompletionTables:
    """Completion data per vertex; errors on a vertex with no outgoing edge."""
    g = p.g
    for v in g.vertices:
        if not g.out_edges(v):
            raise EmbeddingError(f"degenerate graph: vertex {v!r} has no outgoing edge")

    h_tails = _h_tail_witness(p.h)
    xi_tail: dict[str, tuple[tuple[str, ...], tuple[str, ...]] | None] = {
        v: None for v in g.vertices
    }
    for w, (lead, cyc) in h_tails.items():
        v = p.xi0_vertices[w]
        xi_tail[v] = (
            tuple(p.xi0_edges[y] for y in lead),
            tuple(p.xi0_edges[y] for y in cyc),
        )
    tail_vertices = {v for v, t in xi_tail.items() if t is not None}

    def bfs_paths(start: str, allowed_nonxi_only: bool) -> dict[str, tuple[str, ...]]:
        dist: dict[str, tuple[str, ...]] = {start: ()}
        q = deque([start])
        while q:
            u = q.popleft()
            for e in g.out_edges(u):
                if allowed_nonxi_only and p.in_image(e):
                    continue
                w = g.target(e)
                if w not in dist:
                    dist[w] = dist[u] + (e,)
                    q.append(w)
        return dist

    per: dict[str, VertexCompletion] = {}
    for v in g.vertices:
        nonxi_reach = bfs_paths(v, allowed_nonxi_only=True)
        to_tail = None
        best = None
        for u, path in nonxi_reach.items():
            if u in tail_vertices and (best is None or len(path) < best):
                best = len(path)
                to_tail = path
        any_reach = bfs_paths(v, allowed_nonxi_only=False)
        nearest: tuple[tuple[str, ...], str] | None = None
        for u, path in sorted(any_reach.items(), key=lambda kv: len(kv[1])):
            spare = next((e for e in g.out_edges(u) if not p.in_image(e)), None)
            if spare is not None:
                nearest = (path, spare)
                break
        # 0/1-weighted search: minimize spare-edge count on a path to a tail vertex
        forced: dict[str, tuple[int, tuple[str, ...]]] = {v: (0, ())}
        dq: deque[str] = deque([v])
        while dq:
            u = dq.popleft()
            cost, path = forced[u]
            for e in g.out_edges(u):
                w = g.target(e)
                c = cost + (0 if p.in_image(e) else 1)
                if w not in forced or c < forced[w][0]:
                    forced[w] = (c, path + (e,))
                    if p.in_image(e):
                        dq.appendleft(w)
                    else:
                        dq.append(w)
        mf_path = None
        mf = None
        for u in tail_vertices:
            if u in forced and (mf is None or forced[u][0] < mf):
                mf, mf_path = forced[u]
        per[v] = VertexCompletion(v, xi_tail[v], to_tail, nearest, mf_path, mf)
    return CompletionTables(per)
