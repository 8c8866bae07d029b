"""Exact integer linear algebra and the algebraic invariants of the quotient.

Smith normal form with recorded unimodular transforms drives everything:
cokernels and kernel ranks, Bowen-Franks groups, the eight K-groups of the
stable/unstable algebras and their crossed products, the two-row homology
table, and the synthesis pipeline that realizes prescribed K-groups by a
seed bundle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .embedding import EmbeddingPair, check_standing_hypotheses
from .graphs import Graph, IntMatrix, adjacency_matrix, paths_of_length


class AlgebraError(ValueError):
    pass


# -- Smith normal form --------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V = D with U, V unimodular and D diagonal with a
    divisibility chain d1 | d2 | ..."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.d[i, i] for i in range(min(self.d.rows, self.d.cols)))


def smith_normal_form(a: IntMatrix) -> SmithDecomposition:
    rows, cols = a.rows, a.cols
    m = [list(r) for r in a.entries]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        m[dst] = [x + c * y for x, y in zip(m[dst], m[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for row in m:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def negate_row(i):
        m[i] = [-x for x in m[i]]
        u[i] = [-x for x in u[i]]

    n = min(rows, cols)
    for t in range(n):
        # deterministic pivot: smallest nonzero |entry|, ties by (row, col)
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if m[i][j] != 0 and (pivot is None or abs(m[i][j]) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        while True:
            i, j = pivot
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            # clear column t then row t; remainders become new pivots
            dirty = False
            for i in range(rows):
                if i != t and m[i][t] != 0:
                    q = m[i][t] // m[t][t]
                    add_row(i, t, -q)
                    if m[i][t] != 0:
                        pivot = (i, t)
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(cols):
                if j != t and m[t][j] != 0:
                    q = m[t][j] // m[t][t]
                    add_col(j, t, -q)
                    if m[t][j] != 0:
                        pivot = (t, j)
                        dirty = True
                        break
            if dirty:
                continue
            # divisibility sweep: pull any non-multiple into column t
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if m[i][j] % m[t][t] != 0:
                        offender = (i, j)
                        break
                if offender:
                    break
            if offender is None:
                break
            add_row(t, offender[0], 1)
            pivot = (t, t)
        if m[t][t] < 0:
            negate_row(t)

    d = IntMatrix.from_rows(m)
    return SmithDecomposition(IntMatrix.from_rows(u), d, IntMatrix.from_rows(v))


# -- finitely generated abelian groups -----------------------------------------


@dataclass(frozen=True)
class FgAbelianGroup:
    """Canonical form: free rank plus invariant factors d1 | d2 | ..."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.rank < 0 or any(t < 2 for t in self.torsion):
            raise AlgebraError("invalid canonical form")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise AlgebraError("torsion factors must form a divisibility chain")

    @staticmethod
    def of(rank: int, factors: Sequence[int] = ()) -> "FgAbelianGroup":
        """Canonicalize arbitrary cyclic factors into invariant-factor form."""
        fs = [f for f in factors if f != 1]
        rank += sum(1 for f in fs if f == 0)
        fs = [abs(f) for f in fs if f != 0]
        if not fs:
            return FgAbelianGroup(rank, ())
        diag = [[fs[i] if i == j else 0 for j in range(len(fs))] for i in range(len(fs))]
        snf = smith_normal_form(IntMatrix.from_rows(diag))
        chain = tuple(d for d in snf.diagonal() if d > 1)
        return FgAbelianGroup(rank, chain)

    def direct_sum(self, other: "FgAbelianGroup") -> "FgAbelianGroup":
        return FgAbelianGroup.of(self.rank + other.rank, self.torsion + other.torsion)

    def render(self) -> str:
        parts: list[str] = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " (+) ".join(parts) if parts else "0"


def cokernel(a: IntMatrix) -> FgAbelianGroup:
    """Z^rows / (A Z^cols) from the Smith diagonal."""
    diag = smith_normal_form(a).diagonal()
    nonzero = [d for d in diag if d != 0]
    rank = a.rows - len(nonzero)
    return FgAbelianGroup(rank, tuple(d for d in nonzero if d > 1))


def kernel_rank(a: IntMatrix) -> int:
    diag = smith_normal_form(a).diagonal()
    return a.cols - sum(1 for d in diag if d != 0)


# -- dimension groups, Bowen-Franks, K-theory ----------------------------------


@dataclass(frozen=True)
class MarkedGroupPresentation:
    """Stationary inductive limit lim(Z^size --matrix--> Z^size ...) together
    with the label of its canonical automorphism.  Two presentations are
    compared as presented only; no isomorphism testing."""

    size: int
    matrix: IntMatrix
    automorphism: str

    def render(self) -> str:
        return f"lim(Z^{self.size}, {self.automorphism})"


def dimension_group(g: Graph, variant: str) -> MarkedGroupPresentation:
    """The stationary limit presentation of the forward ('s') or backward
    ('u') tail-equivalence invariant of a graph."""
    a = adjacency_matrix(g)
    if variant == "s":
        return MarkedGroupPresentation(len(g.vertices), a, "A")
    if variant == "u":
        return MarkedGroupPresentation(len(g.vertices), a.transpose(), "A^T")
    raise AlgebraError("variant must be 's' or 'u'")


def bowen_franks(g: Graph) -> FgAbelianGroup:
    a = adjacency_matrix(g)
    return cokernel(IntMatrix.identity(a.rows) - a)


@dataclass(frozen=True)
class RuelleKTheory:
    """The eight K-groups attached to a seed bundle.

    The stable/unstable algebra K-groups are stationary presentations with
    their automorphism labels; the crossed-product K-groups are plain
    finitely generated abelian groups.
    """

    k0_stable: MarkedGroupPresentation
    k1_stable: MarkedGroupPresentation
    k0_unstable: MarkedGroupPresentation
    k1_unstable: MarkedGroupPresentation
    k0_ruelle_s: FgAbelianGroup
    k1_ruelle_s: FgAbelianGroup
    k0_ruelle_u: FgAbelianGroup
    k1_ruelle_u: FgAbelianGroup
    valid: bool
    warnings: tuple[str, ...] = ()


def ruelle_k_theory(p: EmbeddingPair) -> RuelleKTheory:
    """Compute all eight K-groups by integer linear algebra.

    If the standing hypotheses fail the groups are still computed from the
    same formulas but flagged as not validated.
    """
    rep = check_standing_hypotheses(p)
    warnings: list[str] = []
    if not rep.standing():
        for name in ("h0", "h1", "h2", "primitive"):
            res = getattr(rep, name)
            if not res.passed:
                warnings.append(f"{name} fails" + (f" ({res.witness})" if res.witness else ""))
    ag = adjacency_matrix(p.g)
    ah = adjacency_matrix(p.h)
    ig = IntMatrix.identity(ag.rows)
    ih = IntMatrix.identity(ah.rows)
    dg = len(p.g.vertices)
    dh = len(p.h.vertices)

    k0_rs = cokernel(ig - ag.transpose()).direct_sum(
        FgAbelianGroup(kernel_rank(ih - ah.transpose()))
    )
    k1_rs = cokernel(ih - ah.transpose()).direct_sum(
        FgAbelianGroup(kernel_rank(ig - ag.transpose()))
    )
    k0_ru = cokernel(ig - ag).direct_sum(FgAbelianGroup(kernel_rank(ih - ah)))
    k1_ru = cokernel(ih - ah).direct_sum(FgAbelianGroup(kernel_rank(ig - ag)))

    return RuelleKTheory(
        k0_stable=MarkedGroupPresentation(dg, ag.transpose(), "A_G^T"),
        k1_stable=MarkedGroupPresentation(dh, ah.transpose(), "A_H^T"),
        k0_unstable=MarkedGroupPresentation(dg, ag, "A_G^-1"),
        k1_unstable=MarkedGroupPresentation(dh, ah, "A_H^-1"),
        k0_ruelle_s=k0_rs,
        k1_ruelle_s=k1_rs,
        k0_ruelle_u=k0_ru,
        k1_ruelle_u=k1_ru,
        valid=rep.standing(),
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class HomologyRow:
    invariant: str  # "s" or "u"
    degree: int
    group: MarkedGroupPresentation | None  # None means the zero group
    automorphism: str


def homology_table(p: EmbeddingPair) -> tuple[HomologyRow, ...]:
    """The homology of the invertible quotient system: two nonzero rows per
    invariant (degrees 0 and 1), zero elsewhere."""
    rep = check_standing_hypotheses(p)
    if not rep.standing():
        raise AlgebraError("homology table requires the standing hypotheses")
    ag = adjacency_matrix(p.g)
    ah = adjacency_matrix(p.h)
    dg, dh = len(p.g.vertices), len(p.h.vertices)
    return (
        HomologyRow("s", 0, MarkedGroupPresentation(dg, ag, "A_G"), "A_G"),
        HomologyRow("s", 1, MarkedGroupPresentation(dh, ah, "A_H"), "A_H"),
        HomologyRow("u", 0, MarkedGroupPresentation(dg, ag.transpose(), "A_G^T"), "A_G^T"),
        HomologyRow("u", 1, MarkedGroupPresentation(dh, ah.transpose(), "A_H^T"), "A_H^T"),
        HomologyRow("s", 2, None, "0"),
        HomologyRow("u", 2, None, "0"),
    )


# -- the pair complex -----------------------------------------------------------

Pair = tuple[tuple[str, ...], tuple[str, ...]]


@dataclass(frozen=True)
class PairComplex:
    """Words of the self-product shift presenting the two-to-one locus,
    partitioned by carry pattern, with the degree-one boundary data."""

    vertex_cells: tuple[frozenset[Pair], ...]  # V_0 .. V_6 over 6-words
    edge_cells: tuple[frozenset[Pair], ...]  # E_0 .. E_7 over 7-words
    h6: tuple[tuple[str, ...], ...]
    containments_ok: bool
    quotient_rank: int

    def boundary_on_generator(self, y: tuple[str, ...], p: EmbeddingPair):
        """Image of the degree-one generator attached to an H 6-word:
        a +/-1 chain on G 6-words."""
        w0 = tuple(p.xi0_edges[e] for e in y)
        w1 = tuple(p.xi1_edges[e] for e in y)
        return ((w0, 1), (w1, -1))

    def terminal_boundary_vanishes(self, p: EmbeddingPair) -> bool:
        """The terminal-vertex image of every generator boundary is zero."""
        for y in self.h6:
            chain = self.boundary_on_generator(y, p)
            acc: dict[str, int] = {}
            for word, sign in chain:
                v = p.g.target(word[-1])
                acc[v] = acc.get(v, 0) + sign
            if any(c != 0 for c in acc.values()):
                return False
        return True


def _h_words(h: Graph, n: int) -> list[tuple[str, ...]]:
    return [p.edges for p in paths_of_length(h, n)]


def _xi_word(p: EmbeddingPair, i: int, y: Sequence[str]) -> tuple[str, ...]:
    emap = p.xi0_edges if i == 0 else p.xi1_edges
    return tuple(emap[e] for e in y)


def _pair_cells(p: EmbeddingPair, length: int) -> list[frozenset[Pair]]:
    """Cells V_0..V_length over words of the given length (6 or 7).

    Three pattern families: diagonal pairs, fully swapped doubled pairs,
    and equal-prefix-then-swapped-tail pairs.  This is the maximal reading
    of the cell listing under which the initial/terminal containments are
    actually satisfiable (carry-pivot words admit no consistent cell).
    """
    g, h = p.g, p.h
    cells: list[set[Pair]] = [set() for _ in range(length + 1)]
    for w in paths_of_length(g, length):
        cells[0].add((w.edges, w.edges))
    for y in _h_words(h, length):
        a, b = _xi_word(p, 0, y), _xi_word(p, 1, y)
        cells[length].add((a, b))
        cells[length].add((b, a))
    for k in range(1, length):
        for y in _h_words(h, k):
            head = p.xi0_vertices[h.source(y[0])]
            for x in paths_of_length(g, length - k, dst=head):
                a = x.edges + _xi_word(p, 0, y)
                b = x.edges + _xi_word(p, 1, y)
                cells[k].add((a, b))
                cells[k].add((b, a))
    return [frozenset(c) for c in cells]


def build_pair_complex(p: EmbeddingPair, word_cap: int = 10**7) -> PairComplex:
    """Construct the block-7 pair complex and verify its structure."""
    rep = check_standing_hypotheses(p)
    if not rep.standing():
        raise AlgebraError("pair complex requires the standing hypotheses")
    if len(p.g.edges) ** 7 > word_cap:
        raise AlgebraError(
            f"pair complex too large: |G^1|^7 = {len(p.g.edges) ** 7} exceeds cap {word_cap}"
        )
    v_cells = _pair_cells(p, 6)
    e_cells = _pair_cells(p, 7)

    def initial(pair: Pair) -> Pair:
        return (pair[0][:-1], pair[1][:-1])

    def terminal(pair: Pair) -> Pair:
        return (pair[0][1:], pair[1][1:])

    ok = True
    ok &= all(initial(e) in v_cells[0] for e in e_cells[0])
    ok &= all(terminal(e) in v_cells[0] for e in e_cells[0])
    for j in range(1, 8):
        ok &= all(initial(e) in v_cells[j - 1] for e in e_cells[j])
    for j in range(0, 7):
        ok &= all(terminal(e) in v_cells[j] for e in e_cells[j])
    ok &= all(terminal(e) in v_cells[6] for e in e_cells[7])
    # cells must be pairwise disjoint
    seen: set[Pair] = set()
    for cell in v_cells:
        if seen & cell:
            ok = False
        seen |= cell
    h6 = tuple(_h_words(p.h, 6))
    # the swap action pairs the two orientations of each doubled word
    rank = len(v_cells[6]) // 2
    return PairComplex(tuple(v_cells), tuple(e_cells), h6, ok, rank)


# -- realization of prescribed groups -------------------------------------------


def realize_group_matrix(target: FgAbelianGroup, d0: int, m0: int) -> IntMatrix:
    """A square matrix A, size >= d0, all entries >= m0, with
    Z^d / (I - A) Z^d isomorphic to the target group.

    Built by unimodular row/column operations from the diagonal of
    invariant factors padded with zeros (rank) and ones.
    """
    if d0 < 1 or m0 < 1:
        raise AlgebraError("d0 and m0 must be positive")
    k = target.rank
    tor = list(target.torsion)
    # at least one padding 1, and total size >= 2 so the final row
    # operation adds two distinct rows
    ones = max(1, d0 - len(tor) - k, 2 - len(tor) - k)
    diag = [0] * k + tor + [1] * ones
    d = len(diag)
    m = [[diag[i] if i == j else 0 for j in range(d)] for i in range(d)]
    # column ops: spread the trailing 1 across row d-1
    for j in range(d - 1):
        for i in range(d):
            m[i][j] += m[i][d - 1]
    # row ops: push every other row up to >= m0
    for i in range(d - 1):
        for j in range(d):
            m[i][j] += m0 * m[d - 1][j]
    # final fix for row d-1 itself
    for j in range(d):
        m[d - 1][j] += m[0][j]
    b = IntMatrix.from_rows(m)
    if any(x < m0 for row in b.entries for x in row):
        raise AlgebraError("construction failed to reach the entry bound")
    return b + IntMatrix.identity(d)


def synthesize_seed(k0_torsion: FgAbelianGroup, k1: FgAbelianGroup) -> EmbeddingPair:
    """Build a seed bundle whose crossed-product K-groups realize the
    prescribed pair (K0 torsion part, K1).

    The small graph presents K1 through I - A; the big graph presents the
    K0 torsion through I - B with entries large enough to embed the small
    graph twice disjointly and leave spare parallel edges.
    """
    if k0_torsion.rank != 0:
        raise AlgebraError("the K0 target must be torsion-only (rank 0)")
    a = realize_group_matrix(k1, 1, 1)
    d = a.rows
    m0 = max(2 * x + 1 for row in a.entries for x in row)
    b = realize_group_matrix(k0_torsion, d, m0)
    dprime = b.rows

    h_vertices = [f"w{i}" for i in range(d)]
    g_vertices = [f"v{i}" for i in range(dprime)]
    h_edges: list[tuple[str, str, str]] = []
    # adjacency_matrix(H) must equal A^T: #edges(src=w_c, dst=w_r) = A^T[r][c] = A[c][r]
    for c in range(d):
        for r in range(d):
            for n in range(a[c, r]):
                h_edges.append((f"y{c}_{r}_{n}", f"w{c}", f"w{r}"))
    g_edges: list[tuple[str, str, str]] = []
    for c in range(dprime):
        for r in range(dprime):
            for n in range(b[c, r]):
                g_edges.append((f"e{c}_{r}_{n}", f"v{c}", f"v{r}"))
    g = Graph(g_vertices, g_edges)
    h = Graph(h_vertices, h_edges)

    vmap = {f"w{i}": f"v{i}" for i in range(d)}
    xi0: dict[str, str] = {}
    xi1: dict[str, str] = {}
    for c in range(d):
        for r in range(d):
            mult = a[c, r]
            for n in range(mult):
                xi0[f"y{c}_{r}_{n}"] = f"e{c}_{r}_{2 * n}"
                xi1[f"y{c}_{r}_{n}"] = f"e{c}_{r}_{2 * n + 1}"
    return EmbeddingPair(g, h, vmap, xi0, dict(vmap), xi1)
