"""The invertible system: bi-infinite lassos, truncated inverse-limit towers,
the bracket map, the two-sided pair relation, and transversal sets.

A point of the invertible quotient is an inverse-limit sequence of
quotient-space points; computationally we truncate at an explicit depth M
and certify all metric statements with the 3 * 2^-M tail slack (the
quotient space has diameter at most 3).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .embedding import EmbeddingPair, epsilon
from .graphs import Graph, GraphError
from .metrics import MetricInterval, d_class
from .rays import ClassPoint, LassoRay, _lcm, canonical, lift_preimage, shift


class SmaleError(ValueError):
    pass


@dataclass(frozen=True)
class BiLasso:
    """Bi-infinite eventually periodic path.

    The core occupies positions origin .. origin+len(core)-1; to the left
    the past cycle repeats (anchored so that position origin-1 carries the
    cycle's last edge), to the right the future cycle repeats (anchored so
    that the first position after the core carries the cycle's first edge).
    """

    past: tuple[str, ...]
    core: tuple[str, ...]
    future: tuple[str, ...]
    origin: int = 1

    @staticmethod
    def make(
        g: Graph,
        past: tuple[str, ...] | list[str],
        core: tuple[str, ...] | list[str],
        future: tuple[str, ...] | list[str],
        origin: int = 1,
    ) -> "BiLasso":
        past, core, future = tuple(past), tuple(core), tuple(future)
        if not past or not future:
            raise SmaleError("past and future cycles must be nonempty")
        try:
            for seq in (past, core, future):
                for e in seq:
                    if not g.has_edge(e):
                        raise GraphError(f"unknown edge {e!r}")
            for cyc in (past, future):
                for a, b in zip(cyc, cyc[1:]):
                    if g.target(a) != g.source(b):
                        raise GraphError("cycle edges not composable")
                if g.target(cyc[-1]) != g.source(cyc[0]):
                    raise GraphError("cycle does not close up")
            seam = past[-1:] + core + future[:1]
            for a, b in zip(seam, seam[1:]):
                if g.target(a) != g.source(b):
                    raise GraphError("junction edges not composable")
        except GraphError as exc:
            raise SmaleError(str(exc)) from None
        return BiLasso(past, core, future, origin)

    def edge_at(self, n: int) -> str:
        lo = self.origin
        hi = self.origin + len(self.core)  # first future position
        if n < lo:
            return self.past[(n - lo) % len(self.past)]
        if n < hi:
            return self.core[n - lo]
        return self.future[(n - hi) % len(self.future)]

    def core_end(self) -> int:
        return self.origin + len(self.core) - 1

    def window(self, a: int, b: int) -> tuple[str, ...]:
        return tuple(self.edge_at(n) for n in range(a, b + 1))

    def ray_from(self, n: int) -> LassoRay:
        """The one-sided ray read from position n onward."""
        first_future = self.origin + len(self.core)
        if n >= first_future:
            k = (n - first_future) % len(self.future)
            return LassoRay((), _primitive(self.future[k:] + self.future[:k]))
        prefix = self.window(n, first_future - 1)
        pre = list(prefix)
        cyc = _primitive(self.future)
        while pre and pre[-1] == cyc[-1]:
            pre.pop()
            cyc = (cyc[-1],) + cyc[:-1]
        return LassoRay(tuple(pre), cyc)


def _primitive(cycle: tuple[str, ...]) -> tuple[str, ...]:
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle == cycle[:d] * (n // d):
            return cycle[:d]
    return cycle


def shift_bilasso(x: BiLasso) -> BiLasso:
    """The left shift: pure reindexing (position n of the result is
    position n+1 of the input)."""
    return replace(x, origin=x.origin - 1)


def inv_shift_bilasso(x: BiLasso) -> BiLasso:
    return replace(x, origin=x.origin + 1)


def bilasso_equal(x: BiLasso, y: BiLasso) -> bool:
    """Semantic equality of the represented bi-infinite paths."""
    lp = _lcm(len(x.past), len(y.past))
    lf = _lcm(len(x.future), len(y.future))
    a = min(x.origin, y.origin) - lp
    b = max(x.core_end(), y.core_end()) + lf
    return all(x.edge_at(n) == y.edge_at(n) for n in range(a, b + 1))


def parse_bilasso(g: Graph, text: str) -> BiLasso:
    """Bi-lasso literal 'past;core;future' (each comma-separated; the core
    may be empty).  The core starts at position 1."""
    parts = text.split(";")
    if len(parts) != 3:
        raise SmaleError("bi-lasso literal needs two ';' separators")
    seqs = [[t.strip() for t in part.split(",") if t.strip()] for part in parts]
    return BiLasso.make(g, seqs[0], seqs[1], seqs[2], origin=1)


def format_bilasso(x: BiLasso) -> str:
    return ";".join(",".join(part) for part in (x.past, x.core, x.future))


# -- towers ---------------------------------------------------------------------


@dataclass(frozen=True)
class Tower:
    """Truncated inverse-limit point: levels x^0 .. x^M with
    sigma(x^{n+1}) = x^n as quotient points."""

    levels: tuple[ClassPoint, ...]

    def __post_init__(self) -> None:
        if not self.levels:
            raise SmaleError("tower needs at least one level")

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def level(self, n: int) -> ClassPoint:
        return self.levels[n]


def make_tower(p: EmbeddingPair, levels: list[ClassPoint]) -> Tower:
    for lo, hi in zip(levels, levels[1:]):
        if canonical(p, shift(hi.rep)) != lo:
            raise SmaleError("tower levels are not shift-consistent")
    return Tower(tuple(levels))


def pi_xi_tower(p: EmbeddingPair, x: BiLasso, depth: int) -> Tower:
    """The tower of quotient points read from positions 1, 0, -1, ..."""
    levels = [canonical(p, x.ray_from(1 - n)) for n in range(depth + 1)]
    return Tower(tuple(levels))


def shift_tower(p: EmbeddingPair, t: Tower) -> Tower:
    """Forward dynamics on truncated towers (same depth)."""
    head = canonical(p, shift(t.levels[0].rep))
    return Tower((head,) + t.levels[:-1])


def inv_shift_tower(t: Tower) -> Tower:
    """Backward dynamics; loses one level of depth."""
    if len(t.levels) < 2:
        raise SmaleError("tower too shallow to invert")
    return Tower(t.levels[1:])


def tower_distance(
    p: EmbeddingPair, x: Tower, y: Tower, depth: int | None = None, ray_depth: int = 16
) -> MetricInterval:
    """Certified sup-metric enclosure over the truncated levels, with the
    3 * 2^-M tail bound for everything beyond the truncation."""
    if x.depth != y.depth:
        raise SmaleError("towers must share their depth")
    m = x.depth if depth is None else min(depth, x.depth)
    lo = Fraction(0)
    hi = Fraction(3, 2**m)
    for n in range(m + 1):
        d = d_class(p, x.level(n), y.level(n), ray_depth)
        w = Fraction(1, 2**n)
        lo = max(lo, w * d.lo)
        hi = max(hi, w * d.hi)
    return MetricInterval(lo, hi)


def bracket(p: EmbeddingPair, x: Tower, y: Tower, ray_depth: int = 16) -> Tower:
    """Local product coordinates: level 0 from x, deeper levels lifted
    toward y one preimage at a time."""
    d = tower_distance(p, x, y, ray_depth=ray_depth)
    if d.hi > Fraction(1, 2):
        raise SmaleError(f"bracket undefined: tower distance {d.hi} > 1/2")
    levels = [x.level(0)]
    for n in range(1, x.depth + 1):
        z = lift_preimage(p, levels[-1].rep, y.level(n).rep)
        levels.append(canonical(p, z))
    return Tower(tuple(levels))


# -- the two-sided pair relation --------------------------------------------------


@dataclass(frozen=True)
class PairWitness:
    """Evidence that two bi-infinite paths project to the same point.

    case 'a': equality.  case 'b': a total superscript swap along a
    bi-infinite doubled path (i is the superscript on the first input).
    case 'c': agreement strictly below the pivot position m, a pivot that
    is either a shared spare edge or an oppositely swapped doubled pair,
    and a plainly swapped tail with constant superscript i above m.
    """

    case: str
    i: int | None = None
    m: int | None = None


def _swapped_at(p: EmbeddingPair, x: BiLasso, y: BiLasso, n: int) -> int | None:
    """Superscript i when (x_n, y_n) = (xi^i(z), xi^{1-i}(z)); None otherwise."""
    a, b = x.edge_at(n), y.edge_at(n)
    if a == b or not p.in_image(a) or not p.in_image(b):
        return None
    if p.partner(a) != b:
        return None
    return epsilon(p, a)


def pair_related(p: EmbeddingPair, x: BiLasso, y: BiLasso) -> PairWitness | None:
    """Decide whether two bi-infinite paths are identified in the invertible
    quotient, with a witness."""
    if bilasso_equal(x, y):
        return PairWitness("a")
    lp = _lcm(len(x.past), len(y.past))
    lf = _lcm(len(x.future), len(y.future))
    lo = min(x.origin, y.origin) - lp - 1
    hi = max(x.core_end(), y.core_end()) + lf

    # constant-superscript swap on the far future, else unrelated
    tail_i = _swapped_at(p, x, y, hi)
    if tail_i is None:
        return None
    for n in range(hi, hi + lf):
        if _swapped_at(p, x, y, n) != tail_i:
            return None

    # case b: swapped everywhere, including one full period of the far past
    fully_swapped = all(_swapped_at(p, x, y, n) == tail_i for n in range(lo - lp, hi))
    if fully_swapped:
        return PairWitness("b", i=tail_i)

    # case c: find the pivot = the largest position where the plain swap fails
    m = None
    for n in range(hi - 1, lo - lp - 1, -1):
        if _swapped_at(p, x, y, n) != tail_i:
            m = n
            break
    if m is None:
        return None
    xm, ym = x.edge_at(m), y.edge_at(m)
    pivot_ok = (xm == ym and not p.in_image(xm)) or (
        p.in_image(xm)
        and p.in_image(ym)
        and xm != ym
        and p.partner(xm) == ym
        and epsilon(p, xm) == 1 - tail_i
    )
    if not pivot_ok:
        return None
    # equality strictly below the pivot, certified through one past period
    for n in range(m - 1, lo - lp - 1, -1):
        if x.edge_at(n) != y.edge_at(n):
            return None
    return PairWitness("c", i=tail_i, m=m)


def apply_witness(p: EmbeddingPair, w: PairWitness, x: BiLasso) -> BiLasso:
    """Reconstruct the partner path from one input and a witness."""
    if w.case == "a":
        return x

    def swap_seq(seq: tuple[str, ...]) -> tuple[str, ...]:
        return tuple(p.partner(e) for e in seq)

    if w.case == "b":
        return BiLasso(swap_seq(x.past), swap_seq(x.core), swap_seq(x.future), x.origin)
    assert w.case == "c" and w.m is not None
    # widen the core so the pivot sits inside it, keeping both cycle phases
    lpast, lfut = len(x.past), len(x.future)
    k_lo = max(1, -(-(x.origin - min(x.origin, w.m) + 1) // lpast))
    lo = x.origin - lpast * k_lo
    end = x.core_end()
    k_hi = max(1, -(-(max(end, w.m) - end) // lfut) + 1)
    hi = end + lfut * k_hi
    core = list(x.window(lo, hi))
    for idx, n in enumerate(range(lo, hi + 1)):
        e = core[idx]
        if n >= w.m and p.in_image(e):
            core[idx] = p.partner(e)
    return BiLasso(x.past, tuple(core), swap_seq(x.future), lo)


# -- transversals ------------------------------------------------------------------


@dataclass(frozen=True)
class TransversalSpec:
    """A minimal-length cycle avoiding the embedded image, and the periodic
    points repeating it."""

    cycle: tuple[str, ...]
    points: tuple[BiLasso, ...]


def transversal_spec(p: EmbeddingPair) -> TransversalSpec:
    g = p.g
    best: tuple[str, ...] | None = None
    for L in range(1, len(g.vertices) + 1):
        candidates: list[tuple[str, ...]] = []
        for v in g.vertices:
            # bounded DFS over spare edges only
            def walk(at: str, path: list[str]) -> None:
                if len(path) == L:
                    if at == v:
                        candidates.append(tuple(path))
                    return
                for e in g.out_edges(at):
                    if p.in_image(e):
                        continue
                    path.append(e)
                    walk(g.target(e), path)
                    path.pop()

            walk(v, [])
        if candidates:
            best = min(candidates)
            break
    if best is None:
        raise SmaleError("no cycle avoids the embedded image")
    pts = tuple(
        BiLasso(best[k:] + best[:k], (), best[k:] + best[:k], 1)
        for k in range(len(best))
    )
    return TransversalSpec(best, pts)


def membership_yu(p: EmbeddingPair, spec: TransversalSpec, x: BiLasso) -> bool:
    """Whether the whole past of x (positions <= 0) repeats the transversal
    cycle."""
    for q in spec.points:
        span = _lcm(len(x.past), len(spec.cycle)) + len(x.core) + len(x.future) + abs(x.origin) + 2
        if all(x.edge_at(n) == q.edge_at(n) for n in range(-span, 1)):
            return True
    return False


def membership_ys(p: EmbeddingPair, spec: TransversalSpec, x: BiLasso) -> bool:
    """Whether x agrees with a transversal point on all positions >= -1."""
    for q in spec.points:
        span = _lcm(len(x.future), len(spec.cycle)) + len(x.core) + len(x.past) + abs(x.core_end()) + 2
        if all(x.edge_at(n) == q.edge_at(n) for n in range(-1, span + 1)):
            return True
    return False
