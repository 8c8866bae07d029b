"""Eventually periodic rays of the big edge shift and the carry identification.

A LassoRay (finite prefix + repeating cycle) is the computable stand-in for
a one-sided infinite edge path.  On these we can decide everything the
quotient construction needs exactly: the spare-edge count kappa, the first
spare position, the binary angle theta, the carry partner ("flip"), and
canonical class representatives.

Positions are 1-indexed throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .embedding import EmbeddingPair, completion_tables, epsilon
from .graphs import Graph, GraphError


class RayError(ValueError):
    """Raised for invalid rays or violated ray-operation preconditions."""


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _lcm(a: int, b: int) -> int:
    return a // _gcd(a, b) * b


def _primitive_cycle(cycle: tuple[str, ...]) -> tuple[str, ...]:
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle == cycle[:d] * (n // d):
            return cycle[:d]
    return cycle


@dataclass(frozen=True)
class LassoRay:
    """Normal form: the cycle is primitive and the prefix is shortest
    (no rotation of the cycle absorbs a prefix suffix), so equality of the
    represented infinite paths is plain component equality."""

    prefix: tuple[str, ...]
    cycle: tuple[str, ...]

    @staticmethod
    def make(g: Graph, prefix: Sequence[str], cycle: Sequence[str]) -> "LassoRay":
        """Validate endpoint compatibility (including the cycle wrap) and
        normalize."""
        pre = tuple(prefix)
        cyc = tuple(cycle)
        if not cyc:
            raise RayError("cycle must be nonempty")
        try:
            for e in pre + cyc:
                if not g.has_edge(e):
                    raise GraphError(f"unknown edge {e!r}")
            whole = pre + cyc
            for a, b in zip(whole, whole[1:]):
                if g.target(a) != g.source(b):
                    raise GraphError(f"edges {a!r},{b!r} are not composable")
            if g.target(cyc[-1]) != g.source(cyc[0]):
                raise GraphError("cycle does not close up")
            if pre and g.target(pre[-1]) != g.source(cyc[0]):
                raise GraphError("prefix does not meet cycle")
        except GraphError as exc:
            raise RayError(str(exc)) from None
        cyc = _primitive_cycle(cyc)
        pre = list(pre)
        while pre and pre[-1] == cyc[-1]:
            pre.pop()
            cyc = (cyc[-1],) + cyc[:-1]
        return LassoRay(tuple(pre), cyc)

    def edge_at(self, n: int) -> str:
        """Edge at 1-indexed position n."""
        if n < 1:
            raise RayError("positions are 1-indexed")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.cycle[(n - 1 - len(self.prefix)) % len(self.cycle)]

    def head(self, n: int) -> tuple[str, ...]:
        return tuple(self.edge_at(i) for i in range(1, n + 1))

    def start_vertex(self, g: Graph) -> str:
        return g.source(self.edge_at(1))


def parse_ray(g: Graph, text: str) -> LassoRay:
    """Ray literal: 'e1,e2,...;c1,c2,...' (prefix before ';', cycle after)."""
    if ";" not in text:
        raise RayError("ray literal needs a ';' between prefix and cycle")
    pre_text, cyc_text = text.split(";", 1)
    prefix = [t.strip() for t in pre_text.split(",") if t.strip()]
    cycle = [t.strip() for t in cyc_text.split(",") if t.strip()]
    return LassoRay.make(g, prefix, cycle)


def format_ray(x: LassoRay) -> str:
    return ",".join(x.prefix) + ";" + ",".join(x.cycle)


@dataclass(frozen=True)
class Angle:
    """Point of the circle stored as a reduced rational number of turns in
    [0, 1)."""

    turns: Fraction

    @staticmethod
    def of(value: Fraction | int) -> "Angle":
        return Angle(Fraction(value) % 1)

    def distance(self, other: "Angle") -> Fraction:
        """Shortest arc length in turns, in [0, 1/2]."""
        d = abs(self.turns - other.turns)
        return min(d, 1 - d)

    def double(self) -> "Angle":
        return Angle.of(2 * self.turns)


@dataclass(frozen=True)
class ClassPoint:
    """A point of the quotient space, held by its canonical representative."""

    rep: LassoRay


# -- basic quantities ---------------------------------------------------------


def kappa(p: EmbeddingPair, x: LassoRay) -> int | float:
    """Number of positions whose edge lies outside the embedded image;
    math.inf when the cycle contains such an edge."""
    if any(not p.in_image(e) for e in x.cycle):
        return math.inf
    return sum(1 for e in x.prefix if not p.in_image(e))


def first_nonxi(p: EmbeddingPair, x: LassoRay) -> int:
    """The least position carrying a spare edge; error when kappa = 0."""
    for i, e in enumerate(x.prefix, start=1):
        if not p.in_image(e):
            return i
    for j, e in enumerate(x.cycle, start=len(x.prefix) + 1):
        if not p.in_image(e):
            return j
    raise RayError("ray lies entirely in the embedded image (kappa = 0)")


def nonxi_positions(p: EmbeddingPair, x: LassoRay, upto: int) -> list[int]:
    return [i for i in range(1, upto + 1) if not p.in_image(x.edge_at(i))]


def digit_series(p: EmbeddingPair, x: LassoRay) -> Fraction:
    """Exact value of sum eps(x_j) 2^-j over all positions, in [0, 1].

    Only defined when kappa(x) = 0.  This is the raw series value, not
    reduced mod 1: the all-ones tail really gives 1.
    """
    if kappa(p, x) != 0:
        raise RayError("digit series needs kappa = 0")
    total = Fraction(0)
    for i, e in enumerate(x.prefix, start=1):
        total += Fraction(epsilon(p, e), 2**i)
    m = len(x.prefix)
    L = len(x.cycle)
    cyc_int = 0
    for e in x.cycle:
        cyc_int = (cyc_int << 1) | epsilon(p, e)
    total += Fraction(cyc_int, 2**m * (2**L - 1))
    return total


def theta(p: EmbeddingPair, x: LassoRay) -> Angle:
    """The binary angle of the ray.

    With spare edges present this is the finite digit sum up to the first
    spare position; without them the full series is evaluated in closed
    form (geometric series over the cycle) and reduced mod 1.
    """
    if kappa(p, x) == 0:
        return Angle.of(digit_series(p, x))
    n = first_nonxi(p, x)
    total = Fraction(0)
    for j in range(1, n):
        total += Fraction(epsilon(p, x.edge_at(j)), 2**j)
    return Angle.of(total)


def theta_partial(p: EmbeddingPair, x: LassoRay) -> Fraction:
    """Raw digit sum: the full series for kappa = 0 (in [0, 1]), else the
    finite sum up to the first spare position (in [0, 1))."""
    if kappa(p, x) == 0:
        return digit_series(p, x)
    n = first_nonxi(p, x)
    return sum((Fraction(epsilon(p, x.edge_at(j)), 2**j) for j in range(1, n)), Fraction(0))


# -- shift, flip, canonical ----------------------------------------------------


def shift(x: LassoRay) -> LassoRay:
    """Drop the first edge (rotate the cycle when the prefix is empty)."""
    if x.prefix:
        return LassoRay(x.prefix[1:], x.cycle)
    rotated = x.cycle[1:] + x.cycle[:1]
    # rotation of a primitive cycle stays primitive and prefix-free
    return LassoRay((), rotated)


def shift_by(x: LassoRay, n: int) -> LassoRay:
    for _ in range(n):
        x = shift(x)
    return x


def flip(p: EmbeddingPair, x: LassoRay) -> LassoRay | None:
    """The unique partner of x under the carry identification, or None.

    Cases: a position n inside the image whose superscript differs from the
    constant superscript of the tail after it (binary carry 0.0111... =
    0.1000...); a spare edge followed by a constant-superscript tail; and
    the total swap when every edge lies in one embedding (0.000... = 1).
    """
    if any(not p.in_image(e) for e in x.cycle):
        return None
    digits_cycle = {epsilon(p, e) for e in x.cycle}
    if len(digits_cycle) != 1:
        return None
    i = digits_cycle.pop()
    # m = first position of the maximal constant-superscript streak ending the ray
    m = len(x.prefix) + 1
    while m >= 2:
        e = x.prefix[m - 2]
        if p.in_image(e) and epsilon(p, e) == i:
            m -= 1
        else:
            break
    swap = p.partner
    if m == 1:
        return LassoRay(tuple(swap(e) for e in x.prefix), tuple(swap(e) for e in x.cycle))
    pivot = x.prefix[m - 2]
    new_prefix = list(x.prefix)
    for j in range(m - 1, len(x.prefix)):
        new_prefix[j] = swap(x.prefix[j])
    new_cycle = tuple(swap(e) for e in x.cycle)
    if p.in_image(pivot):
        # carry: the pivot digit is 1-i; swap it too
        new_prefix[m - 2] = swap(pivot)
    # else: spare pivot, tail swap only
    # renormalize: the prefix may now end in cycle edges
    pre = new_prefix
    cyc = new_cycle
    while pre and pre[-1] == cyc[-1]:
        pre.pop()
        cyc = (cyc[-1],) + cyc[:-1]
    return LassoRay(tuple(pre), cyc)


def _compare_rays(g_edge_index: dict[str, int], x: LassoRay, y: LassoRay) -> int:
    if x == y:
        return 0
    bound = max(len(x.prefix), len(y.prefix)) + _lcm(len(x.cycle), len(y.cycle)) + 1
    for n in range(1, bound + 1):
        a, b = x.edge_at(n), y.edge_at(n)
        if a != b:
            return -1 if g_edge_index[a] < g_edge_index[b] else 1
    return 0


def canonical(p: EmbeddingPair, x: LassoRay) -> ClassPoint:
    """Canonical class representative: the positionwise lexicographically
    smaller of x and its flip (by global edge index)."""
    other = flip(p, x)
    if other is None or _compare_rays(p.g.edge_index, x, other) <= 0:
        return ClassPoint(x)
    return ClassPoint(other)


def class_equal(p: EmbeddingPair, x: LassoRay, y: LassoRay) -> bool:
    return canonical(p, x) == canonical(p, y)


# -- stratum approximants -------------------------------------------------------


def stratum_approximant(p: EmbeddingPair, x: LassoRay, depth: int, k: int) -> LassoRay:
    """A lasso agreeing with x on positions 1..depth with exactly k spare
    edges, ending in an all-image tail.

    The completion inserts spare edges only beyond the agreed prefix, so
    the shift-metric distance to x is at most 2^-depth.
    """
    if depth < 1:
        raise RayError("depth must be >= 1")
    head = list(x.head(depth))
    j = sum(1 for e in head if not p.in_image(e))
    if k < j:
        raise RayError(f"stratum {k} too small: prefix already has {j} spare edges")
    needed = k - j
    tables = completion_tables(p)
    v = p.g.target(head[-1])
    comp = tables[v]
    if comp.min_forced is None:
        raise RayError(f"no image tail reachable from vertex {v!r}")
    if needed < comp.min_forced:
        raise RayError(
            f"stratum {k} unreachable: at least {comp.min_forced} spare edges "
            f"needed after depth {depth}"
        )
    route = list(comp.min_forced_path or ())
    u = v
    for e in route:
        u = p.g.target(e)
    tail = tables[u].xi_tail
    if tail is None:
        raise RayError(f"no image tail at vertex {u!r}")
    lead, cyc = tail
    route.extend(lead)
    budget = needed - comp.min_forced
    # extra spare edges come from swapping image edges on the route to their
    # parallel spare twins (H2); extend with cycle laps until enough slots
    slots = [idx for idx, e in enumerate(route) if p.in_image(e)]
    while len(slots) < budget:
        base = len(route)
        route.extend(cyc)
        slots.extend(range(base, base + len(cyc)))
    for idx in slots[:budget]:
        e = route[idx]
        spare = next(
            (
                s
                for s in p.g.edges
                if not p.in_image(s)
                and p.g.source(s) == p.g.source(e)
                and p.g.target(s) == p.g.target(e)
            ),
            None,
        )
        if spare is None:
            raise RayError(f"no spare edge parallel to {e!r} (H2 fails)")
        route[idx] = spare
    return LassoRay.make(p.g, head + route, cyc)


# -- preimage lifting -----------------------------------------------------------


def lift_preimage(p: EmbeddingPair, x: LassoRay, y: LassoRay) -> LassoRay:
    """A shift-preimage of x starting like y.

    Returns z with shift(z) in the class of x and the first edge of z glued
    to the first edge of y (equal as quotient edges).  Among the valid
    candidates - both class representatives of x, prepended with either
    copy of y's first edge - the one whose binary angle lands closest to
    y's is chosen; this is what makes the contraction bound
    d(z, y) <= d(x, shift(y)) / 2 hold through binary carries.
    """
    y1 = y.edge_at(1)
    x1 = x.edge_at(1)
    if p.g.target(y1) != p.g.source(x1):
        raise RayError("first edge of x is not composable after the first edge of y")

    reps = [x]
    other = flip(p, x)
    if other is not None and other != x:
        reps.append(other)
    if p.in_image(y1):
        firsts = [y1, p.partner(y1)]
    else:
        firsts = [y1]

    target_n: int | float
    ky = kappa(p, y)
    target_n = first_nonxi(p, y) if ky != 0 else math.inf
    target_t = theta_partial(p, y)
    target_angle = Angle.of(target_t)

    best: tuple[tuple[int, Fraction, int], LassoRay] | None = None
    for pref_idx, (e, rep) in enumerate(
        (e, rep) for e in firsts for rep in reps
    ):
        z = LassoRay.make(p.g, (e,) + rep.prefix, rep.cycle)
        kz = kappa(p, z)
        nz: int | float = first_nonxi(p, z) if kz != 0 else math.inf
        az = Angle.of(theta_partial(p, z))
        matched = 0 if (nz == target_n and az == target_angle) else 1
        score = (matched, az.distance(target_angle), pref_idx)
        if best is None or score < best[0]:
            best = (score, z)
    assert best is not None
    return best[1]
