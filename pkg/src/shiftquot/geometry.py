"""Planar realization of the quotient space: the nested-circle embedding.

The complex coordinate of a ray is defined by a contraction recursion: at
each spare edge the picture recurses into a disc of radius 2^(-3-n) around
a point determined by the binary angle accumulated so far.  Circle centers
and radii are kept symbolically (rational coefficients times roots of
unity); floats appear only at render time, with certified error bounds.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .embedding import EmbeddingPair, EmbeddingError, completion_tables, epsilon
from .metrics import _quotient, tau_ray
from .rays import (
    Angle,
    LassoRay,
    RayError,
    canonical,
    first_nonxi,
    kappa,
    shift_by,
    stratum_approximant,
    theta,
)


def _angle_complex(a: Angle) -> complex:
    return cmath.exp(2j * math.pi * float(a.turns))


def zeta_exact_terms(
    p: EmbeddingPair, x: LassoRay
) -> list[tuple[Fraction, Angle]]:
    """The complex coordinate of a finite-stratum ray as an exact sum of
    (rational coefficient, angle) terms.

    Unrolls the recursion: level i contributes
    (prod_{j<i} 2^(-3-n_j)) * (1 - 2^(1-n_i)) * e^(2 pi i theta_i),
    and the final all-image tail contributes its series angle scaled by the
    accumulated contraction factor.
    """
    if kappa(p, x) == math.inf:
        raise RayError("exact coordinate needs finitely many spare edges")
    terms: list[tuple[Fraction, Angle]] = []
    scale = Fraction(1)
    while kappa(p, x) != 0:
        n = first_nonxi(p, x)
        coeff = scale * (1 - Fraction(2) ** (1 - n))
        if coeff:
            terms.append((coeff, theta(p, x)))
        scale *= Fraction(1, 2 ** (3 + n))
        x = shift_by(x, n)
    terms.append((scale, theta(p, x)))
    return terms


def _eval_terms(terms: list[tuple[Fraction, Angle]]) -> complex:
    return sum((float(c) * _angle_complex(a) for c, a in terms), 0j)


def zeta_approx(
    p: EmbeddingPair, x: LassoRay, depth: int = 12
) -> tuple[complex, Fraction]:
    """Approximate complex coordinate with a certified error bound.

    The ray is replaced by its depth-N stratum approximant (moving the
    value by at most 8 * 3 * 2^-N via the Lipschitz bound), and the exact
    term sum is evaluated in floating point (tiny rounding slack added).
    """
    j = sum(1 for i in range(1, depth + 1) if not p.in_image(x.edge_at(i)))
    xa = stratum_approximant(p, x, depth, j)
    terms = zeta_exact_terms(p, xa)
    value = _eval_terms(terms)
    rounding = Fraction(len(terms) * 8 + 16, 2**48)
    bound = Fraction(24, 2**depth) + rounding
    return value, bound


# -- circle specifications -----------------------------------------------------


@dataclass(frozen=True)
class CircleSpec:
    """One circle of the image: the full coordinate set of the rays that
    extend a fixed prefix ending at its last spare edge."""

    prefix: tuple[str, ...]
    levels: tuple[tuple[int, Angle], ...]  # (gap to the i-th spare edge, angle)
    center_terms: tuple[tuple[Fraction, Angle], ...]
    radius: Fraction

    def center_value(self) -> complex:
        return _eval_terms(list(self.center_terms))

    def sort_key(self):
        return (
            len(self.levels),
            tuple(n for n, _ in self.levels),
            tuple(a.turns for _, a in self.levels),
        )


def _spec_from_levels(
    prefix: tuple[str, ...], levels: list[tuple[int, Angle]]
) -> CircleSpec:
    terms: list[tuple[Fraction, Angle]] = []
    scale = Fraction(1)
    total_gap = 0
    for n, a in levels:
        coeff = scale * (1 - Fraction(2) ** (1 - n))
        if coeff:
            terms.append((coeff, a))
        scale *= Fraction(1, 2 ** (3 + n))
        total_gap += n
    radius = Fraction(1, 2 ** (3 * len(levels) + total_gap))
    return CircleSpec(prefix, tuple(levels), tuple(terms), radius)


def circle_specs(
    p: EmbeddingPair,
    max_k: int,
    max_depth: int,
    min_radius: Fraction | float = 0,
) -> list[CircleSpec]:
    """All circles arising from prefixes with at most max_k spare edges,
    the last one no deeper than max_depth, larger than min_radius.

    Deterministic order: by stratum, then gap chain, then angle chain.
    """
    specs, _ = circle_specs_report(p, max_k, max_depth, min_radius)
    return specs


def circle_specs_report(
    p: EmbeddingPair,
    max_k: int,
    max_depth: int,
    min_radius: Fraction | float = 0,
) -> tuple[list[CircleSpec], Fraction]:
    """circle_specs plus the total radius of pruned circles."""
    tables = completion_tables(p)
    min_r = Fraction(min_radius).limit_denominator(10**12) if isinstance(min_radius, float) else Fraction(min_radius)
    has_tail = {v for v in p.g.vertices if tables[v].xi_tail is not None}
    if not has_tail:
        raise EmbeddingError("no all-image tails exist (the small graph has no cycle)")
    out: list[CircleSpec] = []
    pruned = Fraction(0)

    # stratum zero: the unit circle itself
    base = _spec_from_levels((), [])
    if base.radius >= min_r:
        out.append(base)
    else:
        pruned += base.radius

    def walk(at: str, prefix: list[str], levels: list[tuple[int, Angle]],
             gap: int, digits: Fraction, depth: int) -> None:
        nonlocal pruned
        if depth >= max_depth:
            return
        for e in p.g.out_edges(at):
            prefix.append(e)
            if p.in_image(e):
                new_digits = digits + Fraction(epsilon(p, e), 2 ** (gap + 1))
                walk(p.g.target(e), prefix, levels, gap + 1, new_digits, depth + 1)
            else:
                levels.append((gap + 1, Angle.of(digits)))
                if len(levels) <= max_k and p.g.target(e) in has_tail:
                    spec = _spec_from_levels(tuple(prefix), levels)
                    if spec.radius >= min_r:
                        out.append(spec)
                    else:
                        pruned += spec.radius
                if len(levels) < max_k:
                    walk(p.g.target(e), prefix, levels, 0, Fraction(0), depth + 1)
                levels.pop()
            prefix.pop()

    for v in p.g.vertices:
        walk(v, [], [], 0, Fraction(0), 0)
    out.sort(key=CircleSpec.sort_key)
    return out, pruned


# -- fiber classification --------------------------------------------------------


@dataclass(frozen=True)
class FiberClass:
    kind: str  # "circles" | "points" | "totally_disconnected"
    count: int | None = None

    def render(self) -> str:
        if self.kind == "circles":
            return f"Circles({self.count})"
        if self.kind == "points":
            return f"Points({self.count})"
        return "TotallyDisconnected"


def fiber_classify(p: EmbeddingPair, base: LassoRay) -> FiberClass:
    """Classify the fiber of the quotient-graph factor map over a base ray.

    Finitely many doubled positions give 2^m isolated points; finitely many
    spare positions (with doubled tail) give disjoint circles counted by
    the compatible prefixes up to the last spare edge; otherwise the fiber
    is totally disconnected.
    """
    q = _quotient(p)
    for e in base.prefix + base.cycle:
        if not q.graph.has_edge(e):
            raise RayError(f"unknown quotient edge {e!r}")
    doubled = {q.tau[p.xi0_edges[y]] for y in p.h.edges}
    m_cycle = any(e in doubled for e in base.cycle)
    spare_cycle = any(e not in doubled for e in base.cycle)
    if not m_cycle:
        m = sum(1 for e in base.prefix if e in doubled)
        return FiberClass("points", 2**m)
    if spare_cycle:
        return FiberClass("totally_disconnected")
    n_max = 0
    for i, e in enumerate(base.prefix, start=1):
        if e not in doubled:
            n_max = i
    count = 0

    def dfs(i: int, at: str | None) -> None:
        nonlocal count
        if i > n_max:
            count += 1
            return
        for e in q.fiber(base.edge_at(i)):
            if at is None or p.g.source(e) == at:
                dfs(i + 1, p.g.target(e))

    dfs(1, None)
    return FiberClass("circles", count)


# -- rendering --------------------------------------------------------------------


def render_svg(
    p: EmbeddingPair,
    max_k: int,
    max_depth: int,
    min_radius: Fraction | float,
    scale: float,
) -> str:
    """Deterministic SVG of the circle specifications (byte-reproducible)."""
    specs = circle_specs(p, max_k, max_depth, min_radius)
    margin = 1.1
    size = 2 * margin * scale

    def fmt(v: float) -> str:
        return f"{v:.9f}"

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{fmt(size)}" height="{fmt(size)}" '
        f'viewBox="0 0 {fmt(size)} {fmt(size)}">',
    ]
    for spec in specs:
        c = spec.center_value()
        cx = margin * scale + scale * c.real
        cy = margin * scale - scale * c.imag
        r = scale * float(spec.radius)
        lines.append(
            f'  <circle cx="{fmt(cx)}" cy="{fmt(cy)}" r="{fmt(r)}" '
            'fill="none" stroke="black" stroke-width="0.5"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


# -- discrete injectivity check ----------------------------------------------------


@dataclass(frozen=True)
class InjectivityReport:
    classes: int
    collisions: tuple[tuple[str, str], ...]

    @property
    def injective(self) -> bool:
        return not self.collisions


def _discrete_invariant(p: EmbeddingPair, x: LassoRay):
    """(quotient image, chain of (gap, angle) level data, tail angle): a
    complete invariant of the identification class for finite strata."""
    tau = tau_ray(p, x)
    chain: list[tuple[int, Fraction]] = []
    while kappa(p, x) != 0:
        n = first_nonxi(p, x)
        chain.append((n, theta(p, x).turns))
        x = shift_by(x, n)
    return (tau, tuple(chain), theta(p, x).turns)


def embedding_injectivity_check(
    p: EmbeddingPair,
    depth: int,
    tail_length: int = 1,
    class_cap: int = 200_000,
) -> InjectivityReport:
    """Exhaustively verify that distinct identification classes of bounded
    lassos have distinct discrete invariants.

    Enumerates all lassos with prefix length <= depth and cycle length
    <= tail_length whose spare count is finite.
    """
    from .rays import format_ray

    g = p.g
    cycles: list[tuple[str, ...]] = []
    for L in range(1, tail_length + 1):
        cycles.extend(_all_cycles(g, L))

    reps: dict[object, LassoRay] = {}
    invariants: dict[object, object] = {}
    collisions: list[tuple[str, str]] = []

    def consider(x: LassoRay) -> None:
        if kappa(p, x) == math.inf:
            return
        c = canonical(p, x)
        key = (c.rep.prefix, c.rep.cycle)
        if key in reps:
            return
        if len(reps) >= class_cap:
            raise RayError("class cap exceeded")
        reps[key] = c.rep
        inv = _discrete_invariant(p, c.rep)
        other = invariants.get(inv)
        if other is not None:
            collisions.append((format_ray(other), format_ray(c.rep)))
        else:
            invariants[inv] = c.rep

    def extend(prefix: list[str], at: str | None, remaining: int) -> None:
        for cyc in cycles:
            if at is None or p.g.source(cyc[0]) == at:
                if not prefix or p.g.target(prefix[-1]) == p.g.source(cyc[0]):
                    try:
                        consider(LassoRay.make(g, tuple(prefix), cyc))
                    except RayError:
                        continue
        if remaining == 0:
            return
        start_edges = g.edges if at is None else g.out_edges(at)
        for e in start_edges:
            if prefix and g.target(prefix[-1]) != g.source(e):
                continue
            prefix.append(e)
            extend(prefix, g.target(e), remaining - 1)
            prefix.pop()

    extend([], None, depth)
    return InjectivityReport(len(reps), tuple(collisions))


def _all_cycles(g, length: int) -> list[tuple[str, ...]]:
    from .graphs import paths_of_length

    out = []
    for v in g.vertices:
        for w in paths_of_length(g, length, src=v, dst=v):
            out.append(w.edges)
    return out
