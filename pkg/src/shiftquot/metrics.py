"""Exact metrics on rays and on the quotient space.

All values are exact rationals.  On rays with finitely many spare edges
the layered pseudo-metric evaluates in closed form: the recursion consumes
one spare edge per level and bottoms out in a circle distance of binary
angles.  Rays whose cycle leaves the embedded image (infinitely many spare
edges) are handled by depth-N approximants and certified intervals of
width at most 6 * 2^-N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .embedding import EmbeddingPair, quotient_graph
from .rays import (
    Angle,
    ClassPoint,
    LassoRay,
    RayError,
    _lcm,
    digit_series,
    first_nonxi,
    kappa,
    shift_by,
    stratum_approximant,
    theta,
)


@dataclass(frozen=True)
class MetricInterval:
    """Certified enclosure [lo, hi] of a metric value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if not (0 <= self.lo <= self.hi):
            raise ValueError("invalid interval")

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def width(self) -> Fraction:
        return self.hi - self.lo

    @staticmethod
    def point(v: Fraction) -> "MetricInterval":
        return MetricInterval(v, v)


def d_shift(x: LassoRay, y: LassoRay) -> Fraction:
    """Shift-space metric 2^-(longest common prefix); 0 for equal rays."""
    if x == y:
        return Fraction(0)
    bound = max(len(x.prefix), len(y.prefix)) + _lcm(len(x.cycle), len(y.cycle)) + 1
    for n in range(1, bound + 1):
        if x.edge_at(n) != y.edge_at(n):
            return Fraction(1, 2 ** (n - 1))
    return Fraction(0)


def circle_distance(s: Angle, t: Angle) -> Fraction:
    """Shortest arc between two circle points, in turns (range [0, 1/2])."""
    return s.distance(t)


@lru_cache(maxsize=None)
def _quotient(p: EmbeddingPair):
    return quotient_graph(p)


def tau_ray(p: EmbeddingPair, x: LassoRay) -> LassoRay:
    """Image of a ray in the quotient graph's shift space."""
    q = _quotient(p)
    return LassoRay.make(
        q.graph, [q.tau[e] for e in x.prefix], [q.tau[e] for e in x.cycle]
    )


def d_quotient_graph(p: EmbeddingPair, x: LassoRay, y: LassoRay) -> Fraction:
    """Shift metric between the quotient-graph images of two rays."""
    return d_shift(tau_ray(p, x), tau_ray(p, y))


def _level_data(p: EmbeddingPair, x: LassoRay) -> tuple[int | float, Angle]:
    """(first spare position, binary angle); position is inf when kappa = 0,
    in which case the angle is the full series value mod 1."""
    k = kappa(p, x)
    if k == 0:
        return math.inf, Angle.of(digit_series(p, x))
    return first_nonxi(p, x), theta(p, x)


def _lambda_hat(p: EmbeddingPair, x: LassoRay, y: LassoRay) -> Fraction:
    """The layer part of the metric for rays with finitely many spare edges.

    The recursion consumes the leading spare edge of each argument; a ray
    with no spare edges contributes position 'infinity' (weight 0) and its
    series angle.  This closed form agrees with the limit of the stratum
    values along approximating sequences, so it extends the stratum metric
    to mixed finite strata exactly.
    """
    nx, ax = _level_data(p, x)
    ny, ay = _level_data(p, y)
    if nx == math.inf and ny == math.inf:
        return ax.distance(ay)
    wx = Fraction(0) if nx == math.inf else Fraction(1, 2**int(nx))
    wy = Fraction(0) if ny == math.inf else Fraction(1, 2**int(ny))
    base = abs(wx - wy) + ax.distance(ay)
    if nx == ny and ax == ay:
        n = int(nx)
        return Fraction(1, 2 ** (2 + n)) * _lambda_hat(
            p, shift_by(x, n), shift_by(y, n)
        )
    return base


def d_stratum(p: EmbeddingPair, x: LassoRay, y: LassoRay) -> Fraction:
    """Layered metric on a common stratum (equal finite spare counts)."""
    kx, ky = kappa(p, x), kappa(p, y)
    if kx != ky:
        raise RayError(f"stratum mismatch: kappa {kx} vs {ky} (use d_extended)")
    if kx == math.inf:
        raise RayError("kappa is infinite (use d_extended)")
    return d_quotient_graph(p, x, y) + _lambda_hat(p, x, y)


def _d_finite(p: EmbeddingPair, x: LassoRay, y: LassoRay) -> Fraction:
    return d_quotient_graph(p, x, y) + _lambda_hat(p, x, y)


def d_extended(p: EmbeddingPair, x: LassoRay, y: LassoRay, depth: int = 12) -> MetricInterval:
    """The extended pseudo-metric, as an exact point for rays with finitely
    many spare edges and as a certified interval otherwise.

    The interval moves both rays into a common stratum by approximants
    agreeing to depth+1; each replacement moves the value by at most
    3 * 2^-(depth+1), so the enclosure has width at most 6 * 2^-depth.
    """
    kx, ky = kappa(p, x), kappa(p, y)
    if kx != math.inf and ky != math.inf:
        return MetricInterval.point(_d_finite(p, x, y))
    inner = depth + 1
    jx = sum(1 for i in range(1, inner + 1) if not p.in_image(x.edge_at(i)))
    jy = sum(1 for i in range(1, inner + 1) if not p.in_image(y.edge_at(i)))
    K = max(jx, jy)
    xa = x if kx == K else stratum_approximant(p, x, inner, K)
    ya = y if ky == K else stratum_approximant(p, y, inner, K)
    value = _d_finite(p, xa, ya)
    slack = Fraction(3, 2**depth)
    return MetricInterval(max(Fraction(0), value - slack), value + slack)


def d_class(
    p: EmbeddingPair, cx: ClassPoint, cy: ClassPoint, depth: int = 12
) -> MetricInterval:
    """Distance between quotient-space points (well defined: flip partners
    are at pseudo-distance zero)."""
    return d_extended(p, cx.rep, cy.rep, depth)
