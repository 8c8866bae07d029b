#!/usr/bin/env python3
"""Render the nested-circle picture of the one-vertex/three-loop seed.

Writes figure_full3.svg next to this script; tweak depth/strata to explore
finer generations of circles.
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from shiftquot.cli import load_bundle
from shiftquot.geometry import circle_specs_report, render_svg


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-k", type=int, default=2, help="deepest stratum to draw")
    ap.add_argument("--depth", type=int, default=6, help="last spare edge at most this deep")
    ap.add_argument("--min-radius", type=str, default="1/4096")
    ap.add_argument("--scale", type=float, default=420.0)
    ap.add_argument("-o", "--output", default=None)
    args = ap.parse_args()

    here = os.path.dirname(os.path.abspath(__file__))
    bundle = os.path.join(here, "..", "bundles", "full3.bundle")
    out = args.output or os.path.join(here, "figure_full3.svg")

    p = load_bundle(bundle).pair()
    from fractions import Fraction

    min_r = Fraction(args.min_radius)
    specs, pruned = circle_specs_report(p, args.max_k, args.depth, min_r)
    svg = render_svg(p, args.max_k, args.depth, min_r, args.scale)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"{len(specs)} circles (pruned radius mass {pruned}) -> {out}")


if __name__ == "__main__":
    main()
