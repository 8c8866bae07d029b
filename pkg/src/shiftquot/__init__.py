"""shiftquot: quotient dynamical systems of edge shifts by doubled embeddings.

The library takes a seed (a big graph, a small graph, and two disjoint
embeddings of the small one in the big one), builds the binary-carry
quotient of the one-sided edge shift and its invertible inverse-limit
extension, evaluates the explicitly constructed metrics in exact rational
arithmetic, computes algebraic invariants by integer linear algebra, and
renders the nested-circle planar picture of the quotient space.
"""

__version__ = "0.1.0"
