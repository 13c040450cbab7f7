"""Exact-arithmetic tools for diagrammatic arc algebras.

The package builds a family of finite dimensional algebras spanned by
oriented arc diagrams, presents them as quivers with quadratic relations,
passes to the quadratic dual presentation, certifies a reduction system
for the dual by resolving all overlap ambiguities, cross-validates graded
dimensions against parabolic Kazhdan-Lusztig polynomials, and computes
bigraded degree-two Hochschild cohomology through first-order deformations
of the reduction system.  All arithmetic is exact (rational); every run is
deterministic.
"""

__version__ = "0.1.0"

__all__ = [
    "arc_algebra",
    "cli",
    "combinatorics",
    "errors",
    "hochschild",
    "koszul",
    "linalg",
    "presentation",
    "rewrite",
]
