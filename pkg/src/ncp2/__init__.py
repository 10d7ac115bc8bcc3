"""Exact computations for noncommutative projective planes, quiver relations,
3x3x3 tensors and elliptic triples."""

__version__ = "0.1.0"
