"""Triangles in K4-free graphs: greedy partitions, counterexample families,
the corrected triangle bound, and the r = 3 base-case enumeration."""

__version__ = "0.1.0"
