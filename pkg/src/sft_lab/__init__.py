"""Workbench for graded-algebra torsion computations, holomorphic
building classification, index calculus, loop operations on hyperbolic
surfaces, and branched-cover rigidity arithmetic."""

__version__ = "0.1.0"
