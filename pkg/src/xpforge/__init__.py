"""Finite p-group engine: coset enumeration, weak-commutativity and
tensor-square constructions, homology cross-checks, and a verification CLI.
"""

__version__ = "0.1.0"
