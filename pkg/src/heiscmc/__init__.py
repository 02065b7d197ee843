"""Constant p-mean curvature surfaces in the first Heisenberg group.

Construction, classification and numerical verification of CMC surfaces,
together with the normal-form invariants (zeta1, zeta2).
"""

__version__ = "0.1.0"
