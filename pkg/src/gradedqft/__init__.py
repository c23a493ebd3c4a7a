"""Symbolic engine for Z2-graded operator algebras on a momentum lattice.

Free quantum fields for scalar, Dirac, gauge and ghost sectors are built
from elementary absorption/emission generators with exact coefficients;
their super-commutation, propagator and Hamiltonian identities are checked
term-by-term.  A fiber-polynomial layer carries the antifield (BV) algebra
and the BRST operator of an essential gauge theory, and a truncated
Fock-space oracle cross-validates the symbolic kernel numerically.
"""

__version__ = "1.0.0"
