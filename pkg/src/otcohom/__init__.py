"""Exact cohomology calculator for Oeljeklaus-Toma manifolds.

Builds certified structure data from a number field (signature (s, t),
totally positive units) and computes de Rham, Dolbeault and Bott-Chern
tables on the invariant-form complex, cross-checked between an exact
rational backend and a numeric one.
"""

__version__ = "0.1.0"

from .errors import OtcohomError  # noqa: F401
