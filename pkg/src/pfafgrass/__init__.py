"""Equivariant Pfaffian-Grassmannian constructions with exact cyclotomic arithmetic."""

__version__ = "0.1.0"

from .exactmath import CycNum, Mat, Subspace, cyc, cyc_embed, zeta  # noqa: F401
