"""Rauzy-Veech machinery for generalized permutations of quadratic
differentials: induction and class enumeration, strata from the turning
bijection, plus/minus transition matrices, simple extensions and singularity
splitting, orientation double covers, component identification, and mod-p
closures of the cycle groups."""

from .gp import GeneralizedPermutation, parse_gp

__all__ = ["GeneralizedPermutation", "parse_gp"]
__version__ = "0.1.0"
