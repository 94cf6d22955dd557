"""Fourier analysis of real functions on the Boolean cube {-1, 1}^n.

Transforms, norms and noise operators live in :mod:`boolcube.cube`;
univariate Chebyshev/Markov machinery in :mod:`boolcube.chebyshev`;
multi-affine forms in :mod:`boolcube.polarization`; the inequality checks in
:mod:`boolcube.inequalities`; extremal-witness search in :mod:`boolcube.search`.
"""

from boolcube.errors import CapacityError
from boolcube.report import InequalityReport
from boolcube.cube import (
    BooleanFunction,
    FourierSpectrum,
    walsh_transform,
    inverse_transform,
)

__all__ = [
    "CapacityError",
    "InequalityReport",
    "BooleanFunction",
    "FourierSpectrum",
    "walsh_transform",
    "inverse_transform",
]

__version__ = "0.1.0"
