"""starq: exact truncated deformation quantization workbench.

Formal star products on flat charts, positive functionals and their GNS
models, local-operator and commutant probes on truncated bases, operator
topologies, and the modular theory of thermal functionals, all executed
in exact arithmetic order-by-order in the deformation parameter.
"""

from .scalars import Scalar, Value, DEFAULT_EPS
from .series import (LambdaSeries, QSeries, ExponentTail, TruncationMismatch,
                     admissibility_check, np_clearing_factor, const_series,
                     lam_series, scalar_series, ordered_sign,
                     ultrametric_distance)
from .coeffs import (Chart, GaussPoly, MultiObservable, moyal_plane,
                     wick_space, cotangent_flat, poisson, wick_poisson,
                     UnsupportedChart, WeightMismatch, DivergentIntegral,
                     DimensionMismatch, ChartMismatch, UnknownVariable,
                     LEBESGUE, GAUSSIAN)
from .star import StarAlgebra, AlgebraMismatch, OrderTooLow

__all__ = [
    "Scalar", "Value", "DEFAULT_EPS",
    "LambdaSeries", "QSeries", "ExponentTail", "TruncationMismatch",
    "admissibility_check", "np_clearing_factor", "const_series",
    "lam_series", "scalar_series", "ordered_sign", "ultrametric_distance",
    "Chart", "GaussPoly", "MultiObservable", "moyal_plane", "wick_space",
    "cotangent_flat", "poisson", "wick_poisson", "UnsupportedChart",
    "WeightMismatch", "DivergentIntegral", "DimensionMismatch",
    "ChartMismatch", "UnknownVariable", "LEBESGUE", "GAUSSIAN",
    "StarAlgebra", "AlgebraMismatch", "OrderTooLow",
]

__version__ = "0.1.0"
