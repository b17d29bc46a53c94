"""Monic orthogonal polynomials, Hankel determinants and their Painleve IV
structure for the Gaussian weight with root-type Fisher-Hartwig factors,
computed and verified in arbitrary precision."""

from .cauchy import aux_integral, aux_quantities, cauchy_complex, pv_weight_transform
from .errors import (BadConfig, ConfigError, DegenerateDenominator, DegenerateR,
                     DivisionBreakdown, DuplicateSingularity, ExponentOutOfRange, FHGaussError,
                     NoConvergence, NumericalError, PrecisionExhausted, RealAxisPole,
                     SingularEvaluation, StepCollision)
from .kernels import BACKEND
from .ladder import LadderPair, eval_ladder
from .orthopoly import (OrthoSystem, build_system, christoffel_darboux_residual,
                        compute_moments, eval_P, eval_P_prime, hankel_det)
from .records import AuxQuantities, ResidualReport
from .weight import WeightSpec, eval_weight, set_default_precision, validate

__version__ = "0.1.0"
