"""Exact heights, denominators and Hankel machinery for D-finite power series."""
from .arith import QuadElement, denominator, format_element, height, parse_element
from .classify import (growth_classify, gevrey_estimate, quasipolynomial_detect,
                       root_of_unity_poles, trichotomy_report)
from .corpus import CORPUS, get_series
from .errors import (DFiniteError, InconsistentInitialTerms, PreconditionFailed, SchemaError,
                     SingularIndexUncovered)
from .formats import load_series, load_series_text
from .growth import counterexample_set, growth_profile, kappa_density_check, upper_density
from .hankel import hankel_det, hankel_scan, kernel_approximant, kronecker_guess
from .poly import Polynomial, RationalFunction
from .series import DiffOperator, PRecurrence, SeriesHandle, series_from_operator, series_from_recurrence

__version__ = "0.1.0"
