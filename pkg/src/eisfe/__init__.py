"""Exact U(p)-operator and functional-equation matrices for Siegel Eisenstein series of level p."""

from .scalars import GaussRational, QuadScalar, RingMismatchError, epsilon, qs_embed
from .ratfunc import AffineExponent, NotRepresentable, Poly, RatFunc, exponent_l, rf_substitute_fe, rf_to_monomial
from .fpforms import CharacterKind, EnumerationLimitError, FpSymMatrix
from .upoperator import EisensteinContext, RFMatrix, b_inverse, b_matrix, eigen_data, up_matrix
from .functeq import fe_matrix, gamma_factor, t_matrix
from .degree2 import BinaryForm, chi_n_star_data, f_local_p, verify_f_local_fe

__version__ = "0.1.0"
