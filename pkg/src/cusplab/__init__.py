"""cusplab: a numerical laboratory for spectral counting on cusp manifolds.

Cross-validated implementations of zero-counting identities for
holomorphic functions, cusp-lattice constants, wave-parametrix transport
coefficients, Dirichlet-series machinery, factorized scattering
determinants, scattering-phase asymptotics, and Weyl-term extraction.
"""

__version__ = "0.1.0"

from .quadrature import QuadratureSpec, QuadratureResult, Singularity, integrate
from .special import EULER_GAMMA, PoleError, log_gamma, riemann_zeta
from .mollifier import Mollifier
from .testfunction import TestFunctionPsi
from .malpha import MAlphaIndex, SmoothFunction, m_alpha_eval, m_alpha_pair

__all__ = [
    "QuadratureSpec", "QuadratureResult", "Singularity", "integrate",
    "EULER_GAMMA", "PoleError", "log_gamma", "riemann_zeta",
    "Mollifier", "TestFunctionPsi",
    "MAlphaIndex", "SmoothFunction", "m_alpha_eval", "m_alpha_pair",
    "__version__",
]
