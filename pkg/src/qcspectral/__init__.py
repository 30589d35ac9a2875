"""Lower bounds for Neumann eigenvalues of the planar p-Laplacian on
quasiconformal images of the disc, with a finite-element check."""

from .bounds import (bound_beta_regular, bound_inf_regular, bound_intro_form,
                     bound_measure_preserving, convex_lower_bound, exponents,
                     infimum_over_q, pi_p, poincare_constant_upper, q_bracket)
from .discquad import QuadratureSpec, image_area, integrate_disc, jacobian_norm, jacobian_sup
from .eigsolver import minimize_eigen, rayleigh_quotient
from .kernels import BACKEND
from .logvalue import LogValue
from .maps import MapDescriptor, evaluate, jacobian, local_distortion, map_info, parse_map
from .mesh import Mesh, mesh_disc, push_forward
from .quasidisc import beta_star, beta_tilde, mp_constant, quasidisc_lower_bound
from .verify import verify_bound

__version__ = "0.1.0"
