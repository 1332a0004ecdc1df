"""becircle: a numerical laboratory for the balanced energy of node
configurations on the circle, with an independent elliptic-function oracle."""

__version__ = "0.1.0"

from .errors import (ArcTooShort, BECircleError, DomainError, NonConvergence,
                     NoPositiveSolution, NotCritical, SingularJacobian,
                     SingularSystem, TruncationError)
from .scalar_field import (WellConstants, heteroclinic, potential,
                           potential_d1, potential_d2, well_constants)
from .elliptic_oracle import (EllipticModulus, LambdaEpsPair, ac_family,
                              ac_family_mod, complete_K, jacobi_sn,
                              lambda_of_eps, modulus_for, zero_spacing_from_kp)
from .bvp_engine import (GridFunction, SpectrumReport, TridiagonalOperator,
                         cumulative_simpson, eig_sturm, newton_semilinear,
                         norm_h1_eps, simpson)
from .profiles import (ProfileConstants, ProfileFunction, kappa_lambda,
                       kappa_lambda_prime, ode_residual, profile_constants,
                       profile_kappa_ode, profile_omega, profile_rho,
                       profile_tau_geom, profile_tau_lambda, profile_w,
                       solve_profile)
from .solver_1d import (DirichletSolution, LipschitzScan, NodalSolution,
                        arc_energy, existence_threshold, lipschitz_scan,
                        min_energy, nodal_solution, periodic_residual,
                        solve_dirichlet, stencil_slope)
from .balanced_energy import (BrokenTransition, HessianReport,
                              LinearizedSolution, NodeConfig, ac_spectrum,
                              broken_transition, circle_operator, dirichlet_gap,
                              dtn_v, fd_first_variation, fd_second_variation,
                              first_variation, hessian, linearized_bvp,
                              morse_index, translation_mode)
from .nonexistence import (CutoffSpec, TwoNodeScan, cutoff_energy,
                           cutoff_gradient_closed, cutoff_gradient_quadrature,
                           two_node_scan)
from .experiments_cli import gamma_sweep, index_table, interface_constant

__all__ = [name for name in dir() if not name.startswith("_")]
