"""parapot: exact symbolic toolkit for linear 1+1-dimensional second-order
parabolic equations u_t = A u_xx + B u_x + C u.

Constructs and verifies conservation laws and their characteristics,
single/multiple/dual Darboux transformations, potential frames, and
potential-symmetry criteria, over an exact expression class (rational
functions of t and x over Q(parameters), extended by power factors x^nu and
exponential kernels exp(R)).
"""

from .exprcore import (Expr, arith, differentiate, evaluate_at, is_zero,
                       parse, substitute, to_string)
from .pde import (HEAT, EquivalenceTransformation, ParabolicEquation,
                  ReducedEquation, adjoint, adjoint_pair_prolong,
                  apply_equivalence, apply_operator, invert_transformation,
                  is_solution, total_derivative)
from .funalg import (ExprMatrix, FunctionTuple, determinant, express_in_span,
                     is_linearly_independent, minor_identity_residual,
                     wronskian)
from .claws import (Characteristic, ConservedVector2D,
                    canonical_conserved_vector, conserved_vectors_equivalent,
                    divergence_residual, symmetry_action_on_cv,
                    transform_characteristic, transform_conserved_vector,
                    verify_characteristic)
from .darboux import (DarbouxSeed, crum_apply, crum_target_equation,
                      dt_apply, dt_target_equation, dual_characteristics,
                      verify_dt_solution_map)
from .frame import (PotentialFrame, build_frame, frame_consistency,
                    validate_raw_frame)
from .symmetry import (PointOperator, ProlongedOperator,
                       SimplestPotentialSystem, SymmetryClassification,
                       classify_reduced, eigen_test, invariance_residual,
                       is_pure_potential, potential_symmetry_report,
                       prolong_frame, prolong_simplest,
                       stable_invariant_subspace, strictly_p_order)
from .catalog import (backward_heat_polynomial, fixture, heat_polynomial,
                      mu_stationary_solutions, pi_ladder, pi_ladder_tuple,
                      potential_V_from_seeds)

__version__ = "0.1.0"
