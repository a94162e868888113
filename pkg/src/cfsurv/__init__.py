"""Cell-free massive-MIMO wireless surveillance toolkit.

Closed-form monitoring success analysis for multiple untrusted links,
greedy observe/jam mode assignment, max-min jamming power control via
bisection over linear feasibility programs, and a signal-level
Monte-Carlo oracle that validates every closed form.
"""

from .channel import (EstimationModel, LargeScale, SimParams, SmallScaleDraw,
                      Topology, compute_large_scale, estimation_quality,
                      generate_topology, path_loss_dB,
                      sample_correlated_shadowing, sample_small_scale,
                      shadowing_covariance, wrap_distance,
                      wrap_distance_matrix)
from .errors import (BracketFailure, CfsurvError, CovarianceNotFactorable,
                     GammaZero, NumericalBreakdown, PlacementExhausted)
from .modes import GreedyTrace, equal_power, greedy_assign, random_assign
from .oracle import (OracleEstimate, compare_closed_forms,
                     fourth_moment_check, mc_effective_noise_variance,
                     mc_observe_terms, mc_success_probability)
from .powerctl import (BisectionResult, FeasibilityLP, bisection_power_control,
                       build_feasibility_lp, check_feasible, objective_value,
                       tilde_xi, tilde_xi_all)
from .sinr import (ModeAssignment, MonitoringReport, PowerAllocation,
                   min_success_probability, monitoring_report,
                   sinr_observe, sinr_observe_all, sinr_untrusted,
                   success_probability, success_probability_all, xi, xi_all)

__version__ = "0.1.0"
