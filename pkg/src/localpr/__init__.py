"""localpr — local and global linear solvers for personalized PageRank.

The package solves the damped lazy-random-walk system

    (I - (1 - alpha) (I + A D^{-1}) / 2) pi = alpha * e_s

through its symmetric positive-definite reformulation Q x = b, where
Q = I - (1-alpha)/(1+alpha) * D^{-1/2} A D^{-1/2} and pi = D^{1/2} x.
Local solvers touch only nodes whose scaled residual exceeds a degree
threshold, tracked by a FIFO queue with an epoch sentinel; global solvers
sweep full vectors.  Both report machine-independent operation counts.
"""

from .graph import (Graph, GraphParseError, EmptyGraphError,
                    PreprocessOptions, load_edge_list, from_edges,
                    volume, neighbors, save_cache, load_cache)
from .problem import (Problem, ScaledState, init_state, is_active,
                      is_converged, residual_from_solution, error_vs_oracle)
from .process import (EvolvingQueue, EpochTrace, Node, EpochBoundary,
                      Exhausted, push_if_active, record_processed, summarize)
from .local_solvers import (Solution, ChebSchedule, appr, loc_sor,
                            loc_gs_sor_m, loc_gd, loc_ch, loc_hb)
from .global_solvers import (GlobalTrace, global_gd, global_sor,
                             global_chebyshev, global_hb, conjugate_gradient)
from .oracle import dense_ppr, dense_eigs_Q, chebyshev_T
from .clustering import SweepResult, conductance, sweep_cut
from .bounds import (anderson_bound, evolving_upper_bound,
                     evolving_lower_bound, chebyshev_iteration_bound)

__version__ = "0.1.0"
