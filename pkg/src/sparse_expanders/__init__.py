"""Sparse random expander matrices, dyadic tail bounds and phase transitions."""

__version__ = "0.1.0"

from .combinatorics import log_binomial, p_max, shannon_entropy
from .dyadic import (DyadicProfile, TailBoundResult, constrained_profile, cubic_forward,
                     expected_profile, psi, rip1_failure_bound, tail_bound)
from .errors import (CapacityError, DomainError, InfeasibleError, NoTransitionError,
                     SolverError)
from .graph import (Ensemble, SparseColumnMatrix, apply, expansion_event, generate,
                    neighbor_count)
from .montecarlo import (SimulationConfig, SimulationResult, empirical_tail,
                         exact_union_distribution, simulate_cardinalities,
                         verify_expander_exhaustive)
from .phase import PhaseCurve, net_exponent, rho_exp, sweep
