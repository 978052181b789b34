"""Radial solitary waves of the Schrodinger-Poisson system with a Coulomb nucleus.

Solves -1/2 Lap u - phi u - (z/r) u = omega u with Lap phi = 4 pi u^2 and
int u^2 = N for radial u, on the k-th (k-1 node) branch.
"""
from .errors import (BracketError, ConvergenceError, DegenerateStateWarning,
                     GridError, NoBoundStateError, NoSolitaryWaveError,
                     ResolutionWarning, SolitonError)
from .kernels import COMPILED
from .radial_grid import (ProblemSpec, RadialField, RadialGrid, build_grid,
                          integrate, l2_norm_3d, normalize_to)
from .poisson_radial import (PoissonResult, electric_potential, field_energy,
                             hartree_energy, inverse_laplacian)
from .energy_functional import (EnergyBreakdown, evaluate, gradient,
                                multiplier_residual, virial_residual)
from .radial_eigensolver import (EffectivePotential, EigenPair,
                                 build_effective_potential, count_nodes,
                                 solve_kth_matrix, solve_kth_shooting)
from .scf_solver import (ScfConfig, SolitonState, default_grid,
                         gradient_flow_ground_state, solve, spectrum_sweep)
from .diagnostics import (DiagnosticsReport, IsolationResult, decay_fit, diagnose,
                          isolation_probe, origin_expansion, schwartz_probe, v_bounds)

__version__ = "0.1.0"
