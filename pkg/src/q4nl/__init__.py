"""Pseudospectral laboratory for systems of weakly coupled defocusing
fourth-order (bi-harmonic) Schroedinger equations on a periodic box."""

from .grid import GridSpec
from .state import BoundaryContaminationError, FieldState, boundary_mass_fraction, make_initial
from .system import SystemParams
from .functionals import (DensityPair, EnergyBreakdown, densities, energy,
                          h2_distance, h2_norm_total, lq_norm, lq_norm_total,
                          mass, sobolev_h2_norm)
from .propagator import (BlowUpError, MultiplierTable, StepPlan, free_evolve,
                         integrate, nonlinear_phase_step, strang_step)
from .morawetz import (MorawetzReport, WeightSpec, action_m, correlation_norm,
                       interaction_action, morawetz_rhs,
                       nonlinear_morawetz_integrals, verify_identity,
                       weight_condition_check, weight_derivatives)
from .scattering import (ExponentCheck, ScatterReport, admissible_pair,
                         check_exponents, decay_series, extract_scattering_state,
                         gn_localized_ratio, pair_from_p, spacetime_norm,
                         wave_operator, wave_operator_round_trip)
from .config import ConfigError, RunConfig

__version__ = "0.1.0"
