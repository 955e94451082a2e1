"""Bound-state spectra and canonical thermodynamics for a charged particle
with position-dependent mass in a Morse-plus-Coulomb potential under magnetic
and Aharonov-Bohm flux fields.

Natural units (hbar = e = c = m0 = k_B = 1) are the default throughout;
see ``model.PhysicalConstants`` to rescale.
"""

from .model import (
    ComplexIndexError,
    EtaSet,
    ExponentialMass,
    FieldConfig,
    InverseSquareMass,
    MassCase,
    ParameterError,
    PhysicalConstants,
    PotentialParams,
    QuantumNumbers,
    ReducedSet,
    ScaledSet,
    ScalingError,
    SystemParams,
    effective_delta,
    eta_exponential,
    eta_for,
    eta_inverse_square,
    reduce_etas,
    scale_reduced,
    scaled_chain,
)
from .specfun import (
    ERFI_ARG_MAX,
    SpecialFnResult,
    SpecialFunctionDomainError,
    SpecialFunctionRangeError,
    dawson,
    erf,
    erfi,
)
from .heun import (
    BchCanonicalParams,
    HeunSeries,
    SeriesDivergenceError,
    SeriesTailError,
    TruncationDiagnostics,
    assemble_f,
    assemble_radial,
    bch_canonical_params,
    bch_params_for,
    build_series,
    leading_coefficients,
    ode_residual,
    truncation_check,
)
from .spectra import (
    BranchError,
    DegenerateParameterError,
    EnergyLevel,
    ExponentialScan,
    ScanError,
    SweepResult,
    SweepSpec,
    exp_condition_residual,
    exp_realness_bound,
    inverse_square_level,
    inverse_square_level_derived,
    solve_exponential_levels,
    stationary_condition_residual,
    sweep,
    sweep_to_csv,
    truncation_gap,
)
from .thermo import (
    ApproximationDomainError,
    ThermoParams,
    ThermoRecord,
    ThermoState,
    ThetaRangeError,
    entropy_and_free_energy,
    internal_energy,
    partition_direct_sum,
    partition_integral,
    specific_heat,
    thermo_params,
)
from .oracle import (
    ComparisonReport,
    EvanescentOriginError,
    IntegrationError,
    RadialProblem,
    ShootResult,
    build_problem,
    calibration_problem,
    compare_with_closed_form,
    find_bound_states,
    shoot,
)

__version__ = "0.1.0"
