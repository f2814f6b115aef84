"""casimir-lab: desk-scale simulations of photon generation from vacuum in
parametrically modulated cavity-QED systems."""

__version__ = "0.1.0"

from .errors import (
    CasimirLabError,
    CapacityError,
    ConfigError,
    DimensionMismatchError,
    IntegrationError,
    InvalidDimensionError,
    NearResonanceError,
    RegimeError,
    TruncationError,
)
from .fock import (
    DensityMatrix,
    OperatorMatrix,
    StateVector,
    annihilation_op,
    coherent_state,
    creation_op,
    expectation,
    fock_state,
    identity_op,
    number_op,
    tensor_product,
    thermal_state,
    vacuum_state,
)
from .modulation import ModulationComponent, ParameterLaw, classify_tones, complex_depth, evaluate
from .hamiltonians import (
    HPSpec,
    ModulatedHamiltonian,
    ReducedDCEParams,
    SystemSpec,
    build_hp,
    build_nonlinear_dce,
    build_pumped_linear,
    build_rabi,
)
from .dynamics import (
    IntegratorConfig,
    Trajectory,
    parametric_analytic,
    propagate_dce_amplitudes,
    propagate_lindblad,
    propagate_schrodinger,
    propagate_sideband_pair,
    pumped_analytic,
    two_level_solution,
)
from .observables import classify_statistics, mandel_q, quadrature_variance, record_from_state
