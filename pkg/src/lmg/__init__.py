"""Exact solutions, preparation circuits, and VQE benchmarking for the LMG model."""

from .bethe import (
    SolverOptions,
    SpectralSolution,
    eigenvalue,
    residual,
    solve_bethe,
    solve_m1,
    solve_m2_simplified,
)
from .circuit import (
    AngleSet,
    Circuit,
    Encoding,
    Gate,
    build_circuit,
    control_slot,
    decode,
    encode,
    export_circuit,
    import_circuit,
    linear_angles,
    log_angles,
)
from .eigenstates import apply_pair_factor, build_eigenstate, extend_state
from .errors import (
    ComplexPaironsError,
    IncompleteSolveError,
    InvalidArgumentError,
    LeakageError,
    LmgError,
    NumericFailureError,
    SingularityError,
    UnsupportedRegimeError,
)
from .model import (
    FockVector,
    ModelParams,
    SectorConfig,
    apply_hamiltonian,
    exact_spectrum,
    expectation,
    make_params,
    sector_configs,
    sector_spectrum,
)
from .simulator import (
    MeasurementGroup,
    StateVector,
    encoded_expectation,
    fidelity,
    pauli_groups,
    run,
    sampled_expectation,
)
from .vqe import VqeOptions, VqeResult, benchmark, objective, optimize

__version__ = "0.1.0"

__all__ = [
    "AngleSet",
    "Circuit",
    "ComplexPaironsError",
    "Encoding",
    "FockVector",
    "Gate",
    "IncompleteSolveError",
    "InvalidArgumentError",
    "LeakageError",
    "LmgError",
    "MeasurementGroup",
    "ModelParams",
    "NumericFailureError",
    "SectorConfig",
    "SingularityError",
    "SolverOptions",
    "SpectralSolution",
    "StateVector",
    "UnsupportedRegimeError",
    "VqeOptions",
    "VqeResult",
    "apply_hamiltonian",
    "apply_pair_factor",
    "benchmark",
    "build_circuit",
    "build_eigenstate",
    "control_slot",
    "decode",
    "eigenvalue",
    "encode",
    "encoded_expectation",
    "exact_spectrum",
    "expectation",
    "export_circuit",
    "extend_state",
    "fidelity",
    "import_circuit",
    "linear_angles",
    "log_angles",
    "make_params",
    "objective",
    "optimize",
    "pauli_groups",
    "residual",
    "run",
    "sampled_expectation",
    "sector_configs",
    "sector_spectrum",
    "solve_bethe",
    "solve_m1",
    "solve_m2_simplified",
]
