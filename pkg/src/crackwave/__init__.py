"""Crack-front-wave dispersion analysis: kernels, relations, root surveys."""

from .dispersion import (
    DispersionProblem,
    SpectralPoint,
    d_corrugation,
    d_inplane,
    d_mixed,
    mixed_system_matrix,
    w_modulus,
)
from .elastodyn import (
    CoefficientSet,
    LoadState,
    MaterialParams,
    alpha_beta,
    coefficient_functions,
    f_factor_i,
    f_factor_i_limit0,
    f_factor_iii,
    f_log_derivative,
    rayleigh_function,
    rayleigh_speed,
)
from .errors import (
    BoundaryContactError,
    CapabilityError,
    ConfigError,
    CrackwaveError,
    DomainError,
    NonConvergenceError,
    ReferenceKernelUnavailable,
    SynthesisError,
    TableFormatError,
)
from .frontsynth import (
    ModalFront,
    Mode,
    SpatialWindow,
    measure_speed,
    modes_from_corrugation_root,
    synthesize,
)
from .kernels import (
    KernelProvider,
    KernelTable,
    SyntheticParams,
    load_table,
    make_reference,
    make_synthetic,
    qbar,
    tabulate,
)
from .rootfind import RootRecord, SearchRegion, certify, grid_scan, newton, winding_count
from .survey import (
    GridSurvey,
    SweepResult,
    attenuation_sweep,
    critical_speed_search,
    level_curve_grid,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryContactError",
    "CapabilityError",
    "CoefficientSet",
    "ConfigError",
    "CrackwaveError",
    "DispersionProblem",
    "DomainError",
    "GridSurvey",
    "KernelProvider",
    "KernelTable",
    "LoadState",
    "MaterialParams",
    "ModalFront",
    "Mode",
    "NonConvergenceError",
    "ReferenceKernelUnavailable",
    "RootRecord",
    "SearchRegion",
    "SpatialWindow",
    "SpectralPoint",
    "SweepResult",
    "SynthesisError",
    "SyntheticParams",
    "TableFormatError",
    "alpha_beta",
    "attenuation_sweep",
    "certify",
    "coefficient_functions",
    "critical_speed_search",
    "d_corrugation",
    "d_inplane",
    "d_mixed",
    "f_factor_i",
    "f_factor_i_limit0",
    "f_factor_iii",
    "f_log_derivative",
    "grid_scan",
    "level_curve_grid",
    "load_table",
    "make_reference",
    "make_synthetic",
    "measure_speed",
    "mixed_system_matrix",
    "modes_from_corrugation_root",
    "newton",
    "qbar",
    "rayleigh_function",
    "rayleigh_speed",
    "synthesize",
    "tabulate",
    "w_modulus",
    "winding_count",
    "__version__",
]
