"""Domain-wall selection in the axially symmetric LLGS wire, at desk scale.

Modules: `model` (parameters, regimes, rest-state dispersion), `spectral`
(absolute spectra, pinched double roots, spreading predictions), `dwfamily`
(the explicit wall family and its thresholds), `sim` (freezing-frame IMEX
simulator), `evans` (compound-matrix Evans function and winding numbers),
`cli` (command-line surface).
"""

from .errors import (
    DegenerateGram,
    DegenerateLeadingCoefficient,
    EllipticityViolated,
    IndexUnstable,
    IntegrationOverflow,
    LogDomain,
    NotBistable,
    NotMonostable,
    NumericalError,
    PathAmbiguous,
    PhaseUnresolved,
    PoleAtAnisotropyField,
    SingularProfile,
    SolverFailure,
    SpinwallError,
    SubspaceDegenerate,
    ZeroVector,
)
from .model import (
    Frame,
    MaterialParams,
    Regime,
    SpectrumPoint,
    beta_pm,
    classify_regime,
    essential_spectrum_curve,
    gamma_curves,
    is_marginal,
    rest_state_dispersion,
)
from .spectral import (
    DoubleRoot,
    HalfLine,
    OperatorCoefficients,
    SpatialRoots,
    absolute_spectrum,
    cgl_coefficients,
    dispersion,
    double_roots,
    factor_coefficients,
    is_pinched,
    linear_spreading_frequency,
    linear_spreading_speed,
    llgs_coefficients,
    morse_index,
    optimal_weight,
    spatial_roots,
    weighted_essential_curves,
)
from .dwfamily import (
    CriticalFields,
    ExplicitDW,
    SphericalProfile,
    coherent_ode_residual,
    critical_fields,
    explicit_dw,
    frame_m0,
    potentials,
    profile_m0,
    propagation_sign,
    stability_threshold,
    standing_field_H,
)
from .sim import (
    FreezingState,
    Grid,
    LocalizedBump,
    MagnetizationField,
    RunResult,
    ScanRow,
    SimConfig,
    StepWall,
    build_initial,
    classify_front,
    freeze_step,
    pushed_pulled_scan,
    renormalize,
    rhs,
    run,
    step,
    wall_position,
)
from .evans import (
    EvansContour,
    EvansProblem,
    WindingResult,
    assemble_A,
    evans_value,
    jacobian_oracle,
    winding_number,
)

__version__ = "0.1.0"
