"""Scattering in quantum Y-junction ring systems with U(3) node conditions."""

from .junction import (
    JunctionParams,
    Orientation,
    ScatteringMatrix,
    build_U,
    build_V,
    buttiker_matrix,
    gauge_shift,
    is_scale_invariant,
    is_time_reversal,
    junction_residual,
    probabilities,
    s_matrix,
)
from .ring import (
    ANTISYMMETRIC,
    SYMMETRIC,
    AntiSymmetric,
    ConvergenceError,
    DegenerateRingError,
    General,
    RingAmplitudes,
    RingConfig,
    SubBlocks,
    Symmetric,
    TransmissionTarget,
    flux_defect,
    perfect_transmission_target,
    reflection_core,
    ring_matrices,
    solve_algebraic,
    solve_antisymmetric_scale_invariant,
    solve_auto,
    solve_closed_form,
    solve_series,
    solve_symmetric_scale_invariant,
)
from .smallmat import (
    SingularMatrixError,
    dagger,
    exp_i_generator,
    gell_mann,
    inverse2,
    mul,
    unitarity_error,
)
from .spectrum import (
    Resonance,
    ResonanceKind,
    ResonanceSearch,
    Spectrum,
    SpectrumPoint,
    config_fingerprint,
    find_resonances,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "JunctionParams",
    "Orientation",
    "ScatteringMatrix",
    "build_U",
    "build_V",
    "buttiker_matrix",
    "gauge_shift",
    "is_scale_invariant",
    "is_time_reversal",
    "junction_residual",
    "probabilities",
    "s_matrix",
    "ANTISYMMETRIC",
    "SYMMETRIC",
    "AntiSymmetric",
    "ConvergenceError",
    "DegenerateRingError",
    "General",
    "RingAmplitudes",
    "RingConfig",
    "SubBlocks",
    "Symmetric",
    "TransmissionTarget",
    "flux_defect",
    "perfect_transmission_target",
    "reflection_core",
    "ring_matrices",
    "solve_algebraic",
    "solve_antisymmetric_scale_invariant",
    "solve_auto",
    "solve_closed_form",
    "solve_series",
    "solve_symmetric_scale_invariant",
    "SingularMatrixError",
    "dagger",
    "exp_i_generator",
    "gell_mann",
    "inverse2",
    "mul",
    "unitarity_error",
    "Resonance",
    "ResonanceKind",
    "ResonanceSearch",
    "Spectrum",
    "SpectrumPoint",
    "config_fingerprint",
    "find_resonances",
    "sweep",
    "__version__",
]
