"""Quantum Fisher information for displacement and squeezing estimation
with Gaussian and Kerr-evolved Gaussian probes."""

from ._core import (  # noqa: F401
    CovarianceMatrix,
    FockState,
    InconsistencyError,
    Moments,
    ProbeSpec,
    QfiResult,
    Task,
    TruncationError,
    __version__,
    apply_kerr,
    auto_dim,
    build_probe,
    coherent,
    covariance,
    displaced_squeezed,
    figure_preset_names,
    gaussian_entropy,
    gaussian_qfi_displacement,
    gaussian_qfi_squeezing,
    gaussian_qfi_squeezing_max,
    kerr_coherent_qfi_displacement,
    kerr_coherent_qfi_squeezing,
    leakage,
    max_nong,
    moments,
    nong_entropic,
    nong_normalized,
    optimize_phase,
    optimize_phase_and_fraction,
    qfi_finite_difference_check,
    qfi_pure,
    run_figure_preset,
    squeezed_vacuum,
    tail_mass,
)
