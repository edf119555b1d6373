"""Macrospin dynamics with memoryless, inertial, or memory-kernel damping.

The package splits into three layers: :mod:`spinmem.kernelcore` defines the
damping-kernel variants and their closed-form properties, :mod:`spinmem.spindyn`
integrates trajectories (deterministic or thermally driven), and
:mod:`spinmem.analysis` extracts windowed spectra, peaks, and response-mode
roots.  :mod:`spinmem.runner` wraps it all in a command-line interface.
"""

__version__ = "0.1.0"

from .kernelcore import (
    AngularParams,
    Inertial,
    KernelMoments,
    KernelSpec,
    Lorentzian,
    Markovian,
    SpectralDensity,
    derive_alpha_tauin,
    fit_lorentzian,
    kernel_eval,
    kernel_from_density,
    kernel_moment,
    kernel_moments,
    lorentzian_density,
    to_dimensionless,
)
from .spindyn import (
    FieldConfig,
    IntegrationError,
    NoiseSeries,
    NonStationaryError,
    SimulationConfig,
    Trajectory,
    demag_factor,
    effective_field,
    equilibrium_mx,
    generate_thermal_noise,
    integrate,
    integrate_illg,
    integrate_llg,
    integrate_nmllg,
)
from .analysis import (
    Peak,
    RootLine,
    Spectrum,
    WindowSpec,
    apply_window,
    ensemble_spectrum,
    find_peaks,
    spectrum,
    susceptibility_polynomial,
    susceptibility_roots,
)

__all__ = [
    "__version__",
    "AngularParams",
    "FieldConfig",
    "Inertial",
    "IntegrationError",
    "KernelMoments",
    "KernelSpec",
    "Lorentzian",
    "Markovian",
    "NoiseSeries",
    "NonStationaryError",
    "Peak",
    "RootLine",
    "SimulationConfig",
    "SpectralDensity",
    "Spectrum",
    "Trajectory",
    "WindowSpec",
    "apply_window",
    "demag_factor",
    "derive_alpha_tauin",
    "effective_field",
    "ensemble_spectrum",
    "equilibrium_mx",
    "find_peaks",
    "fit_lorentzian",
    "generate_thermal_noise",
    "integrate",
    "integrate_illg",
    "integrate_llg",
    "integrate_nmllg",
    "kernel_eval",
    "kernel_from_density",
    "kernel_moment",
    "kernel_moments",
    "lorentzian_density",
    "spectrum",
    "susceptibility_polynomial",
    "susceptibility_roots",
    "to_dimensionless",
]
