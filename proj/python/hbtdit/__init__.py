"""Two-electron HBT correlations and diffraction in time for pulsed free-electron beams."""

from ._core import (
    ConvergenceError,
    DetectionGrid,
    PhysicalParams,
    contrast_analytic,
    decoherence_outputs,
    default_detection_grid,
    delta_p,
    first_zero_times,
    free_kernel,
    interval_count,
    kinetic_energy_ev,
    mixture_spectrum,
    multi_slit_spectrum,
    reduced_rate,
    resolved_config,
    run_scenario,
    slit_amplitude,
    source_frequency,
)

FS = 1e-15
NS = 1e-9
CM = 1e-2

__all__ = [
    "CM",
    "FS",
    "NS",
    "ConvergenceError",
    "DetectionGrid",
    "PhysicalParams",
    "contrast_analytic",
    "decoherence_outputs",
    "default_detection_grid",
    "delta_p",
    "first_zero_times",
    "free_kernel",
    "interval_count",
    "kinetic_energy_ev",
    "mixture_spectrum",
    "multi_slit_spectrum",
    "reduced_rate",
    "resolved_config",
    "run_scenario",
    "slit_amplitude",
    "source_frequency",
]
