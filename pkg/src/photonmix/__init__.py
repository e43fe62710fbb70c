"""Photon interference between a single photon and a weak coherent state.

Modules
    fock        truncated two-mode Fock algebra and the beamsplitter
    detection   lossy threshold detectors and the quantum visibility
    classical   random-phase classical baseline
    temporal    multimode coincidence-dip model and unit conversions
    montecarlo  pulse-level counting simulator and rate predictions
    analysis    Gaussian dip fitting
"""

__version__ = "0.1.0"

from .analysis import DipDataset, DipFitResult, DipParams, fit_dip, synthesize_dataset
from .classical import (
    ClassicalInputs,
    coincidence_phase_averaged,
    output_intensities,
    phase_monte_carlo,
    visibility_classical,
)
from .detection import ClickTable, DetectorPair, click_table, click_weights, visibility_curve, visibility_quantum
from .fock import (
    BeamsplitterParams,
    FockVector,
    JointDistribution,
    TwoModeState,
    beamsplitter_transform,
    coherent_amplitudes,
    joint_distribution,
    mixed_input_state,
    number_state,
    verify_eq3_expansion,
)
from .montecarlo import (
    ClassicalSource,
    CountRecord,
    PulseExperimentConfig,
    QuantumSource,
    RateConfig,
    nfold_rate_scaling,
    predict_rates,
    simulate_counts,
)
from .temporal import (
    DipProfile,
    TemporalParams,
    bandwidth_nm_to_sigma,
    dip_half_width_1e,
    dip_profile,
    temporal_visibility,
    triple_coincidence_probability,
)
