"""Bayesian pitch tracking with a harmonic signal model.

Per frame, every candidate (fundamental, harmonic order) pair is scored
by a closed-form marginal likelihood of the harmonic regression model,
and an unvoiced hypothesis is scored by a matching null evidence.  A
first-order forward recursion smooths pitch, order, and voicing over
time, carrying the last voiced frame's posterior across silent gaps.
"""

__version__ = "0.1.0"

from .audio import read_audio, synth_signal, write_audio
from .exceptions import (
    AlignmentError,
    AudioFormatError,
    DegenerateFrameError,
    NonConvergenceError,
    SingularBasisError,
)
from .harmonic import (
    Frame,
    HarmonicBasis,
    PitchGrid,
    build_basis,
    coefficient_estimate,
    fit_ratio,
    fit_ratio_grid,
    frame_signal,
    make_pitch_grid,
)
from .likelihood import (
    GPriorConfig,
    LikelihoodSurface,
    likelihood_surface,
    log_gauss_2f1_b1,
    log_null_likelihood,
    log_voiced_likelihood,
)
from .metrics import GroundTruth, eval_ger, eval_mae, eval_ter, read_ground_truth
from .prewhiten import (
    NoisePsdTracker,
    WhitenConfig,
    estimate_noise_autocorr,
    levinson_durbin,
    prewhiten_frame,
)
from .tracker import (
    PitchEstimate,
    PitchTracker,
    StatePosterior,
    TransitionModel,
    VoicedMemory,
    build_transitions,
    map_estimate,
    track,
    update,
    update_memory,
)
from .tracker import predict as predict_state
from .trackio import read_track, write_track

__all__ = [
    "AlignmentError",
    "AudioFormatError",
    "DegenerateFrameError",
    "Frame",
    "GPriorConfig",
    "GroundTruth",
    "HarmonicBasis",
    "LikelihoodSurface",
    "NoisePsdTracker",
    "NonConvergenceError",
    "PitchEstimate",
    "PitchGrid",
    "PitchTracker",
    "SingularBasisError",
    "StatePosterior",
    "TransitionModel",
    "VoicedMemory",
    "WhitenConfig",
    "build_basis",
    "build_transitions",
    "coefficient_estimate",
    "estimate_noise_autocorr",
    "eval_ger",
    "eval_mae",
    "eval_ter",
    "fit_ratio",
    "fit_ratio_grid",
    "frame_signal",
    "levinson_durbin",
    "likelihood_surface",
    "log_gauss_2f1_b1",
    "log_null_likelihood",
    "log_voiced_likelihood",
    "make_pitch_grid",
    "map_estimate",
    "predict_state",
    "prewhiten_frame",
    "read_audio",
    "read_ground_truth",
    "read_track",
    "synth_signal",
    "track",
    "update",
    "update_memory",
    "write_audio",
    "write_track",
]
