"""Forward recursion over the joint (pitch, order, voicing) state space.

The state space is the union of all valid voiced states (grid bin,
harmonic order) and a single unvoiced state.  Pitch and order evolve
independently through banded Gaussian transition kernels while voicing
follows a 2-state chain biased so that unvoiced-to-voiced switching is
easier than the reverse.  When an unvoiced frame precedes a voiced one,
the pitch/order prior is the stored posterior of the most recent voiced
frame, which is what carries pitch continuity across silent gaps.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp
from sklearn.base import BaseEstimator

from .exceptions import DegenerateFrameError
from .harmonic import Frame, PitchGrid, fit_ratio_grid, frame_signal, make_pitch_grid
from .likelihood import GPriorConfig, LikelihoodSurface, likelihood_surface
from .prewhiten import WhitenConfig, whitening_pipeline
from .validation import as_signal, check_positive, check_probability

_BAND_SIGMAS = 5.0


@dataclass(eq=False)
class TransitionModel:
    """Row-stochastic transition kernels for pitch, order, and voicing.

    ``A_u`` rows are indexed by the previous voicing state, so
    ``A_u[0, 1]`` is p(voiced | previously unvoiced).  ``valid`` is the
    grid's (bin, order) usability mask, applied after every prediction.
    """

    A_omega: np.ndarray
    A_K: np.ndarray
    A_u: np.ndarray
    sigma_omega2: float
    sigma_K2: float
    valid: np.ndarray = field(repr=False)


@dataclass
class StatePosterior:
    """Normalized distribution over {voiced states} + {unvoiced} for one frame."""

    voiced: np.ndarray
    p_unvoiced: float
    frame_index: int

    def total(self):
        return float(self.voiced.sum()) + self.p_unvoiced


@dataclass
class VoicedMemory:
    """Pitch/order posterior of the latest voiced frame.

    ``valid`` is False until a voiced frame has been seen, in which case
    ``dist`` holds the maximally noncommittal uniform distribution over
    valid states.
    """

    dist: np.ndarray
    valid: bool = False


@dataclass
class PitchEstimate:
    """Per-frame MAP decoding result.

    ``frame_index`` is the zero-based output row index.  ``f0`` and
    ``order`` are zero when the frame is unvoiced, except under oracle
    voicing where they always hold the voiced-states argmax.
    """

    frame_index: int
    time: float
    voiced: bool
    f0: float
    order: int
    p_unvoiced: float


def _gaussian_band_kernel(positions, variance):
    """Row-stochastic Gaussian kernel over positions, truncated at +-5 sigma."""
    diff = positions[None, :] - positions[:, None]
    if np.isinf(variance):
        kernel = np.ones_like(diff)
    else:
        kernel = np.exp(-(diff**2) / (2.0 * variance))
        kernel[np.abs(diff) > _BAND_SIGMAS * np.sqrt(variance)] = 0.0
    return kernel / kernel.sum(axis=1, keepdims=True)


def build_transitions(grid, sigma_omega2, sigma_K2, p_u1_given_u0=0.4, p_u0_given_u1=0.3):
    """Construct the three transition kernels for a pitch grid.

    Args:
        grid: PitchGrid defining the voiced state space.
        sigma_omega2: pitch random-walk variance in (radians/sample)^2;
            np.inf gives uniform rows.
        sigma_K2: order random-walk variance; np.inf gives uniform rows.
        p_u1_given_u0: probability of switching unvoiced -> voiced.
        p_u0_given_u1: probability of switching voiced -> unvoiced.
    """
    if not sigma_omega2 > 0 or not sigma_K2 > 0:
        raise ValueError("transition variances must be positive")
    check_probability(p_u1_given_u0, "p_u1_given_u0")
    check_probability(p_u0_given_u1, "p_u0_given_u1")
    A_omega = _gaussian_band_kernel(grid.omegas, float(sigma_omega2))
    orders = np.arange(1, grid.k_max + 1, dtype=np.float64)
    A_K = _gaussian_band_kernel(orders, float(sigma_K2))
    A_u = np.array(
        [
            [1.0 - p_u1_given_u0, p_u1_given_u0],
            [p_u0_given_u1, 1.0 - p_u0_given_u1],
        ]
    )
    return TransitionModel(
        A_omega=A_omega,
        A_K=A_K,
        A_u=A_u,
        sigma_omega2=float(sigma_omega2),
        sigma_K2=float(sigma_K2),
        valid=grid.valid,
    )


def initial_posterior(grid, p_unvoiced=0.5):
    """Noncommittal starting distribution: uniform over valid voiced states."""
    voiced = np.where(grid.valid, 1.0, 0.0)
    voiced *= (1.0 - p_unvoiced) / voiced.sum()
    return StatePosterior(voiced=voiced, p_unvoiced=float(p_unvoiced), frame_index=0)


def initial_memory(grid):
    """Uniform last-voiced prior, used until a voiced frame appears."""
    dist = np.where(grid.valid, 1.0, 0.0)
    return VoicedMemory(dist=dist / dist.sum(), valid=False)


def predict(prev, memory, transitions):
    """One Chapman-Kolmogorov step: propagate the previous posterior.

    The voiced block factorizes into independent pitch and order
    propagation; mass entering from the unvoiced state is distributed
    according to the last-voiced memory.  Masked states are zeroed and
    the joint distribution renormalized.
    """
    A_u = transitions.A_u
    p_u = prev.p_unvoiced
    voiced = A_u[1, 1] * (transitions.A_omega.T @ prev.voiced @ transitions.A_K)
    voiced += A_u[0, 1] * p_u * memory.dist
    p_unvoiced = A_u[0, 0] * p_u + A_u[1, 0] * (1.0 - p_u)
    voiced[~transitions.valid] = 0.0
    total = voiced.sum() + p_unvoiced
    return StatePosterior(
        voiced=voiced / total,
        p_unvoiced=p_unvoiced / total,
        frame_index=prev.frame_index + 1,
    )


def update(prediction, surface):
    """Bayes update of a predicted distribution with a likelihood surface.

    Works in the log domain with a single log-sum-exp normalizer and
    returns a linear-space posterior.  If the surface carries no
    information at all (every entry -inf), the prediction is returned
    renormalized.
    """
    with np.errstate(divide="ignore"):
        log_voiced = surface.log_voiced + np.log(prediction.voiced)
        log_unvoiced = surface.log_null + np.log(prediction.p_unvoiced)
    log_norm = logsumexp(np.append(log_voiced.ravel(), log_unvoiced))
    if not np.isfinite(log_norm):
        total = prediction.voiced.sum() + prediction.p_unvoiced
        return StatePosterior(
            voiced=prediction.voiced / total,
            p_unvoiced=prediction.p_unvoiced / total,
            frame_index=surface.frame_index,
        )
    return StatePosterior(
        voiced=np.exp(log_voiced - log_norm),
        p_unvoiced=float(np.exp(log_unvoiced - log_norm)),
        frame_index=surface.frame_index,
    )


def map_estimate(post, grid, sample_rate, time_s=0.0, force_voiced=False):
    """Decode one posterior into a pitch estimate.

    The frame is voiced when p(unvoiced) < 0.5; the pitch/order pair is
    the posterior argmax over voiced states with ties broken toward the
    lower frequency, then the lower order.  With ``force_voiced`` the
    argmax is reported regardless of the voicing decision (used by the
    oracle-voicing evaluation convention).
    """
    voiced = bool(post.p_unvoiced < 0.5)
    f0 = 0.0
    order = 0
    if voiced or force_voiced:
        flat = int(np.argmax(post.voiced))
        bin_idx, k_idx = divmod(flat, grid.k_max)
        f0 = float((grid.bin_lo + bin_idx) * sample_rate / grid.dft_size)
        order = k_idx + 1
    return PitchEstimate(
        frame_index=post.frame_index - 1,
        time=float(time_s),
        voiced=voiced,
        f0=f0,
        order=order,
        p_unvoiced=float(post.p_unvoiced),
    )


def update_memory(post, memory):
    """Refresh the last-voiced prior after a voiced frame.

    Returns the input object unchanged when the frame is unvoiced, so a
    run of unvoiced frames leaves the memory bit-identical.
    """
    if post.p_unvoiced >= 0.5:
        return memory
    return VoicedMemory(dist=post.voiced / (1.0 - post.p_unvoiced), valid=True)


def track(
    frames,
    grid,
    transitions,
    cfg,
    whiten=None,
    oracle_voicing=False,
    use_last_voiced_prior=True,
    return_posteriors=False,
):
    """Run the full per-frame recursion over a frame sequence.

    Each frame is optionally prewhitened, mean-subtracted, scored
    against every grid state, folded into the forward recursion, and
    decoded.  Zero-energy frames carry no evidence: they are reported
    unvoiced with p_unvoiced = 1 and the recursion continues from the
    prediction alone.

    Args:
        frames: non-empty sequence of Frame with one sample rate.
        grid: PitchGrid.
        transitions: TransitionModel built for the same grid.
        cfg: GPriorConfig.
        whiten: optional WhitenConfig; None or mode "off" leaves frames
            untouched.
        oracle_voicing: report the voiced-states argmax in every frame.
        use_last_voiced_prior: when False the unvoiced-to-voiced prior
            stays uniform instead of tracking the latest voiced frame.
        return_posteriors: also return the per-frame StatePosterior list.

    Returns:
        List of PitchEstimate, or (estimates, posteriors) when
        ``return_posteriors`` is set.
    """
    frames = list(frames)
    if not frames:
        raise ValueError("no frames to track")
    rates = {frame.sample_rate for frame in frames}
    if len(rates) != 1:
        raise ValueError(f"frames mix sample rates: {sorted(rates)}")
    sample_rate = rates.pop()
    whitener = whitening_pipeline(whiten)
    post = initial_posterior(grid)
    memory = initial_memory(grid)
    estimates = []
    posteriors = []
    for frame in frames:
        processed = whitener(frame)
        centered = Frame(
            samples=processed.samples - processed.samples.mean(),
            index=processed.index,
            start_time=processed.start_time,
            sample_rate=processed.sample_rate,
        )
        prediction = predict(post, memory, transitions)
        degenerate = float(centered.samples @ centered.samples) <= 0.0
        if degenerate:
            post = StatePosterior(
                voiced=prediction.voiced / prediction.total(),
                p_unvoiced=prediction.p_unvoiced / prediction.total(),
                frame_index=prediction.frame_index,
            )
            estimate = PitchEstimate(
                frame_index=frame.index - 1,
                time=frame.start_time,
                voiced=False,
                f0=0.0,
                order=0,
                p_unvoiced=1.0,
            )
        else:
            r2 = fit_ratio_grid(centered, grid)
            surface = likelihood_surface(centered, r2, cfg)
            post = update(prediction, surface)
            estimate = map_estimate(
                post, grid, sample_rate, time_s=frame.start_time,
                force_voiced=oracle_voicing,
            )
            if use_last_voiced_prior:
                memory = update_memory(post, memory)
        estimates.append(estimate)
        if return_posteriors:
            posteriors.append(post)
    if return_posteriors:
        return estimates, posteriors
    return estimates


class PitchTracker(BaseEstimator):
    """Pitch tracker with an estimator-style interface.

    All knobs are constructor parameters so the object composes with
    standard tooling (``get_params``/``set_params``/``clone``).  ``fit``
    precomputes the pitch grid and transition kernels for the configured
    sample rate; ``predict`` maps a signal to a per-frame f0 array and
    ``track`` returns the full per-frame estimates.

    Args:
        sample_rate: input sampling rate in Hz.
        f_min, f_max: pitch search range in Hz.
        dft_size: DFT length defining the grid resolution.
        k_max: largest harmonic order considered.
        frame_ms, hop_ms: analysis frame length and hop in milliseconds.
        delta: g-hyperprior parameter (> 2).
        sigma_omega2: pitch transition variance; None selects
            16 pi^2 / sample_rate^2.
        sigma_k2: order transition variance.
        p_voiced_given_unvoiced, p_unvoiced_given_voiced: voicing
            switching probabilities.
        use_last_voiced_prior: carry the latest voiced posterior across
            unvoiced gaps.
        whiten: "off", "adaptive", or "known" noise prewhitening.
        lp_order: linear-prediction order for prewhitening.
        noise_reference: noise-only samples, required for whiten="known".
        psd_smoothing: smoothing factor of the adaptive noise tracker.
    """

    def __init__(
        self,
        sample_rate=16000.0,
        f_min=70.0,
        f_max=400.0,
        dft_size=16384,
        k_max=10,
        frame_ms=25.0,
        hop_ms=10.0,
        delta=4.0,
        sigma_omega2=None,
        sigma_k2=1.0,
        p_voiced_given_unvoiced=0.4,
        p_unvoiced_given_voiced=0.3,
        use_last_voiced_prior=True,
        whiten="off",
        lp_order=30,
        noise_reference=None,
        psd_smoothing=0.8,
    ):
        self.sample_rate = sample_rate
        self.f_min = f_min
        self.f_max = f_max
        self.dft_size = dft_size
        self.k_max = k_max
        self.frame_ms = frame_ms
        self.hop_ms = hop_ms
        self.delta = delta
        self.sigma_omega2 = sigma_omega2
        self.sigma_k2 = sigma_k2
        self.p_voiced_given_unvoiced = p_voiced_given_unvoiced
        self.p_unvoiced_given_voiced = p_unvoiced_given_voiced
        self.use_last_voiced_prior = use_last_voiced_prior
        self.whiten = whiten
        self.lp_order = lp_order
        self.noise_reference = noise_reference
        self.psd_smoothing = psd_smoothing

    def fit(self, X=None, y=None):
        """Precompute the grid and transition kernels; data is ignored."""
        check_positive(self.sample_rate, "sample_rate")
        sigma_omega2 = self.sigma_omega2
        if sigma_omega2 is None:
            sigma_omega2 = 16.0 * np.pi**2 / self.sample_rate**2
        self.grid_ = make_pitch_grid(
            self.f_min, self.f_max, self.sample_rate, self.dft_size, self.k_max
        )
        self.transitions_ = build_transitions(
            self.grid_,
            sigma_omega2,
            self.sigma_k2,
            self.p_voiced_given_unvoiced,
            self.p_unvoiced_given_voiced,
        )
        self.gprior_ = GPriorConfig(delta=self.delta)
        self.whiten_ = self._whiten_config()
        return self

    def _whiten_config(self):
        if self.whiten not in ("off", "adaptive", "known"):
            raise ValueError(f"unknown whiten mode {self.whiten!r}")
        reference = None
        if self.whiten == "known":
            if self.noise_reference is None:
                raise ValueError("whiten='known' needs a noise_reference")
            reference = as_signal(self.noise_reference, "noise_reference")
        return WhitenConfig(
            lp_order=self.lp_order,
            mode=self.whiten,
            smoothing=self.psd_smoothing,
            noise_reference=reference,
        )

    def _check_fitted(self):
        if not hasattr(self, "grid_"):
            raise AttributeError(
                "this PitchTracker is not fitted yet; call fit() first"
            )

    def track(self, x, oracle_voicing=False, return_posteriors=False):
        """Track a raw signal, returning per-frame PitchEstimate objects."""
        self._check_fitted()
        frames = frame_signal(x, self.sample_rate, self.frame_ms, self.hop_ms)
        return track(
            frames,
            self.grid_,
            self.transitions_,
            self.gprior_,
            whiten=self.whiten_,
            oracle_voicing=oracle_voicing,
            use_last_voiced_prior=self.use_last_voiced_prior,
            return_posteriors=return_posteriors,
        )

    def predict(self, x):
        """Per-frame f0 in Hz for a raw signal; 0 marks unvoiced frames."""
        return np.array([estimate.f0 for estimate in self.track(x)])
