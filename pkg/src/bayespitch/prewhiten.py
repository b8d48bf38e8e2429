"""Linear-prediction prewhitening so colored noise looks white to the model.

The voiced/null evidence assumes white Gaussian noise.  For colored
noise, each frame is passed through the FIR inverse filter
1 - sum_i a_i z^-i of an AR model fitted to an estimate of the noise
autocorrelation.  Two noise estimators are provided: a known-noise mode
that uses the autocorrelation of a supplied noise-only reference, and an
adaptive mode that tracks a minimum-statistics floor of the smoothed
periodogram.
"""

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .harmonic import Frame

# Minimum statistics under-estimates the noise level because it reads a
# low quantile of the smoothed periodogram; this factor compensates for
# the default smoothing/window combination.
_MIN_STATS_BIAS = 1.5


@dataclass
class WhitenConfig:
    """Prewhitening settings.

    ``mode`` is one of "off", "known", "adaptive".  ``noise_reference``
    holds noise-only samples and is required in known mode.
    ``smoothing`` is the exponential-smoothing factor of the adaptive
    periodogram tracker.
    """

    lp_order: int = 30
    mode: str = "off"
    smoothing: float = 0.8
    noise_reference: np.ndarray = None

    def __post_init__(self):
        if self.mode not in ("off", "known", "adaptive"):
            raise ValueError(f"unknown prewhitening mode {self.mode!r}")
        if self.lp_order < 1:
            raise ValueError("lp_order must be at least 1")
        if not 0.0 < self.smoothing < 1.0:
            raise ValueError("smoothing must lie in (0, 1)")


def levinson_durbin(autocorr):
    """Solve the Toeplitz normal equations for AR coefficients.

    Args:
        autocorr: autocorrelation values for lags 0..p.

    Returns:
        (coefficients, prediction_error): length-p forward-predictor
        coefficients a_i (so the whitening filter is 1 - sum a_i z^-i)
        and the final prediction error power.

    Raises:
        ValueError: if the sequence is not positive semidefinite enough
            for a stable recursion.
    """
    r = np.asarray(autocorr, dtype=np.float64)
    if r.ndim != 1 or r.size < 2:
        raise ValueError("need autocorrelation lags 0..p with p >= 1")
    if not r[0] > 0:
        raise ValueError("autocorrelation at lag 0 must be positive")
    order = r.size - 1
    a = np.zeros(order)
    error = r[0]
    for i in range(1, order + 1):
        acc = r[i] - a[: i - 1] @ r[i - 1 : 0 : -1]
        k = acc / error
        a_new = a.copy()
        a_new[i - 1] = k
        a_new[: i - 1] = a[: i - 1] - k * a[i - 2 :: -1]
        a = a_new
        error *= 1.0 - k * k
        if error <= 0:
            raise ValueError(
                "autocorrelation sequence is not positive definite "
                f"(prediction error vanished at order {i})"
            )
    return a, float(error)


def _biased_autocorr(x, max_lag):
    """Biased autocorrelation estimate r[l] = (1/N) sum x[m] x[m+l]."""
    n = x.size
    nfft = 1 << int(np.ceil(np.log2(2 * n - 1)))
    spectrum = np.abs(np.fft.rfft(x, n=nfft)) ** 2
    acf = np.fft.irfft(spectrum, n=nfft)[: max_lag + 1]
    return acf / n


class NoisePsdTracker:
    """Minimum-statistics floor of the exponentially smoothed periodogram.

    Each frame's periodogram is smoothed across time; the tracked noise
    spectrum is the minimum of the smoothed values over a sliding window
    of recent frames, scaled up to compensate the low-quantile bias.
    """

    def __init__(self, nfft, smoothing=0.8, window=50, bias_correction=_MIN_STATS_BIAS):
        self.nfft = int(nfft)
        self.smoothing = float(smoothing)
        self.window = int(window)
        self.bias_correction = float(bias_correction)
        self._smoothed = None
        self._history = []

    def update(self, samples):
        """Fold one frame in and return the current noise PSD estimate."""
        psd = np.abs(np.fft.rfft(samples, n=self.nfft)) ** 2 / samples.size
        if self._smoothed is None:
            self._smoothed = psd
        else:
            self._smoothed = self.smoothing * self._smoothed + (1.0 - self.smoothing) * psd
        self._history.append(self._smoothed)
        if len(self._history) > self.window:
            self._history.pop(0)
        return np.min(self._history, axis=0) * self.bias_correction

    def autocorr(self, floor_psd, max_lag):
        """Noise autocorrelation for lags 0..max_lag from a one-sided PSD.

        The tracked PSD is |X|^2 / M, whose inverse transform is the
        biased autocorrelation directly (Wiener-Khinchin on the
        zero-padded frame).
        """
        return np.fft.irfft(floor_psd, n=self.nfft)[: max_lag + 1]


def estimate_noise_autocorr(frame, cfg, state=None):
    """Noise autocorrelation (lags 0..lp_order) for one frame.

    Known mode ignores the frame and uses the configured reference;
    adaptive mode folds the frame into ``state`` (a NoisePsdTracker) and
    reads the current floor.

    Raises:
        ValueError: in off mode, or known mode without a reference, or
            adaptive mode without a tracker state.
    """
    if cfg.mode == "off":
        raise ValueError("estimate_noise_autocorr is undefined with mode='off'")
    if cfg.mode == "known":
        if cfg.noise_reference is None:
            raise ValueError("known-noise mode needs cfg.noise_reference")
        reference = np.asarray(cfg.noise_reference, dtype=np.float64)
        if reference.size <= cfg.lp_order:
            raise ValueError("noise reference shorter than lp_order")
        return _biased_autocorr(reference, cfg.lp_order)
    if state is None:
        raise ValueError("adaptive mode needs a NoisePsdTracker state")
    samples = frame.samples if isinstance(frame, Frame) else np.asarray(frame)
    floor_psd = state.update(samples)
    return state.autocorr(floor_psd, cfg.lp_order)


def prewhiten_frame(frame, ar_coeffs):
    """Apply the AR inverse filter 1 - sum a_i z^-i with zero initial state.

    Length is preserved; all-zero coefficients leave the frame unchanged.
    """
    a = np.asarray(ar_coeffs, dtype=np.float64)
    if not np.all(np.isfinite(a)):
        raise ValueError("AR coefficients must be finite")
    filtered = lfilter(np.concatenate(([1.0], -a)), [1.0], frame.samples)
    return Frame(
        samples=filtered,
        index=frame.index,
        start_time=frame.start_time,
        sample_rate=frame.sample_rate,
    )


def whitening_pipeline(cfg):
    """Build the per-frame preprocessing callable for a WhitenConfig.

    mode "off" (or cfg None) returns the identity so the tracking path
    is bit-identical to one without this module.  The returned callable
    holds the sequential adaptive state when needed.
    """
    if cfg is None or cfg.mode == "off":
        return lambda frame: frame
    if cfg.mode == "known":
        autocorr = estimate_noise_autocorr(None, cfg)
        coeffs, _ = levinson_durbin(autocorr)

        def run_known(frame):
            if cfg.lp_order >= frame.size:
                raise ValueError("lp_order must be smaller than the frame length")
            return prewhiten_frame(frame, coeffs)

        return run_known

    state = {"tracker": None}

    def run_adaptive(frame):
        if cfg.lp_order >= frame.size:
            raise ValueError("lp_order must be smaller than the frame length")
        if state["tracker"] is None:
            nfft = 1 << int(np.ceil(np.log2(max(2 * frame.size, 2 * cfg.lp_order + 2))))
            state["tracker"] = NoisePsdTracker(nfft, smoothing=cfg.smoothing)
        if not np.any(frame.samples):
            return frame
        autocorr = estimate_noise_autocorr(frame, cfg, state["tracker"])
        if autocorr[0] <= 0:
            return frame
        try:
            coeffs, _ = levinson_durbin(autocorr)
        except ValueError:
            return frame
        return prewhiten_frame(frame, coeffs)

    return run_adaptive
