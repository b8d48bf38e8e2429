"""WAV reading/writing and synthetic harmonic test signals."""

import numpy as np
import scipy.io.wavfile

from .exceptions import AudioFormatError
from .validation import as_signal, check_positive


def read_audio(path):
    """Read a mono PCM WAV file (16-bit integer or 32-bit float).

    Returns:
        (samples, sample_rate) with samples normalized to [-1, 1].

    Raises:
        AudioFormatError: for missing/corrupt files, multichannel audio,
            or unsupported sample formats.
    """
    try:
        rate, data = scipy.io.wavfile.read(path)
    except FileNotFoundError:
        raise
    except Exception as exc:
        raise AudioFormatError(f"cannot read WAV file {path}: {exc}") from exc
    if data.ndim != 1:
        raise AudioFormatError(
            f"{path}: expected mono audio, got {data.shape[1]} channels"
        )
    if data.size == 0:
        raise AudioFormatError(f"{path}: file contains no samples")
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.float32:
        samples = data.astype(np.float64)
    else:
        raise AudioFormatError(
            f"{path}: unsupported sample format {data.dtype}; "
            "use 16-bit PCM or 32-bit float"
        )
    return samples, float(rate)


def write_audio(path, samples, sample_rate):
    """Write samples to a 16-bit PCM mono WAV file, clipping to [-1, 1]."""
    samples = as_signal(samples, "samples")
    clipped = np.clip(samples, -1.0, 1.0)
    scipy.io.wavfile.write(path, int(sample_rate), (clipped * 32767.0).astype(np.int16))


def synth_signal(f0, order, sample_rate, duration, snr_db=None, weights=None, seed=0):
    """Synthesize a harmonic tone in white Gaussian noise.

    The clean signal is sum_k [alpha_k cos + beta_k sin](k*omega*m) for
    k = 1..order with unit cosine amplitudes unless ``weights`` gives
    explicit (alpha, beta) rows.  Noise is scaled against the measured
    signal power so the realized SNR matches ``snr_db``; None or
    infinity means no noise.  Output is deterministic for a fixed seed.

    Raises:
        ValueError: if the top harmonic reaches Nyquist.
    """
    check_positive(f0, "f0")
    check_positive(sample_rate, "sample_rate")
    check_positive(duration, "duration")
    if order < 1:
        raise ValueError("order must be at least 1")
    if order * f0 >= sample_rate / 2.0:
        raise ValueError(
            f"harmonic {order} of {f0} Hz reaches Nyquist at fs={sample_rate}"
        )
    if weights is None:
        weights = np.column_stack([np.ones(order), np.zeros(order)])
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (order, 2):
        raise ValueError(f"weights must have shape ({order}, 2)")
    n = int(round(duration * sample_rate))
    m = np.arange(1, n + 1)
    omega = 2.0 * np.pi * f0 / sample_rate
    signal = np.zeros(n)
    for k in range(1, order + 1):
        signal += weights[k - 1, 0] * np.cos(k * omega * m)
        signal += weights[k - 1, 1] * np.sin(k * omega * m)
    if snr_db is None or np.isinf(snr_db):
        return signal
    signal_power = float(np.mean(signal**2))
    noise_power = signal_power / 10.0 ** (snr_db / 10.0)
    rng = np.random.default_rng(seed)
    return signal + np.sqrt(noise_power) * rng.standard_normal(n)
