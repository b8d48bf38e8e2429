"""Framing, harmonic basis construction, and fit-ratio computation.

A frame of audio is modelled as a sum of sinusoids at integer multiples
of a candidate fundamental.  The fit ratio R^2(omega, K) is the fraction
of frame energy captured by the least-squares projection onto the span
of the first K harmonics of omega; it is the single sufficient statistic
the marginal likelihood needs per candidate state.
"""

import weakref
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .exceptions import DegenerateFrameError, SingularBasisError
from .validation import as_signal, check_positive

# R^2 is clamped below 1 so the hypergeometric series argument stays
# strictly inside the unit disk.
R2_CLAMP = 1.0 - 1e-12

# Guard so the highest harmonic stays strictly below Nyquist.
_NYQUIST_EPS = 1e-8

# Eigenvalue threshold (relative to trace) for the pseudo-inverse
# fallback when a Gram matrix is numerically singular.
_PINV_RTOL = 1e-10


@dataclass
class Frame:
    """A contiguous block of samples cut from a longer signal.

    Attributes:
        samples: the raw samples, length M.
        index: one-based frame number within the parent signal.
        start_time: time of the first sample, seconds.
        sample_rate: sampling rate in Hz.
    """

    samples: np.ndarray
    index: int
    start_time: float
    sample_rate: float

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1 or self.samples.size < 2:
            raise ValueError("frame needs at least 2 samples")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("frame contains non-finite samples")
        if self.index < 1:
            raise ValueError("frame index is one-based")

    @property
    def size(self):
        return self.samples.size


@dataclass(eq=False)
class PitchGrid:
    """Candidate fundamentals at DFT-bin frequencies.

    Bin ``b`` corresponds to normalized radian frequency
    ``omega = 2*pi*b/dft_size`` i.e. ``b*fs/dft_size`` Hz.  Each bin
    carries the largest harmonic order whose top harmonic stays below
    Nyquist, further capped at ``k_max``.
    """

    dft_size: int
    bin_lo: int
    bin_hi: int
    omegas: np.ndarray
    f_min: float
    f_max: float
    k_max: int
    valid_orders: np.ndarray = field(repr=False)

    @property
    def size(self):
        return self.bin_hi - self.bin_lo + 1

    @property
    def valid(self):
        """Boolean mask of shape (size, k_max); True where (bin, order) is usable."""
        orders = np.arange(1, self.k_max + 1)
        return orders[None, :] <= self.valid_orders[:, None]

    def frequencies(self, sample_rate):
        """Grid frequencies in Hz for the given sampling rate."""
        return self.omegas * sample_rate / (2.0 * np.pi)


@dataclass
class HarmonicBasis:
    """Cosine/sine regressors for K harmonics of a fundamental.

    ``matrix`` has shape (M, 2K) with columns
    [cos(omega*m), ..., cos(K*omega*m), sin(omega*m), ..., sin(K*omega*m)]
    evaluated at m = 1..M.
    """

    matrix: np.ndarray
    omega: float
    order: int


def frame_signal(audio, sample_rate, frame_ms, hop_ms):
    """Slice a signal into contiguous, rectangular (unwindowed) frames.

    The hop and frame length are rounded to whole samples; a trailing
    partial frame is dropped.

    Returns:
        List of Frame objects with one-based indices.

    Raises:
        ValueError: if the audio is shorter than a single frame.
    """
    audio = as_signal(audio)
    check_positive(sample_rate, "sample_rate")
    check_positive(frame_ms, "frame_ms")
    check_positive(hop_ms, "hop_ms")
    frame_len = int(round(frame_ms * sample_rate / 1000.0))
    hop = int(round(hop_ms * sample_rate / 1000.0))
    if frame_len < 2 or hop < 1:
        raise ValueError("frame/hop too short for this sample rate")
    if audio.size < frame_len:
        raise ValueError(
            f"audio has {audio.size} samples, shorter than one {frame_len}-sample frame"
        )
    n_frames = 1 + (audio.size - frame_len) // hop
    frames = []
    for i in range(n_frames):
        start = i * hop
        frames.append(
            Frame(
                samples=audio[start : start + frame_len].copy(),
                index=i + 1,
                start_time=start / sample_rate,
                sample_rate=float(sample_rate),
            )
        )
    return frames


def make_pitch_grid(f_min, f_max, sample_rate, dft_size=16384, k_max=10):
    """Build the candidate pitch grid for a search range in Hz.

    Bins span ceil(dft_size*f_min/fs) .. floor(dft_size*f_max/fs); bins
    whose first harmonic would already reach Nyquist are rejected.

    Raises:
        ValueError: on an empty bin range or an invalid search range.
    """
    check_positive(f_min, "f_min")
    if not f_min < f_max:
        raise ValueError(f"need f_min < f_max, got {f_min} >= {f_max}")
    if not f_max < sample_rate / 2.0:
        raise ValueError(f"f_max={f_max} must stay below Nyquist {sample_rate / 2.0}")
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    bin_lo = int(np.ceil(dft_size * f_min / sample_rate))
    bin_hi = int(np.floor(dft_size * f_max / sample_rate))
    if bin_hi < bin_lo:
        raise ValueError(
            f"empty pitch grid: no DFT bin falls inside [{f_min}, {f_max}] Hz "
            f"at dft_size={dft_size}"
        )
    omegas = 2.0 * np.pi * np.arange(bin_lo, bin_hi + 1) / dft_size
    valid_orders = np.minimum(
        k_max, np.floor((np.pi - _NYQUIST_EPS) / omegas).astype(int)
    )
    keep = valid_orders >= 1
    if not np.all(keep):
        last = int(np.nonzero(keep)[0][-1]) if np.any(keep) else -1
        if last < 0:
            raise ValueError("every candidate pitch exceeds Nyquist")
        bin_hi = bin_lo + last
        omegas = omegas[: last + 1]
        valid_orders = valid_orders[: last + 1]
    return PitchGrid(
        dft_size=int(dft_size),
        bin_lo=bin_lo,
        bin_hi=bin_hi,
        omegas=omegas,
        f_min=float(f_min),
        f_max=float(f_max),
        k_max=int(k_max),
        valid_orders=valid_orders,
    )


def build_basis(omega, order, length):
    """Construct the harmonic regression basis Z(omega, K) for one frame size.

    Raises:
        ValueError: if K*omega >= pi (top harmonic at or above Nyquist).
        ValueError: if length < 2K (normal equations underdetermined).
    """
    check_positive(omega, "omega")
    if order < 1:
        raise ValueError("order must be at least 1")
    if order * omega >= np.pi:
        raise ValueError(
            f"invalid state: K*omega = {order * omega:.6f} reaches Nyquist (pi)"
        )
    if length < 2 * order:
        raise ValueError(
            f"underdetermined basis: frame of {length} samples cannot support "
            f"2K = {2 * order} regressors"
        )
    m = np.arange(1, length + 1)
    phases = np.outer(np.arange(1, order + 1) * omega, m)
    matrix = np.concatenate([np.cos(phases), np.sin(phases)]).T
    return HarmonicBasis(matrix=matrix, omega=float(omega), order=int(order))


def coefficient_estimate(frame, basis):
    """Least-squares harmonic weights for a frame, solving the normal equations.

    Returns:
        Weight vector of length 2K ordered like the basis columns.

    Raises:
        SingularBasisError: if Z^T Z is rank deficient.
    """
    y = frame.samples if isinstance(frame, Frame) else as_signal(frame, "frame")
    Z = basis.matrix
    if y.size != Z.shape[0]:
        raise ValueError(f"frame length {y.size} does not match basis rows {Z.shape[0]}")
    gram = Z.T @ Z
    try:
        cho = scipy.linalg.cho_factor(gram, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise SingularBasisError(
            f"normal equations singular at omega={basis.omega:.6g}, K={basis.order}"
        ) from exc
    return scipy.linalg.cho_solve(cho, Z.T @ y, check_finite=False)


def _centered(frame):
    """Mean-subtracted samples; the basis has no DC column."""
    y = frame.samples if isinstance(frame, Frame) else as_signal(frame, "frame")
    return y - y.mean()


def _centered_energy(frame):
    """Centered samples and their energy, rejecting degenerate frames.

    A frame whose centered energy is zero up to rounding (relative to
    the raw energy) carries no information the harmonic fit could use.
    """
    y = _centered(frame)
    energy = float(y @ y)
    raw = frame.samples if isinstance(frame, Frame) else frame
    if energy <= 1e-24 * float(raw @ raw):
        raise DegenerateFrameError("zero-energy frame has no defined fit ratio")
    return y, energy


def fit_ratio(frame, omega, order):
    """Fraction of (mean-subtracted) frame energy captured by the harmonic fit.

    Equals ||P_Z y||^2 / ||y||^2 for the projection P_Z onto the span of
    the first ``order`` harmonics of ``omega``, clamped to [0, 1 - 1e-12].

    Raises:
        DegenerateFrameError: if the centered frame has zero energy.
    """
    y, energy = _centered_energy(frame)
    basis = build_basis(omega, order, y.size)
    weights = coefficient_estimate(y, basis)
    r2 = float(y @ basis.matrix @ weights) / energy
    return min(max(r2, 0.0), R2_CLAMP)


def fit_ratio_grid(frame, grid):
    """Fit ratios for every valid (pitch bin, order) state of a grid.

    Output has shape (grid.size, grid.k_max); states masked by the
    Nyquist rule hold NaN.  Inner products against every harmonic of
    every bin come from a single zero-padded FFT of the frame, and the
    per-bin nested least-squares problems share one Cholesky factor, so
    the whole grid costs one FFT plus one small triangular product per
    bin.

    Raises:
        DegenerateFrameError: if the centered frame has zero energy.
    """
    if not isinstance(frame, Frame):
        raise TypeError("fit_ratio_grid expects a Frame")
    y, energy = _centered_energy(frame)
    engine = _engine_for(grid, y.size)
    r2 = engine.fit_ratios(y) / energy
    np.clip(r2, 0.0, R2_CLAMP, out=r2)
    r2[~grid.valid] = np.nan
    return r2


class _GridEngine:
    """Precomputed solver state for fit_ratio_grid on one (grid, M) pair.

    For each bin the interleaved basis [c1, d1, c2, d2, ...] gives Gram
    matrices whose leading 2k x 2k blocks are the order-k problems, so a
    single lower-triangular inverse yields the projection energies of
    every nested order as a cumulative sum of squares.
    """

    def __init__(self, grid, length):
        if length < 2 * int(grid.valid_orders.max()):
            raise ValueError(
                f"frame of {length} samples cannot support k_max="
                f"{int(grid.valid_orders.max())} harmonics (need M >= 2K)"
            )
        self.grid = grid
        self.length = length
        bins = np.arange(grid.bin_lo, grid.bin_hi + 1)
        orders = np.arange(1, grid.k_max + 1)
        harmonic_bins = bins[:, None] * orders[None, :]
        # indices past Nyquist belong to masked states and are never read;
        # clip them so the spectrum gather stays in bounds
        self.harmonic_bins = np.minimum(harmonic_bins, grid.dft_size // 2)
        self.phase = np.exp(-2j * np.pi * self.harmonic_bins / grid.dft_size)
        self.groups = []
        m = np.arange(1, length + 1)
        for k in np.unique(grid.valid_orders):
            rows = np.nonzero(grid.valid_orders == k)[0]
            self.groups.append(self._build_group(rows, int(k), m))

    def _build_group(self, rows, order, m):
        omegas = self.grid.omegas[rows]
        harmonics = np.arange(1, order + 1)
        phases = omegas[:, None, None] * harmonics[None, :, None] * m[None, None, :]
        cols = np.empty((rows.size, 2 * order, self.length))
        cols[:, 0::2, :] = np.cos(phases)
        cols[:, 1::2, :] = np.sin(phases)
        grams = np.einsum("bim,bjm->bij", cols, cols)
        lower_inv = np.empty_like(grams)
        fallback = {}
        try:
            chol = np.linalg.cholesky(grams)
            lower_inv = np.tril(np.linalg.inv(chol))
        except np.linalg.LinAlgError:
            for i in range(rows.size):
                try:
                    chol = np.linalg.cholesky(grams[i])
                    lower_inv[i] = np.tril(np.linalg.inv(chol))
                except np.linalg.LinAlgError:
                    lower_inv[i] = 0.0
                    fallback[i] = _pinv_pieces(grams[i], order)
        return rows, order, lower_inv, fallback

    def fit_ratios(self, y):
        """Unnormalized projection energies, shape (grid.size, k_max), NaN padded."""
        spectrum = np.fft.rfft(y, n=self.grid.dft_size)
        probe = self.phase * spectrum[self.harmonic_bins]
        out = np.full((self.grid.size, self.grid.k_max), np.nan)
        for rows, order, lower_inv, fallback in self.groups:
            b = np.empty((rows.size, 2 * order))
            b[:, 0::2] = probe.real[rows, :order]
            b[:, 1::2] = -probe.imag[rows, :order]
            w = np.einsum("bij,bj->bi", lower_inv, b)
            out[rows, :order] = np.cumsum(w * w, axis=1)[:, 1::2]
            for i, pieces in fallback.items():
                out[rows[i], :order] = [
                    float(((vecs.T @ b[i, : 2 * k]) ** 2 / vals).sum())
                    for k, (vecs, vals) in enumerate(pieces, start=1)
                ]
        return out


def _pinv_pieces(gram, order):
    """Eigenvalue-thresholded pseudo-inverse factors for each nested order."""
    pieces = []
    for k in range(1, order + 1):
        sub = gram[: 2 * k, : 2 * k]
        vals, vecs = np.linalg.eigh(sub)
        keep = vals > _PINV_RTOL * np.trace(sub)
        if not np.any(keep):
            raise SingularBasisError("Gram matrix has no usable eigenvalues")
        pieces.append((vecs[:, keep], vals[keep]))
    return pieces


_ENGINES = weakref.WeakKeyDictionary()


def _engine_for(grid, length):
    per_grid = _ENGINES.setdefault(grid, {})
    engine = per_grid.get(length)
    if engine is None:
        engine = _GridEngine(grid, length)
        per_grid[length] = engine
    return engine
