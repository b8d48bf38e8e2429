"""Closed-form log marginal likelihoods for the voiced and null hypotheses.

Under a scale-invariant prior on the noise variance and a unit-information
Gaussian prior on the harmonic weights (scaled by a hyperparameter g with
density proportional to (1+g)^(-delta/2)), the per-frame evidence of a
voiced state reduces to a Gauss hypergeometric function of the fit ratio:

    p(y | omega, K, voiced) = (delta-2)/(2K+delta-2)
                              * 2F1(M/2, 1; (2K+delta)/2; R^2) * m_M(y)

with the null evidence m_M(y) = Gamma(M/2) / (pi ||y||^2)^(M/2).
Everything is computed in the log domain; the 2F1 values routinely
exceed the float64 range in linear space.
"""

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.special import gammaln

from .exceptions import DegenerateFrameError, NonConvergenceError
from .harmonic import Frame

# Above this argument the direct series needs ~ a/(1-z) terms; switch to
# an arbitrary-precision evaluation instead.
_SERIES_Z_MAX = 0.999

_ITERATION_CAP = 10**7

# Status codes returned by the series kernel.
_OK = 0
_CAP_HIT = 1


@dataclass
class GPriorConfig:
    """Hyperprior setting for the weight-scale parameter g.

    ``delta`` must exceed 2 or the hyperprior is improper.  The default
    of 4 makes the normalizing constant (delta-2)/2 equal to one.
    """

    delta: float = 4.0

    def __post_init__(self):
        if not self.delta > 2.0:
            raise ValueError(f"delta must exceed 2, got {self.delta!r}")


@dataclass
class LikelihoodSurface:
    """Per-frame log likelihoods over the discrete state space.

    ``log_voiced[f, k]`` is log p(y | omega_f, order k+1, voiced) and
    includes the common additive term ``log_null``; states masked by the
    Nyquist rule hold -inf.
    """

    log_voiced: np.ndarray
    log_null: float
    frame_index: int


@njit(cache=True)
def _series_kernel(a, c, z, out_log, status):
    """Scaled forward term recurrence for log 2F1(a, 1; c_i; z_i).

    Terms are accumulated in linear space and renormalized against a
    running threshold so the partial sums never overflow; the log of the
    accumulated scale is added back at the end.
    """
    for i in range(z.shape[0]):
        zi = z[i]
        ci = c[i]
        if zi <= 0.0:
            out_log[i] = 0.0
            status[i] = _OK
            continue
        term = 1.0
        total = 1.0
        log_scale = 0.0
        j = 0
        converged = False
        while j < _ITERATION_CAP:
            term *= zi * (a + j) / (ci + j)
            total += term
            j += 1
            if term < total * 1e-17:
                converged = True
                break
            if total > 1e250:
                log_scale += np.log(total)
                term /= total
                total = 1.0
        out_log[i] = log_scale + np.log(total)
        status[i] = _OK if converged else _CAP_HIT


def _log_hyp2f1_highz(a, c, z):
    """Arbitrary-precision evaluation for z close to 1.

    The direct series would need ~a/(1-z) terms here, and the Euler
    transformation that shortens it produces alternating terms of
    magnitude ~exp(a) that cancel catastrophically in float64, so this
    regime is delegated to mpmath.
    """
    import mpmath as mp

    with mp.workdps(30):
        return float(mp.log(mp.hyp2f1(a, 1, c, z)))


def _validate_2f1_args(a, c, z):
    if not a > 0 or not c > 0:
        raise ValueError(f"series parameters must be positive, got a={a}, c={c}")
    z = np.asarray(z, dtype=np.float64)
    if np.any(z < 0.0) or np.any(z >= 1.0):
        raise ValueError("series argument z must lie in [0, 1)")
    return z


def log_gauss_2f1_b1(a, c, z):
    """log 2F1(a, 1; c; z) for a, c > 0 and 0 <= z < 1.

    Raises:
        ValueError: if z falls outside [0, 1).
        NonConvergenceError: if the iteration cap is hit; carries the
            log of the partial sum.
    """
    z = float(_validate_2f1_args(a, c, z))
    if z > _SERIES_Z_MAX:
        return _log_hyp2f1_highz(a, c, z)
    out = np.empty(1)
    status = np.empty(1, dtype=np.int64)
    _series_kernel(float(a), np.array([float(c)]), np.array([z]), out, status)
    if status[0] == _CAP_HIT:
        raise NonConvergenceError(
            f"2F1 series hit the {_ITERATION_CAP} iteration cap at "
            f"a={a}, c={c}, z={z}",
            log_partial=float(out[0]),
        )
    return float(out[0])


def _log_gauss_2f1_b1_vec(a, c, z):
    """Vectorized log 2F1(a, 1; c; z) over matching c/z arrays."""
    z = _validate_2f1_args(a, float(np.min(c)), z)
    c = np.broadcast_to(np.asarray(c, dtype=np.float64), z.shape).ravel()
    flat = z.ravel()
    out = np.empty(flat.shape)
    status = np.zeros(flat.shape, dtype=np.int64)
    low = flat <= _SERIES_Z_MAX
    if np.any(low):
        out_low = np.empty(int(low.sum()))
        status_low = np.empty(int(low.sum()), dtype=np.int64)
        _series_kernel(float(a), c[low], flat[low], out_low, status_low)
        out[low] = out_low
        status[low] = status_low
    for i in np.nonzero(~low)[0]:
        out[i] = _log_hyp2f1_highz(a, c[i], flat[i])
    if np.any(status == _CAP_HIT):
        i = int(np.nonzero(status == _CAP_HIT)[0][0])
        raise NonConvergenceError(
            f"2F1 series hit the {_ITERATION_CAP} iteration cap at "
            f"a={a}, c={c[i]}, z={flat[i]}",
            log_partial=float(out[i]),
        )
    return out.reshape(z.shape)


def log_null_likelihood(frame):
    """Log evidence of the noise-only hypothesis for one frame.

    Returns log Gamma(M/2) - (M/2) log(pi ||y||^2); the samples are used
    exactly as given.

    Raises:
        DegenerateFrameError: if the frame has zero energy.
    """
    y = frame.samples if isinstance(frame, Frame) else np.asarray(frame, dtype=np.float64)
    m = y.size
    energy = float(y @ y)
    if energy <= 0.0:
        raise DegenerateFrameError("zero-energy frame has no null likelihood")
    return float(gammaln(m / 2.0) - (m / 2.0) * (math.log(math.pi) + math.log(energy)))


def log_voiced_likelihood(r2, order, length, cfg, log_null):
    """Log evidence of one voiced state given its fit ratio.

    Args:
        r2: fit ratio in [0, 1).
        order: harmonic order K >= 1.
        length: frame length M, must exceed 2K.
        cfg: GPriorConfig with the hyperprior parameter delta.
        log_null: log null evidence of the same frame.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    if length <= 2 * order:
        raise ValueError(f"need M > 2K, got M={length}, K={order}")
    delta = cfg.delta
    penalty = math.log(delta - 2.0) - math.log(2.0 * order + delta - 2.0)
    series = log_gauss_2f1_b1(length / 2.0, (2.0 * order + delta) / 2.0, r2)
    return log_null + penalty + series


def likelihood_surface(frame, r2, cfg):
    """Evaluate the voiced log evidence at every valid grid state.

    Args:
        frame: the (already preprocessed) frame the fit ratios came from.
        r2: matrix from fit_ratio_grid, NaN at masked states.
        cfg: GPriorConfig.

    Returns:
        LikelihoodSurface with -inf at masked states.
    """
    r2 = np.asarray(r2, dtype=np.float64)
    log_null = log_null_likelihood(frame)
    m = frame.size
    k_max = r2.shape[1]
    if m <= 2 * k_max:
        raise ValueError(f"need M > 2*k_max, got M={m}, k_max={k_max}")
    delta = cfg.delta
    orders = np.arange(1, k_max + 1, dtype=np.float64)
    penalty = np.log(delta - 2.0) - np.log(2.0 * orders + delta - 2.0)
    c = np.broadcast_to((2.0 * orders + delta) / 2.0, r2.shape)
    valid = ~np.isnan(r2)
    log_voiced = np.full(r2.shape, -np.inf)
    if np.any(valid):
        series = _log_gauss_2f1_b1_vec(m / 2.0, c[valid], r2[valid])
        log_voiced[valid] = log_null + np.broadcast_to(penalty, r2.shape)[valid] + series
    return LikelihoodSurface(
        log_voiced=log_voiced,
        log_null=log_null,
        frame_index=frame.index if isinstance(frame, Frame) else 0,
    )
