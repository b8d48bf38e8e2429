"""Voicing and pitch-accuracy metrics against a reference track.

Estimates and reference entries are paired by nearest time within half
an estimate hop; unmatched frames drop out of every metric.  Reference
f0 values of zero (or below) mark unvoiced frames and an optional flag
excludes individual entries entirely.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import AlignmentError

GROSS_ERROR_FRACTION = 0.2


@dataclass
class GroundTruth:
    """Reference pitch track.

    ``f0`` is 0 (or negative) for unvoiced frames; ``excluded`` marks
    entries that should not enter any metric.
    """

    times: np.ndarray
    f0: np.ndarray
    excluded: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.float64)
        self.f0 = np.asarray(self.f0, dtype=np.float64)
        self.excluded = np.asarray(self.excluded, dtype=bool)
        if not (self.times.size == self.f0.size == self.excluded.size):
            raise ValueError("ground-truth arrays must have equal length")
        if self.times.size == 0:
            raise ValueError("ground truth is empty")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("ground-truth times must be strictly increasing")


def read_ground_truth(path):
    """Parse a reference file with one ``time_s f0_hz [x]`` line each.

    f0 <= 0 marks an unvoiced frame; a third column ``x`` marks the
    entry excluded.  Blank lines and ``#`` comments are skipped.
    """
    times, f0, excluded = [], [], []
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ValueError(f"{path}:{lineno}: expected 'time f0 [x]', got {raw!r}")
            times.append(float(parts[0]))
            f0.append(float(parts[1]))
            excluded.append(len(parts) == 3 and parts[2].lower() == "x")
    return GroundTruth(times=np.array(times), f0=np.array(f0), excluded=np.array(excluded, dtype=bool))


def _pair(estimates, truth):
    """Match estimates to reference entries by nearest time within hop/2."""
    if not estimates:
        raise AlignmentError("no estimates to evaluate")
    est_times = np.array([e.time for e in estimates])
    if est_times.size > 1:
        tolerance = float(np.median(np.diff(est_times))) / 2.0
    else:
        tolerance = np.inf
    keep_times = truth.times[~truth.excluded]
    keep_f0 = truth.f0[~truth.excluded]
    if keep_times.size == 0:
        raise AlignmentError("every ground-truth entry is excluded")
    right = np.searchsorted(keep_times, est_times)
    pairs = []
    for i, t in enumerate(est_times):
        candidates = [j for j in (right[i] - 1, right[i]) if 0 <= j < keep_times.size]
        j = min(candidates, key=lambda j: abs(keep_times[j] - t), default=None)
        if j is not None and abs(keep_times[j] - t) <= tolerance:
            pairs.append((estimates[i], float(keep_f0[j])))
    if not pairs:
        raise AlignmentError("estimates and ground truth share no time span")
    return pairs


def eval_ter(estimates, truth):
    """Total error ratio: fraction of frames with a wrong voicing decision."""
    pairs = _pair(estimates, truth)
    wrong = sum(1 for est, ref_f0 in pairs if est.voiced != (ref_f0 > 0))
    return wrong / len(pairs)


def eval_ger(estimates, truth):
    """Gross error ratio over reference-voiced frames.

    An estimate is gross when it deviates from the reference by more
    than 20%; frames the tracker wrongly called unvoiced contribute
    f0 = 0 and therefore count as gross.
    """
    pairs = [(est, f) for est, f in _pair(estimates, truth) if f > 0]
    if not pairs:
        raise AlignmentError("ground truth has no voiced frames to score")
    gross = sum(
        1
        for est, ref_f0 in pairs
        if abs((est.f0 if est.voiced else 0.0) - ref_f0) > GROSS_ERROR_FRACTION * ref_f0
    )
    return gross / len(pairs)


def eval_mae(estimates_oracle_voiced, truth):
    """Mean absolute f0 error in Hz over reference-voiced frames.

    Expects estimates from an oracle-voicing pass, i.e. each frame's f0
    is the voiced-states argmax regardless of the voicing decision.
    """
    pairs = [(est, f) for est, f in _pair(estimates_oracle_voiced, truth) if f > 0]
    if not pairs:
        raise AlignmentError("ground truth has no voiced frames to score")
    return float(np.mean([abs(est.f0 - ref_f0) for est, ref_f0 in pairs]))
