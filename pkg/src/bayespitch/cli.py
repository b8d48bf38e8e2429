"""Command-line interface: track, eval, synth, and plotdata subcommands."""

import argparse
import sys

import numpy as np

from . import __version__
from .audio import read_audio, synth_signal, write_audio
from .exceptions import AlignmentError, AudioFormatError
from .metrics import eval_ger, eval_mae, eval_ter, read_ground_truth
from .tracker import PitchTracker
from .trackio import read_track, write_track


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="bayespitch",
        description="Bayesian harmonic-model pitch tracker",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    track = sub.add_parser("track", help="track the pitch of a WAV file")
    track.add_argument("input", help="mono WAV file (16-bit PCM or 32-bit float)")
    track.add_argument("--out", required=True, help="output track path")
    track.add_argument("--json", action="store_true", help="write JSON instead of CSV")
    track.add_argument("--fmin", type=float, default=70.0, help="lowest pitch, Hz")
    track.add_argument("--fmax", type=float, default=400.0, help="highest pitch, Hz")
    track.add_argument("--kmax", type=int, default=10, help="max harmonic order")
    track.add_argument("--frame-ms", type=float, default=25.0)
    track.add_argument("--hop-ms", type=float, default=10.0)
    track.add_argument("--delta", type=float, default=4.0, help="g-hyperprior parameter")
    track.add_argument(
        "--sigma-omega2", type=float, default=None,
        help="pitch transition variance (default 16*pi^2/fs^2)",
    )
    track.add_argument("--sigma-k2", type=float, default=1.0, help="order transition variance")
    track.add_argument("--p-u1u0", type=float, default=0.4, help="P(voiced | prev unvoiced)")
    track.add_argument("--p-u0u1", type=float, default=0.3, help="P(unvoiced | prev voiced)")
    track.add_argument(
        "--prewhiten", default="off",
        help="off | adaptive | known:<noise.wav>",
    )
    track.add_argument("--lp-order", type=int, default=30, help="prewhitening LP order")
    track.add_argument(
        "--oracle-voicing", action="store_true",
        help="report the voiced-states argmax in every frame (for MAE evaluation)",
    )

    ev = sub.add_parser("eval", help="score an estimated track against a reference")
    ev.add_argument("--est", required=True, help="estimated track CSV")
    ev.add_argument("--ref", required=True, help="reference text file (time_s f0_hz [x])")
    ev.add_argument("--metric", choices=("ter", "ger", "mae", "all"), default="all")

    synth = sub.add_parser("synth", help="synthesize a harmonic tone in white noise")
    synth.add_argument("--f0", type=float, required=True)
    synth.add_argument("--k", type=int, required=True, help="number of harmonics")
    synth.add_argument("--fs", type=float, default=16000.0)
    synth.add_argument("--dur", type=float, required=True, help="duration, seconds")
    synth.add_argument("--snr-db", type=float, default=None, help="omit for a clean tone")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", required=True, help="output WAV path")

    plot = sub.add_parser("plotdata", help="emit two-column time/f0 text from a track")
    plot.add_argument("--est", required=True, help="estimated track CSV")
    return parser


def _parse_prewhiten(spec):
    if spec == "off":
        return "off", None
    if spec == "adaptive":
        return "adaptive", None
    if spec.startswith("known:"):
        path = spec.split(":", 1)[1]
        if not path:
            raise ValueError("known prewhitening needs a noise file: known:<noise.wav>")
        samples, _ = read_audio(path)
        return "known", samples
    raise ValueError(f"unknown --prewhiten value {spec!r}")


def _cmd_track(args):
    samples, rate = read_audio(args.input)
    mode, reference = _parse_prewhiten(args.prewhiten)
    tracker = PitchTracker(
        sample_rate=rate,
        f_min=args.fmin,
        f_max=args.fmax,
        k_max=args.kmax,
        frame_ms=args.frame_ms,
        hop_ms=args.hop_ms,
        delta=args.delta,
        sigma_omega2=args.sigma_omega2,
        sigma_k2=args.sigma_k2,
        p_voiced_given_unvoiced=args.p_u1u0,
        p_unvoiced_given_voiced=args.p_u0u1,
        whiten=mode,
        lp_order=args.lp_order,
        noise_reference=reference,
    ).fit()
    estimates = tracker.track(samples, oracle_voicing=args.oracle_voicing)
    write_track(estimates, args.out, format="json" if args.json else "csv")
    return 0


def _cmd_eval(args):
    estimates = read_track(args.est)
    truth = read_ground_truth(args.ref)
    metrics = {}
    if args.metric in ("ter", "all"):
        metrics["ter"] = eval_ter(estimates, truth)
    if args.metric in ("ger", "all"):
        metrics["ger"] = eval_ger(estimates, truth)
    if args.metric in ("mae", "all"):
        metrics["mae"] = eval_mae(estimates, truth)
    for name, value in metrics.items():
        print(f"{name}={value:.6f}")
    return 0


def _cmd_synth(args):
    samples = synth_signal(
        args.f0, args.k, args.fs, args.dur, snr_db=args.snr_db, seed=args.seed
    )
    peak = np.max(np.abs(samples))
    if peak > 1.0:
        samples = samples / (peak * 1.0001)
    write_audio(args.out, samples, args.fs)
    return 0


def _cmd_plotdata(args):
    for est in read_track(args.est):
        print(f"{est.time:.6f} {est.f0:.6f}")
    return 0


_COMMANDS = {
    "track": _cmd_track,
    "eval": _cmd_eval,
    "synth": _cmd_synth,
    "plotdata": _cmd_plotdata,
}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, AudioFormatError, AlignmentError, FileNotFoundError, OSError) as exc:
        print(f"bayespitch {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
