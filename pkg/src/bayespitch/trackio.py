"""Machine-readable pitch-track serialization (CSV and JSON)."""

import csv
import json

from .tracker import PitchEstimate

CSV_FIELDS = ("frame_index", "time_s", "voiced", "f0_hz", "order", "p_unvoiced")


def write_track(estimates, path, format="csv"):
    """Write per-frame estimates to ``path``.

    CSV columns are exactly frame_index,time_s,voiced,f0_hz,order,
    p_unvoiced with floats at 6 decimal places; JSON mirrors the same
    fields as a list of objects.
    """
    if format == "csv":
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(CSV_FIELDS)
            for est in estimates:
                writer.writerow(
                    [
                        est.frame_index,
                        f"{est.time:.6f}",
                        int(est.voiced),
                        f"{est.f0:.6f}",
                        est.order,
                        f"{est.p_unvoiced:.6f}",
                    ]
                )
    elif format == "json":
        records = [
            {
                "frame_index": est.frame_index,
                "time_s": round(est.time, 6),
                "voiced": bool(est.voiced),
                "f0_hz": round(est.f0, 6),
                "order": est.order,
                "p_unvoiced": round(est.p_unvoiced, 6),
            }
            for est in estimates
        ]
        with open(path, "w") as handle:
            json.dump(records, handle, indent=2)
            handle.write("\n")
    else:
        raise ValueError(f"unknown track format {format!r}")


def read_track(path, format="csv"):
    """Read estimates written by write_track back into PitchEstimate objects."""
    if format == "csv":
        with open(path, newline="") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_FIELDS:
                raise ValueError(f"{path}: not a pitch-track CSV (bad header)")
            rows = list(reader)
        return [
            PitchEstimate(
                frame_index=int(row["frame_index"]),
                time=float(row["time_s"]),
                voiced=bool(int(row["voiced"])),
                f0=float(row["f0_hz"]),
                order=int(row["order"]),
                p_unvoiced=float(row["p_unvoiced"]),
            )
            for row in rows
        ]
    if format == "json":
        with open(path) as handle:
            records = json.load(handle)
        return [
            PitchEstimate(
                frame_index=int(rec["frame_index"]),
                time=float(rec["time_s"]),
                voiced=bool(rec["voiced"]),
                f0=float(rec["f0_hz"]),
                order=int(rec["order"]),
                p_unvoiced=float(rec["p_unvoiced"]),
            )
            for rec in records
        ]
    raise ValueError(f"unknown track format {format!r}")
