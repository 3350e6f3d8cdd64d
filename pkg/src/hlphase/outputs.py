"""CSV/JSON writers, run manifests and the bundled JSON schemas.

Numbers in CSV files use 17 significant digits.  JSON floats are written with
Python's shortest round-trip repr, which is equally deterministic.  JSON has no
infinity, so infinite variances are written as ``null`` next to a boolean
``infinite`` flag.
"""

from __future__ import annotations

import csv
import io
import json
import math
from importlib import resources
from pathlib import Path

import numpy as np

from .holevo import PhaseSweepResult

SCHEMA_VERSION = "v1"
EXPERIMENTAL_NOTE = "paper-reported, not reproduced"


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def json_number(x: float) -> float | None:
    x = float(x)
    return None if not math.isfinite(x) else x


def load_schema(name: str) -> dict:
    text = resources.files("hlphase").joinpath("schemas", f"{name}.{SCHEMA_VERSION}.json").read_text("utf-8")
    return json.loads(text)


def write_json(path: Path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n", encoding="utf-8")
    return path


def _write_rows(path: Path, header: list[str], rows) -> Path:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


def sweep_csv(path: Path, sweep: PhaseSweepResult) -> Path:
    """``phi,V_cond,mu`` plus one ``P_<label>`` column per detector outcome, if any."""
    header = ["phi", "V_cond", "mu"] + [f"P_{lab}" for lab in sweep.outcome_labels]
    rows = []
    for i, phi in enumerate(sweep.phases):
        row = [float(phi), float(sweep.conditional_variance[i]), float(sweep.sharpness[i])]
        if sweep.probabilities is not None and sweep.outcome_labels:
            row += [float(p) for p in sweep.probabilities[i]]
        rows.append(row)
    return _write_rows(path, header, rows)


def calibration_csv(rows: list[dict]) -> str:
    keys = ["phase", "unknown_hwp_angle", "unknown_encoded", "feedforward_hwp_angle", "feedforward_encoded"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys)
    for row in rows:
        writer.writerow([fmt(row[k]) for k in keys])
    return buf.getvalue()


def manifest(
    command: str, parameters: dict, output_paths: list[Path], seed: int | None, argv: list[str] | None = None
) -> dict:
    """Run record; ``argv`` is the argument list that reproduces the run, minus ``--out``."""
    from . import __version__

    return {
        "schema": f"manifest.{SCHEMA_VERSION}",
        "command": command,
        "argv": list(argv) if argv is not None else [command],
        "parameters": parameters,
        "output_paths": sorted(Path(p).name for p in output_paths),
        "seed": seed,
        "tool_version": __version__,
    }
