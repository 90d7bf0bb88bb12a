"""Persistence: .field.json spectral fields, report JSON/CSV pairs.

Fields are stored as explicit (re, im) pairs in row-major lattice order;
Python's float serialization is the shortest round-tripping representation,
so save/load is bit-exact.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .lattice import SpectralField, TorusMetric


def save_field(field: SpectralField, path) -> None:
    flat = field.coeffs.ravel()
    doc = {
        "metric": {
            "theta": list(field.metric.theta),
            "laplace_scale": field.metric.laplace_scale,
        },
        "bandlimit": field.bandlimit,
        "coeffs": [[float(z.real), float(z.imag)] for z in flat],
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_field(path) -> SpectralField:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read field file {path}: {exc}") from exc
    for key in ("metric", "bandlimit", "coeffs"):
        if key not in doc:
            raise ConfigError(f"field file {path} missing key {key!r}")
    metric = TorusMetric(tuple(doc["metric"]["theta"]), doc["metric"]["laplace_scale"])
    M = int(doc["bandlimit"])
    nn = 2 * M + 1
    pairs = np.asarray(doc["coeffs"], dtype=float)
    if pairs.shape != (nn**3, 2):
        raise ConfigError(
            f"field file {path}: expected {nn**3} coefficient pairs, got {pairs.shape}"
        )
    coeffs = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(nn, nn, nn)
    return SpectralField(metric, M, coeffs)


def write_report(report, directory, name: str) -> tuple[Path, Path]:
    """Persist an ExperimentReport as <name>.json plus <name>.csv."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    jpath = directory / f"{name}.json"
    cpath = directory / f"{name}.csv"
    doc = report.to_json_dict()
    jpath.write_text(json.dumps(doc, indent=2, default=str), encoding="utf-8")
    with cpath.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=["preset", "N", "trial", "lhs", "rhs", "ratio"])
        writer.writeheader()
        for row in doc["ratios"]:
            writer.writerow({"preset": doc["preset"], **row})
    return jpath, cpath


def summarize_reports(directory) -> list[dict]:
    """Merge every report CSV under a directory into one row list."""
    rows = []
    for path in sorted(Path(directory).glob("**/*.csv")):
        with path.open(newline="", encoding="utf-8") as fh:
            rows.extend(csv.DictReader(fh))
    return rows


def write_summary(rows: list[dict], path) -> None:
    fieldnames = ["preset", "N", "trial", "lhs", "rhs", "ratio"]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in fieldnames})
