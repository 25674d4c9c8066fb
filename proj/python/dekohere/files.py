"""Readers for the CLI output files (trajectory CSV, summary CSV, report)."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

TRAJECTORY_COLUMNS = ("t", "rho00", "re_rho01", "im_rho01", "abs_rho01", "coeff_mu", "coeff_nu")
SUMMARY_COLUMNS = ("t_c", "residual", "t2", "suppression_ratio")


def _read_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty CSV file")
    return rows[0], rows[1:]


def read_trajectory(path) -> dict[str, np.ndarray]:
    """Load a trajectory CSV into one float array per column.

    Raises ValueError naming the file if the header differs from the contract.
    """
    path = Path(path)
    header, rows = _read_rows(path)
    if tuple(header) != TRAJECTORY_COLUMNS:
        raise ValueError(f"{path}: unexpected header {','.join(header)}")
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def read_summary(path) -> list[dict[str, object]]:
    """Load summary.csv. The first row is the free-decay reference (t_c = "free");
    a T2 that was never reached is returned as None."""
    path = Path(path)
    header, rows = _read_rows(path)
    if tuple(header) != SUMMARY_COLUMNS:
        raise ValueError(f"{path}: unexpected header {','.join(header)}")
    out = []
    for t_c, residual, t2, ratio in rows:
        out.append(
            {
                "t_c": t_c if t_c == "free" else float(t_c),
                "residual": float(residual),
                "t2": None if t2 == "not reached" else float(t2),
                "suppression_ratio": float(ratio),
            }
        )
    return out


def read_report(path) -> dict[str, str]:
    """Load a key=value report into a dict, preserving line order."""
    report = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}: malformed report line {line!r}")
        report[key.strip()] = value.strip()
    return report
