"""Tabulated curves for the expectation and normalized-density figures."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .density import DistributionParams, density_limit, density_normalized, expectation_modulus_sq

FIG1_LEFT_N = (2, 3, 5, 10)
FIG1_RIGHT_D = (1, 2, 3, 5)
FIG2_LEFT_N = (10, 50, 100)
FIG2_RIGHT_N = (2, 3, 5)


def _grid(stop: float, step: float, start: float = 0.0) -> np.ndarray:
    count = int(round((stop - start) / step))
    return start + step * np.arange(count + 1)


def fig1_left(d_max: float = 10.0, d_step: float = 0.05):
    """E|lambda|^2 as a function of d for several n."""
    header = ["d"] + [f"n{n}" for n in FIG1_LEFT_N]
    rows = [[d] + [expectation_modulus_sq(DistributionParams(n, d)) for n in FIG1_LEFT_N] for d in _grid(d_max, d_step, 1.0)]
    return header, rows


def fig1_right(n_max: int = 30):
    """E|lambda|^2 as a function of n for several d."""
    header = ["n"] + [f"d{d}" for d in FIG1_RIGHT_D]
    rows = [[n] + [expectation_modulus_sq(DistributionParams(n, d)) for d in FIG1_RIGHT_D] for n in range(1, n_max + 1)]
    return header, rows


def _fig2(ns, d: float, tau_max: float, tau_step: float):
    tau = _grid(tau_max, tau_step)
    cols = [density_normalized(DistributionParams(n, d), tau) for n in ns]
    cols.append(density_limit(d, tau))
    header = ["tau"] + [f"n{n}" for n in ns] + ["limit"]
    rows = np.column_stack([tau] + cols).tolist()
    return header, rows


def fig2_left(tau_max: float = 2.0, tau_step: float = 0.01):
    """Normalized densities for d = 1 and the indicator limit."""
    return _fig2(FIG2_LEFT_N, 1.0, tau_max, tau_step)


def fig2_right(tau_max: float = 3.0, tau_step: float = 0.01):
    """Normalized densities for d = 2 and the 2 e^{-2 tau} limit."""
    return _fig2(FIG2_RIGHT_N, 2.0, tau_max, tau_step)


def format_float(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format_float(x) for x in row])


def write_figures(out_dir, tau_max: float | None = None, tau_step: float | None = None) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    kw = {}
    if tau_max is not None:
        kw["tau_max"] = tau_max
    if tau_step is not None:
        kw["tau_step"] = tau_step
    tables = {
        "fig1_left.csv": fig1_left(),
        "fig1_right.csv": fig1_right(),
        "fig2_left.csv": fig2_left(**kw),
        "fig2_right.csv": fig2_right(**kw),
    }
    paths = []
    for name, (header, rows) in tables.items():
        write_csv(out / name, header, rows)
        paths.append(out / name)
    return paths
