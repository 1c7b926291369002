"""Bisect every threshold quoted for the figure presets and compare with the closed forms.

Usage: python3 scripts/threshold_table.py
"""

from __future__ import annotations

import math
import time

from gaussevo.cli import ThresholdSpec, cmd_threshold
from gaussevo.config import preset_config

# (label, preset, scanned parameter, bracket, criterion, closed-form value)
ROWS = [
    ("HPZ eta2", "fig1-left-solid", "eta2", (0.0, 2.0), "stationary_nu_zero", 0.875),
    ("ConjugateHPZ eta2", "fig1-right-solid", "eta2", (-4.0, 0.0), "stationary_nu_zero", -2.125),
    ("GeneralizedCL theta2 (+)", "fig2-right-solid", "theta2", (0.0, 1.0), "cp_boundary", math.sqrt(1 - 1 / 1.44)),
    ("GeneralizedCL theta2 (-)", "fig2-right-solid", "theta2", (-1.0, 0.0), "cp_boundary", -math.sqrt(1 - 1 / 1.44)),
    ("GeneralizedKL1 theta1 (+)", "fig3-left-solid", "theta1", (0.0, 1.9), "stationary_nu_zero", math.sqrt(11) / 3),
    ("GeneralizedKL1 theta1 (-)", "fig3-left-solid", "theta1", (-1.9, 0.0), "stationary_nu_zero", -math.sqrt(11) / 3),
    ("GeneralizedKL2 theta1 (+)", "fig3-right-solid", "theta1", (1.0, 2.0), "overdamped_boundary", 4 / math.sqrt(5)),
    ("GeneralizedKL2 theta1 (-)", "fig3-right-solid", "theta1", (-2.0, -1.0), "overdamped_boundary", -4 / math.sqrt(5)),
    ("HPZ eta2, trajectory", "fig1-left-solid", "eta2", (-1.5, -1.0), "min_traj_nu_zero", float("nan")),
]


def main() -> int:
    print(f"{'threshold':28s} {'bisection':>12s} {'closed form':>12s} {'seconds':>8s}")
    for label, preset, scan, (lo, hi), crit, exact in ROWS:
        start = time.perf_counter()
        root = cmd_threshold(ThresholdSpec(scan, lo, hi, crit, 1e-9), preset_config(preset))
        print(f"{label:28s} {root:12.6f} {exact:12.6f} {time.perf_counter() - start:8.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
