"""Write the nu(t) curves of every figure preset and summarize each curve.

Usage: python3 scripts/reproduce_figures.py [OUT_DIR]
"""

from __future__ import annotations

import sys
from pathlib import Path

from gaussevo.cli import cmd_figure
from gaussevo.config import FIGURES


def main(out_dir: str = "figures_out") -> int:
    root = Path(out_dir)
    for figure in sorted(FIGURES):
        print(f"== {figure}")
        cmd_figure(figure, root / figure)
    print(f"CSV files written under {root.resolve()}")
    return 0


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:2]))
