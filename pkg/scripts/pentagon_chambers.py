"""Sample the pentagon scene on a grid and print the invariant table in each chamber."""

import argparse
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from discwall.charges import Charge
from discwall.errors import WallAmbiguityError
from discwall.invariants import table_at
from discwall.io import load_scene
from discwall.series import format_rational

ROOT = Path(__file__).resolve().parents[1]


@dataclass
class Config:
    scene: str = str(ROOT / "scenes" / "pentagon.json")
    order: int = 4
    grid: int = 9
    charge: str = "1,1"


def main(cfg: Config):
    scene = load_scene(cfg.scene)
    g = scene._pad(Charge.parse(cfg.charge))
    x0, x1, y0, y1 = scene.chart
    seen = {}
    for y in np.linspace(y1, y0, cfg.grid):
        row = []
        for x in np.linspace(x0, x1, cfg.grid):
            u = complex(x, y) * 0.95 + 0.013j  # keep off the cuts
            try:
                table, _ = table_at(u, scene, cfg.order)
            except WallAmbiguityError:
                row.append("  ?")
                continue
            row.append(f"{format_rational(table.get(g)):>3}")
            key = tuple(sorted((str(c), format_rational(v)) for c, v in table.nonzero().items()))
            seen.setdefault(key, u)
        print(" ".join(row))
    print(f"\n{len(seen)} distinct tables up to order {cfg.order}")
    for key, u in seen.items():
        print(f"  sample {u.real:+.2f}{u.imag:+.2f}i: " + ", ".join(f"{c}={v}" for c, v in key))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, val in vars(Config()).items():
        ap.add_argument(f"--{name}", type=type(val), default=val)
    main(Config(**vars(ap.parse_args())))
