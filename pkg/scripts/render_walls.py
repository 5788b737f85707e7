"""Render walls, attractor rays and tropical discs of a scene to SVG."""

import argparse
from dataclasses import dataclass
from pathlib import Path

from discwall import svg
from discwall.affine import attractor_ray, marginal_wall
from discwall.charges import Charge
from discwall.io import load_scene
from discwall.tropical import tropicalize

ROOT = Path(__file__).resolve().parents[1]


@dataclass
class Config:
    scene: str = str(ROOT / "scenes" / "pentagon.json")
    charge: str = "1,1"
    point: str = "0,2"
    order: int = 6
    out: str = "walls.svg"


def main(cfg: Config):
    scene = load_scene(cfg.scene)
    g = scene._pad(Charge.parse(cfg.charge))
    x, y = (float(t) for t in cfg.point.split(","))
    u = complex(x, y)
    a, b = scene.thimbles[:2] if len(scene.thimbles) >= 2 else (scene.thimbles[0], g)
    walls = marginal_wall(a, b, scene) + (marginal_wall(a, -b, scene) if a != -b else [])
    rays = [attractor_ray(g, u, scene)]
    discs = tropicalize(g, u, cfg.order, scene)
    Path(cfg.out).write_text(svg.render(scene, walls=walls, rays=rays, discs=discs, title=f"{g} at {cfg.point}"))
    print(f"{len(walls)} wall(s), {len(discs)} disc(s) -> {cfg.out}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, val in vars(Config()).items():
        ap.add_argument(f"--{name}", type=type(val), default=val)
    main(Config(**vars(ap.parse_args())))
