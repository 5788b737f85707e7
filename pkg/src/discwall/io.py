"""JSON scene files."""

from __future__ import annotations

import json
import math
from pathlib import Path

from .charges import Charge
from .errors import SceneError
from .scene import Scene, Singularity


def _complex(v, where: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise SceneError(f"{where}: expected a number or [re, im]")


def _charge(v, where: str, k: int) -> Charge:
    try:
        if isinstance(v, str):
            return Charge.parse(v, k)
        if isinstance(v, (list, tuple)):
            c = Charge.from_vector([int(x) for x in v])
            return c if c.flux else Charge(c.a, c.b, (0,) * k)
    except (ValueError, TypeError) as e:
        raise SceneError(f"{where}: {e}") from None
    raise SceneError(f"{where}: expected a charge such as \"1,0|\"")


def scene_from_dict(data: dict) -> Scene:
    if not isinstance(data, dict):
        raise SceneError("scene: expected an object")
    for key in ("chart", "singularities", "basepoint"):
        if key not in data:
            raise SceneError(f"{key}: missing")
    chart = data["chart"]
    if not (isinstance(chart, list) and len(chart) == 4):
        raise SceneError("chart: expected [xmin, xmax, ymin, ymax]")
    flux = [_complex(z, f"flux_values[{i}]") for i, z in enumerate(data.get("flux_values", []))]
    k = len(flux)
    sings = []
    for i, s in enumerate(data["singularities"]):
        where = f"singularities[{i}]"
        if "position" not in s or "thimble" not in s:
            raise SceneError(f"{where}: needs position and thimble")
        sings.append(Singularity(
            position=_complex(s["position"], where + ".position"),
            thimble=_charge(s["thimble"], where + ".thimble", k),
            slope=_complex(s.get("slope", 1.0), where + ".slope"),
            cut_angle=float(s.get("cut_angle", -math.pi / 2)),
        ))
    return Scene(
        chart=tuple(float(x) for x in chart),
        singularities=tuple(sings),
        basepoint=_complex(data["basepoint"], "basepoint"),
        flux_values=tuple(flux),
        name=str(data.get("name", "")),
    )


def scene_to_dict(scene: Scene) -> dict:
    return {
        "name": scene.name,
        "chart": list(scene.chart),
        "basepoint": [scene.basepoint.real, scene.basepoint.imag],
        "flux_values": [[z.real, z.imag] for z in scene.flux_values],
        "singularities": [
            {
                "position": [s.position.real, s.position.imag],
                "thimble": str(s.thimble)[1:-1],
                "slope": [complex(s.slope).real, complex(s.slope).imag],
                "cut_angle": s.cut_angle,
            }
            for s in scene.singularities
        ],
    }


def load_scene(path, check: bool = True) -> Scene:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise SceneError(f"{path}: invalid JSON ({e})") from None
    scene = scene_from_dict(data)
    return scene.check() if check else scene


def dump_scene(scene: Scene, path) -> None:
    Path(path).write_text(json.dumps(scene_to_dict(scene), indent=2) + "\n")
