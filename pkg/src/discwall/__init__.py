"""Holomorphic-disc wall-crossing on a model affine base."""

from .charges import BasePath, Charge, pair, parallel_transport, picard_lefschetz
from .central_charge import central_charge, disc_area, support_phase
from .errors import (BasisError, DegenerateChargeError, DiscwallError, GeometryError, InvalidWallError,
                     SceneError, UnsupportedClassError, WallAmbiguityError)
from .invariants import InvariantTable, cross_wall, gv_invariants, invariant_at, table_at
from .io import load_scene, scene_from_dict
from .scene import Scene, Singularity
from .series import FormalSeries, Wall, factorize_scattering

__version__ = "0.1.0"
