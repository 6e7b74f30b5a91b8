"""Exact computations on elliptic fibrations of quartic surfaces with a line."""

from .exactalg import ExtElement, MPoly, RatFunc, UPoly
from .projgeom import INF, LineInP3, PlaneParam, ProjPoint, pencil_plane
from .cubiclaw import TernaryCubic, torsion_order, two_torsion_tangent
from .fibration import (
    QuarticSurfaceWithLine,
    branch_analysis,
    residual_cubic,
    singular_fiber_scan,
    trisection_two_torsion,
)
from .pointgen import ThreeLineConfig, qr_sequence, torsion_precheck

__version__ = "0.1.0"

__all__ = [
    "ExtElement",
    "MPoly",
    "RatFunc",
    "UPoly",
    "INF",
    "LineInP3",
    "PlaneParam",
    "ProjPoint",
    "pencil_plane",
    "TernaryCubic",
    "torsion_order",
    "two_torsion_tangent",
    "QuarticSurfaceWithLine",
    "branch_analysis",
    "residual_cubic",
    "singular_fiber_scan",
    "trisection_two_torsion",
    "ThreeLineConfig",
    "qr_sequence",
    "torsion_precheck",
]
