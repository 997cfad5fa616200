"""Normed volumes of largest inscribed polytopes in low-dimensional normed spaces."""

__version__ = "0.1.0"

from .geometry import (  # noqa: E402
    HalfspaceList,
    Polytope,
    central_symmetral,
    contains,
    convex_hull,
    linear_image,
    polar,
    support_point,
    volume,
)
from .volumes import MuResult, VolumeKind, mu, normed_volume, unit_ball_volume  # noqa: E402

__all__ = [
    "HalfspaceList", "Polytope", "central_symmetral", "contains", "convex_hull", "linear_image",
    "polar", "support_point", "volume", "MuResult", "VolumeKind", "mu", "normed_volume",
    "unit_ball_volume",
]
