"""Low-dimensional convex geometry on vertex-list polytopes.

Bodies are stored as their extreme points. Hulls in the plane use a
monotone chain; in dimensions 3 to 6 they are delegated to Qhull through
``scipy.spatial``. Volumes are always computed here by fanning the
simplicial boundary from an interior point.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull
from scipy.spatial import QhullError

MIN_DIM = 2
MAX_DIM = 6
DEDUP_TOL = 1e-9
FACET_TOL = 1e-9


class GeometryError(ValueError):
    """Base class for kernel errors."""


class FlatInputError(GeometryError):
    """The points span an affine subspace of dimension < d."""


class ZeroVolumeError(GeometryError):
    pass


class PolarUndefinedError(GeometryError):
    """The origin is not strictly inside the body."""


class SingularMapError(GeometryError):
    pass


class ZeroDirectionError(GeometryError):
    pass


class BodyFormatError(GeometryError):
    """Malformed body JSON."""


@dataclass(frozen=True)
class HalfspaceList:
    """Rows ``normals[i] . x <= offsets[i]`` with unit normals."""

    normals: np.ndarray
    offsets: np.ndarray

    def __len__(self):
        return len(self.offsets)

    def contains(self, x, tol=0.0) -> bool:
        return bool(np.all(self.normals @ np.asarray(x, float) - self.offsets <= tol))


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex polytope given by its extreme points.

    Instances are normally produced by :func:`convex_hull`, which enforces
    the invariants: vertices are extreme and deduplicated, planar
    vertices run counterclockwise, and ``symmetric`` is true exactly when
    the vertex set is closed under negation.
    """

    dim: int
    vertices: np.ndarray
    symmetric: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.vertices.setflags(write=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @cached_property
    def scale(self) -> float:
        """Circumradius about the origin (at least 1e-300)."""
        return max(float(np.max(np.linalg.norm(self.vertices, axis=1))), 1e-300)

    @cached_property
    def diameter(self) -> float:
        v = self.vertices
        diff = v[:, None, :] - v[None, :, :]
        return float(np.sqrt((diff ** 2).sum(-1)).max())

    @cached_property
    def facets(self) -> HalfspaceList:
        return _facets(self)

    @cached_property
    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(str(self.dim).encode())
        h.update(np.ascontiguousarray(self.vertices, dtype="<f8").tobytes())
        return h.hexdigest()

    def same_vertices(self, other: "Polytope", tol: float = 1e-7) -> bool:
        """Vertex sets agree up to ``tol`` (order-free)."""
        if self.dim != other.dim or self.n_vertices != other.n_vertices:
            return False
        return hausdorff(self.vertices, other.vertices) <= tol

    def to_dict(self) -> dict:
        return {
            "dim": int(self.dim),
            "vertices": [[float(c) for c in v] for v in self.vertices],
            "symmetric": bool(self.symmetric),
        }


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Hausdorff distance between two finite point sets."""
    d = np.linalg.norm(np.asarray(a)[:, None, :] - np.asarray(b)[None, :, :], axis=-1)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise GeometryError("points must be a 2-D array of shape (n, d)")
    if not np.all(np.isfinite(pts)):
        raise GeometryError("non-finite coordinates")
    d = pts.shape[1]
    if not MIN_DIM <= d <= MAX_DIM:
        raise GeometryError(f"ambient dimension {d} outside {MIN_DIM}..{MAX_DIM}")
    return pts


def _dedup(pts: np.ndarray, tol: float) -> np.ndarray:
    keep = []
    for i, p in enumerate(pts):
        if all(np.linalg.norm(p - pts[j]) > tol for j in keep):
            keep.append(i)
    return pts[keep]


def _check_full_dim(pts: np.ndarray, scale: float):
    d = pts.shape[1]
    if len(pts) < d + 1:
        raise FlatInputError(f"need at least {d + 1} points in dimension {d}")
    sv = np.linalg.svd(pts - pts.mean(axis=0), compute_uv=False)
    if sv[-1] <= 1e-10 * max(scale, 1e-300) * math.sqrt(len(pts)):
        raise FlatInputError("affine hull of the points is lower-dimensional")


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _monotone_chain(pts: np.ndarray, tol: float) -> np.ndarray:
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    p = pts[order]

    def half(seq):
        out = []
        for q in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], q) <= tol * np.linalg.norm(out[-1] - out[-2]):
                out.pop()
            out.append(q)
        return out

    lower = half(p)
    upper = half(p[::-1])
    return np.array(lower[:-1] + upper[:-1])


def _is_symmetric(v: np.ndarray, tol: float) -> bool:
    d = np.linalg.norm(v[:, None, :] + v[None, :, :], axis=-1)
    return bool(np.all(d.min(axis=1) <= tol))


def convex_hull(points) -> Polytope:
    """Extreme points of ``conv(points)``.

    Raises :class:`FlatInputError` when the points do not span the
    ambient space.
    """
    pts = _as_points(points)
    scale = max(float(np.abs(pts).max()), float(np.ptp(pts, axis=0).max()))
    if scale == 0.0:
        raise FlatInputError("all points coincide")
    tol = DEDUP_TOL * scale
    pts = _dedup(pts, tol)
    _check_full_dim(pts, scale)
    d = pts.shape[1]
    if d == 2:
        verts = _monotone_chain(pts, tol)
    else:
        try:
            hull = ConvexHull(pts)
        except QhullError as exc:
            raise FlatInputError(str(exc)) from exc
        verts = pts[np.sort(hull.vertices)]
    if len(verts) < d + 1:
        raise FlatInputError("hull is lower-dimensional")
    verts = np.ascontiguousarray(verts)
    return Polytope(d, verts, _is_symmetric(verts, 10 * tol))


def _simplices(P: Polytope) -> np.ndarray:
    """Boundary simplices (index arrays into ``P.vertices``)."""
    if "simplices" not in P._cache:
        if P.dim == 2:
            n = P.n_vertices
            idx = np.arange(n)
            P._cache["simplices"] = np.stack([idx, np.roll(idx, -1)], axis=1)
        else:
            hull = ConvexHull(P.vertices)
            P._cache["simplices"] = hull.simplices
            P._cache["equations"] = hull.equations
    return P._cache["simplices"]


def volume(P: Polytope) -> float:
    """Lebesgue volume by fan triangulation from the vertex centroid."""
    simp = _simplices(P)
    c = P.vertices.mean(axis=0)
    mats = P.vertices[simp] - c
    vol = float(np.abs(np.linalg.det(mats)).sum()) / math.factorial(P.dim)
    if vol <= 1e-14 * P.scale ** P.dim:
        raise ZeroVolumeError("polytope is flat")
    return vol


def _facets(P: Polytope) -> HalfspaceList:
    if P.dim == 2:
        v = P.vertices
        e = np.roll(v, -1, axis=0) - v
        normals = np.stack([e[:, 1], -e[:, 0]], axis=1)
        normals /= np.linalg.norm(normals, axis=1)[:, None]
        offsets = np.einsum("ij,ij->i", normals, v)
        return HalfspaceList(normals, offsets)
    _simplices(P)
    eq = P._cache["equations"]
    normals = eq[:, :-1]
    offsets = -eq[:, -1]
    tol = FACET_TOL * max(P.scale, 1.0)
    keep_n, keep_b = [], []
    for a, b in zip(normals, offsets):
        if any(np.linalg.norm(a - a2) < 1e-9 and abs(b - b2) < tol for a2, b2 in zip(keep_n, keep_b)):
            continue
        keep_n.append(a)
        keep_b.append(b)
    return HalfspaceList(np.array(keep_n), np.array(keep_b))


def facets(P: Polytope) -> HalfspaceList:
    """Irredundant facet description with unit outer normals."""
    return P.facets


def contains(P: Polytope, x, tol: float = 1e-9) -> bool:
    return P.facets.contains(x, tol)


def polar(P: Polytope) -> Polytope:
    """Polar body ``{y : <x, y> <= 1 for all x in P}``.

    Each facet ``<a, x> <= b`` becomes the vertex ``a / b``.
    """
    F = P.facets
    inr = float(F.offsets.min())
    if inr <= 1e-9 * float(F.offsets.max()):
        raise PolarUndefinedError("origin is not an interior point")
    return convex_hull(F.normals / F.offsets[:, None])


def linear_image(P: Polytope, M) -> Polytope:
    M = np.asarray(M, dtype=float)
    if M.shape != (P.dim, P.dim):
        raise GeometryError(f"matrix must be {P.dim}x{P.dim}")
    if abs(np.linalg.det(M)) <= 1e-12:
        raise SingularMapError("matrix is singular")
    return convex_hull(P.vertices @ M.T)


def translate(P: Polytope, v) -> Polytope:
    return convex_hull(P.vertices + np.asarray(v, float))


def scale(P: Polytope, c: float) -> Polytope:
    return convex_hull(P.vertices * c)


def central_symmetral(P: Polytope) -> Polytope:
    """``conv(P ∪ -P)``."""
    return convex_hull(np.vstack([P.vertices, -P.vertices]))


def support_point(P: Polytope, u) -> np.ndarray:
    """Vertex maximizing ``<u, .>``; ties go to the lexicographically largest."""
    u = np.asarray(u, dtype=float)
    if not np.any(u):
        raise ZeroDirectionError("direction must be nonzero")
    h = P.vertices @ u
    top = h.max()
    cand = P.vertices[h >= top - 1e-12 * P.scale * np.linalg.norm(u)]
    order = np.lexsort(cand.T[::-1])
    return cand[order[-1]].copy()


def centroid(P: Polytope) -> np.ndarray:
    """Center of mass of the solid polytope."""
    simp = _simplices(P)
    c = P.vertices.mean(axis=0)
    mats = P.vertices[simp] - c
    w = np.abs(np.linalg.det(mats))
    cents = (P.vertices[simp].sum(axis=1) + c) / (P.dim + 1)
    return (w[:, None] * cents).sum(axis=0) / w.sum()


# -- Body JSON ---------------------------------------------------------------

def body_from_dict(data: dict) -> Polytope:
    try:
        dim = data["dim"]
        verts = data["vertices"]
    except (KeyError, TypeError) as exc:
        raise BodyFormatError("body JSON needs 'dim' and 'vertices'") from exc
    if not isinstance(dim, int) or isinstance(dim, bool) or not MIN_DIM <= dim <= MAX_DIM:
        raise BodyFormatError(f"dim must be an integer in {MIN_DIM}..{MAX_DIM}")
    if not isinstance(verts, list) or not verts or any(
        not isinstance(row, list) or len(row) != dim for row in verts
    ):
        raise BodyFormatError("vertices must be a rectangular list of length-dim rows")
    P = convex_hull(verts)
    if "symmetric" in data and bool(data["symmetric"]) and not P.symmetric:
        raise BodyFormatError("body marked symmetric but vertex set is not closed under negation")
    return P


def load_body(path) -> Polytope:
    with open(path) as fh:
        return body_from_dict(json.load(fh))


def save_body(P: Polytope, path) -> None:
    with open(path, "w") as fh:
        json.dump(P.to_dict(), fh, indent=1)
        fh.write("\n")


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


__all__: Sequence[str] = [
    "Polytope", "HalfspaceList", "convex_hull", "volume", "polar", "linear_image",
    "central_symmetral", "contains", "support_point", "facets", "translate", "scale",
    "centroid", "hausdorff", "body_from_dict", "load_body", "save_body", "rotation",
    "GeometryError", "FlatInputError", "ZeroVolumeError", "PolarUndefinedError",
    "SingularMapError", "ZeroDirectionError", "BodyFormatError",
]
