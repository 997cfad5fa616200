"""Named extremal bodies, random symmetric polygons and planar certificates."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    GeometryError,
    Polytope,
    central_symmetral,
    convex_hull,
    hausdorff,
    polar,
    volume,
)


class CertificateError(GeometryError):
    """The Radon normalization could not be formed."""


def _check_dim(d):
    if not 2 <= d <= 6:
        raise GeometryError(f"dimension {d} outside 2..6")


def simplex_vertices(k: int) -> np.ndarray:
    """Regular k-simplex in R^k: centroid at o, circumradius 1, (k+1, k) array."""
    e = np.eye(k + 1) - 1.0 / (k + 1)
    # orthonormal basis of the hyperplane sum(x) = 0
    q, _ = np.linalg.qr(e[:, :k])
    pts = e @ q
    return pts / np.linalg.norm(pts[0])


def regular_simplex(d: int) -> Polytope:
    _check_dim(d)
    return convex_hull(simplex_vertices(d))


def cross_polytope(d: int) -> Polytope:
    _check_dim(d)
    eye = np.eye(d)
    return convex_hull(np.vstack([eye, -eye]))


def cube(d: int) -> Polytope:
    _check_dim(d)
    signs = np.array(np.meshgrid(*[[-1.0, 1.0]] * d, indexing="ij")).reshape(d, -1).T
    return convex_hull(signs)


def regular_ngon(n: int, circumradius: float = 1.0) -> Polytope:
    if n < 3:
        raise GeometryError("a polygon needs n >= 3")
    t = 2 * math.pi * np.arange(n) / n
    return convex_hull(circumradius * np.c_[np.cos(t), np.sin(t)])


def simplex_symmetral(d: int) -> Polytope:
    return central_symmetral(regular_simplex(d))


def simplex_pair_body(d: int, k: int) -> Polytope:
    """conv(S1 ∪ S2 ∪ -S1 ∪ -S2) with regular simplices in orthogonal subspaces.

    S1 (dimension k) lives in the first k coordinates, S2 (dimension d-k)
    in the last d-k.
    """
    _check_dim(d)
    if not 1 <= k <= d - 1:
        raise GeometryError("need 1 <= k <= d-1")
    s1 = simplex_vertices(k)
    s2 = simplex_vertices(d - k)
    a = np.hstack([s1, np.zeros((k + 1, d - k))])
    b = np.hstack([np.zeros((d - k + 1, k)), s2])
    pts = np.vstack([a, b])
    return convex_hull(np.vstack([pts, -pts]))


def radon_hexagon() -> Polytope:
    """Regular hexagon scaled so that its polar is its own quarter-turn."""
    return regular_ngon(6, math.sqrt(2 / math.sqrt(3)))


def is_affinely_regular(P: Polytope, tol: float = 1e-6):
    """Coxeter test ``p[j+2] - p[j-1] = tau (p[j+1] - p[j])``.

    Returns ``(accepted, tau)`` with tau the least-squares fit over all j.
    """
    if P.dim != 2:
        raise GeometryError("affine regularity test is planar")
    p = P.vertices
    n = len(p)
    if n < 4:
        return True, 0.0
    D = np.roll(p, -2, axis=0) - np.roll(p, 1, axis=0)
    E = np.roll(p, -1, axis=0) - p
    tau = float((D * E).sum() / (E * E).sum())
    resid = np.linalg.norm(D - tau * E, axis=1).max()
    return bool(tau >= 0 and resid <= tol * P.diameter), tau


@dataclass(frozen=True)
class RadonCertificate:
    normalizing_map: np.ndarray
    max_deviation: float

    def accepted(self, tol: float) -> bool:
        return self.max_deviation <= tol


def max_area_parallelogram_vertices(P: Polytope):
    """Two vertices q1, q2 spanning a largest inscribed o-symmetric parallelogram.

    For symmetric polygons the largest inscribed parallelogram can be
    taken with vertices ``±q1, ±q2`` among the body's vertices; ties go to
    the lexicographically smallest index pair.
    """
    v = P.vertices
    det = np.abs(v[:, None, 0] * v[None, :, 1] - v[:, None, 1] * v[None, :, 0])
    best = det.max()
    i, j = np.argwhere(det >= best * (1 - 1e-12))[0]
    return v[i], v[j]


def _rot90(x):
    return np.stack([-x[:, 1], x[:, 0]], axis=1)


def radon_certificate(P: Polytope) -> RadonCertificate:
    """Compare the quarter-turn of the normalized body with its polar."""
    if P.dim != 2:
        raise GeometryError("Radon certificate is planar")
    if not P.symmetric:
        raise GeometryError("Radon certificate needs an o-symmetric body")
    q1, q2 = max_area_parallelogram_vertices(P)
    A = np.column_stack([q1, q2])
    if abs(np.linalg.det(A)) <= 1e-12 * P.scale ** 2:
        raise CertificateError("largest inscribed parallelogram is degenerate")
    M = np.linalg.inv(A)
    N = convex_hull(P.vertices @ M.T)
    dev = hausdorff(_rot90(N.vertices), polar(N).vertices)
    return RadonCertificate(M, dev)


# -- random bodies -----------------------------------------------------------

def random_symmetric_polygon(rng: np.random.Generator, k=None, k_range=(3, 8),
                             radii=(0.5, 2.0), area=math.pi) -> Polytope:
    """Hull of ``±r_i u_i`` for k random directions, log-uniform radii.

    The result is rescaled to the requested area.
    """
    if k is None:
        k = int(rng.integers(k_range[0], k_range[1] + 1))
    ang = rng.uniform(0.0, 2 * math.pi, size=k)
    r = np.exp(rng.uniform(math.log(radii[0]), math.log(radii[1]), size=k))
    pts = r[:, None] * np.c_[np.cos(ang), np.sin(ang)]
    B = convex_hull(np.vstack([pts, -pts]))
    if area is not None:
        B = convex_hull(B.vertices * math.sqrt(area / volume(B)))
    return B


def random_triangle_containing_origin(rng: np.random.Generator) -> Polytope:
    while True:
        T = convex_hull(rng.standard_normal((3, 2)))
        if T.facets.offsets.min() > 1e-3:
            return T


def barycentric_origin(T: Polytope) -> np.ndarray:
    A = np.vstack([T.vertices.T, np.ones(3)])
    return np.linalg.solve(A, [0.0, 0.0, 1.0])


def random_triangle_with_origin_in_medial(rng: np.random.Generator) -> Polytope:
    """Random triangle whose medial triangle contains o (all weights <= 1/2)."""
    while True:
        T = random_triangle_containing_origin(rng)
        if barycentric_origin(T).max() <= 0.5:
            return T


def perturb_symmetric(B: Polytope, rng: np.random.Generator, scale: float) -> Polytope:
    """Jitter one vertex of each antipodal pair, then re-symmetrize."""
    v = B.vertices
    reps = []
    for x in v:
        if not any(np.linalg.norm(x + y) <= 1e-9 * B.scale for y in reps):
            reps.append(x)
    reps = np.array(reps)
    reps = reps + scale * B.scale * rng.standard_normal(reps.shape)
    return convex_hull(np.vstack([reps, -reps]))


def random_linear_map(rng: np.random.Generator, d: int, min_abs_det: float = 0.1) -> np.ndarray:
    while True:
        M = rng.standard_normal((d, d))
        if abs(np.linalg.det(M)) >= min_abs_det:
            return M


KINDS = {
    "simplex": lambda dim, n: regular_simplex(dim),
    "cross": lambda dim, n: cross_polytope(dim),
    "cube": lambda dim, n: cube(dim),
    "ngon": lambda dim, n: regular_ngon(n),
    "simplex-symmetral": lambda dim, n: simplex_symmetral(dim),
    "simplex-pair": lambda dim, n: simplex_pair_body(dim, n),
    "radon-hexagon": lambda dim, n: radon_hexagon(),
}


def make_body(kind: str, dim: int = 2, n: int | None = None) -> Polytope:
    """Named constructor used by the CLI (``n`` is the polygon size or k)."""
    if kind not in KINDS:
        raise GeometryError(f"unknown body kind {kind!r}")
    if kind == "ngon" and n is None:
        raise GeometryError("--n is required for ngon")
    if kind == "simplex-pair" and n is None:
        n = 1
    return KINDS[kind](dim, n)
