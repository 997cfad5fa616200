"""Largest inscribed polytopes and cross-polytopes, smallest circumscribed
parallelotopes, and the Santaló point.

Inscribed problems on polytopes only ever need the body's own vertices
(the volume of a hull is convex along every vertex motion), so they are
solved by enumerating vertex subsets whenever the budget allows, and by a
seeded swap search otherwise.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .geometry import GeometryError, Polytope, convex_hull, volume

REL_TIE = 1e-12
CHUNK = 200_000


class InvalidNError(GeometryError):
    pass


class NotSymmetricError(GeometryError):
    pass


class SolverStallError(RuntimeError):
    """Iterative solver ran out of iterations; ``best`` holds the last iterate."""

    def __init__(self, msg, best):
        super().__init__(msg)
        self.best = best


@dataclass(frozen=True)
class SolverBudget:
    max_subsets: int = 2_000_000
    restarts: int = 8
    max_iters: int = 10_000
    rng_seed: int = 0

    def __post_init__(self):
        if self.max_subsets < 1 or self.restarts < 1 or self.max_iters < 1:
            raise ValueError("budget fields must be positive")
        if not 0 <= self.rng_seed < 2 ** 64:
            raise ValueError("rng_seed must be a 64-bit unsigned integer")

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(self.rng_seed))


DEFAULT_BUDGET = SolverBudget()


@dataclass(frozen=True)
class ExtremalWitness:
    object: Polytope
    value: float
    exact: bool

    def to_dict(self) -> dict:
        return {"body": self.object.to_dict(), "value": self.value, "exact": self.exact}


def _witness(points, exact) -> ExtremalWitness:
    P = convex_hull(points)
    return ExtremalWitness(P, volume(P), exact)


# -- subset volumes ------------------------------------------------------------

def _combos(n_items: int, k: int):
    """Lexicographic k-subsets of range(n_items) as chunks of index arrays."""
    it = itertools.combinations(range(n_items), k)
    while True:
        flat = np.fromiter(itertools.chain.from_iterable(itertools.islice(it, CHUNK)),
                           dtype=np.intp)
        if flat.size == 0:
            return
        yield flat.reshape(-1, k)


@lru_cache(maxsize=256)
def _combo_table(n_items: int, k: int) -> np.ndarray:
    arr = np.array(list(itertools.combinations(range(n_items), k)), dtype=np.intp)
    arr.setflags(write=False)
    return arr


def _combo_chunks(n_items, k):
    if math.comb(n_items, k) <= 50_000:
        yield _combo_table(n_items, k)
    else:
        yield from _combos(n_items, k)


def _shoelace(pts: np.ndarray) -> np.ndarray:
    """Areas of polygons given as (m, k, 2) arrays in cyclic order."""
    x, y = pts[..., 0], pts[..., 1]
    return 0.5 * np.abs((x * np.roll(y, -1, axis=-1) - np.roll(x, -1, axis=-1) * y).sum(-1))


def subset_volumes(V: np.ndarray, idx: np.ndarray, planar_cyclic: bool = False) -> np.ndarray:
    """Hull volumes of ``V[idx[i]]`` for each row of ``idx``.

    With ``planar_cyclic`` the rows are assumed to list points of a convex
    polygon in cyclic order, so the shoelace formula applies directly.
    """
    d = V.shape[1]
    pts = V[idx]
    if d == 2 and planar_cyclic:
        return _shoelace(pts)
    if idx.shape[1] == d + 1:
        return np.abs(np.linalg.det(pts[:, 1:] - pts[:, :1])) / math.factorial(d)
    out = np.empty(len(idx))
    for i, p in enumerate(pts):
        try:
            out[i] = ConvexHull(p).volume
        except QhullError:
            out[i] = 0.0
    return out


def _argmax_lex(chunks_vals):
    """First (lexicographically smallest) index among near-maximal values."""
    best_val, best_row = -math.inf, None
    for rows, vals in chunks_vals:
        m = vals.max()
        if m > best_val * (1 + REL_TIE) or best_row is None:
            i = int(np.argmax(vals >= m * (1 - REL_TIE)))
            best_val, best_row = float(m), rows[i]
    return best_val, best_row


def _swap_search(V, n, budget: SolverBudget, planar_cyclic):
    rng = budget.rng()
    nv = len(V)
    best_val, best_set = -math.inf, None
    for _ in range(budget.restarts):
        cur = np.sort(rng.choice(nv, size=n, replace=False))
        cur_val = subset_volumes(V, cur[None, :], planar_cyclic)[0]
        for _ in range(budget.max_iters):
            outside = np.setdiff1d(np.arange(nv), cur)
            cands = []
            for pos in range(n):
                for w in outside:
                    c = cur.copy()
                    c[pos] = w
                    cands.append(np.sort(c))
            cands = np.array(cands)
            vals = subset_volumes(V, cands, planar_cyclic)
            j = int(np.argmax(vals))
            if vals[j] <= cur_val * (1 + REL_TIE):
                break
            cur, cur_val = cands[j], vals[j]
        if cur_val > best_val * (1 + REL_TIE):
            best_val, best_set = cur_val, cur
    return best_set


def max_inscribed_polytope(B: Polytope, n: int, budget: SolverBudget = DEFAULT_BUDGET) -> ExtremalWitness:
    """Largest-volume polytope with at most ``n`` vertices inside ``B``."""
    d = B.dim
    if n < d + 1:
        raise InvalidNError(f"n must be at least d+1 = {d + 1}")
    V = B.vertices
    nv = len(V)
    if n >= nv:
        return ExtremalWitness(B, volume(B), True)
    planar = d == 2
    if math.comb(nv, n) <= budget.max_subsets:
        _, row = _argmax_lex(
            (rows, subset_volumes(V, rows, planar)) for rows in _combo_chunks(nv, n)
        )
        return _witness(V[row], True)
    return _witness(V[_swap_search(V, n, budget, planar)], False)


def _antipodal_order(B: Polytope) -> int:
    """For a symmetric polygon, check ``v[i + k] == -v[i]`` and return k."""
    V = B.vertices
    k = len(V) // 2
    if len(V) % 2 or not np.allclose(np.roll(V, -k, axis=0), -V, atol=1e-9 * B.scale):
        raise NotSymmetricError("polygon is not o-symmetric")
    return k


def max_inscribed_polygon_symmetric(B: Polytope, n: int, budget: SolverBudget = DEFAULT_BUDGET) -> ExtremalWitness:
    """Largest o-symmetric polygon with ``n = 2m`` vertices inside ``B``.

    Vertices come in antipodal pairs of ``B``'s vertices.
    """
    if B.dim != 2:
        raise GeometryError("symmetric polygon solver is planar")
    if n % 2 or n < 4:
        raise InvalidNError("n must be even and at least 4")
    k = _antipodal_order(B)
    m = n // 2
    if m >= k:
        return ExtremalWitness(B, volume(B), True)
    V = B.vertices
    if math.comb(k, m) > budget.max_subsets:
        rng = budget.rng()
        best_val, best_rows = -math.inf, None
        for _ in range(budget.restarts):
            half = np.sort(rng.choice(k, size=m, replace=False))
            rows = np.concatenate([half, half + k])
            val = subset_volumes(V, rows[None, :], True)[0]
            if val > best_val:
                best_val, best_rows = val, rows
        return _witness(V[best_rows], False)

    def gen():
        for half in _combo_chunks(k, m):
            rows = np.concatenate([half, half + k], axis=1)
            yield rows, subset_volumes(V, rows, True)

    _, row = _argmax_lex(gen())
    return _witness(V[row], True)


def max_inscribed_ngon_disk(n: int, restarts: int = 4, seed: int = 0, max_sweeps: int = 200_000) -> float:
    """Area of the largest n-gon in the unit disk by cyclic coordinate ascent.

    With both neighbours fixed, a vertex is optimal at the angular midpoint,
    so each sweep moves every vertex there in turn.
    """
    if n < 3:
        raise InvalidNError("n must be at least 3")
    rng = np.random.Generator(np.random.Philox(seed))
    best = 0.0
    for _ in range(restarts):
        th = np.sort(rng.uniform(0, 2 * math.pi, n))
        prev = -1.0
        for _ in range(max_sweeps):
            for i in range(n):
                lo = th[i - 1] - (2 * math.pi if i == 0 else 0.0)
                hi = th[(i + 1) % n] + (2 * math.pi if i == n - 1 else 0.0)
                th[i] = 0.5 * (lo + hi)
            gaps = np.diff(np.append(th, th[0] + 2 * math.pi))
            area = 0.5 * float(np.sin(gaps).sum())
            if abs(area - prev) <= 1e-16 and np.ptp(gaps) < 1e-12:
                break
            prev = area
        best = max(best, area)
    return best


def max_cross_polytope(B: Polytope, budget: SolverBudget = DEFAULT_BUDGET) -> ExtremalWitness:
    """Largest inscribed cross-polytope ``conv{±q_i}`` of a symmetric body."""
    if not B.symmetric:
        raise NotSymmetricError("cross-polytope solver needs an o-symmetric body")
    d = B.dim
    V = B.vertices
    nv = len(V)
    if math.comb(nv, d) <= budget.max_subsets:
        _, row = _argmax_lex(
            (rows, np.abs(np.linalg.det(V[rows]))) for rows in _combo_chunks(nv, d)
        )
        Q = V[row]
        exact = True
    else:
        Q = _alternating_det(B, budget)
        exact = False
    return _witness(np.vstack([Q, -Q]), exact)


def _alternating_det(B: Polytope, budget: SolverBudget) -> np.ndarray:
    from .geometry import support_point

    rng = budget.rng()
    V = B.vertices
    d = B.dim
    best, best_det = None, -1.0
    for _ in range(budget.restarts):
        Q = V[rng.choice(len(V), size=d, replace=False)].copy()
        for _ in range(budget.max_iters):
            changed = False
            for i in range(d):
                # det is linear in row i; its gradient is the cofactor row
                cof = np.array([np.linalg.det(np.vstack([Q[:i], e, Q[i + 1:]])) for e in np.eye(d)])
                if not np.any(cof):
                    continue
                q = support_point(B, cof)
                if abs(q @ cof) > abs(Q[i] @ cof) * (1 + REL_TIE):
                    Q[i] = q
                    changed = True
            if not changed:
                break
        val = abs(np.linalg.det(Q))
        if val > best_det:
            best, best_det = Q, val
    return best


# -- circumscribed parallelotopes ----------------------------------------------

def _widths(V, normals):
    h = V @ normals.T
    return h.max(axis=0) - h.min(axis=0), 0.5 * (h.max(axis=0) + h.min(axis=0))


def _parallelotope(A: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    d = len(A)
    signs = np.array(list(itertools.product([0, 1], repeat=d)))
    rhs = np.where(signs == 1, hi, lo)
    return np.linalg.solve(A, rhs.T).T


def _distinct_directions(normals: np.ndarray) -> np.ndarray:
    out = []
    for a in normals:
        if not any(abs(abs(a @ b) - 1.0) < 1e-9 for b in out):
            out.append(a)
    return np.array(out)


def min_circumscribed_parallelotope(B: Polytope, budget: SolverBudget = DEFAULT_BUDGET) -> ExtremalWitness:
    """Smallest-volume parallelotope containing ``B``.

    Planar case: with one side direction fixed, the area as a function of
    the other normal angle is monotone between consecutive edge normals,
    so both side pairs of an optimal parallelogram can be taken flush with
    edges; all edge-normal pairs are enumerated. In higher dimensions the
    same candidates (facet normals) seed a randomized local descent and
    the result is flagged inexact.
    """
    V = B.vertices
    d = B.dim
    dirs = _distinct_directions(B.facets.normals)
    widths, _ = _widths(V, dirs)
    best_val, best_rows = math.inf, None
    n_dirs = len(dirs)
    if math.comb(n_dirs, d) <= budget.max_subsets:
        for rows in _combo_chunks(n_dirs, d):
            dets = np.abs(np.linalg.det(dirs[rows]))
            ok = dets > 1e-12
            vals = np.full(len(rows), math.inf)
            vals[ok] = np.prod(widths[rows[ok]], axis=1) / dets[ok]
            i = int(np.argmin(vals))
            if vals[i] < best_val * (1 - REL_TIE):
                best_val, best_rows = float(vals[i]), rows[i]
        A = dirs[best_rows]
    else:
        A = dirs[np.argsort(widths)[:d]]
    exact = d == 2
    if d > 2:
        A = _frame_descent(V, A, budget)
    h = V @ A.T
    pts = _parallelotope(A, h.min(axis=0), h.max(axis=0))
    return _witness(pts, exact)


def _frame_volume(V, A):
    det = abs(np.linalg.det(A))
    if det < 1e-12:
        return math.inf
    w, _ = _widths(V, A)
    return float(np.prod(w) / det)


def _frame_descent(V, A, budget: SolverBudget):
    rng = budget.rng()
    best = A.copy()
    best_val = _frame_volume(V, best)
    step = 0.1
    for _ in range(min(budget.max_iters, 2000)):
        trial = best + step * rng.standard_normal(best.shape)
        trial /= np.linalg.norm(trial, axis=1)[:, None]
        val = _frame_volume(V, trial)
        if val < best_val * (1 - REL_TIE):
            best, best_val = trial, val
        else:
            step *= 0.995
        if step < 1e-6:
            break
    return best


# -- Santaló point ---------------------------------------------------------------

def _polar_volume_at(F, s, d):
    slack = F.offsets - F.normals @ s
    if np.any(slack <= 0):
        return math.inf
    pts = F.normals / slack[:, None]
    if d == 2:
        # facet normals of a ccw polygon are already in angular order
        return float(_shoelace(pts[None])[0])
    return ConvexHull(pts).volume


def santalo_point(K: Polytope, budget: SolverBudget = DEFAULT_BUDGET) -> np.ndarray:
    """Minimizer of ``s -> vol((K - s)°)`` over the interior of ``K``.

    Damped Newton iteration on central finite differences, stopping once
    the step falls below ``1e-10 * diameter``.
    """
    d = K.dim
    if K.symmetric:
        return np.zeros(d)
    F = K.facets
    diam = K.diameter
    h = 1e-5 * diam
    s = K.vertices.mean(axis=0)

    def f(x):
        return _polar_volume_at(F, x, d)

    eye = np.eye(d) * h
    fs = f(s)
    for _ in range(budget.max_iters):
        g = np.empty(d)
        H = np.empty((d, d))
        fp = [f(s + eye[i]) for i in range(d)]
        fm = [f(s - eye[i]) for i in range(d)]
        for i in range(d):
            g[i] = (fp[i] - fm[i]) / (2 * h)
            H[i, i] = (fp[i] - 2 * fs + fm[i]) / h ** 2
            for j in range(i + 1, d):
                H[i, j] = H[j, i] = (
                    f(s + eye[i] + eye[j]) - f(s + eye[i] - eye[j])
                    - f(s - eye[i] + eye[j]) + f(s - eye[i] - eye[j])
                ) / (4 * h * h)
        try:
            step = -np.linalg.solve(H, g)
            if step @ g >= 0:
                step = -g
        except np.linalg.LinAlgError:
            step = -g
        t = 1.0
        while True:
            cand = s + t * step
            fc = f(cand)
            if fc <= fs:
                break
            t *= 0.5
            if t * np.linalg.norm(step) < 1e-14 * diam:
                return s
        moved = np.linalg.norm(cand - s)
        s, fs = cand, fc
        if moved < 1e-10 * diam:
            return s
    raise SolverStallError("Santaló iteration did not converge", s)
