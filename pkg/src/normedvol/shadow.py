"""Shadow systems ``C(t) = conv{x + t λ_x v}`` and grid convexity checks."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .extremal import DEFAULT_BUDGET, SolverBudget, _polar_volume_at, santalo_point
from .geometry import GeometryError, Polytope, convex_hull, volume


class InvalidFamilyError(GeometryError):
    """Hyperplane normals do not span the space."""


@dataclass(frozen=True)
class ShadowSystem:
    base: np.ndarray
    speeds: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        base = np.atleast_2d(np.asarray(self.base, float))
        speeds = np.asarray(self.speeds, float).ravel()
        v = np.asarray(self.direction, float).ravel()
        if len(speeds) != len(base):
            raise GeometryError("one speed per base point is required")
        if v.shape != (base.shape[1],) or not np.any(v):
            raise GeometryError("direction must be a nonzero vector of the ambient dimension")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "speeds", speeds)
        object.__setattr__(self, "direction", v)

    @property
    def dim(self) -> int:
        return self.base.shape[1]

    def points(self, t: float) -> np.ndarray:
        return self.base + t * self.speeds[:, None] * self.direction

    @classmethod
    def from_dict(cls, data: dict) -> "ShadowSystem":
        try:
            return cls(data["base"], data["speeds"], data["direction"])
        except KeyError as exc:
            raise GeometryError(f"system JSON missing {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "base": self.base.tolist(),
            "speeds": self.speeds.tolist(),
            "direction": self.direction.tolist(),
        }


def load_system(path) -> ShadowSystem:
    with open(path) as fh:
        return ShadowSystem.from_dict(json.load(fh))


def evaluate(ss: ShadowSystem, t: float) -> Polytope:
    return convex_hull(ss.points(t))


@dataclass(frozen=True)
class ConvexityReport:
    grid: np.ndarray
    values: np.ndarray
    min_second_difference: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.min_second_difference >= -self.tol * float(np.max(np.abs(self.values)))

    @property
    def argmin(self) -> float:
        return float(self.grid[int(np.argmin(self.values))])

    def to_dict(self) -> dict:
        return {
            "grid": self.grid.tolist(),
            "values": self.values.tolist(),
            "min_second_difference": self.min_second_difference,
            "tol": self.tol,
            "pass": self.passed,
        }


class ProfileError(GeometryError):
    def __init__(self, t, cause):
        super().__init__(f"evaluation failed at t={t!r}: {cause}")
        self.t = t


def _profile(fn, t_min, t_max, steps, tol) -> ConvexityReport:
    if steps < 3:
        raise ValueError("steps must be at least 3")
    grid = np.linspace(t_min, t_max, steps)
    vals = np.empty(steps)
    for i, t in enumerate(grid):
        try:
            vals[i] = fn(t)
        except (GeometryError, ArithmeticError) as exc:
            raise ProfileError(float(t), exc) from exc
    second = vals[:-2] - 2 * vals[1:-1] + vals[2:]
    return ConvexityReport(grid, vals, float(second.min()), tol)


def volume_profile(ss: ShadowSystem, t_min: float, t_max: float, steps: int = 201,
                   tol: float = 1e-8) -> ConvexityReport:
    """Sample ``t -> vol(C(t))`` and report its smallest second difference."""
    return _profile(lambda t: volume(evaluate(ss, t)), t_min, t_max, steps, tol)


def reciprocal_polar_volume(P: Polytope, budget: SolverBudget = DEFAULT_BUDGET) -> float:
    """``1 / vol((P - s(P))°)`` with s the Santaló point."""
    s = santalo_point(P, budget)
    return 1.0 / _polar_volume_at(P.facets, s, P.dim)


def mr_profile(ss: ShadowSystem, t_min: float, t_max: float, steps: int = 51,
               tol: float = 1e-6, budget: SolverBudget = DEFAULT_BUDGET) -> ConvexityReport:
    """Sample the reciprocal volume of the Santaló-centered polar along ``C(t)``."""
    return _profile(lambda t: reciprocal_polar_volume(evaluate(ss, t), budget),
                    t_min, t_max, steps, tol)


def random_system(rng: np.random.Generator, d: int, n_points: int | None = None) -> ShadowSystem:
    n_points = n_points or int(rng.integers(d + 2, 3 * d + 4))
    v = rng.standard_normal(d)
    return ShadowSystem(rng.standard_normal((n_points, d)), rng.standard_normal(n_points), v)


def symmetral_system(S: np.ndarray, direction) -> ShadowSystem:
    """Moving ``x`` along a line through o in ``conv((x+S) ∪ (-x-S))``."""
    S = np.asarray(S, float)
    base = np.vstack([S, -S])
    speeds = np.concatenate([np.ones(len(S)), -np.ones(len(S))])
    return ShadowSystem(base, speeds, direction)


# -- projection cascade ---------------------------------------------------------

@dataclass(frozen=True)
class CascadeResult:
    points: np.ndarray
    trace: list
    reached: bool
    steps: int

    @property
    def status(self) -> str:
        return "reached" if self.reached else "iteration-cap"


def projection_cascade(normals, X, eps: float, max_sweeps: int = 10_000) -> CascadeResult:
    """Greedy simultaneous projections onto hyperplanes through o.

    At every step all points are projected onto the hyperplane that most
    decreases ``f(Y) = sum |y_i|``. Stops once ``f <= eps`` or after
    ``max_sweeps`` projections.
    """
    N = np.atleast_2d(np.asarray(normals, float))
    N = N / np.linalg.norm(N, axis=1)[:, None]
    Y = np.atleast_2d(np.asarray(X, float)).copy()
    if N.shape[1] != Y.shape[1]:
        raise GeometryError("normals and points live in different dimensions")
    if np.linalg.matrix_rank(N, tol=1e-10) < N.shape[1]:
        raise InvalidFamilyError("hyperplanes meet in more than the origin")

    def f(P):
        return float(np.linalg.norm(P, axis=1).sum())

    trace = [f(Y)]
    steps = 0
    while trace[-1] > eps and steps < max_sweeps:
        # candidates[j] = Y projected onto hyperplane j
        coef = Y @ N.T
        cands = Y[None, :, :] - coef.T[:, :, None] * N[:, None, :]
        vals = np.linalg.norm(cands, axis=2).sum(axis=1)
        j = int(np.argmin(vals))
        if vals[j] >= trace[-1]:
            break
        Y = cands[j]
        trace.append(float(vals[j]))
        steps += 1
    return CascadeResult(Y, trace, trace[-1] <= eps, steps)
