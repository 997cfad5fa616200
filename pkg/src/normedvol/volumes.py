"""Busemann, Holmes-Thompson, mass and mass* normalizations of Lebesgue
volume, and the value of the largest inscribed n-vertex polytope under each."""
from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass

from .extremal import (
    DEFAULT_BUDGET,
    ExtremalWitness,
    NotSymmetricError,
    SolverBudget,
    max_cross_polytope,
    max_inscribed_polygon_symmetric,
    max_inscribed_polytope,
    min_circumscribed_parallelotope,
)
from .geometry import Polytope, polar, volume


class VolumeKind(str, enum.Enum):
    BUSEMANN = "bus"
    HOLMES_THOMPSON = "ht"
    MASS = "mass"
    MASS_STAR = "mass-star"


def unit_ball_volume(d: int) -> float:
    """Volume of the Euclidean unit ball in R^d."""
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


_cache: dict = {}
_lock = threading.Lock()
CACHE_LIMIT = 20_000


def _cached(key, compute):
    hit = _cache.get(key)
    if hit is None:
        hit = compute()
        with _lock:
            if len(_cache) >= CACHE_LIMIT:
                _cache.clear()
            hit = _cache.setdefault(key, hit)
    return hit


def clear_cache():
    with _lock:
        _cache.clear()


def cross_witness(B: Polytope, budget: SolverBudget = DEFAULT_BUDGET) -> ExtremalWitness:
    return _cached(("I", B.content_hash, budget), lambda: max_cross_polytope(B, budget))


def parallelotope_witness(B: Polytope, budget: SolverBudget = DEFAULT_BUDGET) -> ExtremalWitness:
    return _cached(("C", B.content_hash, budget), lambda: min_circumscribed_parallelotope(B, budget))


def polar_volume(B: Polytope) -> float:
    return _cached(("polar", B.content_hash), lambda: volume(polar(B)))


def normalizer(B: Polytope, kind: VolumeKind, budget: SolverBudget = DEFAULT_BUDGET):
    """Return ``(factor, exact)`` with ``vol_B(S) = factor * λ(S)``."""
    kind = VolumeKind(kind)
    d = B.dim
    if kind is VolumeKind.BUSEMANN:
        return unit_ball_volume(d) / volume(B), True
    if kind is VolumeKind.HOLMES_THOMPSON:
        return polar_volume(B) / unit_ball_volume(d), True
    if kind is VolumeKind.MASS:
        w = cross_witness(B, budget)
        return 2 ** d / math.factorial(d) / w.value, w.exact
    w = parallelotope_witness(B, budget)
    return 2 ** d / w.value, w.exact


def normed_volume(B: Polytope, S: Polytope, kind: VolumeKind, budget: SolverBudget = DEFAULT_BUDGET) -> float:
    """Volume of ``S`` in the normed space whose unit ball is ``B``."""
    _require_symmetric(B)
    factor, _ = normalizer(B, kind, budget)
    return factor * volume(S)


@dataclass(frozen=True)
class MuResult:
    kind: VolumeKind
    n: int
    value: float
    witness: ExtremalWitness
    normalizer: float
    exact: bool

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "n": self.n,
            "value": self.value,
            "normalizer": self.normalizer,
            "exact": self.exact,
            "witness": self.witness.to_dict(),
        }


def _require_symmetric(B):
    if not B.symmetric:
        raise NotSymmetricError("unit ball must be o-symmetric")


def inscribed_witness(B: Polytope, n: int, budget: SolverBudget = DEFAULT_BUDGET) -> ExtremalWitness:
    """Largest inscribed polytope with at most ``n`` vertices.

    Even ``n`` in the plane uses the o-symmetric search; a largest 2m-gon
    can always be chosen symmetric.
    """
    def compute():
        if B.dim == 2 and n % 2 == 0 and n >= 4:
            return max_inscribed_polygon_symmetric(B, n, budget)
        return max_inscribed_polytope(B, n, budget)

    return _cached(("Q", B.content_hash, n, budget), compute)


def mu(B: Polytope, n: int, kind: VolumeKind, budget: SolverBudget = DEFAULT_BUDGET) -> MuResult:
    """Normed volume of a largest inscribed polytope with at most ``n`` vertices."""
    _require_symmetric(B)
    kind = VolumeKind(kind)
    w = inscribed_witness(B, n, budget)
    factor, exact = normalizer(B, kind, budget)
    return MuResult(kind, n, factor * w.value, w, factor, exact and w.exact)
