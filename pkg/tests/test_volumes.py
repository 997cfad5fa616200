import math

import numpy as np
import pytest

from normedvol import bodies
from normedvol.extremal import max_cross_polytope
from normedvol.geometry import linear_image, volume
from normedvol.volumes import MuResult, VolumeKind, mu, normed_volume, unit_ball_volume

KINDS = list(VolumeKind)


def test_unit_ball_volume():
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)
    assert unit_ball_volume(4) == pytest.approx(math.pi ** 2 / 2)


def test_normalizations(rng):
    B = bodies.random_symmetric_polygon(rng)
    assert normed_volume(B, B, VolumeKind.BUSEMANN) == pytest.approx(math.pi)
    I = max_cross_polytope(B).object
    assert normed_volume(B, I, VolumeKind.MASS) == pytest.approx(2.0)
    H = bodies.regular_ngon(6)
    assert normed_volume(H, H, VolumeKind.MASS) == pytest.approx(3.0)


def test_mu_examples():
    H = bodies.regular_ngon(6)
    assert mu(H, 3, "bus").value == pytest.approx(math.pi / 2, abs=1e-12)
    assert mu(H, 4, "ht").value == pytest.approx(6 / math.pi, abs=1e-12)
    sq = bodies.cube(2)
    for n in (4, 5, 7):
        assert mu(sq, n, "mass-star").value == pytest.approx(4.0)


def test_mu_result_consistent():
    r = mu(bodies.regular_ngon(8), 5, VolumeKind.HOLMES_THOMPSON)
    assert isinstance(r, MuResult) and r.exact
    assert abs(r.value - r.normalizer * r.witness.value) <= 1e-12
    d = r.to_dict()
    assert d["kind"] == "ht" and d["n"] == 5


def test_mu_requires_symmetric_and_n():
    from normedvol.geometry import GeometryError
    with pytest.raises(GeometryError):
        mu(bodies.regular_simplex(2), 4, "bus")
    with pytest.raises(GeometryError):
        mu(bodies.cube(3), 3, "bus")


@pytest.mark.parametrize("kind", KINDS)
def test_affine_invariance(kind, rng):
    for _ in range(3):
        B = bodies.random_symmetric_polygon(rng)
        M = bodies.random_linear_map(rng, 2)
        for n in (3, 4, 5):
            a = mu(B, n, kind).value
            b = mu(linear_image(B, M), n, kind).value
            assert b == pytest.approx(a, rel=1e-6)


def test_affine_invariance_3d(rng):
    B = bodies.simplex_symmetral(3)
    M = bodies.random_linear_map(rng, 3)
    for kind in ("bus", "ht", "mass"):
        assert mu(linear_image(B, M), 5, kind).value == pytest.approx(mu(B, 5, kind).value, rel=1e-6)


@pytest.mark.parametrize("kind", KINDS)
def test_monotone_in_n(kind, rng):
    B = bodies.random_symmetric_polygon(rng, k=6)
    vals = [mu(B, n, kind).value for n in range(3, 13)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_ceilings(rng):
    for _ in range(20):
        B = bodies.random_symmetric_polygon(rng)
        assert mu(B, 6, "mass-star").value <= 4 + 1e-9
        assert mu(B, 6, "bus").value <= math.pi + 1e-9
    B = bodies.random_symmetric_polygon(rng, k=3)
    assert mu(B, 6, "bus").value == pytest.approx(math.pi, rel=1e-12)
