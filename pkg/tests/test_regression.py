"""Pinned constants for claims without a closed form in the source material."""
import math

import pytest

from normedvol import bodies
from normedvol.harness import m_plane_max_mass_oracle
from normedvol.volumes import mu


def test_pinned_values_are_the_derived_ones(pinned):
    assert pinned["ht_simplex_symmetral_3"] == pytest.approx(0.848826363157, abs=1e-12)
    assert pinned["mass_plane_oracle_10"] == pytest.approx(3.090169943749, abs=1e-12)


def test_ht_simplex_symmetral_reference(pinned):
    # the tetrahedron is a third of the symmetral and the polar has volume 4/3 at this scale
    assert mu(bodies.simplex_symmetral(3), 4, "ht").value == pytest.approx(pinned["ht_simplex_symmetral_3"], rel=1e-9)


@pytest.mark.parametrize("n,key", [(6, "mass_plane_oracle_6"), (10, "mass_plane_oracle_10")])
def test_mass_plane_oracle(n, key, pinned):
    assert m_plane_max_mass_oracle(n) == pytest.approx(pinned[key], rel=1e-9)


def test_hexagon_mass():
    assert mu(bodies.regular_ngon(6), 6, "mass").value == pytest.approx(3.0)
