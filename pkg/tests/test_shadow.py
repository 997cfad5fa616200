import json

import numpy as np
import pytest

from normedvol import bodies
from normedvol.geometry import GeometryError, convex_hull, volume
from normedvol.shadow import (
    InvalidFamilyError, ProfileError, ShadowSystem, evaluate, load_system, mr_profile,
    projection_cascade, random_system, symmetral_system, volume_profile,
)

SQUARE = [[0, 0], [1, 0], [0, 1], [1, 1]]


def test_validation():
    with pytest.raises(GeometryError):
        ShadowSystem(SQUARE, [1, 0], [1, 0])
    with pytest.raises(GeometryError):
        ShadowSystem(SQUARE, [1, 0, 0, 0], [0, 0])


def test_evaluate_examples():
    ss = ShadowSystem(SQUARE, [0, 0, 0, 0], [1, 0])
    assert volume(evaluate(ss, 5.0)) == pytest.approx(1.0)
    ss = ShadowSystem(SQUARE, [0, 0, 0, 1], [1, 0])
    assert evaluate(ss, 0.0).same_vertices(convex_hull(SQUARE))
    # moved vertex (2,1): hull (0,0),(1,0),(2,1),(0,1), shoelace area 1.5
    assert volume(evaluate(ss, 1.0)) == pytest.approx(1.5)


def test_constant_profile():
    rep = volume_profile(ShadowSystem(SQUARE, [0, 0, 0, 0], [1, 0]), -1, 1, 11)
    assert rep.passed and rep.min_second_difference == 0.0
    B = bodies.regular_ngon(6)
    rep = mr_profile(ShadowSystem(B.vertices, np.zeros(6), [1, 0]), -1, 1, 5)
    assert rep.passed and np.ptp(rep.values) < 1e-12


def test_profile_steps_and_errors():
    with pytest.raises(ValueError):
        volume_profile(ShadowSystem(SQUARE, [0] * 4, [1, 0]), 0, 1, 2)
    # all points collapse onto a line at t = 1
    ss = ShadowSystem([[0, 0], [1, 0], [0, 1]], [0, 0, 1], [0, -1])
    with pytest.raises(ProfileError) as exc:
        volume_profile(ss, 0, 1, 3)
    assert exc.value.t == 1.0


def test_random_systems_convex(rng):
    for i in range(20):
        assert volume_profile(random_system(rng, 2 + i % 2), -1, 1, 101).passed
    for _ in range(3):
        assert mr_profile(random_system(rng, 2), -1, 1, 21).passed


def test_symmetral_family_min_at_zero(rng):
    rep = volume_profile(symmetral_system(bodies.simplex_vertices(3), rng.standard_normal(3)), -1, 1, 41)
    assert rep.passed and rep.argmin == pytest.approx(0.0, abs=1e-12)


def test_json_round_trip(tmp_path):
    ss = ShadowSystem(SQUARE, [1, 2, 3, 4], [0, 1])
    p = tmp_path / "s.json"
    p.write_text(json.dumps(ss.to_dict()))
    assert load_system(p).to_dict() == ss.to_dict()


def test_cascade_examples():
    res = projection_cascade(np.eye(2), np.zeros((3, 2)), 1e-9)
    assert res.reached and res.steps == 0
    res = projection_cascade(np.eye(2), [[3.0, 4.0]], 0.0)
    assert res.reached and res.steps == 2 and res.trace[-1] == 0.0


def test_cascade_random(rng):
    N = rng.standard_normal((4, 3))
    X = rng.standard_normal((5, 3))
    f0 = np.linalg.norm(X, axis=1).sum()
    res = projection_cascade(N, X, 1e-6 * f0)
    assert res.reached and res.status == "reached"
    assert all(b < a for a, b in zip(res.trace, res.trace[1:]))


def test_cascade_cap_and_family():
    N = np.array([[1.0, 0.0], [np.cos(1e-3), np.sin(1e-3)]])
    res = projection_cascade(N, [[0.0, 1.0]], 1e-12, max_sweeps=5)
    assert res.status == "iteration-cap" and res.steps == 5
    with pytest.raises(InvalidFamilyError):
        projection_cascade([[1, 0], [2, 0]], [[1, 1]], 1e-6)
