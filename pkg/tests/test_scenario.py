import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dronesnc.model import Bounds
from dronesnc.scenario import (GENERATOR, SCHEMA_VERSION, Scenario, ScenarioError, World, derived_default,
                               generate_users, get_preset, paper_default, trial_seeds)


def test_paper_default_values():
    sc = paper_default()
    assert sc.environment.name == "dense-urban"
    assert (sc.gamma, sc.fc, sc.d_u, sc.user_count) == (90.0, 2.5e9, 200.0, 15)
    assert sc.bounds == Bounds.square(700.0)
    assert sc.world.shape == "disk" and sc.world.W == 700.0
    assert sc.gamma_star == 209.0
    assert sc.pwl.tau_vertices == (0.05, 0.1, 0.2, 0.9)
    assert sc.pwl.d_vertices == (5.0, 10.0, 20.0, 40.0, 200.0)
    assert sc.grid.shape == (4, 5)
    assert sc.density() == pytest.approx(15 / (math.pi * 700.0**2))


def test_derived_default_uses_channel_radius():
    sc = derived_default()
    assert sc.gamma_star == pytest.approx(sc.alpha_result.gamma_star)
    assert sc.alpha_star == paper_default().alpha_star


def test_json_roundtrip():
    sc = paper_default()
    back = Scenario.from_json(sc.to_json())
    assert back == sc and back.digest() == sc.digest()
    custom = sc.with_(explicit_users=((0.0, 0.0), (10.0, 5.0)), world=World("rectangle", box=(-50, 50, -50, 50)))
    back = Scenario.from_dict(json.loads(custom.to_json()))
    assert back.explicit_users == custom.explicit_users and back.world == custom.world


def test_inline_environment():
    d = paper_default().to_dict()
    d["environment"] = {"a": 9.61, "b": 0.16, "eta_los": 1.0, "eta_nlos": 20.0}
    sc = Scenario.from_dict(d)
    assert sc.environment.a == 9.61


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(schema_version=99),
    lambda d: d.update(environment="rural"),
    lambda d: d.update(bounds=[1, 2, 3]),
    lambda d: d.update(bounds=[10, 0, 0, 10]),
    lambda d: d.update(d_u=-5),
    lambda d: d.update(users={"explicit": [[5000.0, 0.0]]}),
    lambda d: d.update(world={"shape": "hexagon"}),
    lambda d: d.update(gamma_star=-1),
    lambda d: d.update(fit={"k1": 0.1, "k2": 0.0}),
])
def test_invalid_scenarios(mutate):
    d = paper_default().to_dict()
    mutate(d)
    with pytest.raises(ScenarioError):
        Scenario.from_dict(d)


def test_bad_json_text():
    with pytest.raises(ScenarioError):
        Scenario.from_json("{not json")


def test_presets():
    assert get_preset("paper-default") == paper_default()
    with pytest.raises(ScenarioError):
        get_preset("nope")


def test_generate_users_edge_cases():
    assert generate_users(World(), 0, 1) == []
    with pytest.raises(ValueError):
        generate_users(World(), -1, 1)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 60))
def test_generate_users_in_disk_and_deterministic(seed, n):
    w = World("disk", 700.0)
    a = generate_users(w, n, seed)
    assert len(a) == n
    assert all(u.x**2 + u.y**2 <= 700.0**2 for u in a)
    assert a == generate_users(w, n, seed)


def test_rectangle_world():
    w = World("rectangle", box=(0, 10, -5, 5))
    us = generate_users(w, 200, 3)
    assert all(0 <= u.x <= 10 and -5 <= u.y <= 5 for u in us)


def test_uniform_in_disk():
    # radial CDF of a uniform disk is (r/W)^2
    us = generate_users(World("disk", 1.0), 20_000, 11)
    r2 = np.array([u.x**2 + u.y**2 for u in us])
    assert abs(np.mean(r2 <= 0.25) - 0.25) < 0.015


def test_trial_seeds_are_prefix_stable():
    a = trial_seeds(7, 5)
    b = trial_seeds(7, 10)[:5]
    assert [s.spawn_key for s in a] == [s.spawn_key for s in b]
    u1 = generate_users(World(), 5, a[2])
    u2 = generate_users(World(), 5, b[2])
    assert u1 == u2
    assert GENERATOR and SCHEMA_VERSION == 1
