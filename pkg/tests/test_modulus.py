import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from holderlift import GridPath, ModulusProfile, ValidationError, envelope, modulus_of_continuity, modulus_profile
from holderlift.modulus import load_profiles, profile_array, save_profiles
from oracles import brute_modulus, brute_profile

paths = st.integers(1, 32).flatmap(
    lambda m: arrays(float, m + 1, elements=st.floats(-100, 100, allow_nan=False)))


@pytest.mark.parametrize("k", [0, 1, 5, 10])
def test_constant_path(k):
    assert modulus_of_continuity(GridPath(np.full(11, 3.5)), k) == 0


def test_linear_path():
    f = GridPath.from_function(lambda t: t, 10)
    assert modulus_of_continuity(f, 3) == pytest.approx(0.3, abs=1e-15)


def test_random_path_matches_pair_scan(rng):
    v = rng.normal(size=51)
    assert modulus_of_continuity(GridPath(v), 7) == brute_modulus(v, 7)


def test_lag_out_of_range():
    with pytest.raises(ValidationError):
        modulus_of_continuity(GridPath.zeros(4), 5)
    with pytest.raises(ValidationError):
        modulus_of_continuity(GridPath.zeros(4), -1)


def test_profile_zero_and_linear():
    assert np.all(modulus_profile(GridPath.zeros(6)).delta == 0)
    prof = modulus_profile(GridPath.from_function(lambda t: t, 4))
    np.testing.assert_array_equal(prof.delta, [0, 0.25, 0.5, 0.75, 1.0])


def test_profile_matches_brute_force(rng):
    v = rng.normal(size=17)
    np.testing.assert_array_equal(modulus_profile(GridPath(v)).delta, brute_profile(v))


def test_profile_batch_equals_single(rng):
    block = rng.normal(size=(3, 4, 21))
    batch = profile_array(block)
    for idx in np.ndindex(3, 4):
        np.testing.assert_array_equal(batch[idx], modulus_profile(GridPath(block[idx])).delta)


def test_envelope_identity_and_dominance(rng):
    p = modulus_profile(GridPath(rng.normal(size=9)))
    assert envelope([p]) == p
    lin = modulus_profile(GridPath.from_function(lambda t: t, 8))
    assert envelope([lin, modulus_profile(GridPath.zeros(8))]) == lin


def test_envelope_elementwise_max(rng):
    profs = [modulus_profile(GridPath(rng.normal(size=17))) for _ in range(5)]
    env = envelope(profs)
    for k in range(17):
        assert env.delta[k] == max(p.delta[k] for p in profs)


def test_envelope_errors():
    with pytest.raises(ValidationError):
        envelope([])
    with pytest.raises(ValidationError):
        envelope([modulus_profile(GridPath.zeros(3)), modulus_profile(GridPath.zeros(4))])


def test_profile_invariants_enforced():
    with pytest.raises(ValidationError):
        ModulusProfile([0.0, 2.0, 1.0])
    with pytest.raises(ValidationError):
        ModulusProfile([0.5, 1.0])


def test_json_round_trip(tmp_path, rng):
    profs = [modulus_profile(GridPath(rng.normal(size=6))) for _ in range(3)]
    assert json.loads(json.dumps(profs[0].to_json()))["m"] == 5
    save_profiles(tmp_path / "env.json", profs)
    assert load_profiles(tmp_path / "env.json") == profs


@settings(max_examples=150)
@given(paths)
def test_subadditivity_exhaustive(v):
    prof = modulus_profile(GridPath(v)).delta
    m = len(v) - 1
    for k1 in range(m + 1):
        for k2 in range(m + 1 - k1):
            assert prof[k1 + k2] <= prof[k1] + prof[k2] * (1 + 1e-15) + 1e-300


@settings(max_examples=150)
@given(st.integers(1, 24).flatmap(lambda m: st.tuples(
    arrays(float, m + 1, elements=st.floats(-100, 100, allow_nan=False)),
    arrays(float, m + 1, elements=st.floats(-100, 100, allow_nan=False)))))
def test_modulus_of_sum(pair):
    f, g = GridPath(pair[0]), GridPath(pair[1])
    pf, pg, ps = (modulus_profile(x).delta for x in (f, g, f + g))
    assert np.all(ps <= (pf + pg) * (1 + 1e-12))


@settings(max_examples=100)
@given(paths)
def test_profile_bounds(v):
    prof = modulus_profile(GridPath(v)).delta
    assert prof[0] == 0
    assert np.all(np.diff(prof) >= 0)
    assert prof[-1] <= 2 * np.max(np.abs(v))


def test_envelope_dominates_inputs(rng):
    profs = [modulus_profile(GridPath(rng.normal(size=12) * s)) for s in (0.1, 1, 10)]
    env = envelope(profs)
    assert all(np.all(env.delta >= p.delta) for p in profs)
