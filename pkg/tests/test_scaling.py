import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holderlift import (DominationError, GridPath, ModulusProfile, ScalingTable, ValidationError,
                        domination_coefficient, envelope, fit_scaling, merge_max, modulus_profile,
                        sqrt_scale)
from oracles import random_table, sorted_quantile


def rough_profiles(rng, count, m, scale=1.0):
    return [modulus_profile(GridPath(np.cumsum(rng.normal(size=m + 1)) * scale)) for _ in range(count)]


def test_all_zero_envelopes_are_degenerate():
    g = fit_scaling([ModulusProfile(np.zeros(5))] * 3, 0.9)
    assert g.degenerate and not g.normalized
    assert np.all(g.g == 0)


def test_single_linear_envelope():
    env = modulus_profile(GridPath.from_function(lambda t: t, 4))
    g = fit_scaling([env], 1.0)
    np.testing.assert_array_equal(g.g, [0, 0.25, 0.5, 0.75, 1.0])
    assert g.normalized and not g.degenerate


def test_quantile_fit_matches_sort_oracle(rng):
    profs = rough_profiles(rng, 50, 16)
    g = fit_scaling(profs, 0.9)
    raw = np.array([sorted_quantile([p.delta[k] for p in profs], 0.9) for k in range(17)])
    raw[0] = 0
    mono = np.array([max(raw[: k + 1]) for k in range(17)])
    np.testing.assert_allclose(g.g, mono / mono[-1], rtol=1e-15, atol=0)
    assert g.g[-1] == 1.0


def test_fit_errors():
    with pytest.raises(ValidationError):
        fit_scaling([], 0.9)
    with pytest.raises(ValidationError):
        fit_scaling([ModulusProfile(np.zeros(3)), ModulusProfile(np.zeros(4))], 0.9)
    with pytest.raises(ValidationError):
        fit_scaling([ModulusProfile(np.zeros(3))], 0.0)


def test_fit_is_permutation_invariant(rng):
    profs = rough_profiles(rng, 20, 12)
    perm = rng.permutation(20)
    assert fit_scaling(profs, 0.7) == fit_scaling([profs[i] for i in perm], 0.7)


def test_domination_self_zero_and_multiple(rng):
    g = ScalingTable(random_table(rng, 10), normalized=True)
    assert domination_coefficient(ModulusProfile(g.g), g) == 1.0
    assert domination_coefficient(ModulusProfile(np.zeros(11)), g) == 0.0
    assert domination_coefficient(ModulusProfile(2 * g.g), g) == 2.0


def test_domination_failure_is_reported():
    g = ScalingTable([0.0, 0.0, 1.0], normalized=True)
    with pytest.raises(DominationError, match="fails to dominate"):
        domination_coefficient(ModulusProfile([0.0, 0.1, 0.2]), g)
    # 0/0 is fine
    assert domination_coefficient(ModulusProfile([0.0, 0.0, 0.5]), g) == 0.5


def test_domination_exact_at_top_quantile(rng):
    for trial in range(5):
        m = int(rng.integers(2, 65))
        envs = rough_profiles(rng, 20, m, scale=10 ** rng.uniform(-3, 3))
        g = fit_scaling(envs, 1.0)
        for e in envs:
            theta = domination_coefficient(e, g)
            assert np.all(e.delta <= theta * g.g)


def test_theta_is_smallest(rng):
    envs = rough_profiles(rng, 5, 20)
    g = fit_scaling(envs, 0.6)
    for e in envs:
        theta = domination_coefficient(e, g)
        smaller = np.nextafter(theta, 0)
        assert np.any(e.delta > smaller * g.g)


def test_sqrt_scale():
    z = ScalingTable(np.zeros(3), degenerate=True)
    assert sqrt_scale(z) == z
    np.testing.assert_array_equal(sqrt_scale(ScalingTable([0, 0.25, 1.0], normalized=True)).g, [0, 0.5, 1])


def test_sqrt_scale_elementwise(rng):
    g = random_table(rng, 30)
    out = sqrt_scale(ScalingTable(g, normalized=True)).g
    assert all(out[k] == np.sqrt(g[k]) for k in range(31))
    assert np.all(out >= g)


def test_merge_max(rng):
    g1 = ScalingTable(random_table(rng, 12), normalized=True)
    g2 = ScalingTable(random_table(rng, 12), normalized=True)
    zero = ScalingTable(np.zeros(13), degenerate=True)
    assert merge_max(g1, g1) == g1
    assert merge_max(g1, zero) == g1
    merged = merge_max(g1, g2)
    assert all(merged.g[k] == max(g1.g[k], g2.g[k]) for k in range(13))
    with pytest.raises(ValidationError):
        merge_max(g1, ScalingTable(np.zeros(4), degenerate=True))


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_merge_lowers_theta(seed):
    rng = np.random.default_rng(seed)
    g1 = ScalingTable(random_table(rng, 15), normalized=True)
    g2 = ScalingTable(random_table(rng, 15), normalized=True)
    e = envelope(rough_profiles(rng, 3, 15))
    merged = domination_coefficient(e, merge_max(g1, g2))
    assert merged <= min(domination_coefficient(e, g1), domination_coefficient(e, g2))


def test_table_validation():
    with pytest.raises(ValidationError):
        ScalingTable([0.0, 0.5, 0.4])
    with pytest.raises(ValidationError):
        ScalingTable([0.1, 0.5])
    with pytest.raises(ValidationError):
        ScalingTable([0.0, 0.5], normalized=True)


def test_table_json_round_trip(rng):
    g = ScalingTable(random_table(rng, 8), normalized=True)
    assert ScalingTable.from_json(g.to_json()) == g
    assert set(g.to_json()) == {"m", "g", "normalized", "degenerate"}
