import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holderlift import (Ensemble, ValidationError, dominate_sequence, generate_ensemble, load_ensemble,
                        save_ensemble, sup_norm, uniform_deviations)
from holderlift.coupling import EPS_FLOOR, midpoint_displacement, random_walk_path
from oracles import sorted_quantile

KINDS = ["SMOOTH_DECAY", "ROUGH_DECAY", "DONSKER", "CONSTANT"]


@pytest.mark.parametrize("kind", KINDS)
def test_shapes_and_reproducibility(kind):
    a = generate_ensemble(kind, 32, 5, 3, seed=11)
    b = generate_ensemble(kind, 32, 5, 3, seed=11)
    assert a.limits.shape == (3, 33) and a.members.shape == (3, 5, 33)
    assert a.limits.tobytes() == b.limits.tobytes()
    assert a.members.tobytes() == b.members.tobytes()
    c = generate_ensemble(kind, 32, 5, 3, seed=12)
    assert c.limits.tobytes() != a.limits.tobytes()


@pytest.mark.parametrize("kind", KINDS)
def test_thread_count_does_not_change_output(kind):
    a = generate_ensemble(kind, 24, 3, 6, seed=3, threads=1)
    b = generate_ensemble(kind, 24, 3, 6, seed=3, threads=4)
    assert a.members.tobytes() == b.members.tobytes()


def test_replications_are_prefix_stable():
    small = generate_ensemble("ROUGH_DECAY", 16, 2, 2, seed=4)
    big = generate_ensemble("ROUGH_DECAY", 16, 2, 5, seed=4)
    assert np.array_equal(small.members, big.members[:2])


def test_constant_has_zero_deviation():
    e = generate_ensemble("CONSTANT", 20, 4, 3, seed=0)
    assert np.all(uniform_deviations(e) == 0)


def test_smooth_decay_amplitude():
    e = generate_ensemble("SMOOTH_DECAY", 64, 4, 1, seed=8)
    zeta = uniform_deviations(e)[0]
    np.testing.assert_allclose(zeta, np.arange(1, 5) ** -0.5, rtol=1e-12)


def test_rough_decay_amplitude():
    e = generate_ensemble("ROUGH_DECAY", 64, 4, 2, seed=8)
    np.testing.assert_allclose(uniform_deviations(e), np.tile(1 / np.arange(1, 5), (2, 1)), rtol=1e-12)


def test_inverse_n_deviation():
    rng = np.random.default_rng(0)
    lim = rng.normal(size=(2, 17))
    w = rng.uniform(-1, 1, size=17)
    w /= np.max(np.abs(w))
    mem = np.stack([np.stack([lim[r] + w / n for n in range(1, 6)]) for r in range(2)])
    np.testing.assert_allclose(uniform_deviations(Ensemble(lim, mem)), np.tile(1 / np.arange(1, 6), (2, 1)),
                               rtol=1e-12)


def test_deviations_match_sup_norm_oracle():
    e = generate_ensemble("ROUGH_DECAY", 20, 3, 4, seed=2)
    zeta = uniform_deviations(e)
    for r in range(4):
        for n in range(1, 4):
            assert zeta[r, n - 1] == sup_norm(e.member(r, n) - e.limit(r))


def test_donsker_tagging_and_walk_scale():
    e = generate_ensemble("DONSKER", 64, 4, 2, seed=1)
    assert e.distributional_only
    assert e.params["m_block"] == 16
    # member n uses n * m_block steps of size 1/sqrt(steps)
    rng = np.random.default_rng(0)
    path = random_walk_path(rng, 64, 64)
    assert np.allclose(np.abs(np.diff(path)), 1 / 8)


def test_midpoint_displacement_brownian_variance():
    rng = np.random.default_rng(5)
    paths = np.stack([midpoint_displacement(rng, 64) for _ in range(4000)])
    assert np.all(paths[:, 0] == 0)
    t = np.arange(65) / 64
    # Var W(t) = t; 4000 draws gives a relative standard error near 2%
    np.testing.assert_allclose(paths[:, 1:].var(axis=0), t[1:], rtol=0.1)


def test_midpoint_displacement_non_dyadic():
    rng = np.random.default_rng(5)
    assert midpoint_displacement(rng, 100).shape == (101,)


@pytest.mark.parametrize("bad", [dict(kind="NOPE"), dict(m=0), dict(N=0), dict(R=0), dict(seed=-1)])
def test_generator_rejects(bad):
    args = dict(kind="SMOOTH_DECAY", m=8, N=2, R=2, seed=0) | bad
    with pytest.raises(ValidationError):
        generate_ensemble(**args)


def test_ensemble_rejects_bad_shapes():
    with pytest.raises(ValidationError):
        Ensemble(np.zeros((2, 5)), np.zeros((3, 1, 5)))
    with pytest.raises(ValidationError):
        Ensemble(np.zeros((2, 5)), np.zeros((2, 1, 4)))


# -- domination ------------------------------------------------------------

def test_zero_matrix():
    rec = dominate_sequence(np.zeros((4, 6)), 0.9)
    assert np.all(rec.tau == 0)
    assert np.all(rec.eps == EPS_FLOOR)


def test_single_replication_self_domination():
    z = np.array([[1.0, 0.5, 0.25, 0.2]])
    rec = dominate_sequence(z, 1.0)
    np.testing.assert_array_equal(rec.eps, z[0])
    assert rec.tau[0] == 1.0


def test_eps_matches_quantile_oracle():
    rng = np.random.default_rng(4)
    z = rng.exponential(size=(50, 10)) * 0.8 ** np.arange(10)
    rec = dominate_sequence(z, 0.9)
    per_n = [sorted_quantile(z[:, n], 0.9) for n in range(10)]
    expected = [max(per_n[n:]) for n in range(10)]
    np.testing.assert_array_equal(rec.eps, expected)


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.5, 0.9, 1.0, 0.37]))
def test_domination_is_exact(seed, q):
    rng = np.random.default_rng(seed)
    R, N = int(rng.integers(1, 51)), int(rng.integers(1, 65))
    z = rng.exponential(size=(R, N)) * rng.uniform(0.5, 1, N).cumprod() * 10 ** rng.uniform(-200, 200)
    z[rng.random((R, N)) < 0.1] = 0
    rec = dominate_sequence(z, q)
    assert np.all(z <= rec.tau[:, None] * rec.eps[None, :])
    assert np.all(np.diff(rec.eps) <= 0)
    assert np.all(rec.eps > 0)


def test_domination_rejects_bad_input():
    with pytest.raises(ValidationError):
        dominate_sequence(np.array([[1.0, -1.0]]))
    with pytest.raises(ValidationError):
        dominate_sequence(np.array([[1.0, math.nan]]))


@pytest.mark.parametrize("kind", ["SMOOTH_DECAY", "ROUGH_DECAY"])
def test_decay_is_visible(kind):
    e = generate_ensemble(kind, 64, 16, 20, seed=9)
    z = uniform_deviations(e)
    assert z[:, -1].max() < z[:, 0].max()
    rec = dominate_sequence(z, 0.95)
    assert rec.eps[-1] / rec.eps[0] <= 0.5


# -- file format -----------------------------------------------------------

def test_save_load_round_trip(tmp_path):
    e = generate_ensemble("ROUGH_DECAY", 16, 3, 2, seed=6)
    save_ensemble(tmp_path / "ens.json", e)
    assert sorted(p.name for p in tmp_path.iterdir()) == ["ens.json", "ens.limits.csv", "ens.members.csv"]
    back = load_ensemble(tmp_path / "ens.json")
    assert np.array_equal(back.limits, e.limits) and np.array_equal(back.members, e.members)
    assert back.manifest() == e.manifest()


def test_load_rejects_inconsistent(tmp_path):
    e = generate_ensemble("CONSTANT", 8, 2, 2, seed=0)
    save_ensemble(tmp_path / "ens.json", e)
    text = (tmp_path / "ens.json").read_text().replace('"N": 2', '"N": 3')
    (tmp_path / "ens.json").write_text(text)
    with pytest.raises(ValidationError):
        load_ensemble(tmp_path / "ens.json")
