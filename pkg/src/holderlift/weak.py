"""Sample-level surrogates for weak convergence, in the sup norm or in a
fitted Hoelder norm. Nothing here certifies convergence of measures; the
reports say so."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bernstein import Functional, mc_verdict, truncate_functional
from .coupling import Ensemble
from .errors import NumericalError, ValidationError
from .grid import GridPath
from .holder import holder_norm_array
from .scaling import ScalingTable

N_LANDMARKS = 32


@dataclass(frozen=True)
class TestFunctionalSuite:
    """Bounded continuous test functionals clamp(F, -B, B)."""

    __test__ = False  # not a pytest class

    members: tuple[Functional, ...]

    def __post_init__(self):
        if not self.members:
            raise ValidationError("a test suite needs at least one functional")
        if any(f.cap is None for f in self.members):
            raise ValidationError("every test functional must carry a bound")

    @classmethod
    def from_pairs(cls, pairs) -> "TestFunctionalSuite":
        return cls(tuple(truncate_functional(f, b) for f, b in pairs))


def test_functional_convergence(e: Ensemble, suite: TestFunctionalSuite, abs_tol: float = 1e-12) -> dict:
    """Per-functional mean traces and 3-sigma verdicts at the last n."""
    reports = []
    for f in suite.members:
        vals = f.evaluate(e.members)
        means = np.mean(vals, axis=0)
        limit = float(np.mean(f.evaluate(e.limits)))
        band, gap, verdict = mc_verdict(vals[:, -1], float(means[-1]), limit, abs_tol)
        reports.append({"functional": f.to_config(), "means": means.tolist(), "limit": limit,
                        "gap": gap, "mc_band": band, "verdict": verdict})
    overall = all(r["verdict"] == "CONVERGENT" for r in reports)
    return {"label": "empirical", "functionals": reports,
            "verdict": "CONVERGENT" if overall else "NOT_CONVERGENT"}


test_functional_convergence.__test__ = False


def _as_block(samples) -> np.ndarray:
    if isinstance(samples, np.ndarray):
        arr = np.asarray(samples, dtype=float)
    else:
        arr = np.asarray([s.values if isinstance(s, GridPath) else s for s in samples], dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValidationError("need a nonempty collection of paths")
    return arr


def choose_landmarks(samples, count: int = N_LANDMARKS, seed: int = 0) -> np.ndarray:
    """Deterministic subset of the sample paths, drawn without replacement."""
    arr = _as_block(samples)
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(arr.shape[0], size=min(count, arr.shape[0]), replace=False))
    return arr[idx]


def landmark_distances(samples: np.ndarray, landmarks: np.ndarray,
                       g: ScalingTable | None = None) -> np.ndarray:
    """Distances (n_landmarks, n_samples) in the sup norm, or in H^o(sqrt g) when g is given."""
    diff = samples[None, :, :] - landmarks[:, None, :]
    if g is None:
        return np.max(np.abs(diff), axis=-1)
    if g.degenerate and np.any(diff != 0):
        raise NumericalError("degenerate g: Hoelder distances between distinct paths are undefined")
    sup, holder = holder_norm_array(diff, g)
    return sup + holder


def bounded_lipschitz_distance(samples_a, samples_b, g: ScalingTable | None = None, *,
                               landmarks=None, n_landmarks: int = N_LANDMARKS, seed: int = 0,
                               shifts=(0.0,)) -> float:
    """max |mean_a F - mean_b F| over F(x) = clamp(d(x, l_j) - s, 0, 1).

    Each F is bounded by 1 and 1-Lipschitz for the chosen norm (sup norm, or
    H^o(sqrt g) when ``g`` is given). Landmarks default to a seeded subset of
    ``samples_a``; pass them explicitly to compare several pairs over one
    fixed dictionary. Nonzero ``shifts`` keep the dictionary informative when
    typical distances exceed 1.
    """
    a, b = _as_block(samples_a), _as_block(samples_b)
    if a.shape[1] != b.shape[1]:
        raise ValidationError(f"grid resolution mismatch: m={a.shape[1] - 1} vs m={b.shape[1] - 1}")
    lm = choose_landmarks(a, n_landmarks, seed) if landmarks is None else _as_block(landmarks)
    if lm.shape[1] != a.shape[1]:
        raise ValidationError("landmarks live on a different grid")
    shifts = np.asarray(shifts, dtype=float).reshape(-1, 1, 1)
    if shifts.size == 0 or np.any(shifts < 0):
        raise ValidationError("shifts must be a nonempty set of nonnegative reals")
    da, db = landmark_distances(a, lm, g), landmark_distances(b, lm, g)
    fa = np.clip(da[None] - shifts, 0.0, 1.0).mean(axis=-1)
    fb = np.clip(db[None] - shifts, 0.0, 1.0).mean(axis=-1)
    return float(np.max(np.abs(fa - fb)))
