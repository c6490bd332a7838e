"""Modulus of continuity of grid paths, and envelopes over families of paths.

For a piecewise-linear path the modulus at delta = k/m is attained at a pair
of grid nodes at most k apart, so tabulating it at every lag is exact.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .grid import GridPath


@dataclass(frozen=True, eq=False)
class ModulusProfile:
    """delta[k] = modulus of continuity at lag k/m, for k = 0..m."""

    delta: np.ndarray

    def __post_init__(self):
        d = np.array(self.delta, dtype=float)
        if d.ndim != 1 or d.size < 2:
            raise ValidationError("a profile needs m + 1 >= 2 entries")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise ValidationError("profile entries must be finite and nonnegative")
        if d[0] != 0:
            raise ValidationError("profile entry at lag 0 must be 0")
        if np.any(np.diff(d) < 0):
            raise ValidationError("profile must be nondecreasing in the lag")
        d.setflags(write=False)
        object.__setattr__(self, "delta", d)

    @property
    def m(self) -> int:
        return self.delta.size - 1

    def __eq__(self, other):
        return isinstance(other, ModulusProfile) and np.array_equal(self.delta, other.delta)

    def to_json(self) -> dict:
        return {"m": self.m, "delta": self.delta.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "ModulusProfile":
        try:
            m, delta = int(obj["m"]), obj["delta"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"profile JSON needs 'm' and 'delta': {exc}") from None
        if len(delta) != m + 1:
            raise ValidationError(f"expected {m + 1} entries for m={m}, got {len(delta)}")
        return cls(delta)


def profile_array(values: np.ndarray) -> np.ndarray:
    """Modulus profiles of a stack of paths along the last axis.

    Uses Delta(f, k) = max(Delta(f, k-1), max_i |f_{i+k} - f_i|), which touches
    the same node differences as the all-pairs scan and so agrees with it
    bitwise.
    """
    v = np.asarray(values, dtype=float)
    m = v.shape[-1] - 1
    out = np.zeros(v.shape, dtype=float)
    for k in range(1, m + 1):
        lag_k = np.max(np.abs(v[..., k:] - v[..., :-k]), axis=-1)
        out[..., k] = np.maximum(out[..., k - 1], lag_k)
    return out


def modulus_of_continuity(f: GridPath, k: int) -> float:
    """Largest |f(t_j) - f(t_i)| over node pairs with 0 < j - i <= k."""
    if not 0 <= k <= f.m:
        raise ValidationError(f"lag k={k} outside 0..{f.m}")
    if k == 0:
        return 0.0
    v = f.values
    best = 0.0
    for lag in range(1, k + 1):
        best = max(best, float(np.max(np.abs(v[lag:] - v[:-lag]))))
    return best


def modulus_profile(f: GridPath) -> ModulusProfile:
    return ModulusProfile(profile_array(f.values))


def envelope(profiles: Sequence[ModulusProfile]) -> ModulusProfile:
    """Pointwise maximum: the smallest profile dominating every input."""
    profiles = list(profiles)
    if not profiles:
        raise ValidationError("envelope of an empty family is undefined")
    m = profiles[0].m
    if any(p.m != m for p in profiles):
        raise ValidationError("profiles have mixed grid resolutions")
    return ModulusProfile(np.max(np.stack([p.delta for p in profiles]), axis=0))


def save_profiles(path, profiles: Sequence[ModulusProfile]) -> None:
    with open(path, "w") as fh:
        json.dump([p.to_json() for p in profiles], fh)


def load_profiles(path) -> list[ModulusProfile]:
    with open(path) as fh:
        obj = json.load(fh)
    if isinstance(obj, dict):
        obj = obj.get("envelopes", obj.get("profiles"))
    if not isinstance(obj, list):
        raise ValidationError("envelope file must hold a JSON list of profiles")
    return [ModulusProfile.from_json(o) for o in obj]
