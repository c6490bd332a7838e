"""Deterministic scaling tables g and the random factors theta with h <= theta * g."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DominationError, ValidationError
from .modulus import ModulusProfile

DEFAULT_QUANTILE = 0.95


@dataclass(frozen=True, eq=False)
class ScalingTable:
    """g[k] = g(k/m): nonnegative, nondecreasing, zero at the origin."""

    g: np.ndarray
    normalized: bool = False
    degenerate: bool = False

    def __post_init__(self):
        g = np.array(self.g, dtype=float)
        if g.ndim != 1 or g.size < 2:
            raise ValidationError("a scaling table needs m + 1 >= 2 entries")
        if not np.all(np.isfinite(g)) or np.any(g < 0):
            raise ValidationError("scaling table entries must be finite and nonnegative")
        if g[0] != 0:
            raise ValidationError("scaling table must vanish at the origin")
        if np.any(np.diff(g) < 0):
            raise ValidationError("scaling table must be nondecreasing")
        if self.normalized and g[-1] != 1.0:
            raise ValidationError("normalized table must end at exactly 1")
        if self.degenerate and np.any(g != 0):
            raise ValidationError("degenerate table must be identically zero")
        g.setflags(write=False)
        object.__setattr__(self, "g", g)

    @property
    def m(self) -> int:
        return self.g.size - 1

    def __eq__(self, other):
        return (isinstance(other, ScalingTable) and np.array_equal(self.g, other.g)
                and self.normalized == other.normalized and self.degenerate == other.degenerate)

    @classmethod
    def from_values(cls, g) -> "ScalingTable":
        """Wrap raw values, setting the flags from the data."""
        g = np.asarray(g, dtype=float)
        return cls(g, normalized=bool(g[-1] == 1.0), degenerate=bool(np.all(g == 0)))

    def to_json(self) -> dict:
        return {"m": self.m, "g": self.g.tolist(), "normalized": self.normalized,
                "degenerate": self.degenerate}

    @classmethod
    def from_json(cls, obj: dict) -> "ScalingTable":
        try:
            m, g = int(obj["m"]), obj["g"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"scaling JSON needs 'm' and 'g': {exc}") from None
        if len(g) != m + 1:
            raise ValidationError(f"expected {m + 1} entries for m={m}, got {len(g)}")
        return cls(g, normalized=bool(obj.get("normalized", False)),
                   degenerate=bool(obj.get("degenerate", False)))


def order_statistic(values: np.ndarray, q: float, axis: int = 0) -> np.ndarray:
    """Empirical q-quantile: the ceil(q*R)-th smallest of R values (1-based)."""
    if not 0 < q <= 1:
        raise ValidationError(f"quantile must lie in (0, 1], got {q}")
    values = np.sort(np.asarray(values, dtype=float), axis=axis)
    n = values.shape[axis]
    idx = max(math.ceil(q * n), 1) - 1
    return np.take(values, idx, axis=axis)


def _stack(envelopes) -> np.ndarray:
    if isinstance(envelopes, np.ndarray):
        arr = np.asarray(envelopes, dtype=float)
    else:
        envelopes = list(envelopes)
        if not envelopes:
            raise ValidationError("cannot fit a scaling table to no envelopes")
        m = envelopes[0].m
        if any(e.m != m for e in envelopes):
            raise ValidationError("envelopes have mixed grid resolutions")
        arr = np.stack([e.delta for e in envelopes])
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValidationError("cannot fit a scaling table to no envelopes")
    return arr


def fit_scaling(envelopes: Sequence[ModulusProfile] | np.ndarray,
                q: float = DEFAULT_QUANTILE) -> ScalingTable:
    """Per-lag q-quantile of the envelopes, monotonized and scaled so g[m] = 1.

    An array of shape (R, m + 1) is accepted in place of profile objects.
    """
    arr = _stack(envelopes)
    g = order_statistic(arr, q, axis=0)
    g[0] = 0.0
    g = np.maximum.accumulate(g)
    if g[-1] <= 0:
        return ScalingTable(np.zeros_like(g), degenerate=True)
    g = g / g[-1]
    g[-1] = 1.0
    return ScalingTable(g, normalized=True)


def smallest_dominating_factor(num: np.ndarray, den: np.ndarray) -> float:
    """Least float c with num <= c * den elementwise, where 0/0 counts as 0.

    The quotient is rounded, so the candidate max(num/den) is nudged up one ulp
    at a time until the product inequality holds in floating point. Returns inf
    when the quotient overflows (no finite float dominates).
    """
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    pos = num > 0
    if np.any(pos & (den == 0)):
        raise DominationError("scaling vanishes where the dominated quantity is positive")
    if not np.any(pos):
        return 0.0
    with np.errstate(over="ignore"):
        c = float(np.max(num[pos] / den[pos]))
    while np.any(num[pos] > c * den[pos]):
        c = math.nextafter(c, math.inf)
    return c


def domination_coefficient(envelope: ModulusProfile | np.ndarray, g: ScalingTable) -> float:
    """Smallest theta with envelope[k] <= theta * g[k] for every lag k >= 1.

    Raises DominationError when g vanishes at a lag where the envelope does not,
    i.e. the fitted g decays too fast at the origin.
    """
    e = envelope.delta if isinstance(envelope, ModulusProfile) else np.asarray(envelope, dtype=float)
    if e.size != g.g.size:
        raise ValidationError(f"grid resolution mismatch: m={e.size - 1} vs m={g.m}")
    try:
        return smallest_dominating_factor(e[1:], g.g[1:])
    except DominationError:
        bad = int(np.flatnonzero((e[1:] > 0) & (g.g[1:] == 0))[0]) + 1
        raise DominationError(f"g fails to dominate: g[{bad}] = 0 but envelope[{bad}] = {e[bad]!r}") from None


def sqrt_scale(g: ScalingTable) -> ScalingTable:
    return ScalingTable(np.sqrt(g.g), normalized=g.normalized, degenerate=g.degenerate)


def merge_max(g1: ScalingTable, g2: ScalingTable) -> ScalingTable:
    """Entrywise max of two tables, so both families are covered at once."""
    if g1.m != g2.m:
        raise ValidationError(f"grid resolution mismatch: m={g1.m} vs m={g2.m}")
    return ScalingTable.from_values(np.maximum(g1.g, g2.g))
