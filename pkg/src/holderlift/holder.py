"""The modified Hoelder space H^o(sqrt g) over a tabulated scaling g.

    ||f|| = max_t |f(t)| + sup_{0<delta<1} Delta(f, delta) / sqrt(g(delta))

with the sup taken over grid lags. Functions whose modulus is positive where g
vanishes are not in the space; that is reported as a value, never raised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coupling import Ensemble
from .errors import NumericalError, ValidationError
from .grid import GridPath
from .modulus import profile_array
from .scaling import ScalingTable

TAIL_FRACTION = 0.02
RATIO_DECAY_FACTOR = 0.5
CURVE_DECAY_RATIO = 0.5


@dataclass(frozen=True)
class HolderNormBreakdown:
    sup_part: float
    holder_part: float
    total: float
    argmax_k: int

    @property
    def member(self) -> bool:
        return math.isfinite(self.holder_part)

    def to_json(self) -> dict:
        return {"sup_part": self.sup_part, "holder_part": self.holder_part,
                "total": self.total, "argmax_k": self.argmax_k, "member": self.member}


def holder_ratios(delta: np.ndarray, g: np.ndarray) -> np.ndarray:
    """delta / sqrt(g) on lags 1..m along the last axis, with 0/0 = 0 and x/0 = inf."""
    d = delta[..., 1:]
    root = np.sqrt(g[1:])
    out = np.zeros(d.shape)
    pos = root > 0
    out[..., pos] = d[..., pos] / root[pos]
    out[..., ~pos] = np.where(d[..., ~pos] > 0, np.inf, 0.0)
    return out


def _check_m(m: int, g: ScalingTable):
    if m != g.m:
        raise ValidationError(f"grid resolution mismatch: m={m} vs m={g.m}")


def holder_norm_array(values: np.ndarray, g: ScalingTable) -> tuple[np.ndarray, np.ndarray]:
    """(sup_part, holder_part) for a stack of paths along the last axis."""
    values = np.asarray(values, dtype=float)
    _check_m(values.shape[-1] - 1, g)
    sup = np.max(np.abs(values), axis=-1)
    holder = np.max(holder_ratios(profile_array(values), g.g), axis=-1)
    return sup, holder


def holder_norm(f: GridPath, g: ScalingTable) -> HolderNormBreakdown:
    _check_m(f.m, g)
    ratios = holder_ratios(profile_array(f.values), g.g)
    k = int(np.argmax(ratios)) + 1 if np.any(ratios > 0) else 0
    holder = float(ratios[k - 1]) if k else 0.0
    sup = float(np.max(np.abs(f.values)))
    return HolderNormBreakdown(sup, holder, sup + holder, k)


@dataclass(frozen=True)
class LittleOVerdict:
    passed: bool
    tail_max: float
    holder_part: float
    tail_lags: int
    ratios: np.ndarray = field(repr=False)
    reason: str = ""
    label: str = "empirical proxy: a finite grid cannot certify a limit"

    def to_json(self) -> dict:
        return {"passed": self.passed, "tail_max": self.tail_max, "holder_part": self.holder_part,
                "tail_lags": self.tail_lags, "reason": self.reason, "label": self.label,
                "ratios": self.ratios.tolist()}


def little_o_from_ratios(ratios: np.ndarray, g: ScalingTable, tail_fraction: float = TAIL_FRACTION,
                         decay_factor: float = RATIO_DECAY_FACTOR):
    """Vectorized little-o proxy on precomputed ratio curves (last axis = lags 1..m).

    Returns (passed, tail_max, holder_part, n_tail) arrays over the leading axes.
    """
    if not 0 < tail_fraction < 1:
        raise ValidationError("tail_fraction must lie in (0, 1)")
    holder = np.max(ratios, axis=-1)
    lags = np.flatnonzero(g.g[1:] > 0)
    if lags.size == 0:
        # with g = 0 everywhere the space holds only constants
        tail = np.where(holder > 0, np.inf, 0.0)
        return holder == 0, tail, holder, 0
    n_tail = max(1, int(tail_fraction * lags.size))
    tail = np.max(ratios[..., lags[:n_tail]], axis=-1)
    passed = np.isfinite(holder) & (tail <= decay_factor * holder)
    return passed, tail, holder, n_tail


def little_o_check(f: GridPath, g: ScalingTable, tail_fraction: float = TAIL_FRACTION,
                   decay_factor: float = RATIO_DECAY_FACTOR) -> LittleOVerdict:
    """Does Delta(f, delta) / sqrt(g(delta)) look small near delta = 0?

    Takes the lowest ``tail_fraction`` of the lags where g > 0 and passes when
    the largest ratio there is at most ``decay_factor`` times the overall sup.
    """
    _check_m(f.m, g)
    ratios = holder_ratios(profile_array(f.values), g.g)
    passed, tail, holder, n_tail = little_o_from_ratios(ratios, g, tail_fraction, decay_factor)
    passed, tail, holder = bool(passed), float(tail), float(holder)
    reason = ""
    if not passed:
        if g.degenerate or not np.any(g.g > 0):
            reason = "degenerate g with non-constant f"
        elif not math.isfinite(holder):
            reason = "not in space: modulus positive where g = 0"
        else:
            reason = "ratio does not decay towards the origin"
    return LittleOVerdict(passed, tail, holder, n_tail, ratios, reason)


def covering_subgrid(g: ScalingTable, eps: float) -> tuple[int, int, int]:
    """(k*, sub-grid node count, quantization levels) behind covering_number_bound."""
    if not eps > 0:
        raise ValidationError("eps must be positive")
    if not g.normalized:
        raise ValidationError("covering bound needs a normalized scaling table")
    h = eps / 3
    ok = np.flatnonzero(np.sqrt(g.g[1:]) <= h)
    if ok.size == 0:
        raise NumericalError(f"no lag with sqrt(g) <= eps/3 = {h!r} at m={g.m}; use a finer grid")
    k_star = int(ok[-1]) + 1
    nodes = -(-g.m // k_star) + 1
    levels = math.floor(2 / h) + 1
    return k_star, nodes, levels


def covering_number_bound(g: ScalingTable, eps: float) -> int:
    """Upper bound on the number of sup-norm eps-balls covering the unit ball.

    Members of the unit ball move by at most sqrt(g[k*]) <= eps/3 between
    sub-grid nodes k* lags apart, so quantizing their node values to a step
    of eps/3 in [-1, 1] pins them down to within eps.
    """
    _, nodes, levels = covering_subgrid(g, eps)
    return levels ** nodes


@dataclass(frozen=True)
class NormCurve:
    n: np.ndarray
    mean_norm: np.ndarray
    max_norm: np.ndarray
    non_members: np.ndarray
    norms: np.ndarray = field(repr=False)  # (R, N) totals
    verdict: str = "NOT_CONVERGENT"

    def to_json(self) -> dict:
        per_n = [{"n": int(n), "mean_norm": float(a), "max_norm": float(b), "non_members": int(c)}
                 for n, a, b, c in zip(self.n, self.mean_norm, self.max_norm, self.non_members)]
        return {"per_n": per_n, "verdict": self.verdict}


def norm_convergence_curve(ensemble: Ensemble, g: ScalingTable,
                           decay_ratio: float = CURVE_DECAY_RATIO,
                           profiles: np.ndarray | None = None) -> NormCurve:
    """||eta_n - eta|| in H^o(sqrt g), summarized over replications for each n.

    CONVERGENT when every difference is in the space and the mean norm at the
    last n is at most ``decay_ratio`` times its value at n = 1 (or all zero).
    ``profiles`` may carry precomputed modulus profiles of the differences.
    """
    diffs = ensemble.differences()
    _check_m(ensemble.m, g)
    if profiles is None:
        profiles = profile_array(diffs)
    sup = np.max(np.abs(diffs), axis=-1)
    holder = np.max(holder_ratios(profiles, g.g), axis=-1)
    norms = sup + holder
    mean = np.mean(norms, axis=0)
    non_members = np.sum(~np.isfinite(holder), axis=0)
    if np.any(non_members):
        verdict = "NOT_CONVERGENT"
    elif np.all(norms == 0) or mean[-1] <= decay_ratio * mean[0]:
        verdict = "CONVERGENT"
    else:
        verdict = "NOT_CONVERGENT"
    return NormCurve(np.arange(1, ensemble.N + 1), mean, np.max(norms, axis=0), non_members,
                     norms, verdict)
