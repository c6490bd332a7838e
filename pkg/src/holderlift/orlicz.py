"""Young functions, empirical Luxemburg norms, and the Delta_2 / weaker-than
comparisons used to describe the tails of the domination coefficient."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import ValidationError

BISECTION_RTOL = 1e-10
DEFAULT_V_SET = (0.5, 1.0, 2.0, 10.0)


class Family(str, Enum):
    POWER = "power"
    EXP_SQUARE = "exp_square"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class YoungFunction:
    """Convex nondecreasing Phi on [0, inf) with Phi(0) = 0.

    POWER: u**p (p >= 1); EXP_SQUARE: exp(u**2 / 2) - 1; TABULATED: the
    piecewise-linear interpolant of knots through the origin, continued past
    the last knot with the last slope.
    """

    family: Family
    p: float | None = None
    knots: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.family is Family.POWER:
            if self.p is None or not self.p >= 1:
                raise ValidationError(f"POWER needs p >= 1, got {self.p}")
            object.__setattr__(self, "p", float(self.p))
        elif self.family is Family.TABULATED:
            object.__setattr__(self, "knots", _validate_knots(self.knots))

    @classmethod
    def power(cls, p: float) -> "YoungFunction":
        return cls(Family.POWER, p=p)

    @classmethod
    def exp_square(cls) -> "YoungFunction":
        return cls(Family.EXP_SQUARE)

    @classmethod
    def tabulated(cls, knots) -> "YoungFunction":
        return cls(Family.TABULATED, knots=knots)

    @classmethod
    def from_config(cls, cfg: dict | str) -> "YoungFunction":
        if isinstance(cfg, str):
            try:
                cfg = json.loads(cfg)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"Young function config is not JSON: {exc}") from None
        if not isinstance(cfg, dict) or "family" not in cfg:
            raise ValidationError("Young function config needs a 'family' key")
        extra = set(cfg) - {"family", "p", "knots"}
        if extra:
            raise ValidationError(f"unknown Young function keys: {sorted(extra)}")
        try:
            family = Family(cfg["family"])
        except ValueError:
            raise ValidationError(f"unknown Young function family {cfg['family']!r}") from None
        return cls(family, p=cfg.get("p"), knots=cfg.get("knots"))

    def to_config(self) -> dict:
        out = {"family": self.family.value}
        if self.family is Family.POWER:
            out["p"] = self.p
        elif self.family is Family.TABULATED:
            out["knots"] = [list(k) for k in self.knots]
        return out

    def __call__(self, u):
        u = np.abs(np.asarray(u, dtype=float))
        if self.family is Family.POWER:
            return u ** self.p
        if self.family is Family.EXP_SQUARE:
            with np.errstate(over="ignore"):
                return np.expm1(0.5 * u * u)
        ku, kv = self._knot_arrays()
        slope = (kv[-1] - kv[-2]) / (ku[-1] - ku[-2])
        return np.where(u <= ku[-1], np.interp(u, ku, kv), kv[-1] + slope * (u - ku[-1]))

    def log(self, u):
        """log Phi(u), finite far beyond where Phi itself overflows."""
        u = np.abs(np.asarray(u, dtype=float))
        with np.errstate(divide="ignore"):
            if self.family is Family.POWER:
                return self.p * np.log(u)
            if self.family is Family.EXP_SQUARE:
                half = 0.5 * u * u
                return half + np.log(-np.expm1(-half))
            return np.log(self(u))

    def inverse(self, y: float) -> float:
        """Phi^{-1}(y) for y > 0."""
        if self.family is Family.POWER:
            return y ** (1.0 / self.p)
        if self.family is Family.EXP_SQUARE:
            return math.sqrt(2.0 * math.log1p(y))
        ku, kv = self._knot_arrays()
        if y <= kv[-1]:
            i = int(np.searchsorted(kv, y, side="left"))
            if kv[i] == y:
                return float(ku[i])
            return float(ku[i - 1] + (y - kv[i - 1]) * (ku[i] - ku[i - 1]) / (kv[i] - kv[i - 1]))
        slope = (kv[-1] - kv[-2]) / (ku[-1] - ku[-2])
        return float(ku[-1] + (y - kv[-1]) / slope)

    def _knot_arrays(self):
        k = np.asarray(self.knots, dtype=float)
        return k[:, 0], k[:, 1]


def _validate_knots(knots) -> tuple[tuple[float, float], ...]:
    if knots is None:
        raise ValidationError("TABULATED needs knots")
    k = np.asarray(knots, dtype=float)
    if k.ndim != 2 or k.shape[1] != 2 or not np.all(np.isfinite(k)):
        raise ValidationError("knots must be finite [u, phi(u)] pairs")
    if k[0, 0] != 0:
        k = np.vstack([[0.0, 0.0], k])
    if k[0, 1] != 0:
        raise ValidationError("a Young function must vanish at 0")
    if k.shape[0] < 2 or np.any(np.diff(k[:, 0]) <= 0):
        raise ValidationError("knot abscissae must be strictly increasing")
    slopes = np.diff(k[:, 1]) / np.diff(k[:, 0])
    if np.any(slopes < 0) or np.any(np.diff(slopes) < -1e-12 * np.max(np.abs(slopes))):
        raise ValidationError("knot slopes must be nonnegative and nondecreasing (convexity)")
    if slopes[-1] <= 0:
        raise ValidationError("tabulated Young function is identically zero")
    return tuple((float(a), float(b)) for a, b in k)


def _samples(x) -> np.ndarray:
    x = np.abs(np.asarray(x, dtype=float).ravel())
    if x.size == 0:
        raise ValidationError("need at least one sample")
    if not np.all(np.isfinite(x)):
        raise ValidationError("samples must be finite")
    return x


def luxemburg_norm(samples: Sequence[float], phi: YoungFunction, rtol: float = BISECTION_RTOL) -> float:
    """inf{c > 0 : mean Phi(|x| / c) <= 1} by bisection.

    The bracket [max|x| / Phi^{-1}(n), max|x| / Phi^{-1}(1)] always contains
    the answer; it is halved until its width falls below rtol times its
    initial width.
    """
    x = _samples(samples)
    top = float(np.max(x))
    if top == 0:
        return 0.0
    if phi(top) == 0:
        raise ValidationError("Young function vanishes on the whole sample range")
    lo, hi = top / phi.inverse(float(x.size)), top / phi.inverse(1.0)
    tol = rtol * (hi - lo)
    with np.errstate(over="ignore"):
        for _ in range(200):
            if hi - lo <= tol:
                break
            mid = 0.5 * (lo + hi)
            if np.mean(phi(x / mid)) <= 1.0:
                hi = mid
            else:
                lo = mid
    return 0.5 * (lo + hi)


def normalize_sup_rv(values: Sequence[float], phi: YoungFunction) -> float:
    """Scale c with mean Phi(c |x|) = 1, bisected to float resolution."""
    x = _samples(values)
    top = float(np.max(x))
    if top == 0:
        raise ValidationError("all-zero samples cannot be normalized")
    lo, hi = phi.inverse(1.0) / top, phi.inverse(float(x.size)) / top
    with np.errstate(over="ignore"):
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if np.mean(phi(mid * x)) < 1.0:
                lo = mid
            else:
                hi = mid
    return 0.5 * (lo + hi)


def default_probe_grid() -> np.ndarray:
    return np.geomspace(1.0, 1e6, 61)


def _check_probes(probes) -> np.ndarray:
    u = np.asarray(probes, dtype=float)
    if u.ndim != 1 or u.size < 4 or np.any(u <= 0) or np.any(np.diff(u) <= 0):
        raise ValidationError("probe grid must be increasing positive values")
    if math.log10(u[-1] / u[0]) < 6 - 1e-9:
        raise ValidationError("probe grid must span at least 6 decades")
    return u


@dataclass(frozen=True)
class ProbeVerdict:
    passed: bool
    ratio: float | None
    witness: dict

    def to_json(self) -> dict:
        return {"passed": self.passed, "ratio": self.ratio, "witness": self.witness}


def delta2_check(phi: YoungFunction, probes=None, closed_form: bool = True) -> ProbeVerdict:
    """Is Phi(2u) / Phi(u) bounded as u grows?

    POWER and EXP_SQUARE are decided exactly unless ``closed_form`` is off;
    otherwise the ratio at the largest probes must stay within a factor 2 of
    the ratio at mid probes.
    """
    u = _check_probes(default_probe_grid() if probes is None else probes)
    if closed_form and phi.family is Family.POWER:
        return ProbeVerdict(True, 2.0 ** phi.p, {"closed_form": "Phi(2u) = 2^p Phi(u)"})
    if closed_form and phi.family is Family.EXP_SQUARE:
        return ProbeVerdict(False, None, {"closed_form": "Phi(2u)/Phi(u) ~ exp(3u^2/2) diverges"})
    log_ratio = phi.log(2 * u) - phi.log(u)
    keep = np.isfinite(log_ratio)
    u, log_ratio = u[keep], log_ratio[keep]
    with np.errstate(over="ignore"):
        ratio = np.exp(log_ratio)
    mid = ratio[len(ratio) // 2]
    last = ratio[-1]
    passed = bool(np.isfinite(last) and last <= 2 * mid)
    return ProbeVerdict(passed, float(last) if passed else None,
                        {"u": u.tolist(), "ratio": ratio.tolist()})


def weaker_than(psi: YoungFunction, phi: YoungFunction, v_set=DEFAULT_V_SET, probes=None) -> ProbeVerdict:
    """Does Psi(u v) / Phi(u) -> 0 as u -> inf for every v in v_set?

    Per v, the log-ratio must be nonincreasing over the last quarter of the
    probe grid and end at least a factor 100 below its midpoint value.
    """
    u = _check_probes(default_probe_grid() if probes is None else probes)
    v_set = tuple(float(v) for v in v_set)
    if not v_set or any(v <= 0 for v in v_set):
        raise ValidationError("v_set must be nonempty and positive")
    traces = {}
    for v in v_set:
        lr = psi.log(u * v) - phi.log(u)
        tail = lr[-max(2, len(lr) // 4):]
        decreasing = bool(np.all(np.diff(tail) <= 0))
        small = bool(lr[-1] <= lr[len(lr) // 2] + math.log(0.01))
        traces[repr(v)] = lr.tolist()
        if not (decreasing and small):
            return ProbeVerdict(False, None, {"v": v, "u": u.tolist(), "log_ratio": lr.tolist()})
    return ProbeVerdict(True, None, {"u": u.tolist(), "log_ratio": traces})


@dataclass(frozen=True)
class ThetaReport:
    norm: float
    half_norm: float
    stability_ratio: float
    tail_t: np.ndarray
    tail_prob: np.ndarray
    phi: YoungFunction

    def to_json(self) -> dict:
        return {"phi": self.phi.to_config(), "luxemburg_norm": self.norm,
                "half_sample_norm": self.half_norm, "stability_ratio": self.stability_ratio,
                "bisection_rtol": BISECTION_RTOL,
                "tail": {"t": self.tail_t.tolist(), "prob_exceed": self.tail_prob.tolist()}}


def theta_orlicz_report(theta_samples: Sequence[float], phi: YoungFunction, tail_points: int = 25) -> ThetaReport:
    """Luxemburg norm of theta, its tail curve, and a half-sample stability ratio.

    A half/full ratio near 1 is consistent with theta in L(Phi); a ratio that
    keeps moving as the sample grows suggests the chosen g leaves theta outside.
    """
    theta = _samples(theta_samples)
    full = luxemburg_norm(theta, phi)
    half = luxemburg_norm(theta[: max(1, theta.size // 2)], phi)
    stability = half / full if full > 0 else 1.0
    pos = theta[theta > 0]
    if pos.size:
        t = np.geomspace(pos.min(), pos.max(), tail_points) if pos.max() > pos.min() else pos[:1].copy()
    else:
        t = np.array([1.0])
    prob = np.mean(theta[None, :] > t[:, None], axis=1)
    return ThetaReport(full, half, stability, t, prob, phi)
