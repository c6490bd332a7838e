"""Uniform integrability of unbounded path functionals and convergence of
their means (moment convergence) along a coupled ensemble."""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .coupling import Ensemble
from .errors import ValidationError
from .grid import GridPath

UI_DECAY_FACTOR = 0.1
MC_SIGMAS = 3.0


class Kind(str, Enum):
    SUP_NORM_POWER = "sup_norm_power"
    MAX_VALUE = "max_value"
    EVAL_AT = "eval_at"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Functional:
    """A sup-norm continuous map from grid paths to reals.

    CUSTOM is a weighted sum of built-in functionals. ``cap`` clamps the
    output to [-cap, cap].
    """

    kind: Kind
    p: float | None = None
    t: float | None = None
    terms: tuple[tuple[float, "Functional"], ...] = ()
    cap: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.SUP_NORM_POWER and (self.p is None or not self.p >= 1):
            raise ValidationError(f"sup_norm_power needs p >= 1, got {self.p}")
        if self.kind is Kind.EVAL_AT and (self.t is None or not 0 <= self.t <= 1):
            raise ValidationError(f"eval_at needs t in [0, 1], got {self.t}")
        if self.kind is Kind.CUSTOM and not self.terms:
            raise ValidationError("custom functional needs at least one term")
        if self.cap is not None and not self.cap > 0:
            raise ValidationError("cap must be positive")

    @classmethod
    def sup_norm_power(cls, p: float) -> "Functional":
        return cls(Kind.SUP_NORM_POWER, p=float(p))

    @classmethod
    def max_value(cls) -> "Functional":
        return cls(Kind.MAX_VALUE)

    @classmethod
    def eval_at(cls, t: float) -> "Functional":
        return cls(Kind.EVAL_AT, t=float(t))

    @classmethod
    def custom(cls, terms) -> "Functional":
        return cls(Kind.CUSTOM, terms=tuple((float(w), f) for w, f in terms))

    def evaluate(self, values) -> np.ndarray:
        """Apply to a stack of paths along the last axis."""
        v = np.asarray(values.values if isinstance(values, GridPath) else values, dtype=float)
        if self.kind is Kind.SUP_NORM_POWER:
            out = np.max(np.abs(v), axis=-1) ** self.p
        elif self.kind is Kind.MAX_VALUE:
            out = np.max(v, axis=-1)
        elif self.kind is Kind.EVAL_AT:
            m = v.shape[-1] - 1
            x = self.t * m
            i = min(int(math.floor(x)), m - 1)
            w = x - i
            out = (1 - w) * v[..., i] + w * v[..., i + 1]
        else:
            out = sum(w * f.evaluate(v) for w, f in self.terms)
        if self.cap is not None:
            out = np.clip(out, -self.cap, self.cap)
        return out

    def __call__(self, path) -> float:
        return float(self.evaluate(path))

    def to_config(self) -> dict:
        out = {"kind": self.kind.value}
        if self.p is not None:
            out["p"] = self.p
        if self.t is not None:
            out["t"] = self.t
        if self.terms:
            out["terms"] = [{"weight": w, "functional": f.to_config()} for w, f in self.terms]
        if self.cap is not None:
            out["cap"] = self.cap
        return out

    @classmethod
    def from_config(cls, cfg: dict | str) -> "Functional":
        if isinstance(cfg, str):
            try:
                cfg = json.loads(cfg)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"functional config is not JSON: {exc}") from None
        if not isinstance(cfg, dict) or "kind" not in cfg:
            raise ValidationError("functional config needs a 'kind' key")
        extra = set(cfg) - {"kind", "p", "t", "terms", "cap"}
        if extra:
            raise ValidationError(f"unknown functional keys: {sorted(extra)}")
        try:
            kind = Kind(cfg["kind"])
        except ValueError:
            raise ValidationError(f"unknown functional kind {cfg['kind']!r}") from None
        terms = ()
        if kind is Kind.CUSTOM:
            try:
                terms = tuple((float(t["weight"]), cls.from_config(t["functional"])) for t in cfg["terms"])
            except (KeyError, TypeError) as exc:
                raise ValidationError(f"custom terms need 'weight' and 'functional': {exc}") from None
        return cls(kind, p=cfg.get("p"), t=cfg.get("t"), terms=terms, cap=cfg.get("cap"))


def truncate_functional(v: Functional, n_cap: float) -> Functional:
    """V_N: the output of V clamped to [-N, N]."""
    if not n_cap > 0:
        raise ValidationError("truncation level must be positive")
    cap = n_cap if v.cap is None else min(v.cap, n_cap)
    return dataclasses.replace(v, cap=float(cap))


@dataclass(frozen=True)
class UICurve:
    caps: np.ndarray
    values: np.ndarray
    verdict: str

    def to_json(self) -> dict:
        return {"caps": self.caps.tolist(), "tail_integral": self.values.tolist(), "verdict": self.verdict}


def uniform_integrability_curve(e: Ensemble, v: Functional, caps) -> UICurve:
    """sup_n of the empirical mean of |V(eta_n)| 1{|V(eta_n)| > N}, per cap N.

    DECAYING when the last entry is at most a tenth of the first nonzero one.
    """
    caps = np.asarray(caps, dtype=float)
    if caps.ndim != 1 or caps.size == 0 or np.any(caps <= 0) or np.any(np.diff(caps) <= 0):
        raise ValidationError("caps must be a nonempty increasing sequence of positive reals")
    absv = np.abs(v.evaluate(e.members))  # (R, N)
    vals = np.array([np.max(np.mean(np.where(absv > c, absv, 0.0), axis=0)) for c in caps])
    nz = vals[vals > 0]
    decaying = nz.size == 0 or vals[-1] <= UI_DECAY_FACTOR * nz[0]
    return UICurve(caps, vals, "DECAYING" if decaying else "NOT_DECAYING")


@dataclass(frozen=True)
class MomentReport:
    means: np.ndarray
    limit: float
    mc_band: float
    gap: float
    verdict: str
    label: str = "empirical"

    def to_json(self) -> dict:
        return {"means": self.means.tolist(), "limit": self.limit, "gap": self.gap,
                "mc_band": self.mc_band, "verdict": self.verdict, "label": self.label}


def mc_verdict(samples_last: np.ndarray, mean_last: float, limit: float, abs_tol: float):
    """(band, gap, verdict) with band = max(abs_tol, 3 * std / sqrt(R))."""
    r = samples_last.size
    std = float(np.std(samples_last, ddof=1)) if r > 1 else 0.0
    band = max(abs_tol, MC_SIGMAS * std / math.sqrt(r))
    gap = abs(mean_last - limit)
    return band, gap, "CONVERGENT" if gap <= band else "NOT_CONVERGENT"


def moment_convergence_check(e: Ensemble, v: Functional, reference: float | None = None,
                             abs_tol: float = 1e-12) -> MomentReport:
    """Per-n means of V against the limit mean (or an external reference)."""
    vals = v.evaluate(e.members)  # (R, N)
    means = np.mean(vals, axis=0)
    limit = float(np.mean(v.evaluate(e.limits))) if reference is None else float(reference)
    band, gap, verdict = mc_verdict(vals[:, -1], float(means[-1]), limit, abs_tol)
    return MomentReport(means, limit, band, gap, verdict)


def kappa_decomposition(e: Ensemble, v: Functional, n: int, n_cap: float):
    """Empirical (kappa, kappa1, kappa2, kappa3) for the n-th member, n from 1.

    kappa = |I_n(V) - I(V)|, kappa1 = |I_n(V) - I_n(V_N)|,
    kappa2 = |I_n(V_N) - I(V_N)|, kappa3 = |I(V) - I(V_N)|.
    """
    if not 1 <= n <= e.N:
        raise ValidationError(f"n must lie in 1..{e.N}")
    vn = truncate_functional(v, n_cap)
    mem, lim = e.members[:, n - 1], e.limits
    i_n, i_lim = float(np.mean(v.evaluate(mem))), float(np.mean(v.evaluate(lim)))
    t_n, t_lim = float(np.mean(vn.evaluate(mem))), float(np.mean(vn.evaluate(lim)))
    return abs(i_n - i_lim), abs(i_n - t_n), abs(t_n - t_lim), abs(i_lim - t_lim)
