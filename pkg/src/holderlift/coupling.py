"""Coupled ensembles {eta, eta_1..eta_N} on one sample space, their uniform
deviations zeta_n = sup|eta_n - eta|, and the split zeta_n <= tau * eps_n."""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .grid import GridPath, paths_from_csv, paths_to_csv
from .scaling import order_statistic, smallest_dominating_factor

EPS_FLOOR = 1e-300
ENSEMBLE_FORMAT = "holderlift-ensemble/1"


class GeneratorKind(str, Enum):
    SMOOTH_DECAY = "SMOOTH_DECAY"
    ROUGH_DECAY = "ROUGH_DECAY"
    DONSKER = "DONSKER"
    CONSTANT = "CONSTANT"


# amplitude a_n = n ** -rate of the perturbation eta_n - eta
DEFAULT_RATE = {GeneratorKind.SMOOTH_DECAY: 0.5, GeneratorKind.ROUGH_DECAY: 1.0}
ROUGH_HURST = 0.5
LIMIT_HURST = 0.5


@dataclass(frozen=True, eq=False)
class Ensemble:
    """R replications of a limit path and N coupled approximants.

    ``limits`` has shape (R, m + 1); ``members`` has shape (R, N, m + 1) with
    ``members[r, n - 1]`` holding eta_n of replication r.
    """

    limits: np.ndarray
    members: np.ndarray
    seed: int = 0
    generator_tag: str = "ingested"
    distributional_only: bool = False
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        lim = np.array(self.limits, dtype=float)
        mem = np.array(self.members, dtype=float)
        if lim.ndim != 2 or mem.ndim != 3:
            raise ValidationError("limits must be (R, m+1) and members (R, N, m+1)")
        if mem.shape[0] != lim.shape[0] or mem.shape[2] != lim.shape[1]:
            raise ValidationError(f"inconsistent shapes {lim.shape} and {mem.shape}")
        if lim.shape[0] < 1 or mem.shape[1] < 1 or lim.shape[1] < 2:
            raise ValidationError("need R >= 1, N >= 1 and m >= 1")
        if not (np.all(np.isfinite(lim)) and np.all(np.isfinite(mem))):
            raise ValidationError("ensemble paths must be finite")
        lim.setflags(write=False)
        mem.setflags(write=False)
        object.__setattr__(self, "limits", lim)
        object.__setattr__(self, "members", mem)

    @property
    def m(self) -> int:
        return self.limits.shape[1] - 1

    @property
    def R(self) -> int:
        return self.limits.shape[0]

    @property
    def N(self) -> int:
        return self.members.shape[1]

    def limit(self, r: int) -> GridPath:
        return GridPath(self.limits[r])

    def member(self, r: int, n: int) -> GridPath:
        """eta_n of replication r, with n counted from 1."""
        return GridPath(self.members[r, n - 1])

    def differences(self) -> np.ndarray:
        """eta_n - eta for every (r, n), shape (R, N, m + 1)."""
        return self.members - self.limits[:, None, :]

    def manifest(self) -> dict:
        return {"format": ENSEMBLE_FORMAT, "m": self.m, "N": self.N, "R": self.R,
                "seed": self.seed, "generator_tag": self.generator_tag,
                "distributional_only": self.distributional_only, "params": dict(self.params)}


@dataclass(frozen=True)
class DominationRecord:
    eps: np.ndarray   # (N,), positive, nonincreasing
    tau: np.ndarray   # (R,)
    zeta: np.ndarray  # (R, N)

    def to_json(self) -> dict:
        return {"eps": self.eps.tolist(), "tau": self.tau.tolist()}


# -- path generators --------------------------------------------------------

def midpoint_displacement(rng: np.random.Generator, m: int, hurst: float = 0.5,
                          sigma: float = 1.0) -> np.ndarray:
    """Random path on i/m by recursive midpoint displacement, starting at 0.

    Built on the dyadic grid of size 2**ceil(log2 m) and interpolated onto
    the m-grid when m is not a power of two. hurst = 0.5 gives Brownian
    motion exactly at the dyadic nodes.
    """
    size = 1 << max(0, math.ceil(math.log2(m)))
    w = np.zeros(size + 1)
    w[size] = sigma * rng.standard_normal()
    scale = math.sqrt(1.0 - 2.0 ** (2 * hurst - 2))
    h = size
    while h > 1:
        half = h // 2
        mid = np.arange(half, size, h)
        std = sigma * (half / size) ** hurst * scale
        w[mid] = 0.5 * (w[mid - half] + w[mid + half]) + std * rng.standard_normal(mid.size)
        h = half
    if size == m:
        return w
    return np.interp(np.arange(m + 1) / m, np.arange(size + 1) / size, w)


def smooth_bump(rng: np.random.Generator, m: int, terms: int = 4) -> np.ndarray:
    """Random low-frequency trigonometric path with unit sup norm on the grid."""
    t = np.arange(m + 1) / m
    j = np.arange(1, terms + 1)
    amp = rng.standard_normal(terms) / j ** 2
    phase = rng.uniform(0.0, 2 * np.pi, terms)
    w = np.sin(np.pi * np.outer(t, j) + phase) @ amp
    return w / np.max(np.abs(w))


def unit_rough(rng: np.random.Generator, m: int, hurst: float = ROUGH_HURST) -> np.ndarray:
    w = midpoint_displacement(rng, m, hurst)
    top = np.max(np.abs(w))
    while top == 0:  # only possible for m = 1 with a zero draw
        w = midpoint_displacement(rng, m, hurst)
        top = np.max(np.abs(w))
    return w / top


def random_walk_path(rng: np.random.Generator, m: int, steps: int) -> np.ndarray:
    """Scaled +-1 partial-sum walk S_k / sqrt(steps), linearly interpolated on i/m."""
    incr = 2 * rng.integers(0, 2, size=steps, dtype=np.int8).astype(np.int64) - 1
    s = np.concatenate(([0], np.cumsum(incr))) / math.sqrt(steps)
    if steps == m:
        return s
    return np.interp(np.arange(m + 1) / m, np.arange(steps + 1) / steps, s)


def replication_rng(seed: int, r: int) -> np.random.Generator:
    """Independent stream for replication r; depends only on (seed, r)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(r)]))


def generate_ensemble(kind: GeneratorKind | str, m: int, N: int, R: int, seed: int = 0, *,
                      rate: float | None = None, m_block: int | None = None,
                      threads: int = 1) -> Ensemble:
    """Build an already-coupled ensemble.

    SMOOTH_DECAY / ROUGH_DECAY: eta is a Brownian midpoint-displacement path and
    eta_n = eta + n**-rate * w_n with w_n a unit-sup smooth bump or rough path.
    DONSKER: eta_n is the scaled walk with n * m_block steps and eta is an
    independent Brownian path, so only the laws converge.
    CONSTANT: eta_n = eta.
    """
    try:
        kind = GeneratorKind(str(getattr(kind, "value", kind)).upper())
    except ValueError:
        raise ValidationError(f"unknown generator kind {kind!r}") from None
    for name, val in (("m", m), ("N", N), ("R", R)):
        if int(val) != val or val < 1:
            raise ValidationError(f"{name} must be a positive integer, got {val}")
    if seed < 0:
        raise ValidationError("seed must be nonnegative")
    if rate is None:
        rate = DEFAULT_RATE.get(kind, 0.0)
    if m_block is None:
        m_block = max(1, m // N)
    if m_block < 1:
        raise ValidationError("m_block must be positive")

    amps = np.arange(1, N + 1, dtype=float) ** -rate

    def one(r: int):
        rng = replication_rng(seed, r)
        eta = midpoint_displacement(rng, m, LIMIT_HURST)
        mem = np.empty((N, m + 1))
        for i in range(N):
            if kind is GeneratorKind.SMOOTH_DECAY:
                mem[i] = eta + amps[i] * smooth_bump(rng, m)
            elif kind is GeneratorKind.ROUGH_DECAY:
                mem[i] = eta + amps[i] * unit_rough(rng, m)
            elif kind is GeneratorKind.DONSKER:
                mem[i] = random_walk_path(rng, m, (i + 1) * m_block)
            else:
                mem[i] = eta
        return eta, mem

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one, range(R)))
    else:
        parts = [one(r) for r in range(R)]

    params = {"kind": kind.value}
    if kind in DEFAULT_RATE:
        params["rate"] = float(rate)
    if kind is GeneratorKind.DONSKER:
        params["m_block"] = int(m_block)
    return Ensemble(np.stack([p[0] for p in parts]), np.stack([p[1] for p in parts]),
                    seed=int(seed), generator_tag=kind.value,
                    distributional_only=kind is GeneratorKind.DONSKER, params=params)


# -- deviations and their domination ----------------------------------------

def uniform_deviations(e: Ensemble) -> np.ndarray:
    """zeta[r, n-1] = sup_t |eta_n^(r)(t) - eta^(r)(t)|."""
    return np.max(np.abs(e.differences()), axis=-1)


def dominate_sequence(zeta: np.ndarray, q: float = 0.95) -> DominationRecord:
    """Deterministic eps_n and per-replication tau_r with zeta <= tau * eps.

    eps_n is the per-n q-quantile over replications, made nonincreasing by a
    running max from the right and floored away from zero; tau_r is the
    smallest factor that restores the inequality for replication r.
    """
    zeta = np.array(zeta, dtype=float)
    if zeta.ndim != 2 or zeta.size == 0:
        raise ValidationError("zeta must be a nonempty (R, N) matrix")
    if not np.all(np.isfinite(zeta)) or np.any(zeta < 0):
        raise ValidationError("zeta entries must be finite and nonnegative")
    per_n = order_statistic(zeta, q, axis=0)
    eps = np.maximum.accumulate(per_n[::-1])[::-1]
    eps = np.maximum(eps, EPS_FLOOR)
    tau = np.array([smallest_dominating_factor(row, eps) for row in zeta])
    return DominationRecord(eps=eps, tau=tau, zeta=zeta)


# -- file format ------------------------------------------------------------

def save_ensemble(path: str | Path, e: Ensemble) -> None:
    """Write ``<name>.json`` manifest plus limits/members CSV blocks beside it.

    Members are stored one row per (r, n), replication-major.
    """
    path = Path(path)
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    lim_name, mem_name = f"{stem}.limits.csv", f"{stem}.members.csv"
    manifest = e.manifest()
    manifest["limits_file"] = lim_name
    manifest["members_file"] = mem_name
    (path.parent / lim_name).write_text(paths_to_csv(e.limits))
    (path.parent / mem_name).write_text(paths_to_csv(e.members.reshape(-1, e.m + 1)))
    path.write_text(json.dumps(manifest, indent=2) + "\n")


def load_ensemble(path: str | Path) -> Ensemble:
    path = Path(path)
    try:
        manifest = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read ensemble manifest {path}: {exc}") from None
    try:
        m, N, R = int(manifest["m"]), int(manifest["N"]), int(manifest["R"])
        lim = paths_from_csv((path.parent / manifest["limits_file"]).read_text())
        mem = paths_from_csv((path.parent / manifest["members_file"]).read_text())
    except (KeyError, TypeError, OSError) as exc:
        raise ValidationError(f"incomplete ensemble manifest {path}: {exc}") from None
    if lim.shape != (R, m + 1) or mem.shape != (R * N, m + 1):
        raise ValidationError(f"ensemble blocks {lim.shape}, {mem.shape} do not match m={m}, N={N}, R={R}")
    return Ensemble(lim, mem.reshape(R, N, m + 1), seed=int(manifest.get("seed", 0)),
                    generator_tag=str(manifest.get("generator_tag", "ingested")),
                    distributional_only=bool(manifest.get("distributional_only", False)),
                    params=dict(manifest.get("params", {})))
