"""Second-moment oracle and seeded Monte Carlo for the linear system.

For an Ito system the moments ``(E x^2, E xy, E y^2)`` obey a closed
linear ODE whose matrix follows from dP/dt = A P + P A^T + G P G^T. Its
spectral abscissa decides mean-square stability exactly, which is what the
criteria are validated against. Stratonovich specs are converted first;
for linear systems the conversion is exact.
"""

from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .criteria.report import Verdict
from .errors import WrongPattern
from .model import SystemSpec, as_ito

OVERFLOW_GUARD = 1e150
DT_REF = 1e-3
CHUNK_STEPS = 256

MomentMatrix = np.ndarray


def moment_matrix(spec: SystemSpec) -> MomentMatrix:
    """3x3 matrix of the second-moment ODE, Ito specs only."""
    if not spec.is_ito:
        raise WrongPattern("moment_matrix needs an Ito spec; convert it first")
    a, b, c, m = spec.drift
    e, f, g, h = spec.diffusion
    return np.array([
        [2 * a + e * e, 2 * b + 2 * e * f, f * f],
        [c + e * g, a + m + e * h + f * g, b + f * h],
        [g * g, 2 * c + 2 * g * h, 2 * m + h * h],
    ])


def spectral_abscissa(spec: SystemSpec) -> float:
    return float(np.linalg.eigvals(moment_matrix(as_ito(spec))).real.max())


def ms_stable_by_moments(spec: SystemSpec, tol: float | None = None) -> Verdict:
    """Exact mean-square verdict from the moment-matrix eigenvalues.

    ``tol`` defaults to 1e-12 times max(1, ||M||_inf).
    """
    mat = moment_matrix(as_ito(spec))
    if tol is None:
        tol = 1e-12 * max(1.0, float(np.abs(mat).sum(axis=1).max()))
    absc = float(np.linalg.eigvals(mat).real.max())
    if absc < -tol:
        return Verdict.STABLE
    if absc > tol:
        return Verdict.UNSTABLE
    return Verdict.BOUNDARY


def second_moment_exact(spec: SystemSpec, x0: float, y0: float, times, dt_ref: float = DT_REF) -> list[float]:
    """E[x^2 + y^2] at ``times`` from fixed-step RK4 on the moment ODE.

    RK4 on a linear system is the degree-4 Taylor polynomial of the step
    propagator, so each step is one matrix-vector product.
    """
    mat = moment_matrix(as_ito(spec))
    times = np.asarray(times, dtype=float)
    if times.size and (times[0] < 0 or np.any(np.diff(times) < 0)):
        raise ValueError("times must be non-negative and non-decreasing")
    norm = float(np.abs(mat).sum(axis=1).max())
    h_max = min(dt_ref, 0.01 / norm) if norm > 0 else dt_ref
    state = np.array([x0 * x0, x0 * y0, y0 * y0], dtype=float)
    out = []
    t = 0.0
    for target in times:
        span = target - t
        if span > 0:
            n = max(1, math.ceil(span / h_max - 1e-9))
            hm = mat * (span / n)
            step = np.eye(3) + hm @ (np.eye(3) + hm @ (np.eye(3) / 2 + hm @ (np.eye(3) / 6 + hm / 24)))
            state = np.linalg.matrix_power(step, n) @ state
            t = target
        out.append(float(state[0] + state[2]))
    return out


class Scheme(str, enum.Enum):
    EULER_MARUYAMA_ITO = "euler_maruyama_ito"
    CONVERT_THEN_EULER_MARUYAMA = "convert_then_euler_maruyama"


@dataclass(frozen=True)
class SimConfig:
    dt: float = 1e-3
    horizon: float = 20.0
    n_paths: int = 1000
    seed: int = 0
    x0: float = 1.0
    y0: float = 1.0
    scheme: Scheme = Scheme.CONVERT_THEN_EULER_MARUYAMA
    record_dt: float = 0.1

    def __post_init__(self):
        if not (self.dt > 0 and self.horizon > 0 and self.dt < self.horizon):
            raise ValueError("need 0 < dt < horizon")
        if int(self.n_paths) < 1:
            raise ValueError("n_paths must be >= 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.record_dt < self.dt:
            raise ValueError("record_dt must be >= dt")
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "n_paths", int(self.n_paths))
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon / self.dt))

    @property
    def record_every(self) -> int:
        return max(1, int(round(self.record_dt / self.dt)))

    def to_dict(self) -> dict:
        out = asdict(self)
        out["scheme"] = self.scheme.value
        return out


@dataclass
class EnsembleStats:
    times: np.ndarray
    second_moment: np.ndarray
    stderr: np.ndarray
    ms_exponent: float
    amplitude: float
    exceedance_prob: float
    exploded: int = 0
    attractor_fraction: float | None = None
    config: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "ms_exponent": self.ms_exponent,
            "amplitude": self.amplitude,
            "exceedance_prob": self.exceedance_prob,
            "exploded_paths": self.exploded,
            "attractor_fraction": self.attractor_fraction,
            "seed": self.config.get("seed"),
            "config": self.config,
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["t", "second_moment", "stderr"])
            for row in zip(self.times, self.second_moment, self.stderr):
                writer.writerow([repr(float(v)) for v in row])

    def write_summary(self, path) -> None:
        Path(path).write_text(json.dumps(json_safe(self.summary()), indent=2, sort_keys=True) + "\n")


def json_safe(obj):
    """Replace non-finite floats so the output stays strict JSON."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    return obj


def path_generator(seed: int, path: int) -> np.random.Generator:
    """Counter-based stream owned by one path, keyed by (seed, path index)."""
    return np.random.Generator(np.random.Philox(key=int(seed) + (int(path) << 64)))


def fit_exponent(times, moments, x0: float, y0: float) -> tuple[float, float]:
    """Least-squares fit of log E = log A' - alpha t over the second half.

    Returns ``(alpha, A)`` with ``A = A' / (x0^2 + y0^2)``.
    """
    times = np.asarray(times)
    moments = np.asarray(moments)
    keep = (times >= times[-1] / 2) & (moments > 0) & np.isfinite(moments)
    if keep.sum() < 2:
        return math.nan, math.nan
    slope, intercept = np.polyfit(times[keep], np.log(moments[keep]), 1)
    r0 = x0 * x0 + y0 * y0
    amp = math.exp(intercept) / r0 if r0 > 0 else math.exp(intercept)
    return float(-slope), float(amp)


def _distance_to(target: str | None, x: np.ndarray, y: np.ndarray) -> np.ndarray | None:
    if target == "x=0":
        return np.abs(x)
    if target == "y=0":
        return np.abs(y)
    if target == "origin":
        return np.hypot(x, y)
    return None


def _run(spec: SystemSpec, config: SimConfig, x0: np.ndarray, y0: np.ndarray,
         epsilon: float, attractor: str | None, attractor_tol: float) -> EnsembleStats:
    if config.scheme is Scheme.EULER_MARUYAMA_ITO and not spec.is_ito:
        raise WrongPattern("the plain Euler-Maruyama scheme needs an Ito spec")
    ito = as_ito(spec)
    a, b, c, m = ito.drift
    e, f, g, h = ito.diffusion
    n, dt = config.n_paths, config.dt
    gens = [path_generator(config.seed, i) for i in range(n)]
    x = x0.astype(float).copy()
    y = y0.astype(float).copy()
    alive = np.ones(n, dtype=bool)
    exceeded = (np.abs(x) > epsilon) | (np.abs(y) > epsilon)
    sqdt = math.sqrt(dt)
    every = config.record_every
    records = [x * x + y * y]
    rec_steps = [0]
    step = 0
    total = config.n_steps
    with np.errstate(over="ignore", invalid="ignore"):
        while step < total:
            k = min(CHUNK_STEPS, total - step)
            noise = np.stack([gen.standard_normal(k) for gen in gens]) * sqdt
            for j in range(k):
                dw = noise[:, j]
                xn = x + (a * x + b * y) * dt + (e * x + f * y) * dw
                yn = y + (c * x + m * y) * dt + (g * x + h * y) * dw
                blown = alive & ~((np.abs(xn) <= OVERFLOW_GUARD) & (np.abs(yn) <= OVERFLOW_GUARD))
                alive &= ~blown
                x = np.where(alive, xn, x)
                y = np.where(alive, yn, y)
                exceeded |= blown | (np.abs(x) > epsilon) | (np.abs(y) > epsilon)
                step += 1
                if step % every == 0 or step == total:
                    records.append(x * x + y * y)
                    rec_steps.append(step)
    data = np.stack(records)
    times = np.asarray(rec_steps, dtype=float) * dt
    # frozen exploded paths may overflow the variance; inf is the honest value
    with np.errstate(over="ignore", invalid="ignore"):
        second = data.mean(axis=1)
        stderr = data.std(axis=1, ddof=1) / math.sqrt(n) if n > 1 else np.zeros_like(second)
    r0x = float(np.sqrt(np.mean(x0 * x0)))
    r0y = float(np.sqrt(np.mean(y0 * y0)))
    alpha, amp = fit_exponent(times, second, r0x, r0y)
    dist = _distance_to(attractor, x, y)
    frac = None
    if dist is not None:
        radius = np.hypot(x0, y0)
        frac = float(np.mean(alive & (dist <= attractor_tol * np.maximum(radius, 1e-300))))
    return EnsembleStats(
        times=times,
        second_moment=second,
        stderr=stderr,
        ms_exponent=alpha,
        amplitude=amp,
        exceedance_prob=float(exceeded.mean()),
        exploded=int((~alive).sum()),
        attractor_fraction=frac,
        config=config.to_dict(),
    )


def simulate_ensemble(spec: SystemSpec, config: SimConfig, epsilon: float = math.inf,
                      attractor: str | None = None, attractor_tol: float = 1e-3) -> EnsembleStats:
    """Euler-Maruyama ensemble from the common initial point (x0, y0).

    Each path draws from its own Philox stream keyed by (seed, path index),
    so the result does not depend on how paths are batched. Paths crossing
    the overflow guard are frozen, counted in ``exploded`` and as
    exceedances.
    """
    n = config.n_paths
    return _run(spec, config, np.full(n, float(config.x0)), np.full(n, float(config.y0)),
                epsilon, attractor, attractor_tol)


def probe_probability_stability(spec: SystemSpec, config: SimConfig, epsilon: float, delta: float,
                                attractor: str | None = None, attractor_tol: float = 1e-3) -> EnsembleStats:
    """Empirical rho for stability in probability.

    Initial points are spread evenly over the circle of radius ``delta``.
    The returned ``exceedance_prob`` is the fraction of paths whose sup of
    |x| or |y| over the horizon exceeds ``epsilon``. When ``attractor`` is
    omitted it is taken from the probability-notion analysis of ``spec``.
    This is a finite-horizon surrogate only.
    """
    if not (epsilon > 0 and delta > 0):
        raise ValueError("epsilon and delta must be positive")
    if attractor is None:
        from .criteria import StabilityNotion, analyze

        attractor = analyze(spec, StabilityNotion.PROBABILITY).attractor or None
    theta = 2 * math.pi * np.arange(config.n_paths) / config.n_paths
    return _run(spec, config, delta * np.cos(theta), delta * np.sin(theta),
                epsilon, attractor, attractor_tol)
