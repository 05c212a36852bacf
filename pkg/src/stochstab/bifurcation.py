"""Noise-intensity sweeps, oracle bisection, and the damped oscillator.

The oscillator x'' + (k + sigma2 xi') x' + (omega^2 + sigma1 xi') x = 0 is
written as the planar system with a = 0, b = 1, c = -omega^2, m = -k and
noise g = -sigma1, h = -sigma2 on the second equation.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .criteria import StabilityReport, Verdict, analyze
from .criteria.report import BifurcationBound, BoundKind, Conditions, decide
from .errors import CaseNotCovered, DegenerateDenominator, NoSignChange, UnsupportedPattern, WrongPattern
from .lyapunov import QuadraticForm, build_certificate, has_certificate, verify_certificate
from .model import Calculus, NoisePattern, StabilityNotion, SystemSpec, as_ito, with_intensity
from .simulate import ms_stable_by_moments

BISECT_REL_TOL = 1e-10
CASES = ("a", "b", "c")
CASE_PATTERN = {"a": NoisePattern.ONLY_G, "b": NoisePattern.ONLY_H, "c": NoisePattern.EQUAL_GH}


@dataclass(frozen=True)
class OscillatorSpec:
    k: float
    omega: float
    sigma1: float = 0.0
    sigma2: float = 0.0
    calculus: Calculus = Calculus.ITO

    def __post_init__(self):
        if not (self.k > 0 and self.omega > 0):
            raise ValueError("k and omega must be positive")
        if self.sigma1 < 0 or self.sigma2 < 0:
            raise ValueError("noise amplitudes must be non-negative")
        object.__setattr__(self, "calculus", Calculus(self.calculus))


def oscillator_to_system(osc: OscillatorSpec) -> SystemSpec:
    return SystemSpec(a=0.0, b=1.0, c=-osc.omega ** 2, m=-osc.k,
                      g=-osc.sigma1, h=-osc.sigma2, calculus=osc.calculus)


def oscillator_case(osc: OscillatorSpec, case: str | None = None) -> str:
    """Which of the three noise configurations ``osc`` is in."""
    s1, s2 = osc.sigma1, osc.sigma2
    fits = {"a": s2 == 0, "b": s1 == 0, "c": s1 == s2}
    if case is not None:
        if case not in CASES:
            raise CaseNotCovered(f"unknown case {case!r}")
        if not fits[case]:
            raise CaseNotCovered(f"sigma1={s1}, sigma2={s2} is not in case {case})")
        return case
    if s1 == s2:
        return "c"
    if s2 == 0:
        return "a"
    if s1 == 0:
        return "b"
    raise CaseNotCovered("sigma1 and sigma2 are both nonzero and unequal")


def case_intensity(osc: OscillatorSpec, case: str) -> float:
    return {"a": osc.sigma1 ** 2, "b": osc.sigma2 ** 2, "c": osc.sigma1 ** 2}[case]


def prop1_threshold(osc: OscillatorSpec, case: str | None = None) -> BifurcationBound:
    """Exact mean-square bound on the squared intensity, Ito reading."""
    if osc.calculus is not Calculus.ITO:
        raise WrongPattern("prop1_threshold applies to the Ito reading")
    case = oscillator_case(osc, case)
    k, w2 = osc.k, osc.omega ** 2
    bound = {"a": 2 * k * w2, "b": 2 * k, "c": 2 * k * w2 / (w2 + 1)}[case]
    return BifurcationBound(bound, BoundKind.EXACT, (("k", k), ("omega^2", w2), (f"case {case}", bound)))


def prop2_threshold(osc: OscillatorSpec, case: str | None = None) -> BifurcationBound:
    """Exact mean-square bound on the squared intensity, Stratonovich reading."""
    if osc.calculus is not Calculus.STRATONOVICH:
        raise WrongPattern("prop2_threshold applies to the Stratonovich reading")
    case = oscillator_case(osc, case)
    k, w2 = osc.k, osc.omega ** 2
    if case == "a":
        bound = 2 * k * w2
    elif case == "b":
        bound = k
    else:
        bound = w2 + (k + 1) / 2 - math.sqrt(w2 * w2 + (1 - k) * w2 + (k + 1) ** 2 / 4)
    return BifurcationBound(bound, BoundKind.EXACT, (("k", k), ("omega^2", w2), (f"case {case}", bound)))


def oscillator_threshold(osc: OscillatorSpec, case: str | None = None) -> BifurcationBound:
    if osc.calculus is Calculus.ITO:
        return prop1_threshold(osc, case)
    return prop2_threshold(osc, case)


def oscillator_report(osc: OscillatorSpec, case: str | None = None) -> StabilityReport:
    case = oscillator_case(osc, case)
    bound = oscillator_threshold(osc, case)
    verdict = decide(case_intensity(osc, case), bound.bound, Conditions(), exact=True)
    name = "prop1" if osc.calculus is Calculus.ITO else "prop2"
    return StabilityReport(verdict, StabilityNotion.MEAN_SQUARE, name, bound,
                           "(x(t), y(t)) -> (0, 0) as t -> inf with probability 1", "origin",
                           (f"case {case}",))


def _nonzero(value: float, scale: float, label: str) -> float:
    if abs(value) <= 1e-14 * max(1.0, scale):
        raise DegenerateDenominator(f"{label} vanishes")
    return value


def _ito_oscillator_form(k: float, w2: float, s1: float, s2: float, case: str) -> QuadraticForm:
    if case == "a":
        den = _nonzero(2 * k * w2 - s1 * s1, 2 * k * w2, "2 k omega^2 - sigma1^2")
        return QuadraticForm((k * k + w2 * (w2 + 1) + k * s1 * s1 / 2) / den,
                             (2 * k + s1 * s1) / (2 * den), (w2 + 1) / den)
    if case == "b":
        den = _nonzero(2 * k - s2 * s2, 2 * k, "2k - sigma2^2")
        _nonzero(w2, 1.0, "omega^2")
        return QuadraticForm((w2 + 1) / den + k / (2 * w2), 1 / (2 * w2), (w2 + 1) / (w2 * den))
    s = s1 * s1
    den = _nonzero(2 * (s * (w2 + 1) - 2 * k * w2), 2 * k * w2, "sigma^2 (omega^2 + 1) - 2 k omega^2")
    return QuadraticForm(2 * ((w2 + 1) * s - w2 * w2 - w2 - k * k) / den,
                         -2 * k / den, -2 * (w2 + 1) / den)


def oscillator_certificate(osc: OscillatorSpec, case: str | None = None) -> QuadraticForm:
    """Closed-form quadratic V for the oscillator.

    For the Stratonovich reading, the converted system is again an Ito
    oscillator with k' = k - sigma2^2/2 and omega'^2 = omega^2 -
    sigma1 sigma2/2, and the Ito form is evaluated there.
    """
    case = oscillator_case(osc, case)
    k, w2 = osc.k, osc.omega ** 2
    if osc.calculus is Calculus.STRATONOVICH:
        k -= osc.sigma2 ** 2 / 2
        w2 -= osc.sigma1 * osc.sigma2 / 2
    return _ito_oscillator_form(k, w2, osc.sigma1, osc.sigma2, case)


# --- sweeps and bisection ------------------------------------------------------

def oracle_stable(spec: SystemSpec) -> bool:
    return ms_stable_by_moments(spec) is Verdict.STABLE


def find_threshold_bisect(template: SystemSpec, pattern: NoisePattern, lo: float, hi: float,
                          rel_tol: float = BISECT_REL_TOL) -> float:
    """Oracle bifurcation value of the squared intensity between ``lo`` and ``hi``."""
    if not pattern.active:
        raise UnsupportedPattern(f"pattern {pattern.value} has no noise channel")
    if not 0 <= lo < hi:
        raise ValueError("need 0 <= lo < hi")
    if not oracle_stable(with_intensity(template, pattern, lo)):
        raise NoSignChange(f"oracle is not stable at lo={lo}")
    if oracle_stable(with_intensity(template, pattern, hi)):
        raise NoSignChange(f"oracle is still stable at hi={hi}")
    while hi - lo >= rel_tol * (1 + hi):
        mid = 0.5 * (lo + hi)
        if oracle_stable(with_intensity(template, pattern, mid)):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass
class SweepResult:
    intensities: list[float]
    analytic_verdicts: list[Verdict]
    oracle_verdicts: list[Verdict]
    analytic_bound: float | None
    empirical_threshold: float | None
    theorem: str = ""
    notion: StabilityNotion = StabilityNotion.MEAN_SQUARE
    certificate_checks: list[bool | None] = field(default_factory=list)
    traces: list[dict] = field(default_factory=list)

    def __post_init__(self):
        n = len(self.intensities)
        if len(self.analytic_verdicts) != n or len(self.oracle_verdicts) != n:
            raise ValueError("sweep columns must share the grid length")

    def trace_names(self) -> list[str]:
        names: list[str] = []
        for tr in self.traces:
            names += [k for k in tr if k not in names]
        return names

    def rows(self) -> list[list]:
        names = self.trace_names()
        header = ["intensity", "analytic_verdict", "oracle_verdict", "certificate"] + names
        out = [header]
        for i, s in enumerate(self.intensities):
            cert = self.certificate_checks[i] if self.certificate_checks else None
            tr = self.traces[i] if self.traces else {}
            out.append([repr(float(s)), self.analytic_verdicts[i].value, self.oracle_verdicts[i].value,
                        "" if cert is None else str(cert).lower()]
                       + ["" if tr.get(n) is None else repr(float(tr[n])) for n in names])
        return out

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows(self.rows())

    def summary(self) -> dict:
        def num(x):
            if x is None:
                return None
            return "inf" if math.isinf(x) else x

        return {"analytic_bound": num(self.analytic_bound),
                "empirical_threshold": num(self.empirical_threshold),
                "theorem": self.theorem, "notion": self.notion.value,
                "n_points": len(self.intensities)}

    def write_summary(self, path) -> None:
        Path(path).write_text(json.dumps(self.summary(), indent=2, sort_keys=True) + "\n")


def parse_grid(text: str) -> list[float]:
    """``"lo:hi:n"`` to n evenly spaced values including both ends."""
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise ValueError(f"grid must look like lo:hi:n, got {text!r}") from None
    if n < 1:
        raise ValueError("grid needs at least one point")
    if n == 1:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def sweep(template: SystemSpec, pattern: NoisePattern, grid, notion: StabilityNotion = StabilityNotion.MEAN_SQUARE,
          analytic: Callable[[SystemSpec], StabilityReport] | None = None, workers: int = 1) -> SweepResult:
    """Analytic and oracle verdicts over a grid of squared intensities.

    ``analytic`` maps an instantiated spec to a report and defaults to
    ``analyze`` for ``notion``. The probability notion also records whether
    the closed-form certificate verifies at each point. Points are
    independent; with ``workers > 1`` they run on a thread pool and are
    collected in grid order.
    """
    notion = StabilityNotion(notion)
    grid = [float(s) for s in grid]
    if not grid:
        raise ValueError("grid must be nonempty")
    if any(s < 0 for s in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be non-negative and strictly ascending")
    if not pattern.active:
        raise UnsupportedPattern(f"cannot sweep pattern {pattern.value}")
    if analytic is None:
        def analytic(spec):
            return analyze(spec, notion)
    certify = notion is StabilityNotion.PROBABILITY and has_certificate(pattern, notion)

    def point(s: float):
        spec = with_intensity(template, pattern, s)
        report = analytic(spec)
        cert = None
        if certify and s > 0:
            try:
                v = build_certificate(spec, pattern, notion)
                cert = verify_certificate(as_ito(spec), v).holds
            except (ValueError, ZeroDivisionError):
                cert = False
        trace = dict(report.bound.trace) if report.bound else {}
        return report, ms_stable_by_moments(spec), cert, trace

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(point, grid))
    else:
        results = [point(s) for s in grid]

    ref_s = next((s for s in grid if s > 0), 1.0)
    ref = results[grid.index(ref_s)][0] if ref_s in grid else analytic(with_intensity(template, pattern, ref_s))
    oracle = [r[1] for r in results]
    threshold = None
    for i in range(1, len(grid)):
        if oracle[i - 1] is Verdict.STABLE and oracle[i] is not Verdict.STABLE:
            threshold = find_threshold_bisect(template, pattern, grid[i - 1], grid[i])
            break
    return SweepResult(
        intensities=grid,
        analytic_verdicts=[r[0].verdict for r in results],
        oracle_verdicts=oracle,
        analytic_bound=ref.bound.bound if ref.bound else None,
        empirical_threshold=threshold,
        theorem=ref.theorem_applied,
        notion=notion,
        certificate_checks=[r[2] for r in results] if certify else [],
        traces=[r[3] for r in results],
    )


def oscillator_sweep(osc: OscillatorSpec, case: str, grid) -> SweepResult:
    """Sweep the case's squared intensity with the proposition as the analytic side."""
    if case not in CASES:
        raise CaseNotCovered(f"unknown case {case!r}")
    pattern = CASE_PATTERN[case]

    def analytic(spec: SystemSpec) -> StabilityReport:
        amp = math.sqrt(max(spec.g ** 2, spec.h ** 2))
        s1 = amp if case in ("a", "c") else 0.0
        s2 = amp if case in ("b", "c") else 0.0
        return oscillator_report(OscillatorSpec(osc.k, osc.omega, s1, s2, osc.calculus), case)

    return sweep(oscillator_to_system(osc), pattern, grid, StabilityNotion.MEAN_SQUARE, analytic)
