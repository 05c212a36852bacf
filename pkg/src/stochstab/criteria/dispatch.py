"""Pick and run the applicable criteria for a spec.

Candidates are gathered from the spec and from its coordinate swap, and
from the Ito conversion when a criterion is stated for the other reading.
Taking both orientations makes the verdict invariant under the swap.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..errors import HypothesisViolated, WrongPattern
from ..model import (
    Calculus,
    NoisePattern,
    StabilityNotion,
    SystemSpec,
    classify_noise_pattern,
    dual_transform,
    stratonovich_to_ito,
)
from .report import BifurcationBound, BoundKind, Conditions, StabilityReport, Verdict, decide
from .theorems import ATTRACT_ORIGIN, ATTRACT_X0, ATTRACT_Y0, THEOREMS, attractor_note

_SWAP_TARGET = {ATTRACT_X0: ATTRACT_Y0, ATTRACT_Y0: ATTRACT_X0, ATTRACT_ORIGIN: ATTRACT_ORIGIN, "": ""}


@dataclass(frozen=True)
class Candidate:
    theorem: str
    spec: SystemSpec
    swapped: bool
    converted: bool

    @property
    def rank(self) -> tuple:
        return (self.swapped, self.converted, int(self.theorem[3:]))


def snap_to_pattern(spec: SystemSpec, tol: float) -> tuple[SystemSpec, NoisePattern]:
    """Classify with tolerance and make paired coefficients exactly equal."""
    pattern = classify_noise_pattern(spec, tol)
    if len(pattern.active) == 2:
        first, second = pattern.active
        spec = spec.replace(**{second: getattr(spec, first)})
    return spec, pattern


def candidates(spec: SystemSpec, notion: StabilityNotion) -> list[Candidate]:
    found = []
    for swapped, oriented in ((False, spec), (True, dual_transform(spec))):
        pattern = classify_noise_pattern(oriented)
        for name, (_, t_pattern, t_notion, calculi) in THEOREMS.items():
            if t_pattern is not pattern or t_notion is not notion:
                continue
            if oriented.calculus in calculi:
                found.append(Candidate(name, oriented, swapped, False))
            elif oriented.calculus is Calculus.STRATONOVICH and Calculus.ITO in calculi:
                found.append(Candidate(name, stratonovich_to_ito(oriented), swapped, True))
    return sorted(found, key=lambda c: c.rank)


def _evaluate(cand: Candidate) -> StabilityReport | None:
    fn = THEOREMS[cand.theorem][0]
    try:
        report = fn(cand.spec)
    except (WrongPattern, HypothesisViolated):
        return None
    notes = list(report.notes)
    attractor = report.attractor
    if cand.converted:
        notes.append("applied to the Ito-converted spec")
    if cand.swapped:
        notes.append("applied to the coordinate-swapped spec (x <-> y)")
        attractor = _SWAP_TARGET[attractor]
    return replace(report, notes=tuple(notes), attractor=attractor,
                   attractor_note=attractor_note(attractor) if attractor else "")


def _oracle_advisory(spec: SystemSpec) -> dict:
    from ..simulate import ms_stable_by_moments, spectral_abscissa

    return {"moment_oracle": ms_stable_by_moments(spec).value,
            "spectral_abscissa": spectral_abscissa(spec)}


def _routh_hurwitz_report(spec: SystemSpec, notion: StabilityNotion) -> StabilityReport:
    cond = Conditions()
    cond.strict("a+m<0", -spec.trace)
    cond.strict("am-bc>0", spec.det)
    verdict = decide(0.0, float("inf"), cond, exact=True)
    bound = BifurcationBound(float("inf"), BoundKind.EXACT, (("a+m", spec.trace), ("am-bc", spec.det)))
    return StabilityReport(verdict, notion, "routh_hurwitz", bound,
                           attractor_note(ATTRACT_ORIGIN) if verdict is Verdict.STABLE else "",
                           ATTRACT_ORIGIN if verdict is Verdict.STABLE else "",
                           ("no noise: deterministic trace/determinant test",))


def _inconclusive(spec: SystemSpec, notion: StabilityNotion, why: str) -> StabilityReport:
    advisory = _oracle_advisory(spec) if notion is StabilityNotion.MEAN_SQUARE else {}
    return StabilityReport(Verdict.INCONCLUSIVE, notion, "none", None, notes=(why,), advisory=advisory)


def analyze(spec: SystemSpec, notion: StabilityNotion, tol: float = 0.0) -> StabilityReport:
    """Verdict from the applicable coefficient criteria.

    Mean square: the first applicable iff criterion decides. Probability:
    Stable if any applicable sufficient criterion says so, else
    Inconclusive. Patterns no criterion covers come back Inconclusive, with
    the moment-oracle verdict attached as advisory for mean square.
    """
    notion = StabilityNotion(notion)
    spec, pattern = snap_to_pattern(spec, tol)
    if pattern is NoisePattern.NO_NOISE:
        return _routh_hurwitz_report(spec, notion)
    if pattern is NoisePattern.UNSUPPORTED:
        return _inconclusive(spec, notion, "diffusion pattern not covered by any criterion")
    reports = [r for r in map(_evaluate, candidates(spec, notion)) if r is not None]
    if not reports:
        return _inconclusive(spec, notion, f"no {notion.value} criterion for pattern {pattern.value}")
    if notion is StabilityNotion.MEAN_SQUARE:
        chosen = reports[0]
        others = sorted({r.verdict.value for r in reports[1:]} - {chosen.verdict.value})
        if others:
            chosen = replace(chosen, notes=chosen.notes + (f"other criteria disagree: {', '.join(others)}",))
        if chosen.verdict is Verdict.INCONCLUSIVE:
            chosen = replace(chosen, advisory=_oracle_advisory(spec))
        return chosen
    for report in reports:
        if report.verdict is Verdict.STABLE:
            return report
    return reports[0]
