"""Coefficient criteria for the supported noise patterns.

Every function takes a ``SystemSpec`` and returns a ``StabilityReport``.
Intensities are squared amplitudes (``e**2``, ``f**2``), and every bound is
reported on that scale even where the criterion is phrased in ``e**2 / 2``.

Some mean-square criteria exist in two forms. ``printed=True`` evaluates the
literal published inequality; the default evaluates a corrected form that
agrees with the second-moment equations (see the module docstrings of
``stochstab.simulate``). Both forms put their numbers in the trace.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import HypothesisViolated, WrongPattern
from ..model import Calculus, NoisePattern, StabilityNotion, SystemSpec, classify_noise_pattern
from .report import (
    BifurcationBound,
    BoundKind,
    Conditions,
    StabilityReport,
    Verdict,
    clamp_bound,
    decide,
    min_present,
)
from .roots import smallest_positive_root

PROB = StabilityNotion.PROBABILITY
MS = StabilityNotion.MEAN_SQUARE

# sign in front of p in (+-p + sqrt(p^2 + c^2 q)) / c^2, pinned against the moment oracle
THM3_ROOT_SIGN = +1
THM7_ROOT_SIGN = -1

ATTRACT_X0 = "x=0"
ATTRACT_Y0 = "y=0"
ATTRACT_ORIGIN = "origin"


def attractor_note(target: str) -> str:
    if target == ATTRACT_ORIGIN:
        return "(x(t), y(t)) -> (0, 0) as t -> inf with probability 1"
    return f"(x(t), y(t)) -> {{(x, y): {target.replace('=', ' = ')}}} as t -> inf with probability 1"


def _require(spec: SystemSpec, pattern: NoisePattern, name: str, calculus: Calculus | None = None):
    found = classify_noise_pattern(spec)
    if found is not pattern:
        raise WrongPattern(f"{name} needs pattern {pattern.value}, got {found.value}")
    if calculus is not None and spec.calculus is not calculus:
        raise WrongPattern(f"{name} needs the {calculus.value} reading")


def _div(num: float, den: float) -> float | None:
    return num / den if den != 0 else None


def _report(name, notion, verdict, bound, kind, trace, attractor, notes=()) -> StabilityReport:
    return StabilityReport(
        verdict=verdict,
        notion=notion,
        theorem_applied=name,
        bound=BifurcationBound(bound, kind, tuple(trace)),
        attractor_note=attractor_note(attractor),
        attractor=attractor,
        notes=tuple(notes),
    )


def _rh_sign_check(polys: dict[str, list[float]], s: float, cond: Conditions) -> float:
    """Require every polynomial in ``s`` to be positive; return the first crossing.

    The crossing is the smallest positive root over all polynomials when all
    are positive at ``s = 0``, and 0 otherwise.
    """
    for label, coeffs in polys.items():
        value = float(np.polyval(coeffs, s))
        scale = float(np.polyval(np.abs(coeffs), s)) or 1.0
        cond.strict(f"{label}(e^2) > 0", value / scale)
    if any(np.polyval(c, 0.0) <= 0 for c in polys.values()):
        return 0.0
    return min_present(*(smallest_positive_root(c) for c in polys.values()))


# --- single noise coefficient: e ------------------------------------------

def thm1_prob_e(spec: SystemSpec) -> StabilityReport:
    """Sufficient condition for stability in probability, Ito, noise on e."""
    _require(spec, NoisePattern.ONLY_E, "thm1", Calculus.ITO)
    a, b, c, m = spec.drift
    tr, d, s = spec.trace, spec.det, spec.e ** 2
    cond = Conditions()
    cond.strict("a+m<0", -tr)
    cond.strict("am-bc>0", d)
    cond.nonzero("b!=0", b)
    term = _div(2 * tr * (b * c - a * m), m * m + d)
    bound = clamp_bound(term)
    verdict = decide(s, bound, cond, exact=False)
    trace = [("a+m", tr), ("am-bc", d), ("bound", term)]
    return _report("thm1", PROB, verdict, bound, BoundKind.SUFFICIENT, trace, ATTRACT_X0,
                   [f"failed: {', '.join(cond.failed)}"] if cond.failed else [])


def thm2_prob_e_strat(spec: SystemSpec) -> StabilityReport:
    """Stratonovich counterpart of thm1, with three branches on the sign of m."""
    _require(spec, NoisePattern.ONLY_E, "thm2", Calculus.STRATONOVICH)
    a, b, c, m = spec.drift
    tr, d, s = spec.trace, spec.det, spec.e ** 2
    A, B, C = 2 * m, 2 * m * m + 3 * a * m - 2 * b * c, tr * d
    cond = Conditions()
    notes = []
    trace = [("a+m", tr), ("am-bc", d), ("A", A), ("B", B), ("C", C)]
    if m > 0 or m < 0:
        cond.strict("a+m<0", -tr)
        cond.strict("am-bc>0", d)
        cond.nonzero("b!=0", b)
        if m > 0:
            branch = "1"
            lam0 = smallest_positive_root([A, B, C])
            half = min_present(-tr, lam0)
        else:
            branch = "2"
            ac = A * C
            if ac < 0:
                notes.append("guard B >= 2 sqrt(AC) ill-posed (AC < 0); lambda0 dropped")
                lam0 = None
            elif B >= 2 * math.sqrt(ac):
                lam0 = smallest_positive_root([A, B, C])
            else:
                notes.append("B < 2 sqrt(AC): lambda0 absent")
                lam0 = None
            half = min_present(-tr, _div(b * c - a * m, m), lam0)
        trace.append(("lambda0", lam0))
        trace.append(("bound_half", half))
        bound = clamp_bound(2 * half)
    else:
        branch = "3"
        cond.strict("a<0", -a)
        cond.strict("bc<0", -b * c)
        bound = clamp_bound(-a)
    notes.insert(0, f"branch {branch}")
    verdict = decide(s, bound, cond, exact=False)
    return _report("thm2", PROB, verdict, bound, BoundKind.SUFFICIENT, trace, ATTRACT_X0, notes)


def _thm3_pq(spec: SystemSpec) -> tuple[float, float]:
    a, b, c, m = spec.drift
    d, tr = spec.det, spec.trace
    p = tr * (c * c + m * m + d) - 2 * c * (a * c + b * m)
    q = 4 * d * (tr * tr + (b - c) ** 2)
    return p, q


def thm3_ms_e(spec: SystemSpec, root_sign: int = THM3_ROOT_SIGN) -> StabilityReport:
    """Mean-square exponential stability, Ito, noise on e (iff)."""
    _require(spec, NoisePattern.ONLY_E, "thm3", Calculus.ITO)
    a, b, c, m = spec.drift
    tr, d, s = spec.trace, spec.det, spec.e ** 2
    cond = Conditions()
    cond.strict("a+m<0", -tr)
    cond.strict("am-bc>0", d)
    if c != 0:
        p, q = _thm3_pq(spec)
        t1 = _div(2 * tr * (b * c - a * m), m * m + d)
        disc = p * p + c * c * q
        t2 = (root_sign * p + math.sqrt(disc)) / (c * c) if disc >= 0 else None
        bound = clamp_bound(min_present(t1, t2))
        trace = [("p", p), ("q", q), ("term1", t1), ("term2", t2)]
    else:
        bound = clamp_bound(-2 * a)
        trace = [("-2a", -2 * a)]
    verdict = decide(s, bound, cond, exact=True)
    return _report("thm3", MS, verdict, bound, BoundKind.EXACT, trace, ATTRACT_ORIGIN)


def thm4_ms_e_strat(spec: SystemSpec, printed: bool = False) -> StabilityReport:
    """Mean-square stability, Stratonovich, noise on e, c = 0 (iff).

    With c = 0 the Ito-converted moment matrix is triangular with
    eigenvalues 2(a + e^2), a + m + e^2/2 and 2m, so the threshold is -a.
    The literal statement reads -2a, the Ito value.
    """
    _require(spec, NoisePattern.ONLY_E, "thm4", Calculus.STRATONOVICH)
    if spec.c != 0:
        raise WrongPattern("thm4 needs c = 0")
    a, m, s = spec.a, spec.m, spec.e ** 2
    cond = Conditions()
    cond.strict("a<0", -a)
    cond.strict("m<0", -m)
    bound = clamp_bound(-2 * a if printed else -a)
    verdict = decide(s, bound, cond, exact=True)
    trace = [("-a", -a), ("printed_bound", -2 * a)]
    return _report("thm4", MS, verdict, bound, BoundKind.EXACT, trace, ATTRACT_ORIGIN,
                   ["printed form"] if printed else [])


def thm5_ms_e_strat(spec: SystemSpec, printed: bool = False) -> StabilityReport:
    """Mean-square stability, Stratonovich, noise on e, m = 0, c != 0 (iff).

    The corrected threshold is e^2 < -a for every ratio -b/c > 0; the
    literal second alternative (0 < -b/c < 1) is stricter than necessary.
    """
    _require(spec, NoisePattern.ONLY_E, "thm5", Calculus.STRATONOVICH)
    if spec.m != 0 or spec.c == 0:
        raise WrongPattern("thm5 needs m = 0 and c != 0")
    a, b, c = spec.a, spec.b, spec.c
    s = spec.e ** 2
    ratio = -b / c
    cond = Conditions()
    cond.strict("a<0", -a)
    cond.strict("bc<0", -b * c)
    alt2 = 2 * (-a) * (b + c) / (b + 3 * c) if b + 3 * c != 0 else None
    trace = [("ratio -b/c", ratio), ("-a", -a), ("alt2_bound", alt2)]
    notes = []
    if printed:
        notes.append("printed form")
        if ratio >= 1:
            bound = clamp_bound(-a)
            notes.append("condition 1")
        elif ratio > 0:
            bound = clamp_bound(alt2)
            notes.append("condition 2")
        else:
            bound = 0.0
    else:
        bound = clamp_bound(-a)
    verdict = decide(s, bound, cond, exact=True)
    return _report("thm5", MS, verdict, bound, BoundKind.EXACT, trace, ATTRACT_ORIGIN, notes)


# --- single noise coefficient: f ------------------------------------------

def thm6_prob_f(spec: SystemSpec) -> StabilityReport:
    _require(spec, NoisePattern.ONLY_F, "thm6")
    a, b, c, m = spec.drift
    tr, d, s = spec.trace, spec.det, spec.f ** 2
    cond = Conditions()
    cond.strict("a+m<0", -tr)
    cond.strict("am-bc>0", d)
    cond.nonzero("c!=0", c)
    term = _div(2 * tr * (b * c - a * m), c * c)
    bound = clamp_bound(term)
    verdict = decide(s, bound, cond, exact=False)
    return _report("thm6", PROB, verdict, bound, BoundKind.SUFFICIENT,
                   [("a+m", tr), ("am-bc", d), ("bound", term)], ATTRACT_Y0)


def thm7_ms_f(spec: SystemSpec, root_sign: int = THM7_ROOT_SIGN) -> StabilityReport:
    """Mean-square stability, noise on f, either reading (iff).

    With e = g = h = 0 the drift correction vanishes, so Ito and
    Stratonovich coincide.
    """
    _require(spec, NoisePattern.ONLY_F, "thm7")
    a, b, c, m = spec.drift
    tr, d, s = spec.trace, spec.det, spec.f ** 2
    cond = Conditions()
    cond.strict("a+m<0", -tr)
    cond.strict("am-bc>0", d)
    if c != 0:
        p, q = _thm3_pq(spec)
        t1 = 2 * tr * (b * c - a * m) / (c * c)
        disc = p * p + c * c * q
        t2 = (root_sign * p + math.sqrt(disc)) / (c * c) if disc >= 0 else None
        bound = clamp_bound(min_present(t1, t2))
        trace = [("p", p), ("q", q), ("term1", t1), ("term2", t2)]
    else:
        bound = math.inf
        trace = []
    verdict = decide(s, bound, cond, exact=True)
    return _report("thm7", MS, verdict, bound, BoundKind.EXACT, trace, ATTRACT_ORIGIN,
                   [] if c != 0 else ["c = 0: no intensity condition"])


# --- e = f -----------------------------------------------------------------

def thm8_prob_ef(spec: SystemSpec) -> StabilityReport:
    _require(spec, NoisePattern.EQUAL_EF, "thm8", Calculus.ITO)
    a, b, c, m = spec.drift
    tr, d, s = spec.trace, spec.det, spec.e ** 2
    cond = Conditions()
    cond.strict("a+m<0", -tr)
    cond.strict("am-bc>0", d)
    cond.nonzero("c!=0", c)
    notes = []
    t1 = _div(2 * tr * (b * c - a * m), d + (c - m) ** 2)
    rad = tr * tr + 4 * c * (a - m + c - b)
    if rad < 0:
        t2 = None
        notes.append("second term complex; dropped")
    else:
        t2 = (m - a - 2 * c) + math.sqrt(rad)
        if t2 <= 0:
            notes.append("second term non-positive; dropped")
            t2 = None
    bound = clamp_bound(min_present(t1, t2))
    verdict = decide(s, bound, cond, exact=False)
    trace = [("term1", t1), ("radicand", rad), ("term2", t2)]
    return _report("thm8", PROB, verdict, bound, BoundKind.SUFFICIENT, trace, ATTRACT_Y0, notes)


def ef_ito_rh_polys(spec: SystemSpec) -> dict[str, list[float]]:
    """Routh-Hurwitz quantities of the e = f moment matrix as polynomials in e^2.

    For the characteristic polynomial l^3 + c1 l^2 + c2 l + c3 the moment
    system is stable iff c1, c3 and c1*c2 - c3 are all positive.
    """
    a, b, c, m = spec.drift
    tr, d = spec.trace, spec.det
    return {
        "c1": [-1.0, -3 * tr],
        "c3": [-2 * (d + (c - m) ** 2), -4 * tr * d],
        "c1c2-c3": [
            -a + 2 * c - 3 * m,
            -5 * a * a + 6 * a * c - 18 * a * m + 2 * b * c + 2 * c * c + 2 * c * m - 9 * m * m,
            -2 * tr * (3 * tr * tr + 4 * d),
        ],
    }


def ef_strat_rh_polys(spec: SystemSpec) -> dict[str, list[float]]:
    """Same as ``ef_ito_rh_polys`` for the Stratonovich reading.

    The coefficients ``a, b, c, m`` are the Stratonovich ones; the drift
    shift a, b -> a + e^2/2, b + e^2/2 is folded into the polynomials.
    """
    a, b, c, m = spec.drift
    tr, d = spec.trace, spec.det
    return {
        "c1": [-2.5, -3 * tr],
        "c3": [
            2 * c - 2 * m,
            2 * a * c - 6 * a * m + 4 * b * c - 2 * c * c + 6 * c * m - 4 * m * m,
            -4 * tr * d,
        ],
        "c1c2-c3": [
            -2.5,
            -10.5 * a + 8 * c - 18.5 * m,
            -14 * a * a + 10 * a * c - 44 * a * m + 6 * b * c + 2 * c * c + 6 * c * m - 22 * m * m,
            -2 * tr * (3 * tr * tr + 4 * d),
        ],
    }


def thm9_ms_ef(spec: SystemSpec, printed: bool = False) -> StabilityReport:
    """Mean-square stability, Ito, e = f (iff)."""
    _require(spec, NoisePattern.EQUAL_EF, "thm9", Calculus.ITO)
    a, b, c, m = spec.drift
    tr, d, s = spec.trace, spec.det, spec.e ** 2
    cond = Conditions()
    cond.strict("a+m<0", -tr)
    cond.strict("am-bc>0", d)
    t1 = _div(2 * tr * (b * c - a * m), d + (c - m) ** 2)
    trace = [("term1", t1)]
    notes = []
    if m != 0:
        p = (b - c) * (b * b + c * c + d) - 2 * m * (a * c + b * m)
        q = d * (tr * tr + (b - c) ** 2)
        disc = p * p + 4 * m * m * q
        t2 = (p + math.sqrt(disc)) / (2 * m * m) if disc >= 0 else None
        printed_bound = min_present(t1, t2)
        trace += [("p", p), ("q", q), ("term2", t2)]
    elif b < 0 < c:
        t2a = 2 * a * b / (c - b)
        t2b = (-b) * (a * a + (b - c) ** 2) / (c - b) ** 2
        printed_bound = min(t2a, t2b)
        trace += [("term2b_1", t2a), ("term2b_2", t2b)]
    else:
        printed_bound = math.inf
        notes.append("m = 0, b > 0, c < 0: no intensity condition in the printed form")
    trace.append(("printed_bound", printed_bound))
    if printed:
        notes.insert(0, "printed form")
        bound = clamp_bound(printed_bound)
        verdict = decide(s, bound, cond, exact=True)
    else:
        polys = ef_ito_rh_polys(spec)
        if cond.holds:
            bound = clamp_bound(_rh_sign_check(polys, s, cond))
        else:
            bound = 0.0
        trace += [(f"root[{k}]", smallest_positive_root(v)) for k, v in polys.items()]
        verdict = _rh_verdict(cond)
    return _report("thm9", MS, verdict, bound, BoundKind.EXACT, trace, ATTRACT_ORIGIN, notes)


def _rh_verdict(cond: Conditions) -> Verdict:
    # conditions were evaluated at the actual intensity
    return decide(0.0, math.inf, cond, exact=True)


def thm10_ms_ef_strat(spec: SystemSpec, printed: bool = False) -> StabilityReport:
    """Mean-square stability, Stratonovich, e = f, with m = 0, a < 0, b < 0 < c (iff)."""
    _require(spec, NoisePattern.EQUAL_EF, "thm10", Calculus.STRATONOVICH)
    a, b, c, m = spec.drift
    if not (m == 0 and a < 0 and b < 0 < c):
        raise HypothesisViolated("thm10 needs m = 0, a < 0, b < 0, c > 0")
    s = spec.e ** 2
    t1 = a * b / (c - 2 * b)
    rad = c * c + 2 * b * (a - c)
    t2 = (a * b + (c - b) ** 2 - (c - b) * math.sqrt(rad)) / (-b) if rad >= 0 else None
    printed_bound = clamp_bound(2 * min_present(t1, t2))
    trace = [("half_term1", t1), ("radicand", rad), ("half_term2", t2), ("printed_bound", printed_bound)]
    return _strat_ef_result("thm10", spec, s, printed, printed_bound, trace)


def thm11_ms_ef_strat(spec: SystemSpec, printed: bool = False) -> StabilityReport:
    """Mean-square stability, Stratonovich, e = f, with b = c = m and a < b < 0 (iff)."""
    _require(spec, NoisePattern.EQUAL_EF, "thm11", Calculus.STRATONOVICH)
    a, b, c, m = spec.drift
    if not (b == c == m and a < b < 0):
        raise HypothesisViolated("thm11 needs b = c = m and a < b < 0")
    s = spec.e ** 2
    t1 = -(a + b) / 3
    t2 = (-3 * a - math.sqrt(a * a + 8 * b * b)) / 4
    printed_bound = clamp_bound(2 * min(t1, t2))
    trace = [("half_term1", t1), ("half_term2", t2), ("printed_bound", printed_bound)]
    return _strat_ef_result("thm11", spec, s, printed, printed_bound, trace)


def _strat_ef_result(name, spec, s, printed, printed_bound, trace) -> StabilityReport:
    cond = Conditions()
    if printed:
        verdict = decide(s, printed_bound, cond, exact=True)
        return _report(name, MS, verdict, printed_bound, BoundKind.EXACT, trace, ATTRACT_ORIGIN,
                       ["printed form"])
    polys = ef_strat_rh_polys(spec)
    bound = clamp_bound(_rh_sign_check(polys, s, cond))
    trace = trace + [(f"root[{k}]", smallest_positive_root(v)) for k, v in polys.items()]
    return _report(name, MS, _rh_verdict(cond), bound, BoundKind.EXACT, trace, ATTRACT_ORIGIN)


# --- e = g -----------------------------------------------------------------

def thm12_prob_eg(spec: SystemSpec) -> StabilityReport:
    _require(spec, NoisePattern.EQUAL_EG, "thm12", Calculus.ITO)
    a, b, c, m = spec.drift
    tr, d, s = spec.trace, spec.det, spec.e ** 2
    cond = Conditions()
    cond.strict("a+m<0", -tr)
    cond.strict("am-bc>0", d)
    cond.nonzero("b!=0", b)
    term = _div(2 * tr * (b * c - a * m), d + (b - m) ** 2)
    bound = clamp_bound(term)
    verdict = decide(s, bound, cond, exact=False)
    return _report("thm12", PROB, verdict, bound, BoundKind.SUFFICIENT,
                   [("a+m", tr), ("am-bc", d), ("bound", term)], ATTRACT_Y0)


def thm13_prob_eg_strat(spec: SystemSpec, printed: bool = False) -> StabilityReport:
    """Stability in probability, Stratonovich, e = g.

    The default applies the thm12 inequalities to the Ito-converted drift
    (a + e^2/2, b, c + e^2/2, m), written in u = e^2/2:

        u < -(a+m),   (am-bc) + u(m-b) > 0,
        2(b-m)u^2 - [2(am-bc) + (m-b)(a+2m-b)]u - (a+m)(am-bc) > 0.

    ``printed=True`` uses the literal root condition, which admits drifts
    whose converted form is a saddle and that the quadratic V cannot certify.
    """
    _require(spec, NoisePattern.EQUAL_EG, "thm13", Calculus.STRATONOVICH)
    a, b, c, m = spec.drift
    tr, d, s = spec.trace, spec.det, spec.e ** 2
    u = s / 2
    cond = Conditions()
    if printed:
        cond.strict("m<0", -m)
        cond.nonzero("b!=0", b)
        lam0 = smallest_positive_root([2 * m, 2 * d + m * (a + m) + (b - m) ** 2, -tr * d])
        t1 = _div(d, -m)
        bound = clamp_bound(2 * min_present(t1, lam0))
        verdict = decide(s, bound, cond, exact=False)
        trace = [("half_term1", t1), ("lambda0", lam0)]
        return _report("thm13", PROB, verdict, bound, BoundKind.SUFFICIENT, trace, ATTRACT_ORIGIN,
                       ["printed form"])
    cond.nonzero("b!=0", b)
    quad = [2 * (b - m), -(2 * d + (m - b) * (a + 2 * m - b)), -tr * d]
    cond.strict("converted a+m<0", -(tr + u))
    cond.strict("converted am-bc>0", d + u * (m - b))
    cond.strict("certificate quadratic>0", float(np.polyval(quad, u)))
    if tr < 0 and d > 0:
        half = min_present(-tr, smallest_positive_root([m - b, d]), smallest_positive_root(quad))
    else:
        half = 0.0
    bound = clamp_bound(2 * half)
    verdict = decide(0.0, math.inf, cond, exact=False)
    trace = [("a+m", tr), ("am-bc", d), ("bound_half", half)]
    return _report("thm13", PROB, verdict, bound, BoundKind.SUFFICIENT, trace, ATTRACT_ORIGIN)


# --- e = h, f = g ------------------------------------------------------------

def thm14_prob_eh(spec: SystemSpec) -> StabilityReport:
    _require(spec, NoisePattern.EQUAL_EH, "thm14", Calculus.ITO)
    c = spec.c
    tr, d, s = spec.trace, spec.det, spec.e ** 2
    cond = Conditions()
    cond.strict("a+m<0", -tr)
    cond.strict("am-bc>0", d)
    cond.nonzero("c!=0", c)
    notes = []
    if tr * tr >= 4 * d:
        p1 = smallest_positive_root([1.0, 2 * tr, 4 * d])
    else:
        p1 = None
        notes.append("(a+m)^2 < 4(am-bc): p1 absent")
    p2 = smallest_positive_root([1.0, 3 * tr, 2 * (tr * tr + 2 * d), 4 * tr * d])
    bound = clamp_bound(min_present(p1, p2))
    verdict = decide(s, bound, cond, exact=False)
    return _report("thm14", PROB, verdict, bound, BoundKind.SUFFICIENT,
                   [("p1", p1), ("p2", p2)], ATTRACT_Y0, notes)


def thm15_prob_fg(spec: SystemSpec) -> StabilityReport:
    _require(spec, NoisePattern.EQUAL_FG, "thm15", Calculus.ITO)
    a, b, c, m = spec.drift
    tr, d, s = spec.trace, spec.det, spec.f ** 2
    cond = Conditions()
    cond.strict("a+m<0", -tr)
    cond.strict("am-bc>0", d)
    notes = []
    cubic_a = [1.0, tr, -2 * (b * b + c * c + 2 * a * m), 4 * tr * (b * c - a * m)]
    cubic_b = [2 * m, c * c + 2 * m * m + 2 * d + 2 * m * tr,
               2 * (tr * (m * m + d) - 4 * b * m * (b + c)), -4 * b * b * d]
    p2 = smallest_positive_root(cubic_a)
    p3 = smallest_positive_root(cubic_b) if m != 0 else None
    if m < 0:
        p1 = (m * m + d) / (-m)
        bound = clamp_bound(min_present(p1, p2, p3))
        notes.append("branch 2a")
    elif m > 0:
        p1 = None
        bound = clamp_bound(min_present(p2, p3))
        notes.append("branch 2b")
    else:
        p1 = None
        bound = 0.0
        cond.failed.append("m != 0")
        notes.append("m = 0 is outside both branches")
    for name, value in (("p2", p2), ("p3", p3)):
        if value is None and m != 0:
            notes.append(f"{name} missing")
    verdict = decide(s, bound, cond, exact=False)
    return _report("thm15", PROB, verdict, bound, BoundKind.SUFFICIENT,
                   [("p1", p1), ("p2", p2), ("p3", p3)], ATTRACT_X0, notes)


THEOREMS = {
    "thm1": (thm1_prob_e, NoisePattern.ONLY_E, PROB, {Calculus.ITO}),
    "thm2": (thm2_prob_e_strat, NoisePattern.ONLY_E, PROB, {Calculus.STRATONOVICH}),
    "thm3": (thm3_ms_e, NoisePattern.ONLY_E, MS, {Calculus.ITO}),
    "thm4": (thm4_ms_e_strat, NoisePattern.ONLY_E, MS, {Calculus.STRATONOVICH}),
    "thm5": (thm5_ms_e_strat, NoisePattern.ONLY_E, MS, {Calculus.STRATONOVICH}),
    "thm6": (thm6_prob_f, NoisePattern.ONLY_F, PROB, {Calculus.ITO, Calculus.STRATONOVICH}),
    "thm7": (thm7_ms_f, NoisePattern.ONLY_F, MS, {Calculus.ITO, Calculus.STRATONOVICH}),
    "thm8": (thm8_prob_ef, NoisePattern.EQUAL_EF, PROB, {Calculus.ITO}),
    "thm9": (thm9_ms_ef, NoisePattern.EQUAL_EF, MS, {Calculus.ITO}),
    "thm10": (thm10_ms_ef_strat, NoisePattern.EQUAL_EF, MS, {Calculus.STRATONOVICH}),
    "thm11": (thm11_ms_ef_strat, NoisePattern.EQUAL_EF, MS, {Calculus.STRATONOVICH}),
    "thm12": (thm12_prob_eg, NoisePattern.EQUAL_EG, PROB, {Calculus.ITO}),
    "thm13": (thm13_prob_eg_strat, NoisePattern.EQUAL_EG, PROB, {Calculus.STRATONOVICH}),
    "thm14": (thm14_prob_eh, NoisePattern.EQUAL_EH, PROB, {Calculus.ITO}),
    "thm15": (thm15_prob_fg, NoisePattern.EQUAL_FG, PROB, {Calculus.ITO}),
}

EXACT_THEOREMS = frozenset(k for k, v in THEOREMS.items() if v[2] is MS)

_RH = ("a + m < 0", "am - bc > 0")
HYPOTHESES = {
    "thm1": _RH + ("b != 0", "e^2 < 2(a+m)(bc-am) / (m^2 + am - bc)"),
    "thm2": _RH + ("b != 0", "e^2/2 below the branch bound (sign of m)"),
    "thm3": _RH + ("e^2 below min of the two root terms (c != 0) or -2a (c = 0)",),
    "thm4": ("c = 0", "a < 0", "m < 0", "e^2 < -a"),
    "thm5": ("m = 0", "c != 0", "a < 0", "bc < 0", "e^2 < -a"),
    "thm6": _RH + ("c != 0", "f^2 < 2(a+m)(bc-am) / c^2"),
    "thm7": _RH + ("f^2 below min of the two root terms (c != 0)",),
    "thm8": _RH + ("c != 0", "e^2 below min of the two terms"),
    "thm9": _RH + ("moment Routh-Hurwitz quantities c1, c3, c1c2-c3 > 0 at e^2",),
    "thm10": ("m = 0", "a < 0", "b < 0 < c", "moment Routh-Hurwitz quantities > 0 at e^2"),
    "thm11": ("b = c = m", "a < b < 0", "moment Routh-Hurwitz quantities > 0 at e^2"),
    "thm12": _RH + ("b != 0", "e^2 < 2(a+m)(bc-am) / (am - bc + (b-m)^2)"),
    "thm13": ("b != 0", "converted drift a + m + e^2/2 < 0", "converted det > 0",
              "certificate quadratic in e^2/2 > 0"),
    "thm14": _RH + ("c != 0", "e^2 < min(p1, p2)"),
    "thm15": _RH + ("m != 0", "f^2 < min of p1, p2, p3 present"),
    "routh_hurwitz": _RH,
}
