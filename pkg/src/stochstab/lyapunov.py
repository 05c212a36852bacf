"""Quadratic Lyapunov forms and the Ito generator acting on them.

A form ``V(x, y) = p x^2 + 2 q xy + r y^2`` is stored by its three
coefficients. For the linear system the generator maps quadratic forms to
quadratic forms, so every certificate check reduces to 2x2 Sylvester minors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedPattern, WrongPattern
from .model import (
    NoisePattern,
    StabilityNotion,
    SystemSpec,
    as_ito,
    classify_noise_pattern,
    dual_pattern,
    dual_transform,
)

REL_TOL = 1e-12
CIRCLE_POINTS = 64


@dataclass(frozen=True)
class QuadraticForm:
    p: float
    q: float
    r: float

    def __post_init__(self):
        for name in ("p", "q", "r"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"form coefficient {name!r} must be finite")
            object.__setattr__(self, name, value)

    def __call__(self, x, y):
        return self.p * x * x + 2 * self.q * x * y + self.r * y * y

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm(self.p + other.p, self.q + other.q, self.r + other.r)

    def __mul__(self, k: float) -> "QuadraticForm":
        return QuadraticForm(k * self.p, k * self.q, k * self.r)

    __rmul__ = __mul__

    def __neg__(self) -> "QuadraticForm":
        return self * -1.0

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.p, self.q], [self.q, self.r]])

    @property
    def det(self) -> float:
        return self.p * self.r - self.q * self.q

    @property
    def scale(self) -> float:
        return max(abs(self.p), abs(self.q), abs(self.r))

    def swapped(self) -> "QuadraticForm":
        """The same form after exchanging the roles of x and y."""
        return QuadraticForm(self.r, self.q, self.p)

    def to_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "r": self.r}


@dataclass(frozen=True)
class CertificateReport:
    v_positive_definite: bool
    lv_form: QuadraticForm
    lv_negative_definite: bool
    lv_negative_semidefinite: bool
    margin: float
    circle_max: float

    @property
    def holds(self) -> bool:
        """V > 0, LV <= 0 by minors, and no circle sample of LV above zero."""
        return (self.v_positive_definite and self.lv_negative_semidefinite
                and self.circle_max <= REL_TOL)

    def to_dict(self) -> dict:
        return {
            "v_positive_definite": self.v_positive_definite,
            "lv_form": self.lv_form.to_dict(),
            "lv_negative_definite": self.lv_negative_definite,
            "lv_negative_semidefinite": self.lv_negative_semidefinite,
            "margin": self.margin,
            "circle_max": self.circle_max,
            "holds": self.holds,
        }


def apply_generator(spec: SystemSpec, v: QuadraticForm) -> QuadraticForm:
    """LV for the Ito system; the result is again a quadratic form."""
    if not spec.is_ito:
        raise WrongPattern("the generator acts on the Ito form; convert the spec first")
    a, b, c, m = spec.drift
    e, f, g, h = spec.diffusion
    p, q, r = v.p, v.q, v.r
    return QuadraticForm(
        2 * a * p + 2 * c * q + p * e * e + 2 * q * e * g + r * g * g,
        b * p + q * (a + m) + c * r + p * e * f + q * (e * h + f * g) + r * g * h,
        2 * b * q + 2 * m * r + p * f * f + 2 * q * f * h + r * h * h,
    )


def is_positive_definite(v: QuadraticForm, rel_tol: float = REL_TOL, scale: float | None = None) -> bool:
    """Sylvester test with tolerance ``rel_tol * scale`` (default: the form's own size)."""
    scale = v.scale if scale is None else scale
    tol = rel_tol * scale
    return v.p > tol and v.det > tol * scale


def is_negative_definite(v: QuadraticForm, rel_tol: float = REL_TOL, scale: float | None = None) -> bool:
    return is_positive_definite(-v, rel_tol, scale)


def is_negative_semidefinite(v: QuadraticForm, rel_tol: float = REL_TOL, scale: float | None = None) -> bool:
    scale = v.scale if scale is None else scale
    tol = rel_tol * scale
    return v.p <= tol and v.r <= tol and v.det >= -tol * scale


# --- certificates ---------------------------------------------------------

def _v_e(spec: SystemSpec) -> QuadraticForm:
    # (am - bc) x^2 + (m x - b y)^2
    a, b, c, m = spec.drift
    return QuadraticForm(spec.det + m * m, -b * m, b * b)


def _only_f_probability(spec: SystemSpec, printed: bool) -> QuadraticForm:
    if printed:
        raise ValueError("the printed form (cx - ay) x^2 + (am - bc) y^2 is cubic, not quadratic")
    a, b, c, m = spec.drift
    # (c x - a y)^2 + (am - bc) y^2
    return QuadraticForm(c * c, -a * c, a * a + spec.det)


def _only_f_mean_square(spec: SystemSpec, printed: bool) -> QuadraticForm:
    a, b, c, m = spec.drift
    s = spec.f ** 2
    mid = a * c + b * m - c * s / 2
    return QuadraticForm(c * c + m * m + spec.det, mid if printed else -mid,
                         a * a + b * b + spec.det - (a + m) * s / 2)


def _equal_ef_probability(spec: SystemSpec, printed: bool) -> QuadraticForm:
    a, b, c, m = spec.drift
    s = spec.e ** 2
    q = -c * (2 * a + c * c) if printed else -c * (2 * a + s) / 2
    return QuadraticForm(c * c, q, a * a + spec.det + s / 2 * (a + m - 2 * c))


def _equal_ef_mean_square(spec: SystemSpec, printed: bool) -> QuadraticForm:
    a, b, c, m = spec.drift
    s = spec.e ** 2
    mid = m * s + a * c + b * m
    return QuadraticForm(c * c + m * m + spec.det, mid if printed else -mid,
                         a * a + b * b + spec.det + (b - c) * s)


def _equal_eh_probability(spec: SystemSpec, printed: bool) -> QuadraticForm:
    a, b, c, m = spec.drift
    s = spec.e ** 2
    return QuadraticForm(2 * c * c, -c * (2 * a + s),
                         2 * (a * a + spec.det) + s * s + (3 * a + m) * s)


def _equal_fg_probability(spec: SystemSpec, printed: bool) -> QuadraticForm:
    a, b, c, m = spec.drift
    s = spec.f ** 2
    return QuadraticForm(2 * (m * m + spec.det + m * s), c * s - 2 * b * m,
                         2 * b * b - (a + m) * s - s * s)


_BUILDERS = {
    (NoisePattern.ONLY_E, StabilityNotion.PROBABILITY): lambda s, printed: _v_e(s),
    (NoisePattern.ONLY_F, StabilityNotion.PROBABILITY): _only_f_probability,
    (NoisePattern.ONLY_F, StabilityNotion.MEAN_SQUARE): _only_f_mean_square,
    (NoisePattern.EQUAL_EF, StabilityNotion.PROBABILITY): _equal_ef_probability,
    (NoisePattern.EQUAL_EF, StabilityNotion.MEAN_SQUARE): _equal_ef_mean_square,
    (NoisePattern.EQUAL_EG, StabilityNotion.PROBABILITY): lambda s, printed: _v_e(s),
    (NoisePattern.EQUAL_EH, StabilityNotion.PROBABILITY): _equal_eh_probability,
    (NoisePattern.EQUAL_FG, StabilityNotion.PROBABILITY): _equal_fg_probability,
}


def has_certificate(pattern: NoisePattern, notion: StabilityNotion) -> bool:
    return (pattern, notion) in _BUILDERS or (dual_pattern(pattern), notion) in _BUILDERS


def build_certificate(spec: SystemSpec, pattern: NoisePattern, notion: StabilityNotion,
                      *, printed: bool = False) -> QuadraticForm:
    """Closed-form quadratic Lyapunov function for ``spec``.

    Coefficients are taken from the Ito form of ``spec``, since that is the
    form the generator acts on. Patterns covered only up to the coordinate
    swap are built on the swapped system and mapped back.

    ``printed=True`` returns the literal forms, whose middle coefficients
    for the OnlyF mean-square case and both EqualEF cases carry a sign or
    symbol slip. The default uses the corrected coefficients.
    """
    notion = StabilityNotion(notion)
    if classify_noise_pattern(spec) is not pattern:
        raise WrongPattern(f"spec has pattern {classify_noise_pattern(spec).value}, not {pattern.value}")
    ito = as_ito(spec)
    key = (pattern, notion)
    if key in _BUILDERS:
        return _BUILDERS[key](ito, printed)
    dual_key = (dual_pattern(pattern), notion)
    if dual_key in _BUILDERS:
        return _BUILDERS[dual_key](dual_transform(ito), printed).swapped()
    raise UnsupportedPattern(f"no closed-form certificate for {pattern.value} / {notion.value}")


def verify_certificate(spec: SystemSpec, v: QuadraticForm, rel_tol: float = REL_TOL) -> CertificateReport:
    if not spec.is_ito:
        raise WrongPattern("certificates are verified against the Ito generator")
    lv = apply_generator(spec, v)
    v_scale = v.scale or 1.0
    # LV can be small through cancellation; judge it against the size of its terms
    coeff = sum(abs(x) for x in spec.drift) + sum(x * x for x in spec.diffusion)
    lv_scale = max(lv.scale, v_scale * coeff) or 1.0
    margin = min(v.p / v_scale, v.det / v_scale ** 2,
                 -lv.p / lv_scale, -lv.r / lv_scale, lv.det / lv_scale ** 2)
    theta = np.linspace(0.0, 2 * math.pi, CIRCLE_POINTS, endpoint=False)
    circle = lv(np.cos(theta), np.sin(theta)) / lv_scale
    return CertificateReport(
        v_positive_definite=is_positive_definite(v, rel_tol),
        lv_form=lv,
        lv_negative_definite=is_negative_definite(lv, rel_tol, lv_scale),
        lv_negative_semidefinite=is_negative_semidefinite(lv, rel_tol, lv_scale),
        margin=float(margin),
        circle_max=float(circle.max()),
    )
