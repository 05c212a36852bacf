"""Coefficient-level algebra for the planar linear system

    dx = (a x + b y) dt + (e x + f y) dW
    dy = (c x + m y) dt + (g x + h y) dW

driven by one scalar Wiener process W.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import SpecFormatError

DIFFUSION_KEYS = ("e", "f", "g", "h")
DRIFT_KEYS = ("a", "b", "c", "m")


class Calculus(str, enum.Enum):
    ITO = "ito"
    STRATONOVICH = "stratonovich"


class StabilityNotion(str, enum.Enum):
    PROBABILITY = "probability"
    MEAN_SQUARE = "mean_square"


class NoisePattern(str, enum.Enum):
    """Which diffusion coefficients are nonzero (and equal, for pairs)."""

    ONLY_E = "only_e"
    ONLY_F = "only_f"
    ONLY_G = "only_g"
    ONLY_H = "only_h"
    EQUAL_EF = "equal_ef"
    EQUAL_EG = "equal_eg"
    EQUAL_EH = "equal_eh"
    EQUAL_FG = "equal_fg"
    EQUAL_FH = "equal_fh"
    EQUAL_GH = "equal_gh"
    NO_NOISE = "no_noise"
    UNSUPPORTED = "unsupported"

    @property
    def active(self) -> tuple[str, ...]:
        """Names of the diffusion coefficients that carry the noise."""
        if self in (NoisePattern.NO_NOISE, NoisePattern.UNSUPPORTED):
            return ()
        return tuple(self.value.split("_")[1])


_SINGLE = {"e": NoisePattern.ONLY_E, "f": NoisePattern.ONLY_F,
           "g": NoisePattern.ONLY_G, "h": NoisePattern.ONLY_H}
_PAIR = {("e", "f"): NoisePattern.EQUAL_EF, ("e", "g"): NoisePattern.EQUAL_EG,
         ("e", "h"): NoisePattern.EQUAL_EH, ("f", "g"): NoisePattern.EQUAL_FG,
         ("f", "h"): NoisePattern.EQUAL_FH, ("g", "h"): NoisePattern.EQUAL_GH}

# coordinate swap x <-> y: a<->m, b<->c, e<->h, f<->g
_DUAL_NAMES = {"a": "m", "m": "a", "b": "c", "c": "b",
               "e": "h", "h": "e", "f": "g", "g": "f"}


@dataclass(frozen=True)
class SystemSpec:
    a: float
    b: float
    c: float
    m: float
    e: float = 0.0
    f: float = 0.0
    g: float = 0.0
    h: float = 0.0
    calculus: Calculus = Calculus.ITO

    def __post_init__(self):
        for name in DRIFT_KEYS + DIFFUSION_KEYS:
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"coefficient {name!r} must be finite, got {value}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "calculus", Calculus(self.calculus))

    @property
    def drift(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.m)

    @property
    def diffusion(self) -> tuple[float, float, float, float]:
        return (self.e, self.f, self.g, self.h)

    @property
    def trace(self) -> float:
        return self.a + self.m

    @property
    def det(self) -> float:
        return self.a * self.m - self.b * self.c

    @property
    def is_ito(self) -> bool:
        return self.calculus is Calculus.ITO

    def replace(self, **changes) -> "SystemSpec":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in DRIFT_KEYS + DIFFUSION_KEYS}
        out["calculus"] = self.calculus.value
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SystemSpec":
        """Parse the JSON object form; diffusion defaults to 0, calculus to Ito."""
        if not isinstance(data, dict):
            raise SpecFormatError("<root>", "expected a JSON object")
        known = set(DRIFT_KEYS + DIFFUSION_KEYS + ("calculus",))
        for key in data:
            if key not in known:
                raise SpecFormatError(key, "unknown key")
        values = {}
        for key in DRIFT_KEYS + DIFFUSION_KEYS:
            if key not in data:
                if key in DRIFT_KEYS:
                    raise SpecFormatError(key, "missing drift coefficient")
                continue
            raw = data[key]
            if isinstance(raw, bool) or not isinstance(raw, (int, float)):
                raise SpecFormatError(key, f"expected a number, got {raw!r}")
            if not math.isfinite(raw):
                raise SpecFormatError(key, "must be finite")
            values[key] = float(raw)
        calculus = data.get("calculus", "ito")
        try:
            values["calculus"] = Calculus(calculus)
        except ValueError:
            raise SpecFormatError("calculus", f"expected 'ito' or 'stratonovich', got {calculus!r}") from None
        return cls(**values)


def stratonovich_to_ito(spec: SystemSpec) -> SystemSpec:
    """Return the Ito system with the same law as a Stratonovich-read spec.

    The drift picks up half the square of the diffusion matrix
    ``G = [[e, f], [g, h]]``; the diffusion itself is unchanged. Each new
    coefficient is evaluated in exact rational arithmetic and rounded once,
    so cancellation inside the correction cannot cost accuracy.
    """
    if spec.is_ito:
        raise ValueError("spec is already in Ito form")
    a, b, c, m = (Fraction(x) for x in spec.drift)
    e, f, g, h = (Fraction(x) for x in spec.diffusion)
    return spec.replace(
        a=float(a + (e * e + f * g) / 2),
        b=float(b + f * (e + h) / 2),
        c=float(c + g * (e + h) / 2),
        m=float(m + (h * h + f * g) / 2),
        calculus=Calculus.ITO,
    )


def as_ito(spec: SystemSpec) -> SystemSpec:
    return spec if spec.is_ito else stratonovich_to_ito(spec)


def routh_hurwitz(spec: SystemSpec, tol: float = 0.0) -> bool:
    """Asymptotic stability of the deterministic part: trace < 0 < det."""
    return spec.trace < -tol and spec.det > tol


def classify_noise_pattern(spec: SystemSpec, tol: float = 0.0) -> NoisePattern:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    nonzero = [k for k in DIFFUSION_KEYS if getattr(spec, k) != 0.0]
    if not nonzero:
        return NoisePattern.NO_NOISE
    if len(nonzero) == 1:
        return _SINGLE[nonzero[0]]
    if len(nonzero) == 2:
        u, v = (getattr(spec, k) for k in nonzero)
        if abs(u - v) <= tol:
            return _PAIR[tuple(nonzero)]
    return NoisePattern.UNSUPPORTED


def dual_transform(spec: SystemSpec) -> SystemSpec:
    """Swap the state coordinates x <-> y. An involution."""
    return spec.replace(**{_DUAL_NAMES[k]: getattr(spec, k) for k in _DUAL_NAMES})


def dual_pattern(pattern: NoisePattern) -> NoisePattern:
    if not pattern.active:
        return pattern
    swapped = tuple(sorted(_DUAL_NAMES[k] for k in pattern.active))
    return _SINGLE[swapped[0]] if len(swapped) == 1 else _PAIR[swapped]


def with_intensity(template: SystemSpec, pattern: NoisePattern, intensity: float) -> SystemSpec:
    """Place noise of squared amplitude ``intensity`` on the pattern's coefficients.

    The remaining diffusion coefficients are zeroed. The active coefficients
    share one sign: that of the first one nonzero in the template, else +.
    """
    if not pattern.active:
        raise ValueError(f"pattern {pattern.value} has no noise channel")
    if intensity < 0:
        raise ValueError("intensity is a squared amplitude and must be >= 0")
    signs = [getattr(template, k) for k in pattern.active if getattr(template, k) != 0.0]
    amp = math.copysign(math.sqrt(intensity), signs[0] if signs else 1.0)
    changes = {k: (amp if k in pattern.active else 0.0) for k in DIFFUSION_KEYS}
    return template.replace(**changes)


def intensity_of(spec: SystemSpec, pattern: NoisePattern) -> float:
    """Squared amplitude on the first active coefficient of ``pattern``."""
    if not pattern.active:
        return 0.0
    return getattr(spec, pattern.active[0]) ** 2
