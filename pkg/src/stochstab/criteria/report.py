from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from ..model import StabilityNotion

# strict inequalities closer than this to equality are not decided
BOUNDARY_TOL = 1e-12


class Verdict(str, enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    INCONCLUSIVE = "inconclusive"
    BOUNDARY = "boundary"


class BoundKind(str, enum.Enum):
    SUFFICIENT = "sufficient"
    EXACT = "exact"


@dataclass(frozen=True)
class BifurcationBound:
    """Threshold on the squared noise intensity, with the numbers behind it.

    ``bound`` is ``inf`` when the noise imposes no constraint. Trace values
    are floats, or None for a quantity the criterion declares absent.
    """

    bound: float
    kind: BoundKind
    trace: tuple[tuple[str, float | None], ...] = ()

    def __post_init__(self):
        if math.isnan(self.bound) or self.bound < 0:
            raise ValueError(f"bifurcation bound must be >= 0, got {self.bound}")

    def get(self, name: str) -> float | None:
        for key, value in self.trace:
            if key == name:
                return value
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "bound": _json_float(self.bound),
            "kind": self.kind.value,
            "trace": [{"name": k, "value": _json_float(v)} for k, v in self.trace],
        }


@dataclass(frozen=True)
class StabilityReport:
    verdict: Verdict
    notion: StabilityNotion
    theorem_applied: str
    bound: BifurcationBound | None = None
    attractor_note: str = ""
    attractor: str = ""
    notes: tuple[str, ...] = ()
    advisory: dict = field(default_factory=dict)

    @property
    def stable(self) -> bool:
        return self.verdict is Verdict.STABLE

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "notion": self.notion.value,
            "theorem": self.theorem_applied,
            "bound": self.bound.to_dict() if self.bound else None,
            "attractor": self.attractor,
            "attractor_note": self.attractor_note,
            "notes": list(self.notes),
            "advisory": self.advisory,
        }


def _json_float(x):
    if x is None:
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass
class Conditions:
    """Collects the strict/non-strict inequalities one criterion imposes.

    Each condition is recorded as a margin that must be positive (strict) or
    non-negative (non-strict). Margins within ``tol`` of zero on a strict
    condition leave the outcome undecided.
    """

    tol: float = BOUNDARY_TOL
    failed: list[str] = field(default_factory=list)
    undecided: list[str] = field(default_factory=list)

    def strict(self, label: str, margin: float) -> bool:
        if margin > self.tol:
            return True
        (self.undecided if margin >= -self.tol else self.failed).append(label)
        return False

    def nonstrict(self, label: str, margin: float) -> bool:
        if margin >= -self.tol:
            return True
        self.failed.append(label)
        return False

    def nonzero(self, label: str, value: float) -> bool:
        return self.strict(label, abs(value))

    @property
    def holds(self) -> bool:
        return not self.failed and not self.undecided


def decide(intensity: float, bound: float, cond: Conditions, exact: bool) -> Verdict:
    """Verdict for ``intensity < bound`` under the collected hypotheses."""
    negative = Verdict.UNSTABLE if exact else Verdict.INCONCLUSIVE
    undecided = Verdict.BOUNDARY if exact else Verdict.INCONCLUSIVE
    if cond.failed:
        return negative
    if cond.undecided:
        return undecided
    if math.isinf(bound):
        return Verdict.STABLE
    band = cond.tol * (1.0 + abs(bound))
    if intensity < bound - band:
        return Verdict.STABLE
    if intensity <= bound + band:
        return undecided
    return negative


def clamp_bound(value: float | None) -> float:
    """A bound from formula terms; negative or missing values mean 'no room'."""
    if value is None or math.isnan(value):
        return 0.0
    return max(value, 0.0)


def min_present(*values: float | None) -> float:
    present = [v for v in values if v is not None]
    return min(present) if present else math.inf
