"""Exception types shared across the package."""

from __future__ import annotations


class StochStabError(Exception):
    pass


class SpecFormatError(StochStabError, ValueError):
    """Malformed system description; ``key`` names the offending field."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class WrongPattern(StochStabError, ValueError):
    """A criterion was asked about a system outside its noise pattern or calculus."""


class HypothesisViolated(StochStabError, ValueError):
    """Structural drift hypotheses of a criterion do not hold."""


class UnsupportedPattern(StochStabError, ValueError):
    pass


class DegenerateAllZero(StochStabError, ValueError):
    pass


class DegenerateDenominator(StochStabError, ValueError):
    pass


class CaseNotCovered(StochStabError, ValueError):
    pass


class NoSignChange(StochStabError, ValueError):
    pass
