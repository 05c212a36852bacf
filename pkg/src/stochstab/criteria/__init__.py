"""Coefficient stability criteria and the dispatcher over them."""

from ..model import StabilityNotion
from .dispatch import analyze, candidates, snap_to_pattern
from .report import BifurcationBound, BoundKind, StabilityReport, Verdict
from .roots import real_roots, smallest_positive_root
from .theorems import (
    EXACT_THEOREMS,
    HYPOTHESES,
    THEOREMS,
    THM3_ROOT_SIGN,
    THM7_ROOT_SIGN,
    ef_ito_rh_polys,
    ef_strat_rh_polys,
    thm1_prob_e,
    thm2_prob_e_strat,
    thm3_ms_e,
    thm4_ms_e_strat,
    thm5_ms_e_strat,
    thm6_prob_f,
    thm7_ms_f,
    thm8_prob_ef,
    thm9_ms_ef,
    thm10_ms_ef_strat,
    thm11_ms_ef_strat,
    thm12_prob_eg,
    thm13_prob_eg_strat,
    thm14_prob_eh,
    thm15_prob_fg,
)

__all__ = [
    "EXACT_THEOREMS", "HYPOTHESES", "THEOREMS", "THM3_ROOT_SIGN", "THM7_ROOT_SIGN",
    "BifurcationBound", "BoundKind", "StabilityNotion", "StabilityReport", "Verdict",
    "analyze", "candidates", "snap_to_pattern", "real_roots", "smallest_positive_root",
    "ef_ito_rh_polys", "ef_strat_rh_polys",
    "thm1_prob_e", "thm2_prob_e_strat", "thm3_ms_e", "thm4_ms_e_strat", "thm5_ms_e_strat",
    "thm6_prob_f", "thm7_ms_f", "thm8_prob_ef", "thm9_ms_ef", "thm10_ms_ef_strat",
    "thm11_ms_ef_strat", "thm12_prob_eg", "thm13_prob_eg_strat", "thm14_prob_eh", "thm15_prob_fg",
]
