"""Exact-rational SL_n model: generators, flags, cell samples and verification harness."""

from .matrix import RationalMatrix, coroot, generator, sdot, sdot_inv, x_gen, y_gen
from .flags import (
    FlagPoint, bruhat_cell, bruhat_decompose, classify_flag, classify_parabolic, lift,
    permutation, rank_table, reduce, relative_position, type_a_group,
)
from .cells import (
    CellSample, degenerate_flag, degenerations, limit_flag, phi_translate, random_params,
    sample_cell, sample_tilde_cell,
)
from .survey import SurveyReport, VerifyReport, degeneration_survey, run_verification

__all__ = [
    "RationalMatrix", "coroot", "generator", "sdot", "sdot_inv", "x_gen", "y_gen",
    "FlagPoint", "bruhat_cell", "bruhat_decompose", "classify_flag", "classify_parabolic", "lift",
    "permutation", "rank_table", "reduce", "relative_position", "type_a_group",
    "CellSample", "degenerate_flag", "degenerations", "limit_flag", "phi_translate",
    "random_params", "sample_cell", "sample_tilde_cell",
    "SurveyReport", "VerifyReport", "degeneration_survey", "run_verification",
]
