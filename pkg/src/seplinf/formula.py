"""Closed-form error: candidate set + catalog maximum."""

from __future__ import annotations

from dataclasses import dataclass

from .candidates import CandidateSet, OptimizerConfig, build_candidate_set
from .catalog import CATALOG, CatalogEvaluation, evaluate_catalog
from .function_model import FunctionSource
from .lp_oracle import GridSpec

__all__ = ["FormulaResult", "approximation_error", "candidate_grid"]


@dataclass(frozen=True)
class FormulaResult:
    value: float
    best_id: str
    candidates: CandidateSet
    evaluation: CatalogEvaluation


def approximation_error(f: FunctionSource, cfg: OptimizerConfig | None = None, catalog=CATALOG) -> FormulaResult:
    """Best uniform error of ``f`` by sums of univariate functions.

    Exact for functions whose three mixed second differences are nonnegative,
    up to the accuracy of the auxiliary maximizations.
    """
    U = build_candidate_set(f, cfg)
    ev = evaluate_catalog(f, U, catalog)
    return FormulaResult(ev.best_ratio, ev.best_id, U, ev)


def candidate_grid(U: CandidateSet) -> GridSpec:
    """The tensor grid spanned by the axis projections of U."""
    return GridSpec(U.Ux, U.Uy, U.Uz)
