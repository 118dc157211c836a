"""Consistency diagnostics between a current portfolio and the model parameters.

The parameterization (transition matrix plus origination mix) pins down one
through-the-cycle portfolio.  A book far from that attractor will drift
toward it even in a projection with no stress applied, and the drift can
masquerade as a recession or a boom.  The checks here quantify the gap,
run the zero-stress projection, and classify the PD path.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .propagation import (OriginationVector, Portfolio, ProjectionPath,
                          average_pd, project_path)
from .transition import TransitionMatrix
from .ttc import (PerronReport, TTCResult, is_primitive, solve_ttc_iterative,
                  verify_perron_structure)

DEFAULT_BAND = 0.05
DEFAULT_HORIZON = 50

CLASS_MONOTONE = "monotone-convergent"
CLASS_RECESSION = "spurious-recession"
CLASS_BOOM = "spurious-boom"
CLASS_MIXED = "mixed"


@dataclass(frozen=True)
class DivergenceReport:
    """Per-grade gap between the current book and the TTC portfolio."""

    differences: np.ndarray
    l1: float
    linf: float
    current_pd: float
    ttc_pd: float


@dataclass(frozen=True)
class SpuriousReport:
    """Classification of an average-PD path from a zero-stress projection.

    ``pd_path`` holds a_0..a_m including the initial portfolio's PD; the
    terminal value is the convergence proxy.  An excursion counts as
    spurious when it clears both endpoints by more than ``band`` times the
    terminal PD.
    """

    pd_path: np.ndarray
    period_labels: np.ndarray
    min_pd: float
    min_period: int
    max_pd: float
    max_period: int
    terminal_pd: float
    classification: str
    first_crossing: int
    band: float
    deviations_non_increasing: bool

    @property
    def spurious(self) -> bool:
        return self.classification != CLASS_MONOTONE


@dataclass(frozen=True)
class ValidationReport:
    """Bundle of all parameterization checks with an overall verdict.

    ``verdict`` is "pass", "warn: <classification>" when the zero-stress
    projection shows spurious dynamics, or "fail: not primitive" when no
    unique TTC portfolio exists.  Component reports are None past the point
    where the pipeline stopped.
    """

    primitive: bool
    ttc: TTCResult | None
    divergence: DivergenceReport | None
    path: ProjectionPath | None
    spurious: SpuriousReport | None
    perron: PerronReport | None
    verdict: str

    @property
    def exit_code(self) -> int:
        if self.verdict.startswith("fail"):
            return 2
        if self.verdict.startswith("warn"):
            return 1
        return 0


def compare_portfolios(current: Portfolio, w_ttc: Portfolio,
                       tm: TransitionMatrix) -> DivergenceReport:
    """Componentwise differences and norms, with both average PDs."""
    if current.n != w_ttc.n or current.n != tm.n:
        raise InputError("dimension-mismatch",
                         "portfolios and matrix must share the grade count")
    diff = current.weights - w_ttc.weights
    return DivergenceReport(
        differences=diff,
        l1=float(np.abs(diff).sum()),
        linf=float(np.abs(diff).max()),
        current_pd=average_pd(current, tm),
        ttc_pd=average_pd(w_ttc, tm),
    )


def classify_pd_path(pds, band: float = DEFAULT_BAND,
                     period_labels=None) -> SpuriousReport:
    """Classify a PD sequence; the first entry is the path start.

    Recession: some PD exceeds both the start and the terminal value by more
    than band * terminal.  Boom: some PD undercuts the lower endpoint by the
    same margin.  Both at once is "mixed"; otherwise the path counts as
    monotone-convergent (the report separately records whether the
    deviations |a_t - a_m| are truly non-increasing).
    """
    arr = np.asarray(pds, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise InputError("too-short", "need at least two PD observations")
    if not np.isfinite(arr).all():
        raise InputError("invalid-argument", "PD path contains non-finite values")
    if band <= 0.0:
        raise InputError("invalid-argument", "band must be positive")
    if period_labels is None:
        labels = np.arange(arr.size)
    else:
        labels = np.asarray(period_labels, dtype=int)
        if labels.shape != arr.shape:
            raise InputError("shape", "period labels do not match path length")
    start = arr[0]
    terminal = arr[-1]
    threshold = band * terminal
    i_min = int(np.argmin(arr))
    i_max = int(np.argmax(arr))
    max_pd = float(arr[i_max])
    min_pd = float(arr[i_min])
    recession = (max_pd > start
                 and max_pd - start > threshold
                 and max_pd - terminal > threshold)
    boom = min(start, terminal) - min_pd > threshold
    if recession and boom:
        classification = CLASS_MIXED
    elif recession:
        classification = CLASS_RECESSION
    elif boom:
        classification = CLASS_BOOM
    else:
        classification = CLASS_MONOTONE
    deviations = np.abs(arr - terminal)
    non_increasing = bool((np.diff(deviations) <= 1e-12).all())
    inside = deviations <= threshold
    first_crossing = int(labels[np.argmax(inside)]) if inside.any() else int(labels[-1])
    return SpuriousReport(
        pd_path=arr,
        period_labels=labels,
        min_pd=min_pd,
        min_period=int(labels[i_min]),
        max_pd=max_pd,
        max_period=int(labels[i_max]),
        terminal_pd=float(terminal),
        classification=classification,
        first_crossing=first_crossing,
        band=float(band),
        deviations_non_increasing=non_increasing,
    )


def detect_spurious_dynamics(path: ProjectionPath,
                             band: float = DEFAULT_BAND) -> SpuriousReport:
    """Classify a projection's PD path (period 0 through m)."""
    return classify_pd_path(path.pd_series(), band=band)


def run_validation(current: Portfolio, tm: TransitionMatrix,
                   origination: OriginationVector,
                   horizon: int = DEFAULT_HORIZON,
                   band: float = DEFAULT_BAND,
                   tol: float = 1e-12) -> ValidationReport:
    """Full pre-stress-test validation of a parameterization.

    Checks primitivity, solves for the TTC portfolio, compares it with the
    current book, projects ``horizon`` periods with no stress, classifies
    the resulting PD path, and verifies the spectral structure.
    """
    if horizon < 1:
        raise InputError("invalid-argument", "horizon must be >= 1")
    if not is_primitive(tm.performing_block):
        return ValidationReport(
            primitive=False,
            ttc=None,
            divergence=None,
            path=None,
            spurious=None,
            perron=None,
            verdict="fail: not primitive",
        )
    ttc = solve_ttc_iterative(tm, origination, tol=tol)
    divergence = compare_portfolios(current, ttc.w_ttc, tm)
    path = project_path(current, tm, origination, rho=0.0,
                        z_path=np.zeros(horizon))
    spurious = detect_spurious_dynamics(path, band=band)
    perron = verify_perron_structure(tm, origination)
    if not perron.passed:
        verdict = "fail: degenerate spectral structure"
    elif spurious.spurious:
        verdict = f"warn: {spurious.classification}"
    else:
        verdict = "pass"
    return ValidationReport(
        primitive=True,
        ttc=ttc,
        divergence=divergence,
        path=path,
        spurious=spurious,
        perron=perron,
        verdict=verdict,
    )
