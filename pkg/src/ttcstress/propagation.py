"""Portfolio propagation with immediate write-off and re-origination.

One period moves the book through the (possibly stressed) transition matrix,
writes off whatever lands in the default grade, and re-originates exactly
that amount across performing grades, keeping total balance constant:

    W_next = migrate(W) restricted to performing grades
             + (defaulted flow) * origination mix
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .transition import TransitionMatrix, stress_transition_matrix

_SUM_TOL = 1e-12


def _check_weights(values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise InputError("shape", f"{what} must be a vector of length >= 2")
    if not np.isfinite(arr).all():
        raise InputError("invalid-argument", f"{what} contains non-finite entries")
    if (arr < 0.0).any():
        i = int(np.argmax(arr < 0.0))
        raise InputError("negative-entry",
                         f"{what} has a negative weight at position {i + 1}")
    total = arr.sum()
    if abs(total - 1.0) > _SUM_TOL:
        raise InputError("weight-sum",
                         f"{what} sums to {total!r}, expected 1 within {_SUM_TOL}")
    return arr


@dataclass(frozen=True, eq=False)
class Portfolio:
    """Balance distribution across rating grades (fractions summing to one)."""

    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "weights",
                           _check_weights(self.weights, "portfolio"))

    @property
    def n(self) -> int:
        return self.weights.size


@dataclass(frozen=True, eq=False)
class OriginationVector:
    """Distribution of newly originated balance; nothing is originated into default."""

    weights: np.ndarray

    def __post_init__(self):
        arr = _check_weights(self.weights, "origination vector")
        if arr[-1] != 0.0:
            raise InputError("origination-into-default",
                             "origination into the default grade must be 0")
        object.__setattr__(self, "weights", arr)

    @property
    def n(self) -> int:
        return self.weights.size


@dataclass(frozen=True)
class ProjectionPath:
    """Multi-period projection record.

    Period 0 is the initial portfolio; entries ``portfolios[t-1]``,
    ``default_flows[t-1]``, ``avg_pds[t-1]`` and ``z[t-1]`` describe period
    t = 1..m.  Average PDs are measured against the unstressed matrix so the
    path isolates the rating-mix dynamics from any applied stress; the
    realized stressed default flow per period is reported separately.
    """

    initial: Portfolio
    initial_pd: float
    z: np.ndarray
    portfolios: np.ndarray
    default_flows: np.ndarray
    avg_pds: np.ndarray

    @property
    def periods(self) -> int:
        return self.z.size

    def pd_series(self) -> np.ndarray:
        """Average PD per period including period 0, length m + 1."""
        return np.concatenate(([self.initial_pd], self.avg_pds))

    def portfolio_at(self, t: int) -> Portfolio:
        """Portfolio after period t (t = 0 returns the initial portfolio)."""
        if t == 0:
            return self.initial
        return Portfolio(self.portfolios[t - 1])


def _step_raw(w: np.ndarray, probs: np.ndarray,
              orig: np.ndarray) -> tuple[np.ndarray, float]:
    migrated = w @ probs
    flow = float(migrated[-1])
    out = migrated.copy()
    out[-1] = 0.0
    out += flow * orig
    return out, flow


def propagate_step(portfolio: Portfolio, tm: TransitionMatrix,
                   origination: OriginationVector) -> tuple[Portfolio, float]:
    """One propagation period under ``tm``.

    Returns the post-period portfolio (default grade written off and
    re-originated, so its default weight is exactly zero) and the defaulted
    balance flow of the period.
    """
    if portfolio.n != tm.n or origination.n != tm.n:
        raise InputError("dimension-mismatch",
                         f"portfolio ({portfolio.n}), matrix ({tm.n}) and "
                         f"origination ({origination.n}) sizes must agree")
    out, flow = _step_raw(portfolio.weights, tm.probs, origination.weights)
    return Portfolio(out), flow


def average_pd(portfolio: Portfolio, tm: TransitionMatrix) -> float:
    """Balance-weighted one-period default probability of the book."""
    if portfolio.n != tm.n:
        raise InputError("dimension-mismatch",
                         f"portfolio ({portfolio.n}) and matrix ({tm.n}) "
                         "sizes must agree")
    return float(portfolio.weights @ tm.default_column)


def project_path(initial: Portfolio, tm: TransitionMatrix,
                 origination: OriginationVector, rho: float,
                 z_path) -> ProjectionPath:
    """Propagate over a sequence of economy states.

    Each period stresses the matrix at z_t (z == 0 uses ``tm`` unchanged,
    bit for bit) and applies one propagation step.  The recorded average PD
    uses the unstressed matrix throughout.
    """
    z_arr = np.asarray(z_path, dtype=float)
    if z_arr.ndim != 1 or z_arr.size == 0:
        raise InputError("shape", "z path must be a non-empty vector")
    if not np.isfinite(z_arr).all():
        raise InputError("invalid-argument", "z path contains non-finite entries")
    if initial.n != tm.n or origination.n != tm.n:
        raise InputError("dimension-mismatch",
                         f"portfolio ({initial.n}), matrix ({tm.n}) and "
                         f"origination ({origination.n}) sizes must agree")
    m = z_arr.size
    n = tm.n
    states = np.empty((m, n))
    flows = np.empty(m)
    pds = np.empty(m)
    w = initial.weights
    for t, z_t in enumerate(z_arr):
        t_z = tm if z_t == 0.0 else stress_transition_matrix(tm, rho, z_t)
        w, flow = _step_raw(w, t_z.probs, origination.weights)
        states[t] = w
        flows[t] = flow
        pds[t] = float(w @ tm.default_column)
    return ProjectionPath(
        initial=initial,
        initial_pd=average_pd(initial, tm),
        z=z_arr.copy(),
        portfolios=states,
        default_flows=flows,
        avg_pds=pds,
    )
