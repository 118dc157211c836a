"""Rating transition matrices and the one-factor PIT/stress transforms.

A transition matrix is row-stochastic with the last grade an absorbing
default state.  Stressing maps each row's cumulative downgrade tails through
the one-factor quantile shift

    tail(z) = Phi( (Phi^-1(tail) - sqrt(rho) * z) / sqrt(1 - rho) )

so that negative economy states z push probability mass toward worse grades.
``z == 0`` (or ``rho == 0``) is treated as "no stress" and returns the input
matrix unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .normal import std_normal_cdf, std_normal_inv_cdf

ROW_SUM_TOL = 1e-6
_STRICT_ROW_TOL = 1e-12
_NEG_CLAMP = 1e-12


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Validated n x n one-period rating transition matrix.

    Grade n (last row/column) is the absorbing default state.  Rows sum to
    one within 1e-12; use :func:`validate_transition_matrix` to repair raw
    data that is only approximately stochastic.
    """

    probs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.probs, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InputError("shape", "transition matrix must be square")
        if arr.shape[0] < 2:
            raise InputError("shape", "need at least two rating grades")
        if not np.isfinite(arr).all():
            raise InputError("invalid-argument",
                             "transition matrix contains non-finite entries")
        if (arr < 0.0).any():
            i, j = np.argwhere(arr < 0.0)[0]
            raise InputError("negative-entry",
                             f"negative probability at row {i + 1}, column {j + 1}")
        sums = arr.sum(axis=1)
        bad = np.abs(sums - 1.0) > _STRICT_ROW_TOL
        if bad.any():
            i = int(np.argmax(bad))
            raise InputError("row-sum",
                             f"row {i + 1} sums to {sums[i]!r}, expected 1 "
                             f"within {_STRICT_ROW_TOL}")
        last = arr[-1]
        if last[-1] != 1.0 or (last[:-1] != 0.0).any():
            raise InputError("absorbing-row",
                             f"row {arr.shape[0]} must be (0, ..., 0, 1): "
                             "the default grade is absorbing")
        object.__setattr__(self, "probs", arr)

    @property
    def n(self) -> int:
        return self.probs.shape[0]

    @property
    def performing_block(self) -> np.ndarray:
        """Transitions between performing grades, an (n-1) x (n-1) block."""
        return self.probs[:-1, :-1]

    @property
    def default_column(self) -> np.ndarray:
        """One-period default probability per grade (grade n maps to 1)."""
        return self.probs[:, -1]


def validate_transition_matrix(raw, tol: float = ROW_SUM_TOL) -> TransitionMatrix:
    """Validate a raw square matrix and renormalize its rows.

    Rows whose sums deviate from one by more than 1e-12 but at most ``tol``
    are rescaled (already-stochastic rows pass through unchanged); larger
    deviations, negative entries, or a non-absorbing last row are rejected
    with error codes naming the offending cell.
    """
    arr = np.array(raw, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputError("shape", "transition matrix must be square")
    if arr.shape[0] < 2:
        raise InputError("shape", "need at least two rating grades")
    if not np.isfinite(arr).all():
        i, j = np.argwhere(~np.isfinite(arr))[0]
        raise InputError("invalid-argument",
                         f"non-finite entry at row {i + 1}, column {j + 1}")
    if (arr < 0.0).any():
        i, j = np.argwhere(arr < 0.0)[0]
        raise InputError("negative-entry",
                         f"negative probability at row {i + 1}, column {j + 1}")
    sums = arr.sum(axis=1)
    bad = np.abs(sums - 1.0) > tol
    if bad.any():
        i = int(np.argmax(bad))
        raise InputError("row-sum",
                         f"row {i + 1} sums to {sums[i]!r}, outside 1 +- {tol}")
    last = arr[-1]
    if last[-1] != 1.0 or (last[:-1] != 0.0).any():
        raise InputError("absorbing-row",
                         f"row {arr.shape[0]} must be (0, ..., 0, 1): "
                         "the default grade is absorbing")
    # rescale only rows that need it, so already-valid matrices pass through
    # bit for bit (parse/emit round trips stay exact)
    needs = np.abs(sums - 1.0) > _STRICT_ROW_TOL
    if needs.any():
        arr = arr.copy()
        arr[needs] = arr[needs] / sums[needs, None]
    return TransitionMatrix(arr)


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not (0.0 <= rho < 1.0) or np.isnan(rho):
        raise InputError("invalid-argument",
                         f"asset correlation must lie in [0, 1), got {rho!r}")
    return rho


def _check_z(z: float) -> float:
    z = float(z)
    if not np.isfinite(z):
        raise InputError("invalid-argument",
                         f"economy state must be finite, got {z!r}")
    return z


def pit_pd(p_ttc: float, rho: float, z: float) -> float:
    """Point-in-time default probability conditional on the economy state z.

    Maps an unconditional (through-the-cycle) PD through the one-factor
    model.  ``z == 0`` or ``rho == 0`` means no stress and returns ``p_ttc``
    unchanged; boundary PDs 0 and 1 are preserved.
    """
    p_ttc = float(p_ttc)
    if np.isnan(p_ttc) or not (0.0 <= p_ttc <= 1.0):
        raise InputError("invalid-argument",
                         f"probability must lie in [0, 1], got {p_ttc!r}")
    rho = _check_rho(rho)
    z = _check_z(z)
    if rho == 0.0 or z == 0.0:
        return p_ttc
    shifted = (std_normal_inv_cdf(p_ttc) - np.sqrt(rho) * z) / np.sqrt(1.0 - rho)
    return std_normal_cdf(shifted)


def stress_transition_matrix(tm: TransitionMatrix, rho: float,
                             z: float) -> TransitionMatrix:
    """Transform an average transition matrix into one conditional on z.

    For each performing row the cumulative downgrade tails
    S_j = sum of the row from column j onward are shifted through the
    one-factor transform and differenced back into probabilities, so the
    stressed row telescopes to sum one by construction.  Zero tails stay
    zero (the quantile convention maps 0 to -inf) and the default row stays
    absorbing.  ``z == 0`` or ``rho == 0`` returns ``tm`` unchanged.
    """
    rho = _check_rho(rho)
    z = _check_z(z)
    if rho == 0.0 or z == 0.0:
        return tm
    p = tm.probs
    n = tm.n
    # tails[:, k] = sum of row entries from column k to the end (k = 0..n-1)
    tails = np.cumsum(p[:-1, ::-1], axis=1)[:, ::-1]
    shift = np.sqrt(rho) * z
    scale = np.sqrt(1.0 - rho)
    stressed = np.empty((n - 1, n + 1))
    stressed[:, 0] = 1.0
    stressed[:, n] = 0.0
    inner = np.clip(tails[:, 1:], 0.0, 1.0)
    stressed[:, 1:n] = std_normal_cdf((std_normal_inv_cdf(inner) - shift) / scale)
    rows = stressed[:, :-1] - stressed[:, 1:]
    # cancellation can leave harmless negative dust; anything larger is a bug
    if (rows < -_NEG_CLAMP).any():
        raise InputError("invalid-argument",
                         "stress transform produced a negative probability")
    rows[rows < 0.0] = 0.0
    rows /= rows.sum(axis=1, keepdims=True)
    out = np.zeros((n, n))
    out[:-1] = rows
    out[-1, -1] = 1.0
    return TransitionMatrix(out)
