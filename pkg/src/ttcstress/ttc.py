"""Existence and computation of the through-the-cycle (TTC) portfolio.

The write-off / re-origination propagation map is linear on the performing
grades: stacking row i of the transition matrix plus the origination term
into column i gives a column-stochastic matrix M_p whose fixed vector is the
TTC portfolio.  When the performing block is primitive, Perron-Frobenius
theory makes that fixed vector unique, strictly positive, and the attractor
of plain iteration from any starting mix.

Two solvers are provided: the fixed-point iteration (the operational
definition) and a direct linear solve of (M_p - I) w = 0 with the mass
constraint replacing one redundant row.  They must agree; tests hold them
to 1e-8 and better.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InputError, PrimitivityError
from .propagation import OriginationVector, Portfolio, _step_raw, average_pd
from .transition import TransitionMatrix

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 100_000


def is_primitive(block) -> bool:
    """Whether a nonnegative square matrix is primitive.

    Uses the Wielandt bound: an m x m nonnegative matrix is primitive if and
    only if its (m^2 - 2m + 2)-th power is entrywise positive.  The check
    runs on the boolean sparsity pattern with boolean matrix products, so no
    numerical under- or overflow is possible.
    """
    arr = np.asarray(block, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise InputError("shape", "primitivity check needs a square matrix")
    if (arr < 0.0).any():
        i, j = np.argwhere(arr < 0.0)[0]
        raise InputError("negative-entry",
                         f"negative entry at row {i + 1}, column {j + 1}")
    pattern = _pattern_power(arr > 0.0, _wielandt_exponent(arr.shape[0]))
    return bool(pattern.all())


def _wielandt_exponent(m: int) -> int:
    return m * m - 2 * m + 2


def _pattern_power(pattern: np.ndarray, exponent: int) -> np.ndarray:
    """Boolean matrix power by squaring (reachability in exactly k steps)."""
    acc = None
    base = pattern.astype(np.int64)
    e = exponent
    while e:
        if e & 1:
            acc = base.copy() if acc is None else ((acc @ base) > 0).astype(np.int64)
        base = ((base @ base) > 0).astype(np.int64)
        e >>= 1
    return acc > 0


def build_m_p(tm: TransitionMatrix, origination: OriginationVector) -> np.ndarray:
    """Performing-grade propagation matrix, acting on column vectors.

    Entry (j, i) is the probability mass grade i sends to grade j in one
    period: the direct migration plus the share of grade i's default flow
    re-originated into j.  Every column sums to one because each performing
    grade's full mass is redistributed.
    """
    if origination.n != tm.n:
        raise InputError("dimension-mismatch",
                         f"matrix ({tm.n}) and origination ({origination.n}) "
                         "sizes must agree")
    if origination.weights[-1] != 0.0:
        raise InputError("origination-into-default",
                         "origination into the default grade must be 0")
    t_p = tm.performing_block
    d = tm.default_column[:-1]
    o = origination.weights[:-1]
    return t_p.T + np.outer(o, d)


@dataclass(frozen=True)
class TTCResult:
    """Converged TTC portfolio with solver diagnostics."""

    w_ttc: Portfolio
    iterations: int
    final_step_delta: float
    ttc_pd: float
    spectral_gap_estimate: float


def solve_ttc_iterative(tm: TransitionMatrix, origination: OriginationVector,
                        tol: float = DEFAULT_TOL,
                        max_iter: int = DEFAULT_MAX_ITER,
                        require_primitive: bool = True,
                        initial: Portfolio | None = None) -> TTCResult:
    """Fixed-point iteration for the TTC portfolio.

    Starts from the uniform mix over performing grades (any ``initial``
    portfolio converges to the same fixed point on a primitive system) and
    applies the propagation step until the L1 change between iterates drops
    below ``tol``.  ``spectral_gap_estimate`` is the last observed ratio of
    successive L1 deltas, an empirical stand-in for the subdominant
    eigenvalue modulus that governs the convergence rate.

    ``require_primitive=False`` skips the primitivity gate; on a
    non-primitive system the iteration then typically cycles and the raised
    :class:`ConvergenceError` carries a period-2 oscillation diagnostic.
    """
    _check_solver_inputs(tm, origination, require_primitive)
    if max_iter < 1:
        raise InputError("invalid-argument", "max_iter must be >= 1")
    n = tm.n
    if initial is not None:
        if initial.n != n:
            raise InputError("dimension-mismatch",
                             f"matrix ({n}) and initial portfolio "
                             f"({initial.n}) sizes must agree")
        w = initial.weights.copy()
    else:
        w = np.zeros(n)
        w[:-1] = 1.0 / (n - 1)
    probs = tm.probs
    orig = origination.weights
    prev1 = w
    prev2 = None
    prev_delta = None
    gap = 0.0
    cycle = float("nan")
    for it in range(1, max_iter + 1):
        w, _ = _step_raw(prev1, probs, orig)
        delta = float(np.abs(w - prev1).sum())
        if prev2 is not None:
            cycle = float(np.abs(w - prev2).sum())
        if prev_delta is not None and prev_delta > 0.0:
            gap = delta / prev_delta
        if delta < tol:
            w = w / w.sum()
            result = Portfolio(w)
            return TTCResult(
                w_ttc=result,
                iterations=it,
                final_step_delta=delta,
                ttc_pd=average_pd(result, tm),
                spectral_gap_estimate=gap,
            )
        prev2 = prev1
        prev1 = w
        prev_delta = delta
    hint = ("iterates repeat with period 2, the system is oscillating"
            if cycle < tol else "no short cycle detected")
    raise ConvergenceError(
        f"no convergence after {max_iter} iterations: last L1 delta "
        f"{delta:.3e}, distance to the iterate two steps back {cycle:.3e} "
        f"({hint})",
        iterations=max_iter,
        last_delta=delta,
        cycle_delta=cycle,
    )


def solve_ttc_direct(tm: TransitionMatrix,
                     origination: OriginationVector) -> Portfolio:
    """TTC portfolio from the bordered linear system.

    (M_p - I) is rank-deficient by exactly one when the performing block is
    primitive, so replacing one row with the mass constraint sum(w) = 1
    yields a well-posed dense system, solved with partial pivoting.
    """
    _check_solver_inputs(tm, origination, require_primitive=True)
    m_p = build_m_p(tm, origination)
    w = _solve_unit_eigenvector(m_p)
    if (w < -1e-10).any():
        raise PrimitivityError(
            "direct solve produced a significantly negative component; "
            "the performing block is not primitive or the inputs are "
            "inconsistent")
    w[w < 0.0] = 0.0
    w = w / w.sum()
    full = np.zeros(tm.n)
    full[:-1] = w
    return Portfolio(full)


def _solve_unit_eigenvector(m_p: np.ndarray) -> np.ndarray:
    """Solve (M_p - I) w = 0 with one row swapped for the mass constraint."""
    m = m_p.shape[0]
    a = m_p - np.eye(m)
    a[-1, :] = 1.0
    b = np.zeros(m)
    b[-1] = 1.0
    try:
        return np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise PrimitivityError(
            "bordered system is singular: the fixed vector is not unique, "
            "so the performing block cannot be primitive") from exc


def _check_solver_inputs(tm: TransitionMatrix, origination: OriginationVector,
                         require_primitive: bool) -> None:
    if origination.n != tm.n:
        raise InputError("dimension-mismatch",
                         f"matrix ({tm.n}) and origination ({origination.n}) "
                         "sizes must agree")
    if origination.weights[-1] != 0.0:
        raise InputError("origination-into-default",
                         "origination into the default grade must be 0")
    if require_primitive and not is_primitive(tm.performing_block):
        pattern = _pattern_power(tm.performing_block > 0.0,
                                 _wielandt_exponent(tm.n - 1))
        raise PrimitivityError(
            "performing-grade block is not primitive: some grade pairs stay "
            "unreachable at the Wielandt exponent "
            f"{_wielandt_exponent(tm.n - 1)}", pattern=pattern)


@dataclass(frozen=True)
class PerronReport:
    """Structural checks behind existence and convergence of the TTC portfolio."""

    column_sums: np.ndarray
    column_sums_ok: bool
    residual: float
    residual_ok: bool
    lambda2: float
    lambda2_ok: bool

    @property
    def passed(self) -> bool:
        return self.column_sums_ok and self.residual_ok and self.lambda2_ok


def verify_perron_structure(tm: TransitionMatrix,
                            origination: OriginationVector,
                            power_iterations: int = 500) -> PerronReport:
    """Check the spectral facts the TTC solvers rely on.

    Reports (a) the column sums of the performing propagation matrix, which
    must all equal one, (b) the fixed-point residual of the directly solved
    vector, and (c) a power-iteration estimate of the subdominant eigenvalue
    modulus, taken on the zero-mass subspace that is invariant under a
    column-stochastic matrix (this deflates the dominant eigenvector, whose
    components carry the unit total mass).  Never raises; failures surface
    as flags.
    """
    m_p = build_m_p(tm, origination)
    col_sums = m_p.sum(axis=0)
    col_ok = bool(np.abs(col_sums - 1.0).max() <= 1e-12)
    try:
        w = _solve_unit_eigenvector(m_p)
        residual = float(np.abs(m_p @ w - w).max())
    except PrimitivityError:
        residual = float("inf")
    lam2 = _subdominant_modulus(m_p, power_iterations)
    return PerronReport(
        column_sums=col_sums,
        column_sums_ok=col_ok,
        residual=residual,
        residual_ok=residual <= 1e-10,
        lambda2=lam2,
        lambda2_ok=lam2 < 1.0,
    )


def _subdominant_modulus(m_p: np.ndarray, iterations: int) -> float:
    """|lambda_2| by power iteration restricted to the zero-mass subspace.

    Complex conjugate pairs make per-step growth oscillate, so the estimate
    is the geometric mean of the growth factors over the trailing half of
    the iterations.
    """
    m = m_p.shape[0]
    if m == 1:
        return 0.0
    rng = np.random.default_rng(0)
    v = rng.standard_normal(m)
    v -= v.mean()
    norm = np.linalg.norm(v)
    if norm == 0.0:
        v = np.zeros(m)
        v[0], v[1] = 1.0, -1.0
        norm = np.sqrt(2.0)
    v /= norm
    growth = []
    for _ in range(iterations):
        w = m_p @ v
        w -= w.mean()
        norm = np.linalg.norm(w)
        if norm < 1e-300:
            return 0.0
        growth.append(norm)
        v = w / norm
    tail = growth[len(growth) // 2:]
    return float(np.exp(np.mean(np.log(tail))))
