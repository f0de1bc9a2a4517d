"""Symmetric doubly stochastic scaling B = D A D and related audits.

The iteration is the symmetric fixed point d_i <- d_i / sqrt(sum_j d_i
A_ij d_j): both sides of the scaling are updated at once, so every iterate
is exactly symmetric.  Convergence requires the support of A to contain a
perfect matching; when it does not, the iteration stalls and the result is
returned with ``converged=False`` instead of raising, because
non-scalability is a legitimate verdict the CLI reports.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .linalg import SymMatrix, eig_symmetric

__all__ = [
    "ScalingResult",
    "ScalingAudit",
    "SpectralGapReport",
    "scale_symmetric",
    "audit_entry_bounds",
    "spectral_gap",
]


@dataclass(frozen=True)
class ScalingResult:
    d: np.ndarray
    b: SymMatrix
    residual: float
    iterations: int
    max_entry: float
    min_positive_entry: float
    converged: bool

    def __post_init__(self):
        d = np.asarray(self.d, dtype=np.float64)
        d.setflags(write=False)
        object.__setattr__(self, "d", d)


def scale_symmetric(
    a: SymMatrix,
    residual_target: float | None = None,
    max_iterations: int = 10_000,
    d0: np.ndarray | None = None,
) -> ScalingResult:
    """Scale a to (approximately) doubly stochastic form B = diag(d) A diag(d).

    Parameters
    ----------
    a : SymMatrix
        Nonnegative symmetric input; every row must contain a positive entry.
    residual_target : float, optional
        Stop once max_i |row_sum_i(B) - 1| falls below this.  Defaults to
        1/n, the tolerance at which near-stochasticity already pins the
        magnitude of the largest entry.
    max_iterations : int
        Iteration cap; hitting it yields ``converged=False``.
    d0 : array, optional
        Positive starting diagonal.  The default 1/sqrt(row sums) is exact
        for regular graphs; the limit B is the same for any start.
    """
    arr = a.entries
    n = a.n
    if residual_target is None:
        residual_target = 1.0 / n
    if residual_target <= 0:
        raise InputError("residual_target must be positive")
    if max_iterations < 1:
        raise InputError("max_iterations must be >= 1")
    row = arr.sum(axis=1)
    if np.any(row == 0):
        raise InputError("input has an all-zero row; scaling undefined")
    if d0 is None:
        d = 1.0 / np.sqrt(row)
    else:
        d = np.asarray(d0, dtype=np.float64).copy()
        if d.shape != (n,) or np.any(d <= 0) or not np.all(np.isfinite(d)):
            raise InputError("d0 must be a length-n vector of positive finite reals")
    iterations = 0
    converged = False
    residual = math.inf
    while True:
        r = d * (arr @ d)
        if not np.all(np.isfinite(r)) or np.any(r <= 0):
            break
        residual = float(np.max(np.abs(r - 1.0)))
        if residual <= residual_target:
            converged = True
            break
        if iterations >= max_iterations:
            break
        d_new = d / np.sqrt(r)
        # diverging d means the support admits no doubly stochastic scaling;
        # stop before the outer product d d^T can overflow
        if np.max(d_new) > 1e100 or np.min(d_new) < 1e-100:
            break
        d = d_new
        iterations += 1
    b_arr = np.outer(d, d) * arr
    b = SymMatrix(b_arr)
    positive = b_arr[b_arr > 0]
    return ScalingResult(
        d=d,
        b=b,
        residual=residual,
        iterations=iterations,
        max_entry=float(b_arr.max()),
        min_positive_entry=float(positive.min()) if positive.size else math.inf,
        converged=converged,
    )


@dataclass(frozen=True)
class ScalingAudit:
    """Entry-size audit of a scaled matrix against n^-theta / n^-2nu bounds."""

    max_ok: bool
    min_ok: bool
    observed_exponents: tuple


def audit_entry_bounds(result: ScalingResult, theta: float, nu: float) -> ScalingAudit:
    """Check max B_ij <= n^-theta and min positive B_ij >= n^-2nu.

    ``observed_exponents`` inverts both bounds: the first component is the
    theta actually achieved by the max entry, the second the nu achieved by
    the smallest positive entry.
    """
    if not result.converged:
        raise InputError("entry-bound audit requires a converged scaling result")
    n = result.b.n
    logn = math.log(n)
    max_exp = -math.log(result.max_entry) / logn if result.max_entry > 0 else math.inf
    min_exp = (
        -math.log(result.min_positive_entry) / (2.0 * logn)
        if math.isfinite(result.min_positive_entry)
        else math.inf
    )
    return ScalingAudit(
        max_ok=bool(result.max_entry <= n ** (-theta)),
        min_ok=bool(result.min_positive_entry >= n ** (-2.0 * nu)),
        observed_exponents=(max_exp, min_exp),
    )


@dataclass(frozen=True)
class SpectralGapReport:
    has_gap: bool
    gap_witness: float | None
    reducible: bool
    delta: float


_GAP_EDGE_TOL = 1e-9


def _support_components(arr: np.ndarray) -> int:
    n = arr.shape[0]
    seen = np.zeros(n, dtype=bool)
    comps = 0
    for start in range(n):
        if seen[start]:
            continue
        comps += 1
        stack = [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            nbrs = np.nonzero(arr[v] > 0)[0]
            for w in nbrs:
                if not seen[w]:
                    seen[w] = True
                    stack.append(int(w))
    return comps


def spectral_gap(b: SymMatrix, delta: float, stochastic_tol: float = 1e-6) -> SpectralGapReport:
    """Check that no eigenvalue of stochastic B falls in (-1,-1+delta) u (1-delta,1).

    Eigenvalues within 1e-9 of +-1 count as sitting exactly at the edge.
    A reducible B (disconnected support) makes multiplicities at +-1
    uninformative; this is reported, not rejected.
    """
    if delta <= 0:
        raise InputError("delta must be positive")
    rows = b.entries.sum(axis=1)
    if np.max(np.abs(rows - 1.0)) > stochastic_tol:
        raise InputError(
            f"matrix is not stochastic within {stochastic_tol} (max row-sum deviation "
            f"{np.max(np.abs(rows - 1.0)):.3g})"
        )
    eig = eig_symmetric(b)
    mags = np.abs(eig)
    interior = mags < 1.0 - _GAP_EDGE_TOL
    forbidden = interior & (mags > 1.0 - delta)
    reducible = _support_components(b.entries) > 1
    if reducible:
        warnings.warn("stochastic matrix is reducible; +-1 eigenvalues are per-block", stacklevel=2)
    witness = float(mags[interior].max()) if np.any(interior) else None
    return SpectralGapReport(
        has_gap=bool(not np.any(forbidden)),
        gap_witness=witness,
        reducible=reducible,
        delta=float(delta),
    )
