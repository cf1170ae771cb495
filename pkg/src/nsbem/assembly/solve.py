"""Dense complex linear solves with pivoted LU."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.linalg import blas, lapack
from threadpoolctl import threadpool_limits

from ..errors import SingularMatrixError

logger = logging.getLogger(__name__)

#: Pivots smaller than this times the matrix infinity norm are singular.
PIVOT_TOLERANCE = 1e-14
_ROW_BLOCK = 512


@dataclass(frozen=True)
class DenseSolution:
    """Solution of ``A X = B``.

    Attributes
    ----------
    x : ndarray
        Same shape as ``B``.
    residual : float
        ``||A X - B|| / ||B||`` (Frobenius norms).  When the matrix was
        factorised in place the product ``A X`` is formed from the LU
        factors, so the value measures the triangular solves only.
    condition : float
        LAPACK estimate of the infinity-norm condition number.
    """

    x: np.ndarray
    residual: float
    condition: float


def _inf_norm(A: np.ndarray) -> float:
    norm = 0.0
    for start in range(0, A.shape[0], _ROW_BLOCK):
        norm = max(norm, float(np.abs(A[start : start + _ROW_BLOCK]).sum(axis=1).max()))
    return norm


def _apply_factors(lu: np.ndarray, piv: np.ndarray, X: np.ndarray) -> np.ndarray:
    """``A @ X`` for ``A.T = P L U`` stored in ``(lu, piv)``."""
    Y = np.array(X, dtype=complex, order="F", copy=True)
    for i, p in enumerate(piv):
        if p != i:
            Y[[i, p]] = Y[[p, i]]
    Y = blas.ztrmm(1.0, lu, Y, side=0, lower=1, trans_a=1, diag=1, overwrite_b=1)
    Y = blas.ztrmm(1.0, lu, Y, side=0, lower=0, trans_a=1, diag=0, overwrite_b=1)
    return Y


def solve_dense(
    A: np.ndarray,
    B: np.ndarray,
    overwrite_a: bool = False,
    blas_threads: int = 1,
) -> DenseSolution:
    """Solve ``A X = B`` by partial-pivoting LU.

    Parameters
    ----------
    A : ndarray (M, M)
        Square matrix with finite entries.
    B : ndarray (M,) or (M, k)
    overwrite_a : bool
        Factorise ``A`` in place (no copy); ``A`` is destroyed.
    blas_threads : int
        Thread cap for BLAS/LAPACK during the solve.  The default of one
        keeps results bit-identical regardless of the machine.

    Raises
    ------
    SingularMatrixError
        If a pivot falls below ``1e-14 * ||A||_inf``.
    ValueError
        Non-square matrix, shape mismatch or non-finite entries.
    """
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    B = np.asarray(B)
    if B.shape[0] != A.shape[0]:
        raise ValueError("B has the wrong number of rows")
    dtype = np.result_type(A.dtype, B.dtype, np.complex128)
    if A.dtype != dtype:
        A = A.astype(dtype)
        overwrite_a = True
    norm = _inf_norm(A)
    if not np.isfinite(norm):
        raise ValueError("A contains non-finite entries")
    if norm == 0.0:
        raise SingularMatrixError("matrix is identically zero")
    with threadpool_limits(limits=blas_threads, user_api="blas"):
        # Factorising the transpose view avoids a copy for C-ordered input.
        with warnings.catch_warnings():
            # an exactly zero pivot is reported below as SingularMatrixError
            warnings.simplefilter("ignore", sla.LinAlgWarning)
            lu, piv = sla.lu_factor(A.T, overwrite_a=overwrite_a, check_finite=False)
        diag = np.abs(np.diagonal(lu))
        small = np.flatnonzero(diag < PIVOT_TOLERANCE * norm)
        if small.size:
            raise SingularMatrixError(
                f"pivot {diag[small[0]]:.3e} at position {int(small[0])} is below "
                f"{PIVOT_TOLERANCE:g} * ||A|| = {PIVOT_TOLERANCE * norm:.3e}"
            )
        X = sla.lu_solve((lu, piv), B, trans=1, check_finite=False)
        rcond, info = lapack.zgecon(lu, norm, norm="1")
        if overwrite_a:
            AX = _apply_factors(lu, piv, X.reshape(len(X), -1)).reshape(X.shape)
        else:
            AX = A @ X
    bnorm = float(np.linalg.norm(B))
    resid = float(np.linalg.norm(AX - B)) / bnorm if bnorm > 0 else float(np.linalg.norm(AX))
    cond = float(1.0 / rcond) if rcond > 0 else float("inf")
    logger.debug("solve M=%d residual=%.2e cond=%.2e", A.shape[0], resid, cond)
    return DenseSolution(X, resid, cond)


def condition_estimate(A: np.ndarray) -> float:
    """Infinity-norm condition estimate of ``A`` (``A`` is not modified)."""
    norm = _inf_norm(A)
    lu, _ = sla.lu_factor(A.T, overwrite_a=False, check_finite=False)
    rcond, _ = lapack.zgecon(lu, norm, norm="1")
    return float(1.0 / rcond) if rcond > 0 else float("inf")
