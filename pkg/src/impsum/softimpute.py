"""Trace-norm regularized matrix completion by proximal gradient descent.

Minimizes ``0.5 * ||P(A) - P(B)||_F^2 + lam * ||B||_*`` where ``P`` keeps the
observed cells and ``||.||_*`` is the sum of singular values. Each step takes
a gradient step on the squared loss and applies singular value
soft-thresholding. The loss gradient is 1-Lipschitz, so the fixed step 1 is
a descent step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .cooccurrence import CooccurrenceMatrix

logger = logging.getLogger(__name__)

LIPSCHITZ_CONSTANT = 1.0


class SvdConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class ImputeConfig:
    lam: float = 1.0
    step_size: float = 1.0 / LIPSCHITZ_CONSTANT
    max_iterations: int = 500
    rel_tolerance: float = 1e-6
    clip_to_unit: bool = True

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        if not self.step_size > 0:
            raise ValueError(f"step size must be > 0, got {self.step_size}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.rel_tolerance > 0:
            raise ValueError("rel_tolerance must be > 0")


@dataclass
class SvdResult:
    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray

    def reconstruct(self, singular_values: Optional[np.ndarray] = None) -> np.ndarray:
        s = self.singular_values if singular_values is None else singular_values
        return (self.u * s) @ self.v.T


@dataclass
class ImputedMatrix:
    values: np.ndarray
    observed: np.ndarray
    iterations_run: int
    final_objective: float
    objective_trace: list = field(default_factory=list)
    converged: bool = False
    lam: float = 0.0

    def write_trace(self, path) -> None:
        lines = ["iteration,objective"]
        lines.extend(f"{k},{obj:.12g}" for k, obj in enumerate(self.objective_trace, start=1))
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def svd(matrix) -> SvdResult:
    """Thin SVD with a fixed sign convention.

    The largest-magnitude entry of every left singular vector is made
    positive (first such entry on exact ties), and the matching right vector
    is flipped with it.
    """
    a = np.asarray(matrix, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError("SVD input has non-finite entries")
    try:
        u, s, vt = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise SvdConvergenceError(
            f"SVD did not converge for a {a.shape[0]}x{a.shape[1]} matrix "
            f"(max |entry| {np.abs(a).max():.3g}): {exc}"
        ) from exc
    pivot = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[pivot, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return SvdResult(u * signs, s, vt.T * signs)


def project(matrix, omega) -> np.ndarray:
    """Keep entries on ``omega`` and zero the rest.

    ``omega`` is either a boolean mask of the matrix shape or an iterable of
    (row, col) positions.
    """
    b = np.asarray(matrix, dtype=float)
    mask = _as_mask(omega, b.shape)
    return np.where(mask, b, 0.0)


def _as_mask(omega, shape) -> np.ndarray:
    if isinstance(omega, np.ndarray) and omega.dtype == bool:
        if omega.shape != shape:
            raise ValueError(f"mask shape {omega.shape} differs from matrix shape {shape}")
        return omega
    mask = np.zeros(shape, dtype=bool)
    for i, j in omega:
        if not (0 <= i < shape[0] and 0 <= j < shape[1]):
            raise IndexError(f"position ({i}, {j}) outside a {shape[0]}x{shape[1]} matrix")
        mask[i, j] = True
    return mask


def trace_norm(matrix) -> float:
    return float(np.linalg.svd(np.asarray(matrix, dtype=float), compute_uv=False).sum())


def objective(a, b, omega, lam: float) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    mask = _as_mask(omega, a.shape)
    resid = (a - b)[mask]
    return 0.5 * float(resid @ resid) + lam * trace_norm(b)


def soft_threshold(decomposition: SvdResult, t: float) -> np.ndarray:
    """U diag((s - t)_+) V^T."""
    if t < 0:
        raise ValueError(f"threshold must be >= 0, got {t}")
    return decomposition.reconstruct(np.maximum(decomposition.singular_values - t, 0.0))


def _prox(b: np.ndarray, t: float) -> tuple[np.ndarray, float]:
    """Soft-threshold ``b`` and return it with its trace norm."""
    if t == 0:
        # exact identity; avoids round-off from the factor/reconstruct cycle
        return b.copy(), float(np.linalg.svd(b, compute_uv=False).sum())
    out = _prox_gram(b, t)
    if out is not None:
        return out
    dec = svd(b)
    shrunk = np.maximum(dec.singular_values - t, 0.0)
    keep = shrunk > 0
    if not keep.any():
        return np.zeros_like(b), 0.0
    out = (dec.u[:, keep] * shrunk[keep]) @ dec.v[:, keep].T
    return out, float(shrunk.sum())


def _prox_gram(b: np.ndarray, t: float):
    """Soft-thresholding through the eigendecomposition of the smaller Gram matrix.

    With B^T B = V diag(s^2) V^T the result is B V diag((s - t)/s) V^T over
    the components with s > t. Returns None when t is too small relative to
    the spectrum for the squared eigenvalues to resolve it; the caller then
    falls back to the LAPACK SVD.
    """
    tall = b.shape[0] >= b.shape[1]
    x = b if tall else b.T
    evals, v = np.linalg.eigh(x.T @ x)
    s = np.sqrt(np.clip(evals, 0.0, None))
    if s[-1] == 0:
        return np.zeros_like(b), 0.0
    if t < 1e-6 * s[-1]:
        return None
    keep = s > t
    if not keep.any():
        return np.zeros_like(b), 0.0
    vk, sk = v[:, keep], s[keep]
    out = ((x @ vk) * ((sk - t) / sk)) @ vk.T
    return (out if tall else out.T), float((sk - t).sum())


def soft_impute_array(a, observed, config: ImputeConfig = ImputeConfig()) -> ImputedMatrix:
    a = np.asarray(a, dtype=float)
    mask = _as_mask(observed, a.shape)
    if not mask.any():
        raise ValueError("the observed set is empty")
    rho, lam = config.step_size, config.lam
    target = np.where(mask, a, 0.0)

    b = np.zeros_like(a)
    prev = 0.5 * float(target[mask] @ target[mask])
    trace = []
    converged = False
    for _ in range(config.max_iterations):
        step = b + rho * (target - np.where(mask, b, 0.0))
        b, nuclear = _prox(step, lam * rho)
        resid = (a - b)[mask]
        obj = 0.5 * float(resid @ resid) + lam * nuclear
        if not np.isfinite(obj):
            raise FloatingPointError(f"objective became non-finite at iteration {len(trace) + 1}")
        trace.append(obj)
        if abs(obj - prev) / max(prev, 1e-12) < config.rel_tolerance:
            converged = True
            break
        prev = obj
    logger.debug("soft-impute lam=%g: %d iterations, objective %.6g", lam, len(trace), trace[-1])

    if config.clip_to_unit:
        b = np.clip(b, 0.0, 1.0)
    return ImputedMatrix(
        values=b,
        observed=mask.copy(),
        iterations_run=len(trace),
        final_objective=trace[-1],
        objective_trace=trace,
        converged=converged,
        lam=lam,
    )


def soft_impute(matrix: CooccurrenceMatrix, config: ImputeConfig = ImputeConfig()) -> ImputedMatrix:
    """Complete ``matrix`` from its observed cells, starting at B = 0.

    Stops when the relative objective change drops below
    ``config.rel_tolerance`` or after ``config.max_iterations`` steps. The
    returned values are clamped to [0, 1] afterwards when ``clip_to_unit``.
    """
    return soft_impute_array(matrix.values, matrix.observed, config)
