"""Decomposability: split J = A + B^G with A, B PSD, or find a PPT witness.

G (``partial_transpose`` on factor 0) transposes the input factor of the
Choi matrix. A map is decomposable iff such a split exists, iff
tr(rho J) >= 0 for every state rho with rho and rho^G both PSD.
"""
from __future__ import annotations

import dataclasses
from typing import Optional

import numpy as np

from .core import partial_transpose, psd_project

PLATEAU_WINDOW = 500
PLATEAU_GAIN = 1e-12


@dataclasses.dataclass
class SplitResult:
    a: np.ndarray
    b: np.ndarray
    residual: float  # ||A + B^G - J||_F / ||J||_F
    iterations: int
    plateau: bool
    gap: np.ndarray  # last affine correction, a PPT-witness candidate on a plateau


def find_split(j, dims: tuple[int, int], tol: float = 1e-7,
               max_iters: int = 20000) -> SplitResult:
    """Dykstra's alternating projections between PSD x PSD and {A + B^G = J}."""
    j = np.asarray(j, dtype=complex)
    j = (j + j.conj().T) / 2
    scale = max(np.linalg.norm(j), 1e-300)

    def pt(x):
        return partial_transpose(x, dims)

    zero = np.zeros_like(j)
    for a0, b0 in ((psd_project(j), zero), (zero, psd_project(pt(j)))):
        if np.linalg.norm(a0 + pt(b0) - j) / scale < tol:
            return SplitResult(a0, b0, float(np.linalg.norm(a0 + pt(b0) - j) / scale), 0, False, zero)

    a = zero.copy()
    b = zero.copy()
    inc_a = zero.copy()
    inc_b = zero.copy()
    history = []
    gap = zero
    residual = np.inf
    plateau = False
    it = 0
    for it in range(1, max_iters + 1):
        gap = (a + pt(b) - j) / 2
        aa, bb = a - gap, b - pt(gap)
        a = psd_project(aa + inc_a)
        inc_a = aa + inc_a - a
        b = psd_project(bb + inc_b)
        inc_b = bb + inc_b - b
        residual = float(np.linalg.norm(a + pt(b) - j) / scale)
        history.append(residual)
        if residual < tol:
            break
        if it > PLATEAU_WINDOW and history[-PLATEAU_WINDOW - 1] - residual < PLATEAU_GAIN:
            plateau = True
            break
    return SplitResult(a, b, residual, it, plateau, gap)


def project_ppt_states(x, dims: tuple[int, int], iters: int = 2000,
                       tol: float = 1e-13) -> np.ndarray:
    """Dykstra projection onto {rho PSD, rho^G PSD, tr rho = 1}."""
    d = dims[0] * dims[1]
    y = (np.asarray(x, dtype=complex) + np.asarray(x, dtype=complex).conj().T) / 2
    incs = [np.zeros_like(y) for _ in range(3)]

    def p_psd(z):
        return psd_project(z)

    def p_pt(z):
        return partial_transpose(psd_project(partial_transpose(z, dims)), dims)

    def p_trace(z):
        return z + (1.0 - np.trace(z).real) / d * np.eye(d)

    projections = (p_psd, p_pt, p_trace)
    for _ in range(iters):
        prev = y
        for i, proj in enumerate(projections):
            z = y + incs[i]
            y = proj(z)
            incs[i] = z - y
        if np.linalg.norm(y - prev) < tol:
            break
    return y


def polish_state(rho, dims: tuple[int, int]) -> np.ndarray:
    """Mix in a little of the maximally mixed state so rho and rho^G are PSD."""
    d = dims[0] * dims[1]
    rho = (rho + rho.conj().T) / 2
    rho = rho / np.trace(rho).real
    worst = min(np.linalg.eigvalsh(rho)[0], np.linalg.eigvalsh(partial_transpose(rho, dims))[0])
    if worst >= 0:
        return rho
    eps = min(1.0, 2.0 * (-worst) * d)
    return (1 - eps) * rho + eps * np.eye(d) / d


@dataclasses.dataclass
class WitnessResult:
    rho: np.ndarray
    value: float  # tr(rho J)
    steps: int


def search_ppt_witness(j, dims: tuple[int, int], start: Optional[np.ndarray] = None,
                       steps: int = 200, step_size: float = 0.1) -> WitnessResult:
    """Projected descent of tr(rho J) over PPT states, keeping the best polished iterate."""
    j = np.asarray(j, dtype=complex)
    j = (j + j.conj().T) / 2
    d = dims[0] * dims[1]
    direction = j / max(np.linalg.norm(j), 1e-300)
    if start is None or not np.isfinite(start).all() or abs(np.trace(start)) < 1e-300:
        rho = np.eye(d, dtype=complex) / d
    else:
        rho = project_ppt_states(start, dims)
    best = None
    it = 0
    for it in range(steps + 1):
        cand = polish_state(rho, dims)
        value = float(np.real(np.trace(cand @ j)))
        if best is None or value < best.value:
            best = WitnessResult(cand, value, it)
        if it == steps:
            break
        nxt = project_ppt_states(rho - step_size * direction, dims)
        if np.linalg.norm(nxt - rho) < 1e-12:
            break
        rho = nxt
    return best
