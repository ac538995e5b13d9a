"""Alternating minimization of <z, J z> over vectors of bounded Schmidt rank.

With the vectors on one tensor factor fixed (and orthonormal) the quadratic
form is a Hermitian form in the other factor, so each half-step is an exact
minimal-eigenvector computation and the objective never increases.
"""
from __future__ import annotations

import dataclasses
from typing import Optional

import numpy as np


@dataclasses.dataclass
class SeesawResult:
    value: float
    vector: np.ndarray  # full vector on C^din (x) C^dout, unit norm
    left: np.ndarray  # din x k, orthonormal columns
    right: np.ndarray  # dout x k, Schmidt coefficients folded in
    restarts_run: int
    alternations: int


def _random_isometry(rng, n: int, k: int) -> np.ndarray:
    g = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    q, _ = np.linalg.qr(g)
    return q[:, :k]


def quadratic_form(j: np.ndarray, z: np.ndarray) -> float:
    return float(np.real(np.vdot(z, j @ z)))


def _descend(j4, din, dout, k, y, max_alt, conv_tol):
    """One see-saw run from output-side isometry y; returns (value, Z, sweeps)."""
    prev = np.inf
    value = np.inf
    z = None
    sweeps = 0
    for sweeps in range(1, max_alt + 1):
        m = np.einsum("kr,ikjl,ls->irjs", y.conj(), j4, y).reshape(din * k, din * k)
        w, v = np.linalg.eigh((m + m.conj().T) / 2)
        xi = v[:, 0].reshape(din, k)
        z = xi @ y.T
        u, _, _ = np.linalg.svd(z, full_matrices=False)
        x = u[:, :k]
        m2 = np.einsum("ir,ikjl,js->krls", x.conj(), j4, x).reshape(dout * k, dout * k)
        w2, v2 = np.linalg.eigh((m2 + m2.conj().T) / 2)
        h = v2[:, 0].reshape(dout, k)
        z = x @ h.T
        value = float(w2[0])
        _, _, vh = np.linalg.svd(z, full_matrices=False)
        y = vh[:k].T
        if abs(prev - value) < conv_tol:
            break
        prev = value
    return value, z, sweeps


def seesaw_minimize(j, dims: tuple[int, int], k: int = 1, restarts: int = 64,
                    max_alternations: int = 200, conv_tol: float = 1e-10,
                    seed: int = 0, stop_below: Optional[float] = None) -> SeesawResult:
    """Minimize <z, J z> over unit z of Schmidt rank <= k.

    Restart r is seeded with ``seed + r``; the best (smallest) value over
    the restarts is kept, ties resolved by the earliest restart. With
    ``stop_below`` set, the search stops at the first restart whose value
    falls below it.
    """
    din, dout = dims
    j = np.asarray(j, dtype=complex)
    j4 = j.reshape(din, dout, din, dout)
    best = None
    total = 0
    run = 0
    for r in range(restarts):
        rng = np.random.default_rng(seed + r)
        y = _random_isometry(rng, dout, k)
        value, z, sweeps = _descend(j4, din, dout, k, y, max_alternations, conv_tol)
        total += sweeps
        run = r + 1
        if best is None or value < best[0]:
            best = (value, z)
        if stop_below is not None and best[0] < stop_below:
            break
    value, z = best
    u, s, vh = np.linalg.svd(z, full_matrices=False)
    left = u[:, :k]
    right = (s[:k, None] * vh[:k]).T
    vec = z.reshape(-1)
    vec = vec / np.linalg.norm(vec)
    return SeesawResult(quadratic_form(j, vec), vec, left, right, run, total)
