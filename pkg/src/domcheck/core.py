"""Dense complex linear algebra shared by every other module.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; Hermitian and PSD
are properties checked on demand, not flags carried by a wrapper type.
"""
from __future__ import annotations

import dataclasses
import math
from typing import NamedTuple, Optional

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, NotPSD

# Eigenvalues below RANK_CUT * lambda_max are treated as kernel by pseudo-inverses.
RANK_CUT = 1e-10
JACOBI_MAX_SWEEPS = 100


@dataclasses.dataclass(frozen=True)
class ToleranceConfig:
    tol_psd: float = 1e-9
    tol_eig: float = 1e-11
    tol_herm: float = 1e-10
    tol_cert: float = 1e-7
    max_iters: int = 20000
    restarts: int = 64
    seed: int = 0

    def __post_init__(self):
        for name in ("tol_psd", "tol_eig", "tol_herm", "tol_cert"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")

    def replace(self, **changes) -> "ToleranceConfig":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT_CONFIG = ToleranceConfig()


@dataclasses.dataclass(frozen=True)
class SpaceConstants:
    """Normality and generating constants of an ordered normed space."""

    normality: float
    generating: float

    def __post_init__(self):
        if self.normality < 1 or self.generating < 1:
            raise ValueError("normality and generating constants are >= 1")


# Non-commutative function spaces (Schatten classes included).
NONCOMMUTATIVE_FUNCTION_SPACE = SpaceConstants(normality=2.0, generating=2.0)


@dataclasses.dataclass
class Certificate:
    """Evidence attached to a verdict.

    ``kind`` is one of psd-witness, product-witness, schmidt-witness,
    decomposition-pair, ppt-witness, inconclusive. ``value`` is the violated
    (or achieved) quantity; ``payload`` holds the vectors/matrices needed to
    re-check it (see :mod:`domcheck.certificates`).
    """

    kind: str
    payload: dict
    value: float = float("nan")
    note: str = ""


@dataclasses.dataclass
class Check:
    """A yes/no answer plus optional evidence. Truthiness follows ``holds``."""

    holds: bool
    certificate: Optional[Certificate] = None

    def __bool__(self):
        return bool(self.holds)


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, non-increasing
    eigenvectors: np.ndarray  # unitary, columns

    def reconstruct(self) -> np.ndarray:
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.conj().T


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array, got shape {m.shape}")
    return m


def _cfg(config: Optional[ToleranceConfig]) -> ToleranceConfig:
    return DEFAULT_CONFIG if config is None else config


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(as_matrix(a)))


def operator_norm(a) -> float:
    a = as_matrix(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


def trace(a) -> complex:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch("trace of a non-square matrix")
    return complex(np.trace(a))


def hermitian_defect(a) -> float:
    """max_ij |a_ij - conj(a_ji)|."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return math.inf
    return float(np.max(np.abs(a - a.conj().T), initial=0.0))


def is_hermitian(a, config: Optional[ToleranceConfig] = None) -> bool:
    a = as_matrix(a)
    return hermitian_defect(a) <= _cfg(config).tol_herm * max(frobenius_norm(a), 1e-300)


def require_hermitian(a, config: Optional[ToleranceConfig] = None) -> np.ndarray:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise NotHermitian(f"matrix of shape {a.shape} is not square")
    if not is_hermitian(a, config):
        raise NotHermitian(f"Hermitian defect {hermitian_defect(a):.3e} exceeds tolerance")
    return (a + a.conj().T) / 2


def jacobi_eigh(a, tol: float = DEFAULT_CONFIG.tol_eig,
                max_sweeps: int = JACOBI_MAX_SWEEPS) -> SpectralDecomposition:
    """Cyclic Jacobi eigensolver for a complex Hermitian matrix.

    Each step conjugates by a 2x2 unitary (a phase fix times a real plane
    rotation) that annihilates one off-diagonal pair. Sweeps stop once the
    off-diagonal Frobenius mass is below ``tol * ||a||_F``.
    """
    a = np.array((as_matrix(a) + as_matrix(a).conj().T) / 2, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    target = tol * scale

    def off_mass():
        return float(np.linalg.norm(a - np.diag(np.diag(a))))

    sweeps = 0
    while off_mass() > target:
        if sweeps >= max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                r = abs(b)
                if r <= 1e-300 or r <= 1e-18 * scale:
                    continue
                phase = b / r
                alpha, beta = a[p, p].real, a[q, q].real
                tau = (beta - alpha) / (2.0 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                w = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ w
                a[idx, :] = w.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ w
    evals = np.diag(a).real.copy()
    order = np.argsort(-evals, kind="stable")
    return SpectralDecomposition(evals[order], v[:, order])


def eig_hermitian(a, config: Optional[ToleranceConfig] = None,
                  method: str = "lapack") -> SpectralDecomposition:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues non-increasing.

    ``method="jacobi"`` runs the self-contained cyclic Jacobi solver;
    the default ``"lapack"`` delegates to ``numpy.linalg.eigh``.
    """
    cfg = _cfg(config)
    h = require_hermitian(a, cfg)
    if method == "jacobi":
        return jacobi_eigh(h, tol=cfg.tol_eig)
    if method != "lapack":
        raise ValueError(f"unknown eigensolver {method!r}")
    w, v = np.linalg.eigh(h)
    return SpectralDecomposition(w[::-1].copy(), v[:, ::-1].copy())


def psd_threshold(a, config: Optional[ToleranceConfig] = None) -> float:
    return _cfg(config).tol_psd * max(1.0, operator_norm(a))


def psd_project(a) -> np.ndarray:
    """Frobenius-nearest PSD matrix to the Hermitian part of ``a``."""
    h = (as_matrix(a) + as_matrix(a).conj().T) / 2
    w, v = np.linalg.eigh(h)
    return (v * np.clip(w, 0.0, None)) @ v.conj().T


def min_eig(a) -> tuple[float, np.ndarray]:
    h = (as_matrix(a) + as_matrix(a).conj().T) / 2
    w, v = np.linalg.eigh(h)
    return float(w[0]), v[:, 0]


def is_psd(a, config: Optional[ToleranceConfig] = None) -> Check:
    """PSD test with relative threshold -tol_psd * max(1, ||a||_2).

    On failure the certificate carries the unit eigenvector of the minimal
    eigenvalue, a vector xi with <a xi, xi> < 0.
    """
    cfg = _cfg(config)
    h = require_hermitian(a, cfg)
    lam, vec = min_eig(h)
    if lam >= -psd_threshold(h, cfg):
        return Check(True)
    cert = Certificate("psd-witness", {"vector": vec}, value=lam)
    return Check(False, cert)


def _psd_clip(a, config) -> SpectralDecomposition:
    cfg = _cfg(config)
    dec = eig_hermitian(a, cfg)
    lam = dec.eigenvalues
    cut = cfg.tol_psd * max(operator_norm(a), 1e-300)
    if lam.size and lam[-1] < -cut:
        raise NotPSD(f"minimal eigenvalue {lam[-1]:.3e} below -{cut:.1e}")
    return SpectralDecomposition(np.clip(lam, 0.0, None), dec.eigenvectors)


def spectral_power(a, alpha: float, config: Optional[ToleranceConfig] = None) -> np.ndarray:
    """a**alpha for PSD ``a``; tiny negative eigenvalues are clipped to zero."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    dec = _psd_clip(a, config)
    lam = dec.eigenvalues
    powered = np.where(lam > 0, lam, 0.0) ** alpha
    return SpectralDecomposition(powered, dec.eigenvectors).reconstruct()


def pseudo_inverse_root(a, alpha: float, config: Optional[ToleranceConfig] = None) -> np.ndarray:
    """Support-restricted a**(-alpha): eigenvalues under RANK_CUT * lambda_max map to 0."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    dec = _psd_clip(a, config)
    lam = dec.eigenvalues
    top = lam[0] if lam.size else 0.0
    keep = lam > RANK_CUT * top
    inv = np.zeros_like(lam)
    inv[keep] = lam[keep] ** (-alpha)
    return SpectralDecomposition(inv, dec.eigenvectors).reconstruct()


def support_projection(a, config: Optional[ToleranceConfig] = None) -> np.ndarray:
    dec = _psd_clip(a, config)
    lam = dec.eigenvalues
    top = lam[0] if lam.size else 0.0
    q = dec.eigenvectors[:, lam > RANK_CUT * top]
    return q @ q.conj().T


def partial_transpose(x, dims: tuple[int, int], factor: int = 0) -> np.ndarray:
    """Transpose one tensor factor of a matrix on C^d0 (x) C^d1."""
    d0, d1 = dims
    t = as_matrix(x).reshape(d0, d1, d0, d1)
    if factor == 0:
        t = t.transpose(2, 1, 0, 3)
    elif factor == 1:
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError("factor must be 0 or 1")
    return t.reshape(d0 * d1, d0 * d1)


def matrix_unit(i: int, j: int, n: int, m: Optional[int] = None) -> np.ndarray:
    e = np.zeros((n, n if m is None else m), dtype=complex)
    e[i, j] = 1.0
    return e
