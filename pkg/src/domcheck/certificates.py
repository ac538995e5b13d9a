"""Independent re-verification of certificates.

Nothing here reuses the search that produced a certificate: every check
re-evaluates the defining quantity from the payload and the target matrix.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from .core import (Certificate, DEFAULT_CONFIG, ToleranceConfig, as_matrix, partial_transpose)

# Re-evaluated witness values must reproduce the reported value this closely.
REPRODUCE_TOL = 1e-10


def _form(j: np.ndarray, z: np.ndarray) -> float:
    return float(np.real(np.vdot(z, j @ z)))


def _min_eig(x: np.ndarray) -> float:
    return float(np.linalg.eigvalsh((x + x.conj().T) / 2)[0])


def verify_certificate(cert: Certificate, target, dims: Optional[tuple[int, int]] = None,
                       config: Optional[ToleranceConfig] = None) -> bool:
    """Re-check ``cert`` against ``target``.

    ``target`` is the matrix the verdict was about: the tested matrix for a
    psd-witness, the Choi matrix for map certificates. ``dims`` gives the
    (input, output) factor sizes for map certificates.
    """
    cfg = config or DEFAULT_CONFIG
    j = as_matrix(target)
    kind = cert.kind
    p = cert.payload
    scale = max(1.0, float(np.linalg.norm(j)))
    if kind == "psd-witness":
        z = np.asarray(p["vector"], dtype=complex)
        if abs(np.linalg.norm(z) - 1) > 1e-8:
            return False
        val = _form(j, z)
        return val < 0 and abs(val - cert.value) <= REPRODUCE_TOL * scale
    if kind == "product-witness":
        xi = np.asarray(p["xi"], dtype=complex)
        eta = np.asarray(p["eta"], dtype=complex)
        z = np.kron(xi, eta)
        if abs(np.linalg.norm(z) - 1) > 1e-8:
            return False
        val = _form(j, z)
        return val < -cfg.tol_psd and abs(val - cert.value) <= REPRODUCE_TOL * scale
    if kind == "schmidt-witness":
        din, dout = dims
        z = np.asarray(p["vector"], dtype=complex)
        if abs(np.linalg.norm(z) - 1) > 1e-8:
            return False
        s = np.linalg.svd(z.reshape(din, dout), compute_uv=False)
        rank = int(np.sum(s > 1e-9 * s[0]))
        val = _form(j, z)
        return (rank <= int(p["k"]) and val < -cfg.tol_psd
                and abs(val - cert.value) <= REPRODUCE_TOL * scale)
    if kind == "decomposition-pair":
        a = np.asarray(p["A"], dtype=complex)
        b = np.asarray(p["B"], dtype=complex)
        tol = cfg.tol_psd * max(1.0, float(np.linalg.norm(j, 2)))
        recon = np.linalg.norm(a + partial_transpose(b, dims) - j)
        return (_min_eig(a) >= -tol and _min_eig(b) >= -tol
                and recon <= cfg.tol_cert * max(float(np.linalg.norm(j)), 1e-300))
    if kind == "ppt-witness":
        rho = np.asarray(p["rho"], dtype=complex)
        herm = float(np.max(np.abs(rho - rho.conj().T), initial=0.0))
        val = float(np.real(np.trace(rho @ j)))
        return (herm <= 1e-12
                and _min_eig(rho) >= -cfg.tol_psd
                and _min_eig(partial_transpose(rho, dims)) >= -cfg.tol_psd
                and abs(np.trace(rho).real - 1) <= cfg.tol_cert
                and val < -cfg.tol_cert
                and abs(val - cert.value) <= REPRODUCE_TOL * scale)
    if kind == "spectrum-violation":
        mu_a = np.asarray(p["mu_a"], dtype=float)
        mu_b = np.asarray(p["mu_b"], dtype=float)
        k = int(p["index"])
        return bool(mu_b[k] - mu_a[k] > 0)
    return False
