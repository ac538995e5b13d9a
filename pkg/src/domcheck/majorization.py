"""Singular spectra, Hardy-Littlewood submajorization and transfer matrices.

For a matrix the generalized singular value function is the step function of
its singular values, so every submajorization test reduces to partial sums of
zero-padded, non-increasing vectors.
"""
from __future__ import annotations

import dataclasses
import math
from typing import Optional, Sequence, Union

import numpy as np

from .core import (Certificate, Check, DEFAULT_CONFIG, ToleranceConfig, as_matrix,
                   is_psd, require_hermitian)
from .errors import BadGauge, BadPartition, DimensionMismatch, NotSubmajorized


@dataclasses.dataclass(frozen=True)
class SingularSpectrum:
    values: np.ndarray
    ambient_dim: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if v.size != self.ambient_dim:
            raise ValueError("spectrum length must equal ambient_dim")
        if np.any(np.diff(v) > 1e-12 * max(1.0, float(np.max(np.abs(v), initial=0.0)))):
            raise ValueError("spectrum must be non-increasing")
        object.__setattr__(self, "values", np.clip(v, 0.0, None))

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "SingularSpectrum":
        v = np.clip(np.sort(np.asarray(values, dtype=float).ravel())[::-1], 0.0, None)
        return cls(v, v.size)

    def padded(self, n: int) -> np.ndarray:
        out = np.zeros(max(n, self.ambient_dim))
        out[: self.ambient_dim] = self.values
        return out

    def __len__(self):
        return self.ambient_dim


def _as_vector(s: Union[SingularSpectrum, Sequence[float]]) -> np.ndarray:
    if isinstance(s, SingularSpectrum):
        return s.values
    return SingularSpectrum.from_values(s).values


def _pad_pair(x, y):
    xv, yv = _as_vector(x), _as_vector(y)
    n = max(xv.size, yv.size)
    return np.pad(xv, (0, n - xv.size)), np.pad(yv, (0, n - yv.size))


def singular_spectrum(x) -> SingularSpectrum:
    """Singular values of ``x`` (square roots of eig(x* x)), non-increasing."""
    m = as_matrix(x)
    n = m.shape[1]
    s = np.linalg.svd(m, compute_uv=False) if m.size else np.zeros(0)
    out = np.zeros(n)
    out[: s.size] = s[:n]
    return SingularSpectrum(out, n)


def submajorizes(x, y, config: Optional[ToleranceConfig] = None) -> bool:
    """True iff y is weakly submajorized by x: every partial sum of y is at most x's."""
    cfg = config or DEFAULT_CONFIG
    xv, yv = _pad_pair(x, y)
    sx, sy = np.cumsum(xv), np.cumsum(yv)
    slack = cfg.tol_cert * np.maximum(1.0, np.abs(sx))
    return bool(np.all(sy <= sx + slack))


@dataclasses.dataclass(frozen=True)
class TransferMatrix:
    """Entrywise non-negative matrix with row and column sums at most one."""

    entries: np.ndarray

    def is_doubly_substochastic(self, tol: float = DEFAULT_CONFIG.tol_cert) -> bool:
        d = np.asarray(self.entries, dtype=float)
        return bool(np.all(d >= -tol)
                    and np.all(d.sum(axis=0) <= 1 + tol)
                    and np.all(d.sum(axis=1) <= 1 + tol))

    def verify(self, x, y, tol: float = DEFAULT_CONFIG.tol_cert) -> bool:
        xv, yv = _pad_pair(x, y)
        d = np.asarray(self.entries, dtype=float)
        if d.shape != (xv.size, xv.size):
            return False
        return self.is_doubly_substochastic(tol) and float(np.max(np.abs(d @ xv - yv), initial=0.0)) <= tol


def _water_fill(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Raise the tail of ``y`` to a common level so its sum matches ``x``.

    The result u satisfies y <= u entrywise and u is majorized by x whenever
    y is submajorized by x.
    """
    deficit = float(x.sum() - y.sum())
    if deficit <= 0:
        return y.copy()
    n = y.size
    # find level L with sum(max(y, L)) == sum(x); y is non-increasing
    for r in range(n, 0, -1):
        # entries r-1 .. n-1 levelled (count n - r + 1), entries before kept
        head = y[: r - 1].sum()
        level = (x.sum() - head) / (n - r + 1)
        upper = y[r - 2] if r >= 2 else math.inf
        if level >= y[r - 1] - 1e-300 and level <= upper:
            u = y.copy()
            u[r - 1:] = level
            return u
    return np.full(n, x.sum() / n)


def transfer_certificate(x, y, config: Optional[ToleranceConfig] = None) -> TransferMatrix:
    """Doubly substochastic D with D x = y, for y submajorized by x.

    y is first lifted to a vector u majorized by x (water-filling of the
    missing mass); a chain of T-transforms (convex combinations of the
    identity and a transposition) carries x onto u, and a final diagonal
    contraction diag(y/u) brings u down to y.
    """
    cfg = config or DEFAULT_CONFIG
    xv, yv = _pad_pair(x, y)
    if not submajorizes(xv, yv, cfg):
        raise NotSubmajorized("y is not submajorized by x")
    n = xv.size
    u = _water_fill(xv, yv)
    u *= xv.sum() / u.sum() if u.sum() > 0 else 1.0
    d = np.eye(n)
    cur = xv.copy()
    eps = 1e-13 * max(1.0, float(xv.sum()))
    for _ in range(4 * n * n + 4):
        diff = cur - u
        pos = np.nonzero(diff > eps)[0]
        if pos.size == 0:
            break
        j = int(pos[-1])
        neg = np.nonzero(diff[j + 1:] < -eps)[0]
        if neg.size == 0:
            break
        k = j + 1 + int(neg[0])
        delta = min(diff[j], -diff[k])
        gap = cur[j] - cur[k]
        if gap <= 0:
            break
        mix = delta / gap
        t = np.eye(n)
        t[j, j] = t[k, k] = 1.0 - mix
        t[j, k] = t[k, j] = mix
        cur = t @ cur
        d = t @ d
    scale = np.divide(yv, u, out=np.zeros(n), where=u > 0)
    scale = np.clip(scale, 0.0, 1.0)
    result = TransferMatrix(scale[:, None] * d)
    if not result.verify(xv, yv, cfg.tol_cert):
        raise NotSubmajorized("transfer construction failed verification")
    return result


def _parse_gauge(gauge) -> tuple[str, float]:
    if isinstance(gauge, str):
        name, _, param = gauge.partition(":")
        if not param:
            raise BadGauge(f"gauge {gauge!r} needs a parameter, e.g. schatten:2 or kyfan:1")
        try:
            value = math.inf if param in ("inf", "infinity") else float(param)
        except ValueError as exc:
            raise BadGauge(f"bad gauge parameter {param!r}") from exc
        gauge = (name, value)
    try:
        name, value = gauge
    except (TypeError, ValueError) as exc:
        raise BadGauge(f"unrecognized gauge {gauge!r}") from exc
    name = str(name).lower().replace("-", "").replace("_", "")
    if name == "schatten":
        if not value >= 1:
            raise BadGauge("Schatten exponent must be >= 1")
        return "schatten", float(value)
    if name == "kyfan":
        if value != int(value) or value < 1:
            raise BadGauge("Ky Fan index must be a positive integer")
        return "kyfan", int(value)
    raise BadGauge(f"unknown gauge {name!r}")


def gauge_of_spectrum(values: np.ndarray, gauge) -> float:
    kind, p = _parse_gauge(gauge)
    s = np.asarray(values, dtype=float)
    if kind == "kyfan":
        if p > s.size:
            raise BadGauge(f"Ky Fan index {p} exceeds dimension {s.size}")
        return float(np.sort(s)[::-1][: int(p)].sum())
    if math.isinf(p):
        return float(np.max(s, initial=0.0))
    return float(np.sum(s ** p) ** (1.0 / p))


def symmetric_norm(x, gauge) -> float:
    """Schatten-p or Ky Fan-k norm of a matrix."""
    return gauge_of_spectrum(singular_spectrum(x).values, gauge)


def _check_partition(blocks, n: int) -> list[list[int]]:
    blocks = [list(map(int, b)) for b in blocks]
    flat = sorted(i for b in blocks for i in b)
    if flat != list(range(n)) or any(len(b) == 0 for b in blocks):
        raise BadPartition(f"blocks do not partition range({n})")
    return blocks


def pinch(x, blocks) -> np.ndarray:
    """Block-diagonal compression sum_i e_i x e_i over the given index blocks."""
    m = as_matrix(x)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch("pinching needs a square matrix")
    blocks = _check_partition(blocks, m.shape[0])
    label = np.empty(m.shape[0], dtype=int)
    for b, idx in enumerate(blocks):
        label[idx] = b
    mask = label[:, None] == label[None, :]
    return np.where(mask, m, 0.0)


def mu_order_check(a, b, config: Optional[ToleranceConfig] = None) -> Check:
    """Check that -a <= b <= a forces mu_b <= mu_a pointwise.

    Returns a false Check without a certificate when the order hypothesis
    fails. When the hypothesis holds but some singular value of ``b``
    exceeds the matching one of ``a``, the check is false and carries a
    ``spectrum-violation`` certificate: the pointwise statement is not
    valid for indefinite ``b`` (a = diag(1, e), b = [[0, sqrt e], [sqrt e, 0]]
    is a counterexample), whereas the weaker b <<w a always holds, see
    :func:`order_submajorization_check`.
    """
    cfg = config or DEFAULT_CONFIG
    a = require_hermitian(a, cfg)
    b = require_hermitian(b, cfg)
    if a.shape != b.shape:
        raise DimensionMismatch("a and b must have the same shape")
    if not (is_psd(a - b, cfg) and is_psd(a + b, cfg)):
        return Check(False)
    mu_a = singular_spectrum(a).values
    mu_b = singular_spectrum(b).values
    excess = mu_b - mu_a
    slack = cfg.tol_cert * max(1.0, float(mu_a[0]) if mu_a.size else 1.0)
    if np.all(excess <= slack):
        return Check(True)
    k = int(np.argmax(excess))
    cert = Certificate("spectrum-violation",
                       {"index": k, "mu_a": mu_a, "mu_b": mu_b}, value=float(excess[k]))
    return Check(False, cert)


def order_submajorization_check(a, b, config: Optional[ToleranceConfig] = None) -> Check:
    """For -a <= b <= a check mu_b <<w mu_a (every Ky Fan norm of b is at most a's)."""
    cfg = config or DEFAULT_CONFIG
    a = require_hermitian(a, cfg)
    b = require_hermitian(b, cfg)
    if a.shape != b.shape:
        raise DimensionMismatch("a and b must have the same shape")
    if not (is_psd(a - b, cfg) and is_psd(a + b, cfg)):
        return Check(False)
    return Check(submajorizes(singular_spectrum(a), singular_spectrum(b), cfg))
