"""Order intervals, positive solids, corner truncations and related estimates."""
from __future__ import annotations

import dataclasses
import math
from typing import Optional, Sequence

import numpy as np

from .core import (Certificate, Check, DEFAULT_CONFIG, ToleranceConfig, as_matrix,
                   frobenius_norm, is_psd, operator_norm, pseudo_inverse_root,
                   require_hermitian, spectral_power, eig_hermitian, support_projection)
from .errors import BadRange, DimensionMismatch, InsufficientSpectrum, NotMember
from .majorization import symmetric_norm
from .maps import SuperOperator, multiplication_operator  # noqa: F401  (re-export)


@dataclasses.dataclass(frozen=True)
class OrderInterval:
    """The interval [0, upper] in the PSD order."""

    upper: np.ndarray

    def __post_init__(self):
        up = require_hermitian(self.upper)
        if not is_psd(up):
            raise ValueError("interval endpoint must be PSD")
        object.__setattr__(self, "upper", up)

    @property
    def dim(self) -> int:
        return self.upper.shape[0]


@dataclasses.dataclass(frozen=True)
class Truncation:
    """Cut level n in dimension dim; P_n projects onto the first n basis vectors."""

    n: int
    dim: int

    def __post_init__(self):
        if not 0 <= self.n <= self.dim:
            raise ValueError("need 0 <= n <= dim")

    @property
    def projection(self) -> np.ndarray:
        p = np.zeros((self.dim, self.dim), dtype=complex)
        p[: self.n, : self.n] = np.eye(self.n)
        return p


def _cfg(config):
    return config or DEFAULT_CONFIG


def interval_member(interval: OrderInterval, x, config: Optional[ToleranceConfig] = None) -> Check:
    """0 <= x <= upper; a false answer carries the violating eigenvector."""
    cfg = _cfg(config)
    x = as_matrix(x)
    if x.shape != interval.upper.shape:
        raise DimensionMismatch(f"x has shape {x.shape}, interval lives in dimension {interval.dim}")
    x = require_hermitian(x, cfg)
    lower = is_psd(x, cfg)
    if not lower:
        lower.certificate.note = "x is not PSD"
        return lower
    upper = is_psd(interval.upper - x, cfg)
    if not upper:
        upper.certificate.note = "upper - x is not PSD"
    return upper


def interval_parameterize(interval: OrderInterval, x,
                          config: Optional[ToleranceConfig] = None) -> np.ndarray:
    """w with a^{1/4} w a^{1/4} = x, computed as a^{-1/4} x a^{-1/4} on the support of a.

    For x in [0, a] the result is PSD with ||w|| <= ||a||^{1/2}.
    """
    cfg = _cfg(config)
    if not interval_member(interval, x, cfg):
        raise NotMember("x is not in the order interval")
    a = interval.upper
    r = pseudo_inverse_root(a, 0.25, cfg)
    w = r @ as_matrix(x) @ r
    w = (w + w.conj().T) / 2
    q = spectral_power(a, 0.25, cfg)
    err = frobenius_norm(q @ w @ q - as_matrix(x))
    if err > cfg.tol_cert * max(frobenius_norm(a), 1.0):
        raise NotMember(f"x is not supported inside a (reconstruction error {err:.2e})")
    return w


def _random_ball_element(rng, n: int) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = g @ g.conj().T
    return h / max(operator_norm(h), 1e-300) * rng.uniform(0.0, 1.0)


def _largest_scale(a2, h, cfg, iters: int = 60) -> float:
    """Largest s with a2 - s h PSD, by bisection on the PSD test."""
    a2 = (a2 + a2.conj().T) / 2
    h = (h + h.conj().T) / 2
    lo, hi = 0.0, 1.0
    while is_psd(a2 - hi * h, cfg) and hi < 1e12:
        lo, hi = hi, hi * 2
    for _ in range(iters):
        mid = (lo + hi) / 2
        if is_psd(a2 - mid * h, cfg):
            lo = mid
        else:
            hi = mid
    return lo


def interval_equals_ball_image(a, samples: int = 100, seed: int = 0,
                               config: Optional[ToleranceConfig] = None) -> bool:
    """Sampled check that [0, a*a] equals {a* w a : 0 <= w <= 1}.

    Images of random w in the positive unit ball must land in the interval,
    and random interval members (scaled by bisection on the PSD test, not by
    the parameterization) must be reproduced by some 0 <= w <= 1.
    """
    cfg = _cfg(config)
    a = require_hermitian(a, cfg)
    if not is_psd(a, cfg):
        raise ValueError("a must be PSD")
    n = a.shape[0]
    rng = np.random.default_rng(seed)
    a2 = a.conj().T @ a
    a2 = (a2 + a2.conj().T) / 2
    interval = OrderInterval(a2)
    m_a = multiplication_operator(a)
    for _ in range(samples):
        if not interval_member(interval, m_a.apply(_random_ball_element(rng, n)), cfg):
            return False
    supp = support_projection(a2, cfg)
    a_pinv = pseudo_inverse_root(a2, 0.5, cfg)
    tol = cfg.tol_cert * max(1.0, frobenius_norm(a2))
    members = [a2]
    for _ in range(samples):
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = supp @ (g @ g.conj().T) @ supp
        if operator_norm(h) == 0:
            members.append(np.zeros_like(a2))
            continue
        members.append(rng.uniform(0.0, 1.0) * _largest_scale(a2, h, cfg) * h)
    for x in members:
        w = a_pinv @ x @ a_pinv
        w = (w + w.conj().T) / 2
        if not (is_psd(w, cfg) and is_psd(np.eye(n) - w, cfg.replace(tol_psd=cfg.tol_cert))):
            return False
        if frobenius_norm(m_a.apply(w) - x) > tol:
            return False
    return True


def psol_member(family: Sequence, x, config: Optional[ToleranceConfig] = None) -> Check:
    """x in the positive solid of the family: 0 <= x <= y for some y in it."""
    cfg = _cfg(config)
    x = as_matrix(x)
    for y in family:
        if as_matrix(y).shape != x.shape:
            raise DimensionMismatch("family members and x must share a dimension")
    lower = is_psd(x, cfg)
    if not lower:
        return lower
    for i, y in enumerate(family):
        if is_psd(as_matrix(y) - x, cfg):
            return Check(True, Certificate("dominating-element", {"index": i}, value=0.0))
    return Check(False)


def corner_truncations(x, t: Truncation) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(P x P, P' x P', x - both) for P = P_n and P' = 1 - P_n."""
    x = as_matrix(x)
    if x.shape != (t.dim, t.dim):
        raise DimensionMismatch(f"x has shape {x.shape}, truncation expects dimension {t.dim}")
    n = t.n
    q = np.zeros_like(x)
    r = np.zeros_like(x)
    q[:n, :n] = x[:n, :n]
    r[n:, n:] = x[n:, n:]
    off = np.zeros_like(x)
    off[:n, n:] = x[:n, n:]
    off[n:, :n] = x[n:, :n]
    return q, r, off


@dataclasses.dataclass
class OffdiagReport:
    lhs: float  # ||T(x - Qx - Rx)||^2
    rhs: float  # 4 ||T Qx|| ||T Rx||
    rhs_general: float  # 16 * normality * ||T Qx|| ||T Rx||
    holds: bool
    ratio: float  # lhs / rhs, nan when rhs vanishes
    t_star: float
    interpolation_norm: float  # ||T a(t*)|| with a(t) = t^2 Qx + t^-2 Rx
    degenerate: bool


def verify_offdiag_inequality(t_map: SuperOperator, x, trunc: Truncation, gauge="schatten:1",
                              config: Optional[ToleranceConfig] = None,
                              normality: float = 2.0) -> OffdiagReport:
    """Evaluate both sides of ||T(x - Qx - Rx)||^2 <= 4 ||T Qx|| ||T Rx|| for PSD x."""
    cfg = _cfg(config)
    q, r, off = corner_truncations(x, trunc)
    tq = symmetric_norm(t_map.apply(q), gauge)
    tr = symmetric_norm(t_map.apply(r), gauge)
    lhs = symmetric_norm(t_map.apply(off), gauge) ** 2
    rhs = 4.0 * tq * tr
    scale = max(1.0, symmetric_norm(t_map.apply(as_matrix(x)), gauge) ** 2)
    tiny = 1e-14 * math.sqrt(scale)
    if tq <= tiny or tr <= tiny:
        return OffdiagReport(lhs, rhs, 16 * normality * tq * tr, lhs <= cfg.tol_cert * scale,
                             math.nan, math.nan, math.nan, True)
    t_star = (tr / tq) ** 0.25
    interp = symmetric_norm(t_map.apply(t_star ** 2 * q + t_star ** -2 * r), gauge)
    return OffdiagReport(lhs, rhs, 16 * normality * tq * tr,
                         lhs <= rhs + cfg.tol_cert * scale, lhs / rhs, t_star, interp, False)


def scalar_offdiag_bound(x, trunc: Truncation, gauge="schatten:1") -> tuple[float, float]:
    """(||x - Qx - Rx||, 2 sqrt(||Rx|| ||Qx||)) in the given gauge."""
    q, r, off = corner_truncations(x, trunc)
    return (symmetric_norm(off, gauge),
            2.0 * math.sqrt(symmetric_norm(r, gauge) * symmetric_norm(q, gauge)))


def _adjoint_apply(t_map: SuperOperator, b: np.ndarray) -> np.ndarray:
    j4 = t_map.choi.reshape(t_map.dim_in, t_map.dim_out, t_map.dim_in, t_map.dim_out)
    return np.einsum("ikjl,kl->ij", j4.conj(), b)


@dataclasses.dataclass
class NormEstimate:
    value: float  # a lower bound for the operator norm
    is_lower_bound: bool = True


def estimate_map_norm(t_map: SuperOperator, gauge_in="schatten:1", gauge_out="schatten:1",
                      samples: int = 256, power_steps: int = 30, seed: int = 0) -> NormEstimate:
    """Lower bound for sup ||T y|| / ||y|| by random sampling plus power iteration.

    Candidates are random Gaussian and random rank-one inputs; the best
    one seeds a Hilbert-Schmidt power iteration on T*T whose iterates are
    also scored. The result is never claimed to be exact.
    """
    rng = np.random.default_rng(seed)
    n = t_map.dim_in
    best, best_y = 0.0, None

    def score(y):
        ny = symmetric_norm(y, gauge_in)
        return 0.0 if ny == 0 else symmetric_norm(t_map.apply(y), gauge_out) / ny

    for s in range(samples):
        if s % 2:
            v = rng.normal(size=n) + 1j * rng.normal(size=n)
            w = rng.normal(size=n) + 1j * rng.normal(size=n)
            y = np.outer(v, w.conj())
        else:
            y = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        val = score(y)
        if val > best:
            best, best_y = val, y
    y = best_y if best_y is not None else np.eye(n, dtype=complex)
    for _ in range(power_steps):
        y = _adjoint_apply(t_map, t_map.apply(y))
        nrm = np.linalg.norm(y)
        if nrm == 0:
            break
        y = y / nrm
        # rank-one truncation of the iterate suits trace-class inputs
        u, s, vh = np.linalg.svd(y)
        for cand in (y, np.outer(u[:, 0], vh[0])):
            val = score(cand)
            if val > best:
                best = val
    return NormEstimate(best)


def restricted_map(t_map: SuperOperator, which: str, trunc: Truncation) -> SuperOperator:
    """T composed with Q_n ("Q"), R_n ("R") or I - Q_n ("IQ")."""
    def pre(a):
        q, r, off = corner_truncations(a, trunc)
        return {"Q": q, "R": r, "IQ": a - q}[which]
    return SuperOperator(t_map.dim_in, t_map.dim_out, "combination",
                         func=lambda a: t_map.apply(pre(a)), name=f"{t_map.name}.{which}_{trunc.n}")


def comparison_lemma_check(z, x, y, config: Optional[ToleranceConfig] = None) -> bool:
    """For 0 <= x, y <= 1: z x z* - z x y x z* is PSD."""
    cfg = _cfg(config)
    z, x, y = as_matrix(z), as_matrix(x), as_matrix(y)
    n = x.shape[0]
    for name, m in (("x", x), ("y", y)):
        m = require_hermitian(m, cfg)
        if not (is_psd(m, cfg) and is_psd(np.eye(n) - m, cfg)):
            raise BadRange(f"{name} is not in [0, 1]")
    zs = z.conj().T
    diff = z @ x @ zs - z @ x @ y @ x @ zs
    return bool(is_psd((diff + diff.conj().T) / 2, cfg))


@dataclasses.dataclass
class ChainResult:
    chain: list  # a_0 >= a_1 >= ... >= a_n
    factors: list  # b_0, ..., b_n
    gaps: list  # ||x (a_{k-1} - a_k) x||, k = 1..n
    c: float
    decreasing: bool
    gaps_ok: bool


def monotone_chain(x, n: int, config: Optional[ToleranceConfig] = None) -> ChainResult:
    """Chain a_0 >= ... >= a_n in the positive unit ball with ||x(a_{k-1} - a_k)x|| > 2/3.

    Uses n orthonormal eigenvectors xi_i of x with ||x xi_i|| >= 1, the
    constant c = (2/3)^{1/(2n+1)}, factors b_k = c * (projection onto
    eta_1..eta_{n-k}) with eta_i = x xi_i / ||x xi_i||, and
    a_k = b_0 b_1 ... b_k ... b_1 b_0.
    """
    cfg = _cfg(config)
    x = require_hermitian(x, cfg)
    if n < 1:
        raise ValueError("n must be >= 1")
    if not is_psd(x, cfg):
        raise ValueError("x must be PSD")
    dec = eig_hermitian(x, cfg)
    big = np.nonzero(dec.eigenvalues >= 1.0)[0]
    if big.size < n:
        raise InsufficientSpectrum(f"need {n} orthonormal vectors with ||x xi|| >= 1, found {big.size}")
    xi = dec.eigenvectors[:, big[:n]]
    eta = x @ xi
    eta = eta / np.linalg.norm(eta, axis=0)
    c = (2.0 / 3.0) ** (1.0 / (2 * n + 1))
    dim = x.shape[0]
    factors = []
    for k in range(n + 1):
        e = eta[:, : n - k]
        factors.append(c * (e @ e.conj().T) if n - k > 0 else np.zeros((dim, dim), dtype=complex))
    chain = []
    for k in range(n + 1):
        left = np.eye(dim, dtype=complex)
        for b in factors[:k]:
            left = left @ b
        chain.append(left @ factors[k] @ left.conj().T)
    gaps, decreasing = [], True
    for k in range(1, n + 1):
        z = np.eye(dim, dtype=complex)
        for b in factors[: k - 1]:
            z = z @ b
        if not comparison_lemma_check(z, factors[k - 1], factors[k], cfg):
            decreasing = False
        if not is_psd(chain[k - 1] - chain[k], cfg):
            decreasing = False
        gaps.append(operator_norm(x @ (chain[k - 1] - chain[k]) @ x))
    gaps_ok = all(g > 2.0 / 3.0 - cfg.tol_cert for g in gaps)
    return ChainResult(chain, factors, gaps, c, decreasing, gaps_ok)
