"""Schur (entrywise) multipliers on finite grids.

The infinite-matrix statements only have finite shadows here: a tail
diagnostic for the vanishing-rows-and-columns criterion, and the exact
obstruction showing that a heavy first row in C is incompatible with
C <= D when D is almost diagonal.
"""
from __future__ import annotations

import dataclasses
from typing import Optional

import numpy as np

from .core import (Certificate, DEFAULT_CONFIG, ToleranceConfig, as_matrix, is_hermitian,
                   min_eig, operator_norm)
from .errors import BadThreshold, DimensionMismatch, InfeasibleParameters, WitnessFailed

EXHAUSTIVE_LIMIT = 12


def offdiag_bound(i: int, j: int) -> float:
    """Allowed size of the (i, j) entry of D, i != j."""
    return 10.0 ** (-2 * (i + j))


@dataclasses.dataclass
class SchurSymbol:
    entries: np.ndarray
    tail_model: Optional[str] = None

    def __post_init__(self):
        e = as_matrix(self.entries)
        if e.shape[0] != e.shape[1]:
            raise DimensionMismatch("Schur symbol must be square")
        if not np.all(np.isfinite(e)):
            raise ValueError("symbol entries must be finite")
        self.entries = e

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def _grid(phi) -> np.ndarray:
    return phi.entries if isinstance(phi, SchurSymbol) else as_matrix(phi)


def schur_apply(phi, x) -> np.ndarray:
    g, x = _grid(phi), as_matrix(x)
    if g.shape != x.shape:
        raise DimensionMismatch(f"symbol {g.shape} vs matrix {x.shape}")
    return g * x


def formally_positive(phi, config: Optional[ToleranceConfig] = None) -> bool:
    """Every finite submatrix PSD; for a finite grid, the grid itself PSD."""
    cfg = config or DEFAULT_CONFIG
    g = _grid(phi)
    if not is_hermitian(g, cfg):
        return False
    lam, _ = min_eig(g)
    return lam >= -cfg.tol_psd * max(1.0, operator_norm(g))


@dataclasses.dataclass
class TailReport:
    threshold: int
    row_tails: np.ndarray  # sup_{j > J, j != i} |phi_ij|
    col_tails: np.ndarray  # sup_{j > J, j != i} |phi_ji|
    score: float


def dp_tail_score(phi, threshold: int) -> TailReport:
    """Row and column tails beyond a column threshold; a diagnostic, not a decision."""
    g = _grid(phi)
    n = g.shape[0]
    if not 0 <= threshold < n:
        raise BadThreshold(f"threshold must be in [0, {n - 1}]")
    mag = np.abs(g).astype(float)
    np.fill_diagonal(mag, 0.0)
    rows = np.zeros(n)
    cols = np.zeros(n)
    if threshold + 1 < n:
        rows = mag[:, threshold + 1:].max(axis=1)
        cols = mag[threshold + 1:, :].max(axis=0)
    return TailReport(threshold, rows, cols, float(max(rows.max(), cols.max())))


@dataclasses.dataclass
class ObstructionInstance:
    C: np.ndarray
    D: np.ndarray
    c: float
    m: int

    @property
    def alpha(self) -> float:
        return self.m * self.c

    @property
    def omega(self) -> np.ndarray:
        col = self.C[1:, 0]
        return col / np.abs(col)

    @property
    def bound(self) -> float:
        """alpha^2 + m + 1 - 2 alpha m c, negative whenever (mc)^2 > m + 1."""
        a = self.alpha
        return a * a + self.m + 1 - 2 * a * self.m * self.c

    def violations(self, tol: float = 1e-12) -> list[str]:
        out = []
        m, c = self.m, self.c
        size = m + 1
        if self.C.shape != (size, size) or self.D.shape != (size, size):
            return [f"C and D must be {size}x{size}"]
        if not (m * c) ** 2 > m + 1:
            out.append("(mc)^2 <= m + 1")
        for name, g in (("C", self.C), ("D", self.D)):
            if not is_hermitian(g):
                out.append(f"{name} is not Hermitian")
            elif min_eig(g)[0] < -tol:
                out.append(f"{name} is not PSD")
            if np.max(np.abs(g)) > 1 + tol:
                out.append(f"{name} has an entry of modulus > 1")
        # |C_0j| >= c; equality is admitted so that c = 1 is representable
        if np.any(np.abs(self.C[0, 1:]) < c - tol):
            out.append("|C_0j| < c for some j >= 1")
        for i in range(size):
            for j in range(size):
                if i != j and not abs(self.D[i, j]) < offdiag_bound(i, j):
                    out.append(f"|D_{i}{j}| >= 10^(-2({i}+{j}))")
        return out


def build_obstruction(c: float, m: int, seed: int = 0) -> ObstructionInstance:
    """Rank-one C = v v* (v_0 = 1, |v_j| in (c, 1]) and D = 1 + tiny off-diagonal noise."""
    if not 0 < c <= 1:
        raise InfeasibleParameters("need 0 < c <= 1")
    if not (m * c) ** 2 > m + 1:
        raise InfeasibleParameters(f"(mc)^2 = {(m * c) ** 2:g} <= m + 1 = {m + 1}")
    rng = np.random.default_rng(seed)
    size = m + 1
    mods = np.ones(m) if c >= 1 else rng.uniform(c + (1 - c) * 1e-3, 1.0, size=m)
    phases = np.exp(2j * np.pi * rng.uniform(size=m))
    v = np.concatenate([[1.0], mods * phases])
    C = np.outer(v, v.conj())
    D = np.eye(size, dtype=complex)
    for i in range(size):
        for j in range(i + 1, size):
            z = rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
            D[i, j] = 0.5 * offdiag_bound(i, j) * z / max(abs(z), 1.0)
            D[j, i] = np.conj(D[i, j])
    inst = ObstructionInstance(C, D, float(c), int(m))
    bad = inst.violations()
    if bad:
        raise InfeasibleParameters("; ".join(bad))
    return inst


def obstruction_witness(inst: ObstructionInstance,
                        config: Optional[ToleranceConfig] = None) -> Certificate:
    """Vector xi = (alpha e_0, -sum omega_i e_i) with <[[D, C], [C, D]] xi, xi> < 0.

    The block matrix would be PSD if C <= D, so a negative value shows that
    C <= D fails; lambda_min(D - C) < 0 is cross-checked directly.
    """
    cfg = config or DEFAULT_CONFIG
    bad = inst.violations()
    if bad:
        raise WitnessFailed("malformed instance: " + "; ".join(bad))
    size = inst.m + 1
    xi1 = np.zeros(size, dtype=complex)
    xi1[0] = inst.alpha
    xi2 = np.zeros(size, dtype=complex)
    xi2[1:] = -inst.omega
    xi = np.concatenate([xi1, xi2])
    block = np.block([[inst.D, inst.C], [inst.C, inst.D]])
    q = float(np.real(np.vdot(xi, block @ xi)))
    lam, vec = min_eig(inst.D - inst.C)
    if q >= -cfg.tol_cert or q > inst.bound + cfg.tol_cert or lam >= 0:
        raise WitnessFailed(f"q = {q:.3e}, bound = {inst.bound:.3e}, lambda_min(D - C) = {lam:.3e}")
    return Certificate("block-witness", {"xi": xi, "bound": inst.bound,
                                         "lambda_min_D_minus_C": lam,
                                         "eigenvector": vec}, value=q)


@dataclasses.dataclass
class ObstructionSearch:
    found: bool
    indices: Optional[tuple]
    instance: Optional[ObstructionInstance]
    certificate: Optional[Certificate]
    domination_holds: bool  # psi - phi formally positive
    exhaustive: bool

    @property
    def verdict(self) -> str:
        if not self.found:
            return "no obstruction found at this scale"
        if self.domination_holds:
            return "contradiction: psi - phi is PSD yet C <= D fails"
        return "configuration impossible: C <= D fails, so psi - phi is not formally positive"


def _extend(phi, psi, c, m, prefix, remaining):
    """Depth-first search for index sequences meeting the instance conditions."""
    pos = len(prefix)
    if pos == m + 1:
        yield tuple(prefix)
        return
    for idx in remaining:
        if pos >= 1 and abs(phi[prefix[0], idx]) < c:
            continue
        if any(not abs(psi[prefix[i], idx]) < offdiag_bound(i, pos) for i in range(pos)):
            continue
        yield from _extend(phi, psi, c, m, prefix + [idx], [r for r in remaining if r != idx])


def finite_domination_obstruction(phi, psi, c: float, m: int,
                                  config: Optional[ToleranceConfig] = None) -> ObstructionSearch:
    """Look for rows n_0, ..., n_m of (phi, psi) forming an obstruction instance.

    Exhaustive over ordered index tuples up to 12 rows; beyond that the
    heavy row and its partners are tried in order of decreasing |phi_{n_0 j}|.
    """
    cfg = config or DEFAULT_CONFIG
    p, s = _grid(phi), _grid(psi)
    if p.shape != s.shape:
        raise DimensionMismatch("phi and psi must have the same size")
    if not (m * c) ** 2 > m + 1:
        raise InfeasibleParameters(f"(mc)^2 = {(m * c) ** 2:g} <= m + 1")
    n = p.shape[0]
    dom = formally_positive(s - p, cfg)
    exhaustive = n <= EXHAUSTIVE_LIMIT
    heads = list(range(n)) if exhaustive else list(np.argsort(-np.abs(p).sum(axis=1)))
    for head in heads:
        rest = [j for j in range(n) if j != head]
        if not exhaustive:
            rest = sorted(rest, key=lambda j: -abs(p[head, j]))
        for idx in _extend(p, s, c, m, [head], rest):
            sub = np.ix_(idx, idx)
            inst = ObstructionInstance(p[sub], s[sub], float(c), int(m))
            if inst.violations():
                continue
            cert = obstruction_witness(inst, cfg)
            return ObstructionSearch(True, idx, inst, cert, dom, exhaustive)
        if not exhaustive:
            break
    return ObstructionSearch(False, None, None, None, dom, exhaustive)
