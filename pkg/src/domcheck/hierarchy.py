"""Where a map sits in the positivity hierarchy, and the two domination orders.

Deciding block positivity (and k-positivity) is hard in general, so every
verdict says whether it is ``certified`` (exact rule, complete positivity,
or a re-verified violation witness) or only ``heuristic`` (the see-saw
search found no violation).
"""
from __future__ import annotations

import dataclasses
from typing import Optional

import numpy as np

from .certificates import verify_certificate
from .core import (Certificate, DEFAULT_CONFIG, ToleranceConfig, min_eig, operator_norm)
from .decompose import find_split, search_ppt_witness
from .errors import BadK, DimensionMismatch, NotCP, NotHermiticityPreserving
from .maps import SuperOperator, choi_to_kraus
from .seesaw import seesaw_minimize

# Builtins that map PSD matrices to PSD matrices by construction.
POSITIVE_BUILTINS = {
    "identity": "identity map",
    "zero": "zero map",
    "transpose": "transposition preserves PSD matrices",
    "trace_times_identity": "trace of a PSD matrix is non-negative",
    "conjugation": "a -> u a u* preserves PSD matrices",
    "symmetrization": "average of identity and transposition",
    "stormer_V": "diagonal entries of a PSD matrix are non-negative",
    "stormer_W": "diagonal entries of a PSD matrix are non-negative",
}

SEESAW_ALTERNATIONS = 200
SEESAW_CONV = 1e-10


@dataclasses.dataclass
class Verdict:
    """Outcome of one hierarchy check.

    ``status`` is certified / heuristic / violated / inconclusive; ``holds``
    is True, False, or None when inconclusive.
    """

    property: str
    status: str
    value: float = float("nan")
    certificate: Optional[Certificate] = None
    reason: str = ""
    sub: list = dataclasses.field(default_factory=list)

    @property
    def holds(self) -> Optional[bool]:
        return {"certified": True, "heuristic": True, "violated": False}.get(self.status)

    @property
    def certified(self) -> bool:
        return self.status in ("certified", "violated")

    @property
    def label(self) -> str:
        names = {
            "decomposable": ("decomposable", "non-decomposable"),
            "dominates": ("dominated", "not-dominated"),
        }
        base = self.property.split(":")[0]
        yes, no = names.get(base, (base, "not-" + base))
        if self.status == "inconclusive":
            return "inconclusive"
        if self.status == "violated":
            return no
        return f"{yes} ({self.status})"

    def __bool__(self):
        return bool(self.holds)


def _cfg(config):
    return config or DEFAULT_CONFIG


def _require_hp(t: SuperOperator, cfg: ToleranceConfig) -> np.ndarray:
    j = t.choi
    if not t.is_hermiticity_preserving(cfg.tol_herm):
        raise NotHermiticityPreserving(f"{t.name} does not preserve Hermiticity")
    return (j + j.conj().T) / 2


def _neg_threshold(j, cfg) -> float:
    return -cfg.tol_psd * max(1.0, operator_norm(j))


def check_cp(t: SuperOperator, config: Optional[ToleranceConfig] = None) -> Verdict:
    """Choi criterion: completely positive iff J(T) is PSD."""
    cfg = _cfg(config)
    j = _require_hp(t, cfg)
    lam, vec = min_eig(j)
    if lam >= _neg_threshold(j, cfg):
        return Verdict("cp", "certified", lam, reason="Choi matrix is PSD")
    cert = Certificate("psd-witness", {"vector": vec}, value=lam)
    return Verdict("cp", "violated", lam, cert, reason="Choi matrix has a negative eigenvalue")


def _structural_positive(t: SuperOperator, cfg) -> Optional[Verdict]:
    if t.representation == "builtin":
        if t.builtin in POSITIVE_BUILTINS:
            return Verdict("positive", "certified", reason=POSITIVE_BUILTINS[t.builtin])
        if t.builtin == "schur":
            phi = t.params["phi"]
            lam, eta = min_eig(phi)
            if lam >= _neg_threshold(phi, cfg):
                return Verdict("positive", "certified", reason="Schur multiplier with PSD symbol")
            n = phi.shape[0]
            xi = np.ones(n, dtype=complex) / np.sqrt(n)
            z = np.kron(xi, eta)
            val = float(np.real(np.vdot(z, t.choi @ z)))
            cert = Certificate("product-witness", {"xi": xi, "eta": eta}, value=val)
            return Verdict("positive", "violated", val, cert,
                           reason="Schur symbol is not PSD; all-ones input is mapped to it")
        return None
    if t.representation == "combination" and t.parts:
        first = t.parts[0]
        if first[0] == "compose":
            outer, inner = first[1], first[2]
            vo, vi = _structural_positive(outer, cfg), _structural_positive(inner, cfg)
            if vo is not None and vi is not None and vo.status == vi.status == "certified":
                return Verdict("positive", "certified", reason="composition of positive maps")
            return None
        for coef, part in t.parts:
            if np.iscomplexobj(coef) or coef < 0:
                return None
            v = _structural_positive(part, cfg)
            if v is None or v.status != "certified":
                if check_cp(part, cfg).status != "certified":
                    return None
        return Verdict("positive", "certified", reason="non-negative combination of positive maps")
    return None


def check_positive(t: SuperOperator, config: Optional[ToleranceConfig] = None,
                   use_structure: bool = True) -> Verdict:
    """Positivity of T, i.e. block positivity of J(T) on product vectors."""
    cfg = _cfg(config)
    j = _require_hp(t, cfg)
    if use_structure:
        v = _structural_positive(t, cfg)
        if v is not None:
            return v
    cp = check_cp(t, cfg)
    if cp.status == "certified":
        return Verdict("positive", "certified", cp.value, reason="completely positive")
    thresh = _neg_threshold(j, cfg)
    res = seesaw_minimize(j, t.dims, k=1, restarts=cfg.restarts,
                          max_alternations=SEESAW_ALTERNATIONS, conv_tol=SEESAW_CONV,
                          seed=cfg.seed, stop_below=thresh)
    if res.value < thresh:
        xi = res.left[:, 0]
        eta = res.right[:, 0] / np.linalg.norm(res.right[:, 0])
        z = np.kron(xi, eta)
        val = float(np.real(np.vdot(z, j @ z)))
        cert = Certificate("product-witness", {"xi": xi, "eta": eta}, value=val,
                           note=f"restarts={res.restarts_run}")
        return Verdict("positive", "violated", val, cert, reason="see-saw found a product witness")
    cert = Certificate("inconclusive", {"restarts": res.restarts_run,
                                        "alternations": res.alternations}, value=res.value)
    return Verdict("positive", "heuristic", res.value, cert,
                   reason=f"no violation in {res.restarts_run} see-saw restarts")


def check_k_positive(t: SuperOperator, k: int, config: Optional[ToleranceConfig] = None) -> Verdict:
    """k-positivity: J(T) non-negative on vectors of Schmidt rank <= k."""
    cfg = _cfg(config)
    kmax = min(t.dim_in, t.dim_out)
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= kmax):
        raise BadK(f"k must be an integer in [1, {kmax}]")
    prop = f"kpositive:{k}"
    if k == 1:
        return dataclasses.replace(check_positive(t, cfg), property=prop)
    j = _require_hp(t, cfg)
    cp = check_cp(t, cfg)
    if cp.status == "certified":
        return Verdict(prop, "certified", cp.value, reason="completely positive")
    if k == kmax:
        cert = Certificate("schmidt-witness", {"vector": cp.certificate.payload["vector"], "k": k},
                           value=cp.value)
        return Verdict(prop, "violated", cp.value, cert,
                       reason="k equals the minimal dimension; Choi matrix is not PSD")
    thresh = _neg_threshold(j, cfg)
    res = seesaw_minimize(j, t.dims, k=k, restarts=cfg.restarts,
                          max_alternations=SEESAW_ALTERNATIONS, conv_tol=SEESAW_CONV,
                          seed=cfg.seed, stop_below=thresh)
    if res.value < thresh:
        cert = Certificate("schmidt-witness", {"vector": res.vector, "k": k}, value=res.value)
        return Verdict(prop, "violated", res.value, cert,
                       reason="see-saw found a Schmidt-rank-k witness")
    cert = Certificate("inconclusive", {"restarts": res.restarts_run,
                                        "alternations": res.alternations}, value=res.value)
    return Verdict(prop, "heuristic", res.value, cert,
                   reason=f"no violation in {res.restarts_run} see-saw restarts")


def check_decomposable(t: SuperOperator, config: Optional[ToleranceConfig] = None) -> Verdict:
    """Decomposability with a split certificate, a PPT witness, or neither."""
    cfg = _cfg(config)
    j = _require_hp(t, cfg)
    dims = t.dims
    split = find_split(j, dims, tol=cfg.tol_cert, max_iters=cfg.max_iters)
    if split.residual < cfg.tol_cert:
        cert = Certificate("decomposition-pair", {"A": split.a, "B": split.b},
                           value=split.residual, note=f"iterations={split.iterations}")
        if verify_certificate(cert, j, dims, cfg):
            return Verdict("decomposable", "certified", split.residual, cert,
                           reason="J = A + B^G with A, B PSD")
    start = split.gap if split.plateau or split.residual >= cfg.tol_cert else None
    if start is not None and abs(np.trace(start)) > 0:
        start = start / np.trace(start).real
    wit = search_ppt_witness(j, dims, start=start)
    cert = Certificate("ppt-witness", {"rho": wit.rho}, value=wit.value,
                       note=f"descent steps={wit.steps}")
    if wit.value < -cfg.tol_cert and verify_certificate(cert, j, dims, cfg):
        return Verdict("decomposable", "violated", wit.value, cert,
                       reason="PPT state with tr(rho J) < 0")
    budget = Certificate("inconclusive", {"split_iterations": split.iterations,
                                          "split_residual": split.residual,
                                          "witness_value": wit.value}, value=split.residual)
    return Verdict("decomposable", "inconclusive", split.residual, budget,
                   reason="neither a split nor a PPT witness was found within budget")


def dominates(s: SuperOperator, t: SuperOperator, order: str = "complete",
              config: Optional[ToleranceConfig] = None) -> Verdict:
    """0 <= T <= S (order="positive") or 0 <= T <=_c S (order="complete").

    Both orders require T to be positive; "complete" additionally asks S - T
    to be completely positive, "positive" only asks S - T to be positive.
    """
    cfg = _cfg(config)
    if s.dims != t.dims:
        raise DimensionMismatch(f"maps of shape {s.dims} and {t.dims}")
    diff = s - t
    if order == "complete":
        gap = check_cp(diff, cfg)
    elif order == "positive":
        gap = check_positive(diff, cfg)
    else:
        raise ValueError("order must be 'positive' or 'complete'")
    lower = check_positive(t, cfg)
    subs = [dataclasses.replace(gap, property=f"S-T {gap.property}"),
            dataclasses.replace(lower, property=f"T {lower.property}")]
    statuses = {gap.status, lower.status}
    if "violated" in statuses:
        status = "violated"
        bad = gap if gap.status == "violated" else lower
        cert, value = bad.certificate, bad.value
    elif "inconclusive" in statuses:
        status, cert, value = "inconclusive", None, float("nan")
    elif "heuristic" in statuses:
        status, cert, value = "heuristic", None, min(gap.value, lower.value)
    else:
        status, cert, value = "certified", None, min(gap.value, lower.value)
    return Verdict(f"dominates:{order}", status, value, cert, sub=subs,
                   reason="; ".join(f"{v.property}: {v.status}" for v in subs))


def kraus_from_choi(t: SuperOperator, config: Optional[ToleranceConfig] = None) -> list[np.ndarray]:
    cfg = _cfg(config)
    if check_cp(t, cfg).status != "certified":
        raise NotCP(f"{t.name} is not completely positive")
    return choi_to_kraus(t.choi, t.dim_in, t.dim_out)


def check_map(t: SuperOperator, prop: str, config: Optional[ToleranceConfig] = None) -> Verdict:
    """Dispatch on a property name: cp, positive, kpositive:<k>, decomposable."""
    name, _, arg = prop.partition(":")
    if name == "cp":
        return check_cp(t, config)
    if name == "positive":
        return check_positive(t, config)
    if name == "kpositive":
        try:
            k = int(arg)
        except ValueError as exc:
            raise BadK(f"bad k in {prop!r}") from exc
        return check_k_positive(t, k, config)
    if name == "decomposable":
        return check_decomposable(t, config)
    raise ValueError(f"unknown property {prop!r}")


def certificate_verifies(v: Verdict, t: SuperOperator,
                         config: Optional[ToleranceConfig] = None) -> bool:
    """Re-verify the certificate of a certified verdict against J(T)."""
    if v.certificate is None:
        return v.status == "certified"
    if v.certificate.kind == "inconclusive":
        return True
    return verify_certificate(v.certificate, t.choi, t.dims, config)
