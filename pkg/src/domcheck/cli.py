"""Command-line interface: ``domcheck <subcommand> ...``.

Exit codes: 0 all checks passed, 1 a check failed, 2 inconclusive
verdicts present, 3 input error.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from typing import Optional

import numpy as np

from . import io as dio
from .core import DEFAULT_CONFIG, Certificate, ToleranceConfig
from .corpus import corpus_run
from .errors import DomcheckError, NotSubmajorized, SchemaError
from .hierarchy import Verdict, certificate_verifies, check_map, dominates
from .majorization import (SingularSpectrum, pinch, singular_spectrum,
                           submajorizes, symmetric_norm, transfer_certificate)
from .order import (OrderInterval, Truncation, interval_member, interval_parameterize,
                    monotone_chain, psol_member, verify_offdiag_inequality)
from .schur import dp_tail_score, finite_domination_obstruction, formally_positive

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3


class Report:
    def __init__(self, command: str, config: ToleranceConfig):
        self.command = command
        self.config = config
        self.inputs: dict = {}
        self.verdicts: list = []
        self.result: dict = {}
        self.certificates: dict = {}
        self.runtime_ms = 0

    def add_input(self, name: str, env: dio.DocumentEnvelope):
        self.inputs[name] = dio.digest(dio.to_value(env))

    def add(self, check: str, verdict: str, value=float("nan"),
            certificate: Optional[Certificate] = None, status: str = ""):
        dig = dio.certificate_digest(certificate)
        if dig is not None:
            self.certificates[dig] = certificate
        self.verdicts.append({"check": check, "verdict": verdict, "status": status,
                              "value": value, "certificate": dig})

    def add_bool(self, check: str, ok: bool, value=float("nan"), certificate=None):
        self.add(check, "pass" if ok else "fail", value, certificate)

    def add_verdict(self, check: str, v: Verdict, t=None):
        if v.status == "inconclusive":
            verdict = "inconclusive"
        else:
            ok = bool(v.holds) and (t is None or certificate_verifies(v, t, self.config))
            verdict = "pass" if ok else "fail"
        self.add(check, verdict, v.value, v.certificate, v.status)

    def exit_code(self) -> int:
        kinds = {v["verdict"] for v in self.verdicts}
        if "fail" in kinds:
            return EXIT_FAIL
        if "inconclusive" in kinds:
            return EXIT_INCONCLUSIVE
        return EXIT_OK

    def to_json(self, full: bool = False) -> dict:
        out = {"command": self.command, "inputs": self.inputs, "verdicts": self.verdicts,
               "result": self.result, "config": self.config.as_dict(),
               "runtime_ms": self.runtime_ms, "exit_code": self.exit_code()}
        if full:
            out["certificates"] = {k: dio.certificate_to_json(c) for k, c in self.certificates.items()}
        return dio.jsonable(out)

    def to_text(self) -> str:
        lines = [f"{self.command}:"]
        for key, val in self.result.items():
            lines.append(f"  {key} = {_short(val)}")
        for v in self.verdicts:
            status = f" [{v['status']}]" if v["status"] else ""
            shown = "" if dio.jsonable(v["value"]) is None else f"  value={_short(v['value'])}"
            lines.append(f"  {v['verdict'].upper():12s} {v['check']}{status}{shown}")
        return "\n".join(lines)


def _short(v) -> str:
    v = dio.jsonable(v)
    if isinstance(v, float):
        return f"{v:.6g}"
    s = str(v)
    return s if len(s) <= 200 else s[:197] + "..."


# input helpers -----------------------------------------------------------

def _load(report: Report, name: str, path: str, kinds=("matrix",)) -> dio.DocumentEnvelope:
    env = dio.load_document(path)
    if env.kind not in kinds:
        raise SchemaError("kind", f"{name} must be a {' or '.join(kinds)} document, got {env.kind}")
    report.add_input(name, env)
    return env


def _spectrum(env: dio.DocumentEnvelope) -> SingularSpectrum:
    return env.payload if env.kind == "spectrum" else singular_spectrum(env.payload)


def _parse_blocks(text: str) -> list:
    try:
        return [[int(i) for i in part.split(",")] for part in text.split(";")]
    except ValueError as exc:
        raise SchemaError("blocks", "expected e.g. '0,1;2'") from exc


# subcommands -------------------------------------------------------------

def cmd_sv(args, rep: Report):
    x = _load(rep, "in", args.input).payload
    s = singular_spectrum(x)
    rep.result["spectrum"] = s.values


def cmd_norm(args, rep: Report):
    x = _load(rep, "in", args.input).payload
    rep.result["gauge"] = args.gauge
    rep.result["norm"] = symmetric_norm(x, args.gauge)


def cmd_submajorize(args, rep: Report):
    x = _spectrum(_load(rep, "x", args.x, ("matrix", "spectrum")))
    y = _spectrum(_load(rep, "y", args.y, ("matrix", "spectrum")))
    rep.result["mu_x"], rep.result["mu_y"] = x.values, y.values
    rep.add_bool("y <<w x", submajorizes(x, y, rep.config))


def cmd_transfer(args, rep: Report):
    x = _spectrum(_load(rep, "x", args.x, ("matrix", "spectrum")))
    y = _spectrum(_load(rep, "y", args.y, ("matrix", "spectrum")))
    try:
        d = transfer_certificate(x, y, rep.config)
    except NotSubmajorized as exc:
        rep.result["reason"] = str(exc)
        rep.add_bool("doubly substochastic D with D mu_x = mu_y", False)
        return
    ok = d.verify(x, y, rep.config.tol_cert)
    cert = Certificate("transfer-matrix", {"D": d.entries}, value=0.0)
    rep.result["transfer"] = d.entries
    rep.add_bool("doubly substochastic D with D mu_x = mu_y", ok, certificate=cert)


def cmd_pinch(args, rep: Report):
    x = _load(rep, "in", args.input).payload
    y = pinch(x, _parse_blocks(args.blocks))
    rep.result["pinched"] = y
    rep.add_bool("pinching is submajorized", submajorizes(singular_spectrum(x), singular_spectrum(y),
                                                         rep.config))


def cmd_interval_member(args, rep: Report):
    a = _load(rep, "a", args.a).payload
    x = _load(rep, "x", args.x).payload
    chk = interval_member(OrderInterval(a), x, rep.config)
    rep.add_bool("0 <= x <= a", chk.holds, certificate=chk.certificate)


def cmd_interval_param(args, rep: Report):
    a = _load(rep, "a", args.a).payload
    x = _load(rep, "x", args.x).payload
    w = interval_parameterize(OrderInterval(a), x, rep.config)
    rep.result["w"] = w
    rep.result["norm_w"] = float(np.linalg.norm(w, 2))
    rep.add_bool("||w|| <= ||a||^(1/2)",
                 np.linalg.norm(w, 2) <= np.sqrt(np.linalg.norm(a, 2)) + rep.config.tol_cert)


def cmd_psol_member(args, rep: Report):
    family = [_load(rep, f"family[{i}]", p).payload for i, p in enumerate(args.family)]
    x = _load(rep, "x", args.x).payload
    chk = psol_member(family, x, rep.config)
    rep.add_bool("x in psol(family)", chk.holds, certificate=chk.certificate)


def cmd_offdiag_verify(args, rep: Report):
    t = _load(rep, "map", args.map, ("map",)).payload
    x = _load(rep, "x", args.x).payload
    r = verify_offdiag_inequality(t, x, Truncation(args.cut, t.dim_in), args.gauge, rep.config)
    rep.result.update({"lhs": r.lhs, "rhs": r.rhs, "rhs_general": r.rhs_general,
                       "ratio": r.ratio, "t_star": r.t_star, "degenerate": r.degenerate})
    rep.add_bool("||T(x - Qx - Rx)||^2 <= 4 ||TQx|| ||TRx||", r.holds, r.lhs - r.rhs)


def cmd_chain(args, rep: Report):
    x = _load(rep, "x", args.x).payload
    res = monotone_chain(x, args.n, rep.config)
    rep.result.update({"c": res.c, "gaps": res.gaps})
    rep.add_bool("chain decreasing", res.decreasing)
    rep.add_bool("gaps > 2/3", res.gaps_ok, min(res.gaps))


def cmd_check_map(args, rep: Report):
    t = _load(rep, "in", args.input, ("map",)).payload
    v = check_map(t, args.property, rep.config)
    rep.result["label"] = v.label
    rep.result["reason"] = v.reason
    rep.add_verdict(args.property, v, t)


def cmd_dominates(args, rep: Report):
    s = _load(rep, "s", args.s, ("map",)).payload
    t = _load(rep, "t", args.t, ("map",)).payload
    v = dominates(s, t, args.order, rep.config)
    rep.result["label"] = v.label
    for sub in v.sub:
        rep.add_verdict(sub.property, sub)
    rep.add_verdict(v.property, v)


def cmd_schur(args, rep: Report):
    phi = _load(rep, "symbol", args.symbol, ("symbol",)).payload
    rep.result["formally_positive"] = formally_positive(phi, rep.config)
    if args.threshold is not None:
        tail = dp_tail_score(phi, args.threshold)
        rep.result["tail_score"] = tail.score
        rep.result["row_tails"] = tail.row_tails
        rep.result["col_tails"] = tail.col_tails
    if args.psi is not None:
        psi = _load(rep, "psi", args.psi, ("symbol",)).payload
        res = finite_domination_obstruction(phi, psi, args.c, args.m, rep.config)
        rep.result["obstruction"] = res.verdict
        rep.result["indices"] = list(res.indices) if res.found else None
        rep.result["psi_minus_phi_formally_positive"] = res.domination_holds
        # a found obstruction contradicting a verified domination would be a bug
        rep.add_bool("no obstruction alongside formal domination",
                     not (res.found and res.domination_holds),
                     res.certificate.value if res.found else float("nan"), res.certificate)


def cmd_corpus(args, rep: Report):
    items = corpus_run(args.id, rep.config)
    rep.result["items"] = [{"id": it.id, "provenance": it.provenance, "runtime_ms": it.runtime_ms,
                            "passed": it.passed} for it in items]
    for it in items:
        for c in it.checks:
            rep.add(f"{it.id}: {c.check}", c.verdict, c.value, c.certificate, c.status)


COMMANDS = {
    "sv": cmd_sv, "norm": cmd_norm, "submajorize": cmd_submajorize, "transfer": cmd_transfer,
    "pinch": cmd_pinch, "interval-member": cmd_interval_member,
    "interval-param": cmd_interval_param, "psol-member": cmd_psol_member,
    "offdiag-verify": cmd_offdiag_verify, "chain": cmd_chain, "check-map": cmd_check_map,
    "dominates": cmd_dominates, "schur": cmd_schur, "corpus": cmd_corpus,
}


def build_parser() -> argparse.ArgumentParser:
    def flags(suppress: bool) -> argparse.ArgumentParser:
        # subcommand copies must not overwrite flags given before the subcommand
        g = argparse.ArgumentParser(add_help=False)

        def d(v):
            return argparse.SUPPRESS if suppress else v
        g.add_argument("--tol", type=float, default=d(None),
                       help="certificate tolerance (default 1e-7, or $DOMCHECK_TOL)")
        g.add_argument("--seed", type=int, default=d(0))
        g.add_argument("--restarts", type=int, default=d(DEFAULT_CONFIG.restarts))
        g.add_argument("--max-iters", type=int, default=d(DEFAULT_CONFIG.max_iters))
        g.add_argument("--format", choices=("text", "json"), default=d("text"))
        g.add_argument("--out", default=d(None),
                       help="write the full report, certificates included, to this path")
        return g

    common = flags(True)
    p = argparse.ArgumentParser(prog="domcheck", parents=[flags(False)],
                                description="Order and domination checks on matrix spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    s = add("sv", "singular values of a matrix")
    s.add_argument("--in", dest="input", required=True)
    s = add("norm", "Schatten or Ky Fan norm")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--gauge", default="schatten:1", help="schatten:<p>, schatten:inf or kyfan:<k>")
    for name, help_ in (("submajorize", "is mu_y weakly submajorized by mu_x"),
                        ("transfer", "doubly substochastic transfer certificate")):
        s = add(name, help_)
        s.add_argument("--x", required=True)
        s.add_argument("--y", required=True)
    s = add("pinch", "block-diagonal pinching")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--blocks", required=True, help="index blocks, e.g. '0,1;2'")
    for name, help_ in (("interval-member", "is x in the order interval [0, a]"),
                        ("interval-param", "write x in [0, a] as a^(1/2) w a^(1/2)")):
        s = add(name, help_)
        s.add_argument("--a", required=True)
        s.add_argument("--x", required=True)
    s = add("psol-member", "positive solid membership")
    s.add_argument("--family", nargs="+", required=True)
    s.add_argument("--x", required=True)
    s = add("offdiag-verify", "off-diagonal corner inequality")
    s.add_argument("--map", required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--cut", type=int, required=True)
    s.add_argument("--gauge", default="schatten:1")
    s = add("chain", "monotone chain construction")
    s.add_argument("--x", required=True)
    s.add_argument("--n", type=int, default=3)
    s = add("check-map", "cp, positive, kpositive:<k> or decomposable")
    s.add_argument("--property", required=True)
    s.add_argument("--in", dest="input", required=True)
    s = add("dominates", "0 <= T <= S or 0 <= T <=_c S")
    s.add_argument("--s", required=True)
    s.add_argument("--t", required=True)
    s.add_argument("--order", choices=("positive", "complete"), default="complete")
    s = add("schur", "Schur multiplier diagnostics")
    s.add_argument("--symbol", required=True)
    s.add_argument("--threshold", type=int)
    s.add_argument("--psi")
    s.add_argument("--c", type=float, default=0.9)
    s.add_argument("--m", type=int, default=3)
    s = add("corpus", "run the certified corpus")
    s.add_argument("action", choices=("run",))
    s.add_argument("id", nargs="?", default="all")
    return p


def _config(args) -> ToleranceConfig:
    tol = args.tol
    if tol is None and os.environ.get("DOMCHECK_TOL"):
        try:
            tol = float(os.environ["DOMCHECK_TOL"])
        except ValueError as exc:
            raise SchemaError("DOMCHECK_TOL", "must be a number") from exc
    changes = {"seed": args.seed, "restarts": args.restarts, "max_iters": args.max_iters}
    if tol is not None:
        changes["tol_cert"] = tol
    return DEFAULT_CONFIG.replace(**changes)


def run_command(argv) -> tuple[int, Optional[Report]]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_INPUT), None
    try:
        cfg = _config(args)
        rep = Report(args.command, cfg)
        t0 = time.perf_counter()
        COMMANDS[args.command](args, rep)
        rep.runtime_ms = int(round(1000 * (time.perf_counter() - t0)))
    except (DomcheckError, ValueError, OSError) as exc:
        print(f"domcheck: error: {exc}", file=sys.stderr)
        return EXIT_INPUT, None
    if args.format == "json":
        print(dio.dumps(rep.to_json()))
    else:
        print(rep.to_text())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dio.dumps(rep.to_json(full=True)) + "\n")
    return rep.exit_code(), rep


def main(argv=None) -> int:
    code, _ = run_command(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
