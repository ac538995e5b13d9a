"""Acceptance criteria, each at its stated tolerance.

Every criterion records one PASS/FAIL line; the lines are printed in the
pytest terminal summary, or directly when run as a script:

    python3 tests/test_acceptance.py
"""
import json
import subprocess
import sys
import time

import numpy as np

from domcheck import io as dio
from domcheck.certificates import verify_certificate
from domcheck.core import matrix_unit, min_eig, partial_transpose
from domcheck.corpus import (NOGO_POWERS_CHOI, NOGO_U, basis_error, nogo_a_maps, nogo_b_maps,
                             nogo_powers_maps, offdiag_sweep, paulsen_criterion_sweep,
                             paulsen_level_sweep)
from domcheck.hierarchy import (certificate_verifies, check_cp, check_decomposable, check_k_positive,
                                check_positive, dominates)
from domcheck.majorization import pinch, singular_spectrum, submajorizes, transfer_certificate
from domcheck.maps import conjugation_map, identity_map, schur_map, stormer_U, stormer_V
from domcheck.order import monotone_chain
from domcheck.schur import build_obstruction, formally_positive, obstruction_witness
from domcheck.sampling import random_hermitian, random_psd
from domcheck.corpus import chain_input

RESULTS = []


def record(criterion: str, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


# 1 -----------------------------------------------------------------------

def criterion_1():
    t0 = time.perf_counter()
    t, s = nogo_a_maps()
    pos = check_positive(t)
    v2 = check_k_positive(t, 2)
    cp = check_cp(s)
    err = basis_error(s - t, conjugation_map(NOGO_U))
    dom = dominates(s, t, "complete")
    dt = time.perf_counter() - t0
    ok = (pos.status == "certified"
          and v2.status == "violated" and abs(v2.value + 1) <= 1e-9 and certificate_verifies(v2, t)
          and cp.status == "certified" and err <= 1e-12
          and dom.status == "certified" and dt < 1.0)
    return record("1", ok, f"transpose positive={pos.status}, 2-pos witness={v2.value:.12f}, "
                           f"S CP={cp.status}, |S-T-Ad_u|={err:.1e}, dominates={dom.status}, {dt:.2f}s")


# 2 -----------------------------------------------------------------------

def criterion_2():
    t0 = time.perf_counter()
    t, s = nogo_b_maps()
    lam_s = min_eig(s.choi)[0]
    err = basis_error(s - t, identity_map(3))
    pos = check_positive(t)
    dec = check_decomposable(t)
    ok_wit = False
    if dec.status == "violated":
        rho = dec.certificate.payload["rho"]
        ok_wit = (min_eig(rho)[0] >= -1e-9
                  and min_eig(partial_transpose(rho, t.dims))[0] >= -1e-9
                  and float(np.real(np.trace(rho @ t.choi))) < -1e-6
                  and verify_certificate(dec.certificate, t.choi, t.dims))
    dt = time.perf_counter() - t0
    ok = (lam_s >= -1e-9 and err <= 1e-12 and pos.holds and pos.value >= -1e-9
          and pos.certificate.payload.get("restarts", 0) >= 64 and ok_wit and dt < 30)
    return record("2", ok, f"lambda_min J(S)={lam_s:.2e}, |S-T-I|={err:.1e}, see-saw min={pos.value:.2e} "
                           f"({pos.status}), tr(rho J(T))={dec.value:.4f} ({dec.status}), {dt:.2f}s")


# 3 -----------------------------------------------------------------------

def criterion_3():
    t, _ = nogo_powers_maps()
    j = sum(np.kron(matrix_unit(i, k, 2), t(matrix_unit(i, k, 2))) for i in range(2) for k in range(2))
    exact = np.array_equal(j, NOGO_POWERS_CHOI)
    lam = float(np.linalg.eigvalsh(j)[0])
    err = basis_error(t @ t, t)
    ok = exact and abs(lam + 0.5) <= 1e-9 and err <= 1e-12
    return record("3", ok, f"(I (x) T)(sum E_ij (x) E_ij) entry-exact={exact}, lambda_min={lam:.12f}, "
                           f"|T.T - T|={err:.1e}")


# 4 -----------------------------------------------------------------------

def criterion_4():
    u, v = stormer_U(), stormer_V()
    parts = []
    ok = True
    for mu in (1, 2):
        t = u + mu * v
        t2 = t @ t
        err = basis_error(t2, identity_map(3) + (2 * mu) * v + (mu * mu) * (v @ v))
        cp = check_cp(t2)
        ok &= err <= 1e-12 and cp.status == "certified"
        parts.append(f"mu={mu}: err={err:.1e}, T^2 CP={cp.status}")
    return record("4", ok, "; ".join(parts))


# 5 -----------------------------------------------------------------------

def criterion_5():
    ok = True
    parts = []
    for n in (1, 2, 3):
        r = paulsen_criterion_sweep(n, 500, 100 + n, None)
        ok &= r["disagreements"] == 0
        parts.append(f"n={n}: {r['disagreements']} disagreements ({r['banded']} in band)")
    worst_id, fails = 0.0, 0
    for n in (1, 2, 3):
        for k in (1, 2, 3):
            r = paulsen_level_sweep(n, k, 200, 1000 + 10 * n + k, None)
            fails += r["failures"]
            worst_id = max(worst_id, r["identity_error"])
    ok &= fails == 0 and worst_id <= 1e-12
    parts.append(f"S >=_c I_A failures at k=1,2,3: {fails}; |(S-I)(a) - u a u| <= {worst_id:.1e}")
    return record("5", ok, "; ".join(parts))


# 6 -----------------------------------------------------------------------

def criterion_6():
    ok = True
    parts = []
    for c, m, bound in ((0.9, 3, 4 - 7.29), (1.0, 2, -1.0)):
        inst = build_obstruction(c, m, seed=0)
        q = obstruction_witness(inst).value
        lam = float(np.linalg.eigvalsh(inst.D - inst.C)[0])
        ok &= q <= bound + 1e-7 and lam < 0
        parts.append(f"(c,m)=({c:g},{m}): q={q:.4f} <= {bound:.2f}, lambda_min(D-C)={lam:.4f}")
    return record("6", ok, "; ".join(parts))


# 7 -----------------------------------------------------------------------

def criterion_7():
    t0 = time.perf_counter()
    r = offdiag_sweep(1000, 7, None, gauges=("schatten:1", "schatten:inf"))
    dt = time.perf_counter() - t0
    v = r["violations"]
    ok = v["map"] == 0 and v["scalar"] == 0 and dt < 60
    return record("7", ok, f"1000 trials: map violations={v['map']}, scalar violations={v['scalar']} "
                           f"(Schatten-1 and operator norm), worst lhs/rhs={r['worst_ratio']:.4f}, {dt:.1f}s")


# 8 -----------------------------------------------------------------------

def order_pair(rng, n):
    """a = c*c + d, b = c*c - d with d PSD, so -a <= b <= a; ||d|| / ||c*c|| log-uniform in [1e-3, 1]."""
    c = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    cc = c.conj().T @ c
    d = random_psd(rng, n)
    d *= 10 ** rng.uniform(-3, 0) * np.linalg.norm(cc, 2) / np.linalg.norm(d, 2)
    return cc + d, cc - d


def criterion_8a():
    rng = np.random.default_rng(8)
    bad = 0
    worst = 0.0
    for _ in range(500):
        a, b = order_pair(rng, int(rng.integers(2, 6)))
        excess = singular_spectrum(b).values - singular_spectrum(a).values
        worst = max(worst, float(excess.max()))
        bad += bool(np.any(excess > 1e-9))
    return record("8a", bad == 0, f"500 order pairs -a <= b <= a: {bad} with mu_b > mu_a somewhere "
                                  f"(largest excess {worst:.3e}); tol 1e-9")


def criterion_8a_weak():
    """Supplementary: the Ky Fan (submajorization) form on the same pairs."""
    rng = np.random.default_rng(8)
    bad = 0
    for _ in range(500):
        a, b = order_pair(rng, int(rng.integers(2, 6)))
        bad += not submajorizes(singular_spectrum(a), singular_spectrum(b))
    return record("8a-weak (supplementary)", bad == 0, f"same 500 pairs: {bad} failures of mu_b <<w mu_a")


def criterion_8b():
    rng = np.random.default_rng(88)
    bad = 0
    worst_sum, worst_res = 0.0, 0.0
    for _ in range(200):
        n = int(rng.integers(2, 8))
        x = random_psd(rng, n) if rng.uniform() < 0.5 else rng.standard_normal((n, n))
        perm = rng.permutation(n)
        cuts = np.sort(rng.choice(np.arange(1, n), size=int(rng.integers(0, n)), replace=False))
        blocks = [list(b) for b in np.split(perm, cuts)]
        mx = singular_spectrum(x).values
        my = singular_spectrum(pinch(x, blocks)).values
        if not submajorizes(mx, my):
            bad += 1
            continue
        d = transfer_certificate(mx, my).entries
        s = max(d.sum(0).max(), d.sum(1).max())
        res = float(np.abs(d @ mx - my).max())
        worst_sum, worst_res = max(worst_sum, s), max(worst_res, res)
        bad += not (np.all(d >= 0) and s <= 1 + 1e-7 and res <= 1e-7)
    return record("8b", bad == 0, f"200 pinchings: {bad} failures; max row/col sum {worst_sum:.9f}, "
                                  f"max |Dx - y| {worst_res:.1e}")


# 9 -----------------------------------------------------------------------

def criterion_9():
    rng = np.random.default_rng(9)
    mismatches = 0
    counts = {True: 0, False: 0}
    for i in range(100):
        n = int(rng.integers(1, 7))
        kind = i % 4
        if kind == 0:
            phi = random_psd(rng, n)
        elif kind == 1:
            phi = random_psd(rng, n, max(1, n - 2))
        elif kind == 2:
            phi = random_hermitian(rng, n)
        else:
            g = random_psd(rng, n)
            phi = g - (np.linalg.eigvalsh(g)[0] + 0.05) * np.eye(n)  # slightly indefinite
        t = schur_map(phi)
        fp = formally_positive(phi)
        pos = check_positive(t, use_structure=False)
        cp = check_cp(t)
        counts[fp] += 1
        if not (fp == bool(pos) == bool(cp)) or (pos.status == "violated" and not certificate_verifies(pos, t)):
            mismatches += 1
    return record("9", mismatches == 0, f"100 symbols ({counts[True]} formally positive): "
                                        f"{mismatches} disagreements")


# 10 ----------------------------------------------------------------------

def criterion_10():
    res = monotone_chain(chain_input(3, 0), 3)
    gaps_psd = all(np.linalg.eigvalsh(res.chain[k - 1] - res.chain[k])[0] >= -1e-9 for k in range(1, 4))
    ok = gaps_psd and all(g > 2 / 3 for g in res.gaps)
    return record("10", ok, f"n=3 chain gaps PSD={gaps_psd}, ||x(a_(k-1) - a_k)x|| = "
                            + ", ".join(f"{g:.4f}" for g in res.gaps))


# 11 ----------------------------------------------------------------------

def criterion_11():
    cmd = [sys.executable, "-m", "domcheck.cli", "corpus", "run", "all", "--seed", "0", "--format", "json"]
    outs, codes = [], []
    for _ in range(2):
        p = subprocess.run(cmd, capture_output=True, text=True, check=False)
        codes.append(p.returncode)
        outs.append(json.dumps(dio.strip_timing(json.loads(p.stdout)), sort_keys=True))
    same = outs[0] == outs[1]
    return record("11", same and codes == [0, 0], f"byte-identical modulo runtime_ms={same}, exit codes={codes}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8a, criterion_8a_weak, criterion_8b, criterion_9, criterion_10, criterion_11]


def test_criterion_1():
    assert criterion_1()


def test_criterion_2():
    assert criterion_2()


def test_criterion_3():
    assert criterion_3()


def test_criterion_4():
    assert criterion_4()


def test_criterion_5():
    assert criterion_5()


def test_criterion_6():
    assert criterion_6()


def test_criterion_7():
    assert criterion_7()


def test_criterion_8a_pointwise_spectrum_order():
    assert criterion_8a()


def test_criterion_8a_submajorization_form():
    assert criterion_8a_weak()


def test_criterion_8b():
    assert criterion_8b()


def test_criterion_9():
    assert criterion_9()


def test_criterion_10():
    assert criterion_10()


def test_criterion_11():
    assert criterion_11()


if __name__ == "__main__":
    results = [f() for f in CRITERIA]
    sys.exit(0 if all(results) else 1)
