"""Property-based checks of the invariants, driven by hypothesis."""
import json

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from domcheck import io as dio
from domcheck.core import jacobi_eigh
from domcheck.hierarchy import certificate_verifies, check_cp, check_k_positive
from domcheck.majorization import submajorizes, transfer_certificate
from domcheck.maps import choi_to_kraus, kraus_to_choi, schur_map
from domcheck.order import Truncation, corner_truncations
from domcheck.sampling import random_cp_map, random_hermitian
from domcheck.schur import build_obstruction, formally_positive, obstruction_witness

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
seeds = st.integers(0, 2**32 - 1)


@SETTINGS
@given(seeds, st.integers(1, 16))
def test_jacobi_reconstruction(seed, n):
    a = random_hermitian(np.random.default_rng(seed), n)
    dec = jacobi_eigh(a)
    assert np.linalg.norm(a - dec.reconstruct()) <= 1e-9 * max(np.linalg.norm(a), 1e-300)
    assert np.all(np.diff(dec.eigenvalues) <= 0)


@SETTINGS
@given(st.lists(st.floats(0, 10), min_size=1, max_size=8), st.lists(st.floats(0, 10), min_size=1, max_size=8))
def test_transfer_certificate_always_valid(x, y):
    if submajorizes(x, y):
        d = transfer_certificate(x, y)
        assert d.verify(x, y, 1e-7 * max(1.0, max(x)))


@SETTINGS
@given(seeds, st.integers(1, 6), st.data())
def test_corner_sum_is_exact(seed, d, data):
    n = data.draw(st.integers(0, d))
    x = random_hermitian(np.random.default_rng(seed), d)
    q, r, off = corner_truncations(x, Truncation(n, d))
    assert np.array_equal(q + r + off, x)


@SETTINGS
@given(seeds, st.integers(1, 4), st.booleans())
def test_schur_positivity_is_complete_positivity(seed, n, psd):
    rng = np.random.default_rng(seed)
    g = random_hermitian(rng, n)
    phi = g @ g if psd else g
    assert formally_positive(phi) == bool(check_cp(schur_map(phi)))


@SETTINGS
@given(seeds, st.integers(1, 3), st.integers(1, 3), st.integers(1, 4))
def test_kraus_choi_round_trip(seed, n, m, terms):
    t = random_cp_map(np.random.default_rng(seed), n, m, terms)
    back = kraus_to_choi(choi_to_kraus(t.choi, n, m))
    assert np.linalg.norm(back - t.choi) <= 1e-10 * max(1.0, np.linalg.norm(t.choi))


@SETTINGS
@given(seeds, st.integers(2, 3))
def test_cp_maps_are_k_positive(seed, n):
    t = random_cp_map(np.random.default_rng(seed), n)
    for k in range(1, n + 1):
        v = check_k_positive(t, k)
        assert v.status == "certified" and certificate_verifies(v, t)


@SETTINGS
@given(st.floats(0.3, 1.0), st.integers(2, 9), seeds)
def test_obstruction_bound(c, m, seed):
    if not (m * c) ** 2 > m + 1:
        return
    inst = build_obstruction(c, m, seed)
    cert = obstruction_witness(inst)
    assert cert.value <= inst.bound + 1e-7
    assert np.linalg.eigvalsh(inst.D - inst.C)[0] < 0


finite = st.floats(-1e6, 1e6, allow_nan=False)


@SETTINGS
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_matrix_document_round_trip(rows, cols, data):
    entries = data.draw(st.lists(st.tuples(finite, finite), min_size=rows * cols, max_size=rows * cols))
    doc = {"kind": "matrix", "rows": rows, "cols": cols, "data": [list(e) for e in entries]}
    env = dio.parse_document(json.dumps(doc))
    again = dio.parse_document(dio.serialize(env))
    assert np.array_equal(env.payload, again.payload)
