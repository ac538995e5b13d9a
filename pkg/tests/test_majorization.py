import numpy as np
import pytest

from domcheck.errors import BadGauge, BadPartition, NotSubmajorized
from domcheck.majorization import (SingularSpectrum, mu_order_check, order_submajorization_check, pinch,
                                   singular_spectrum, submajorizes, symmetric_norm,
                                   transfer_certificate)

from conftest import rand_herm, rand_psd


def test_singular_spectrum_examples():
    assert np.allclose(singular_spectrum(np.diag([3.0, -4.0, 0.0])).values, [4, 3, 0])
    assert np.allclose(singular_spectrum(np.eye(3)).values, [1, 1, 1])
    assert np.allclose(singular_spectrum([[0, 2], [0, 0]]).values, [2, 0])


def test_singular_spectrum_matches_eig_of_gram(rng):
    for _ in range(20):
        x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        oracle = np.sqrt(np.clip(np.linalg.eigvalsh(x.conj().T @ x), 0, None))[::-1]
        assert np.allclose(singular_spectrum(x).values, oracle, atol=1e-9)


def test_spectrum_type_invariants():
    with pytest.raises(ValueError):
        SingularSpectrum(np.array([1.0, 2.0]), 2)
    assert len(SingularSpectrum.from_values([1, 3, 2])) == 3


def test_submajorizes_examples():
    assert submajorizes([2, 0], [1, 1])
    assert not submajorizes([1, 1], [2, 0])


def test_submajorizes_reflexive_transitive(rng):
    for _ in range(50):
        x, y, z = (np.sort(rng.uniform(0, 1, 5))[::-1] for _ in range(3))
        assert submajorizes(x, x)
        if submajorizes(x, y) and submajorizes(y, z):
            assert submajorizes(x, z)


def _assert_valid(d, x, y):
    e = d.entries
    assert np.all(e >= -1e-12)
    assert np.all(e.sum(0) <= 1 + 1e-7) and np.all(e.sum(1) <= 1 + 1e-7)
    assert np.allclose(e @ np.asarray(x, float), np.asarray(y, float), atol=1e-7)


def test_transfer_examples():
    d = transfer_certificate([2, 0], [1, 1])
    _assert_valid(d, [2, 0], [1, 1])
    assert np.allclose(transfer_certificate([3, 2, 1], [3, 2, 1]).entries, np.eye(3))
    _assert_valid(transfer_certificate([3, 1], [2, 1]), [3, 1], [2, 1])
    _assert_valid(transfer_certificate([1, 1, 1, 1], [0, 0, 0, 0]), [1, 1, 1, 1], [0, 0, 0, 0])
    with pytest.raises(NotSubmajorized):
        transfer_certificate([1, 1], [2, 0])


def test_transfer_random(rng):
    for _ in range(300):
        n = int(rng.integers(1, 7))
        x = np.sort(rng.uniform(0, 2, n))[::-1]
        y = np.sort(rng.uniform(0, 2, n))[::-1]
        if submajorizes(x, y):
            d = transfer_certificate(x, y)
            assert d.verify(x, y)
            _assert_valid(d, x, y)


def test_symmetric_norm_examples():
    assert symmetric_norm(np.eye(2), "schatten:2") == pytest.approx(np.sqrt(2))
    assert symmetric_norm(np.diag([3.0, 2, 1]), "kyfan:2") == pytest.approx(5)
    assert symmetric_norm(np.diag([3.0, 2, 1]), "schatten:inf") == pytest.approx(3)
    with pytest.raises(BadGauge):
        symmetric_norm(np.eye(2), "schatten:0.5")
    with pytest.raises(BadGauge):
        symmetric_norm(np.eye(2), "frobenius")


def test_trace_norm_against_sqrt_gram(rng):
    x = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    w, v = np.linalg.eigh(x.conj().T @ x)
    oracle = np.trace((v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T).real
    assert symmetric_norm(x, "schatten:1") == pytest.approx(oracle, rel=1e-9)


def test_pinch_examples(rng):
    out = pinch(np.ones((2, 2)), [[0], [1]])
    assert np.allclose(out, np.eye(2))
    assert submajorizes(singular_spectrum(np.ones((2, 2))), singular_spectrum(out))
    x = rand_psd(rng, 6)
    assert np.allclose(pinch(x, [list(range(6))]), x)
    y = pinch(x, [[0, 1], [2, 3], [4, 5]])
    assert submajorizes(singular_spectrum(x), singular_spectrum(y))
    with pytest.raises(BadPartition):
        pinch(x, [[0, 1], [1, 2, 3, 4, 5]])


def test_pinching_lowers_every_ky_fan_norm(rng):
    for _ in range(30):
        x = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        y = pinch(x, [[0, 3], [1], [2, 4]])
        for k in range(1, 6):
            assert symmetric_norm(y, f"kyfan:{k}") <= symmetric_norm(x, f"kyfan:{k}") + 1e-9


def test_mu_order_examples():
    assert mu_order_check(np.eye(2), np.diag([1.0, -1.0]))
    assert mu_order_check(np.zeros((2, 2)), np.zeros((2, 2)))
    assert not mu_order_check(np.eye(2), 2 * np.eye(2))  # order hypothesis fails


def test_mu_order_counterexample():
    # -a <= b <= a yet mu_b(1) > mu_a(1): pointwise comparison fails for indefinite b
    eps = 0.01
    a = np.diag([1.0, eps])
    b = np.array([[0, np.sqrt(eps)], [np.sqrt(eps), 0]])
    chk = mu_order_check(a, b)
    assert not chk
    assert chk.certificate.kind == "spectrum-violation"
    assert chk.certificate.payload["index"] == 1
    assert order_submajorization_check(a, b)


def test_order_submajorization_random(rng):
    for _ in range(200):
        n = int(rng.integers(1, 6))
        a = rand_psd(rng, n)
        h = rand_herm(rng, n)
        # scale h into the interval -a <= h <= a when a is invertible
        w, v = np.linalg.eigh(a)
        r = (v / np.sqrt(w)) @ v.conj().T
        k = r @ h @ r
        b = h / (np.linalg.norm(k, 2) * 1.000001)
        assert order_submajorization_check(a, b)
