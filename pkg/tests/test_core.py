import numpy as np
import pytest

from domcheck.core import (DEFAULT_CONFIG, ToleranceConfig, eig_hermitian, frobenius_norm, is_hermitian,
                           is_psd, jacobi_eigh, matrix_unit, operator_norm, partial_transpose,
                           pseudo_inverse_root, require_hermitian, spectral_power, support_projection,
                           trace)
from domcheck.errors import NotHermitian, NotPSD

from conftest import rand_herm, rand_psd


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eig_examples(method):
    assert np.allclose(eig_hermitian(np.diag([3.0, -4.0]), method=method).eigenvalues, [3, -4])
    assert np.allclose(eig_hermitian(np.eye(3), method=method).eigenvalues, [1, 1, 1])
    assert np.allclose(eig_hermitian([[0, 1], [1, 0]], method=method).eigenvalues, [1, -1])


def test_jacobi_against_lapack(rng):
    for n in (1, 2, 5, 16):
        for _ in range(10):
            a = rand_herm(rng, n)
            dec = jacobi_eigh(a)
            assert np.allclose(dec.eigenvalues, np.linalg.eigvalsh(a)[::-1], atol=1e-9)
            q = dec.eigenvectors
            assert np.linalg.norm(q.conj().T @ q - np.eye(n)) <= 1e-10
            assert np.linalg.norm(a - dec.reconstruct()) <= 1e-9 * np.linalg.norm(a)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        eig_hermitian([[0, 1], [0, 0]])


def test_hermitian_tolerance_is_relative():
    a = np.array([[1.0, 1e-13], [0, 1]])
    assert is_hermitian(a)
    assert not is_hermitian(np.array([[1.0, 1e-6], [0, 1]]))
    assert np.allclose(require_hermitian(a), require_hermitian(a).conj().T)


def test_is_psd_examples():
    assert is_psd(np.eye(3))
    assert is_psd(np.zeros((2, 2)))
    chk = is_psd(np.diag([1.0, -0.5]))
    assert not chk
    v = chk.certificate.payload["vector"]
    assert np.isclose(abs(v[1]), 1.0)
    assert chk.certificate.value == pytest.approx(-0.5)


def test_is_psd_gram(rng):
    for _ in range(100):
        b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert is_psd(b.conj().T @ b)


def test_spectral_power_examples():
    assert np.allclose(spectral_power(np.diag([4.0, 9.0]), 0.5), np.diag([2, 3]))
    assert np.allclose(spectral_power(np.eye(3), 0.7), np.eye(3))
    assert np.allclose(spectral_power(np.diag([16.0]), 0.25), [[2]])
    with pytest.raises(NotPSD):
        spectral_power(np.diag([1.0, -1.0]), 0.5)


def test_spectral_power_round_trip(rng):
    for _ in range(20):
        a = rand_psd(rng, 5)
        assert np.linalg.norm(spectral_power(a, 1) - a) <= 1e-11 * np.linalg.norm(a)
        back = spectral_power(spectral_power(a, 0.5), 2)
        assert np.linalg.norm(back - a) <= 1e-8 * np.linalg.norm(a)


def test_pseudo_inverse_root_examples():
    assert np.allclose(pseudo_inverse_root(np.diag([4.0, 0.0]), 0.5), np.diag([0.5, 0]))
    assert np.allclose(pseudo_inverse_root(np.eye(2), 1), np.eye(2))
    assert np.allclose(pseudo_inverse_root(np.diag([9.0, 1.0]), 0.5), np.diag([1 / 3, 1]))


def test_support_projection():
    p = support_projection(np.diag([2.0, 0.0, 1e-14]))
    assert np.allclose(p, np.diag([1, 0, 0]))


def test_norms_and_trace():
    assert operator_norm(np.diag([3.0, -4.0])) == pytest.approx(4)
    assert trace(np.eye(3)) == 3
    assert frobenius_norm([[3, 4], [0, 0]]) == pytest.approx(5)


def test_partial_transpose_of_product():
    a = np.arange(4).reshape(2, 2) + 1j
    b = np.arange(9).reshape(3, 3) * 1.0
    x = np.kron(a, b)
    assert np.allclose(partial_transpose(x, (2, 3), 0), np.kron(a.T, b))
    assert np.allclose(partial_transpose(x, (2, 3), 1), np.kron(a, b.T))


def test_matrix_unit():
    e = matrix_unit(0, 1, 2)
    assert e[0, 1] == 1 and np.count_nonzero(e) == 1


def test_config_validation():
    with pytest.raises(ValueError):
        ToleranceConfig(tol_psd=0)
    assert DEFAULT_CONFIG.replace(seed=4).seed == 4
