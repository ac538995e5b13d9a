import numpy as np
import pytest

from domcheck.certificates import verify_certificate
from domcheck.core import Certificate, partial_transpose
from domcheck.errors import BadK, NotCP, NotHermiticityPreserving
from domcheck.hierarchy import (certificate_verifies, check_cp, check_decomposable, check_k_positive,
                                check_map, check_positive, dominates, kraus_from_choi)
from domcheck.maps import (SuperOperator, identity_map, multiplication_operator, stormer_U, stormer_V,
                           stormer_W, symmetrization_map, trace_times_identity, transpose_map)
from domcheck.sampling import random_cocp_map, random_cp_map


def test_check_cp_examples():
    assert check_cp(identity_map(3)).status == "certified"
    v = check_cp(transpose_map(2))
    assert v.status == "violated" and v.value == pytest.approx(-1)
    assert verify_certificate(v.certificate, transpose_map(2).choi)
    assert check_cp(trace_times_identity(2))


def test_check_positive_examples():
    v = check_positive(transpose_map(2))
    assert v.status == "certified"
    neg = -identity_map(2)
    v = check_positive(neg)
    assert v.status == "violated" and v.value < 0
    assert certificate_verifies(v, neg)
    v = check_positive(stormer_U() + stormer_V())
    assert v.holds and v.status == "heuristic"


def test_check_positive_without_structure_finds_transpose_positive():
    v = check_positive(transpose_map(2), use_structure=False)
    assert v.status == "heuristic" and v.value > -1e-9


def test_non_positive_combination_found_by_seesaw():
    t = transpose_map(3) - 0.5 * trace_times_identity(3)
    v = check_positive(t)
    assert v.status == "violated"
    assert certificate_verifies(v, t)


def test_k_positive_examples():
    v = check_k_positive(transpose_map(2), 2)
    assert v.status == "violated" and v.value == pytest.approx(-1, abs=1e-9)
    z = v.certificate.payload["vector"]
    # the witness is the antisymmetric vector (e_0 e_1 - e_1 e_0)/sqrt 2
    assert abs(abs(z[1]) - 1 / np.sqrt(2)) < 1e-9 and abs(z[1] + z[2]) < 1e-9
    for k in (1, 2, 3):
        assert check_k_positive(identity_map(3), k).status == "certified"
    v = check_k_positive(symmetrization_map(2), 2)
    assert v.value == pytest.approx(-0.5, abs=1e-9)
    with pytest.raises(BadK):
        check_k_positive(identity_map(2), 3)


def test_k_positive_intermediate_rank_uses_seesaw():
    v = check_k_positive(transpose_map(3), 2)
    assert v.status == "violated" and v.value == pytest.approx(-1, abs=1e-6)
    assert certificate_verifies(v, transpose_map(3))


def test_cp_implies_k_positive(rng):
    for _ in range(10):
        t = random_cp_map(rng, 3)
        for k in (1, 2, 3):
            assert check_k_positive(t, k).status == "certified"


def test_decomposable_examples():
    for t in (identity_map(2), transpose_map(3)):
        v = check_decomposable(t)
        assert v.status == "certified"
        assert certificate_verifies(v, t)


def test_decomposable_random_sum(rng):
    t = random_cp_map(rng, 2) + random_cocp_map(rng, 2)
    v = check_decomposable(t)
    assert v.status == "certified"
    a, b = v.certificate.payload["A"], v.certificate.payload["B"]
    j = t.choi
    assert np.linalg.norm(a + partial_transpose(b, (2, 2)) - j) <= 1e-7 * np.linalg.norm(j)


@pytest.mark.parametrize("mu", [1.0, 2.0])
def test_stormer_non_decomposable(mu):
    t = stormer_U() + mu * stormer_V()
    v = check_decomposable(t)
    assert v.status == "violated" and v.value < -1e-6
    assert certificate_verifies(v, t)


def test_tampered_certificate_fails():
    t = stormer_U() + stormer_V()
    v = check_decomposable(t)
    bad = Certificate("ppt-witness", {"rho": v.certificate.payload["rho"]}, value=v.value + 0.1)
    assert not verify_certificate(bad, t.choi, t.dims)


def test_dominates_examples():
    t, s = transpose_map(2), trace_times_identity(2)
    v = dominates(s, t, "complete")
    assert v.status == "certified" and v.label == "dominated (certified)"
    assert dominates(s, t, "positive").holds
    assert dominates(t, t, "complete").status == "certified"
    u, vv, w = stormer_U(), stormer_V(), stormer_W()
    assert dominates(vv + 2 * w, u + vv, "complete").holds
    assert dominates(t, s, "complete").status == "violated"


def test_kraus_from_choi():
    ks = kraus_from_choi(identity_map(2))
    assert len(ks) == 1
    k = ks[0]
    assert np.allclose(k / k[0, 0], np.eye(2))
    x = np.array([[1, 2], [0, 1j]])
    (k,) = kraus_from_choi(multiplication_operator(x))
    phase = k[0, 0] / x.conj().T[0, 0]
    assert np.allclose(k, phase * x.conj().T)
    ks = kraus_from_choi(trace_times_identity(2))
    assert len(ks) == 4
    a = np.array([[1, 2], [3, 4j]])
    assert np.allclose(sum(k @ a @ k.conj().T for k in ks), np.trace(a) * np.eye(2))
    with pytest.raises(NotCP):
        kraus_from_choi(transpose_map(2))


def test_check_map_dispatch():
    assert check_map(transpose_map(2), "kpositive:2").status == "violated"
    assert check_map(identity_map(2), "cp").holds
    with pytest.raises(ValueError):
        check_map(identity_map(2), "bogus")


def test_not_hermiticity_preserving():
    t = SuperOperator.from_kraus([np.eye(2)]) * 1j
    with pytest.raises(NotHermiticityPreserving):
        check_cp(t)
