"""Seeded random matrices and maps for sweeps and tests."""
from __future__ import annotations

import numpy as np

from .maps import SuperOperator, transpose_map


def rng_of(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_complex(rng, n: int, m: int = None) -> np.ndarray:
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def random_hermitian(rng, n: int) -> np.ndarray:
    g = random_complex(rng, n)
    return (g + g.conj().T) / 2


def random_psd(rng, n: int, rank: int = None) -> np.ndarray:
    g = random_complex(rng, n, n if rank is None else rank)
    return g @ g.conj().T


def random_unitary(rng, n: int) -> np.ndarray:
    q, r = np.linalg.qr(random_complex(rng, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_contraction(rng, n: int, m: int = None) -> np.ndarray:
    g = random_complex(rng, n, m)
    return g / max(np.linalg.norm(g, 2), 1e-300)


def random_cp_map(rng, n: int, m: int = None, terms: int = 2) -> SuperOperator:
    m = n if m is None else m
    return SuperOperator.from_kraus([random_complex(rng, m, n) / np.sqrt(n * m) for _ in range(terms)],
                                    name="random-cp")


def random_cocp_map(rng, n: int, terms: int = 2) -> SuperOperator:
    """CP map composed with the transpose."""
    return random_cp_map(rng, n, n, terms) @ transpose_map(n)


def random_positive_map(rng, n: int) -> SuperOperator:
    """One of: CP, co-CP, or their sum (all positive)."""
    kind = rng.integers(3)
    if kind == 0:
        return random_cp_map(rng, n)
    if kind == 1:
        return random_cocp_map(rng, n)
    return random_cp_map(rng, n) + random_cocp_map(rng, n)
