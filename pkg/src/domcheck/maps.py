"""Linear maps between matrix algebras.

Choi convention: ``J(T) = sum_ij E_ij (x) T(E_ij)`` with the input factor
first, so ``J[(i, k), (j, l)] = T(E_ij)[k, l]``. Kraus form is
``T(a) = sum_i K_i a K_i^*``.
"""
from __future__ import annotations

import functools
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .core import RANK_CUT, as_matrix, matrix_unit
from .errors import DimensionMismatch, SchemaError


class SuperOperator:
    """A linear map M_{dim_in} -> M_{dim_out}.

    Exactly one representation drives :meth:`apply`: a Kraus list, a Choi
    matrix, or a named builtin (whose formula is evaluated exactly). Sums,
    differences, scalar multiples and compositions are ``combination`` maps.
    """

    def __init__(self, dim_in: int, dim_out: int, representation: str, *,
                 kraus: Optional[Sequence[np.ndarray]] = None,
                 choi: Optional[np.ndarray] = None,
                 builtin: Optional[str] = None,
                 params: Optional[dict] = None,
                 func: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                 name: Optional[str] = None,
                 parts: tuple = ()):
        self.dim_in = int(dim_in)
        self.dim_out = int(dim_out)
        self.representation = representation
        self.kraus = None if kraus is None else [as_matrix(k) for k in kraus]
        self._choi = None if choi is None else as_matrix(choi)
        self.builtin = builtin
        self.params = dict(params or {})
        self._func = func
        self.name = name or builtin or representation
        # (coefficient, operator) pairs or ("compose", outer, inner)
        self.parts = parts
        if self.kraus is not None:
            for k in self.kraus:
                if k.shape != (self.dim_out, self.dim_in):
                    raise DimensionMismatch(
                        f"Kraus element of shape {k.shape}, expected {(self.dim_out, self.dim_in)}")
        if self._choi is not None and self._choi.shape != (self.dim_in * self.dim_out,) * 2:
            raise DimensionMismatch("Choi matrix has the wrong size")

    # construction -------------------------------------------------------

    @classmethod
    def from_kraus(cls, kraus: Iterable, name: str = "kraus") -> "SuperOperator":
        ks = [as_matrix(k) for k in kraus]
        if not ks:
            raise SchemaError("kraus", "empty Kraus list")
        dout, din = ks[0].shape
        return cls(din, dout, "kraus", kraus=ks, name=name)

    @classmethod
    def from_choi(cls, choi, dim_in: int, dim_out: int, name: str = "choi") -> "SuperOperator":
        return cls(dim_in, dim_out, "choi", choi=choi, name=name)

    # evaluation ---------------------------------------------------------

    def apply(self, a) -> np.ndarray:
        a = as_matrix(a)
        if a.shape != (self.dim_in, self.dim_in):
            raise DimensionMismatch(f"input of shape {a.shape}, map expects {self.dim_in}x{self.dim_in}")
        if self.representation == "kraus":
            out = np.zeros((self.dim_out, self.dim_out), dtype=complex)
            for k in self.kraus:
                out += k @ a @ k.conj().T
            return out
        if self.representation == "choi":
            j4 = self._choi.reshape(self.dim_in, self.dim_out, self.dim_in, self.dim_out)
            return np.einsum("ij,ikjl->kl", a, j4)
        return np.asarray(self._func(a), dtype=complex)

    __call__ = apply

    @functools.cached_property
    def choi(self) -> np.ndarray:
        if self._choi is not None:
            return self._choi
        n, m = self.dim_in, self.dim_out
        j = np.zeros((n * m, n * m), dtype=complex)
        for i in range(n):
            for k in range(n):
                j[i * m:(i + 1) * m, k * m:(k + 1) * m] = self.apply(matrix_unit(i, k, n))
        return j

    @property
    def dims(self) -> tuple[int, int]:
        return self.dim_in, self.dim_out

    def is_hermiticity_preserving(self, tol: float = 1e-10) -> bool:
        j = self.choi
        return float(np.max(np.abs(j - j.conj().T), initial=0.0)) <= tol * max(1.0, np.linalg.norm(j))

    def on_basis(self) -> list[np.ndarray]:
        """Images of the matrix units E_ij, row-major in (i, j)."""
        n = self.dim_in
        return [self.apply(matrix_unit(i, j, n)) for i in range(n) for j in range(n)]

    # algebra ------------------------------------------------------------

    def _check_same_shape(self, other: "SuperOperator"):
        if self.dims != other.dims:
            raise DimensionMismatch(f"maps of shape {self.dims} and {other.dims}")

    def linear_combination(self, coef_self: complex, other: "SuperOperator",
                           coef_other: complex, name: Optional[str] = None) -> "SuperOperator":
        self._check_same_shape(other)
        return SuperOperator(
            self.dim_in, self.dim_out, "combination",
            func=lambda a: coef_self * self.apply(a) + coef_other * other.apply(a),
            name=name or f"({coef_self}*{self.name} + {coef_other}*{other.name})",
            parts=((coef_self, self), (coef_other, other)))

    def __add__(self, other):
        return self.linear_combination(1.0, other, 1.0, name=f"({self.name} + {other.name})")

    def __sub__(self, other):
        return self.linear_combination(1.0, other, -1.0, name=f"({self.name} - {other.name})")

    def __mul__(self, c):
        c = complex(c) if np.iscomplexobj(c) else float(c)
        return SuperOperator(self.dim_in, self.dim_out, "combination",
                             func=lambda a: c * self.apply(a),
                             name=f"{c}*{self.name}", parts=((c, self),))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def compose(self, inner: "SuperOperator") -> "SuperOperator":
        """self after inner."""
        if inner.dim_out != self.dim_in:
            raise DimensionMismatch("composition dimension mismatch")
        return SuperOperator(inner.dim_in, self.dim_out, "combination",
                             func=lambda a: self.apply(inner.apply(a)),
                             name=f"{self.name}.{inner.name}",
                             parts=(("compose", self, inner),))

    def __matmul__(self, inner):
        return self.compose(inner)

    def __pow__(self, k: int):
        if self.dim_in != self.dim_out or k < 1:
            raise ValueError("powers need a square map and k >= 1")
        out = self
        for _ in range(k - 1):
            out = out.compose(self)
        return out

    def __repr__(self):
        return f"SuperOperator({self.name!r}, {self.dim_in}->{self.dim_out}, {self.representation})"

    def describe(self) -> dict:
        """JSON-ready description used by documents and reports."""
        if self.representation == "builtin":
            return {"builtin": self.builtin, "params": _jsonable(self.params)}
        if self.representation == "kraus":
            return {"kraus": [{"rows": k.shape[0], "cols": k.shape[1], "data": _complex_grid(k)}
                              for k in self.kraus]}
        return {"choi": {"rows": self.choi.shape[0], "cols": self.choi.shape[1],
                         "data": _complex_grid(self.choi)}}


def _complex_grid(m: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(m, dtype=complex).ravel()]


def _jsonable(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if isinstance(v, np.ndarray):
            out[k] = {"rows": v.shape[0], "cols": v.shape[1], "data": _complex_grid(v)}
        else:
            out[k] = v
    return out


# builtins ---------------------------------------------------------------

def _builtin(name: str, dim_in: int, dim_out: int, func, **params) -> SuperOperator:
    return SuperOperator(dim_in, dim_out, "builtin", builtin=name, params=params, func=func)


def identity_map(n: int) -> SuperOperator:
    return _builtin("identity", n, n, lambda a: a.copy(), n=n)


def zero_map(n: int, m: Optional[int] = None) -> SuperOperator:
    m = n if m is None else m
    return _builtin("zero", n, m, lambda a: np.zeros((m, m), dtype=complex), n=n, m=m)


def transpose_map(n: int) -> SuperOperator:
    return _builtin("transpose", n, n, lambda a: a.T.copy(), n=n)


def trace_times_identity(n: int) -> SuperOperator:
    """a -> trace(a) * 1."""
    return _builtin("trace_times_identity", n, n,
                    lambda a: np.trace(a) * np.eye(n, dtype=complex), n=n)


def conjugation_map(u) -> SuperOperator:
    """a -> u a u*."""
    u = as_matrix(u)
    return _builtin("conjugation", u.shape[1], u.shape[0],
                    lambda a: u @ a @ u.conj().T, u=u)


def multiplication_operator(x) -> SuperOperator:
    """M_x : a -> x* a x, a completely positive map with the single Kraus element x*."""
    x = as_matrix(x)
    if x.shape[0] != x.shape[1]:
        raise DimensionMismatch("M_x needs a square x")
    return SuperOperator.from_kraus([x.conj().T], name="multiplication")


def symmetrization_map(n: int) -> SuperOperator:
    """a -> (a + a^t) / 2."""
    return _builtin("symmetrization", n, n, lambda a: (a + a.T) / 2, n=n)


def stormer_U(n: int = 3) -> SuperOperator:
    """Keep the diagonal, negate every off-diagonal entry."""
    def f(a):
        return 2 * np.diag(np.diag(a)) - a
    return _builtin("stormer_U", n, n, f, n=n)


def stormer_V(n: int = 3) -> SuperOperator:
    """diag(a) cyclically shifted: (a_{n-1,n-1}, a_00, a_11, ...)."""
    def f(a):
        return np.diag(np.roll(np.diag(a), 1)).astype(complex)
    return _builtin("stormer_V", n, n, f, n=n)


def stormer_W(n: int = 3) -> SuperOperator:
    """Diagonal compression a -> diag(a)."""
    return _builtin("stormer_W", n, n, lambda a: np.diag(np.diag(a)).astype(complex), n=n)


def schur_map(phi) -> SuperOperator:
    """Entrywise multiplication by the symbol grid phi."""
    phi = as_matrix(phi)
    if phi.shape[0] != phi.shape[1]:
        raise DimensionMismatch("Schur symbol must be square")
    n = phi.shape[0]
    return _builtin("schur", n, n, lambda a: phi * a, phi=phi)


BUILTINS = {
    "identity": identity_map,
    "zero": zero_map,
    "transpose": transpose_map,
    "trace_times_identity": trace_times_identity,
    "conjugation": conjugation_map,
    "symmetrization": symmetrization_map,
    "stormer_U": stormer_U,
    "stormer_V": stormer_V,
    "stormer_W": stormer_W,
    "schur": schur_map,
}


def make_builtin(name: str, dim: Optional[int] = None, **params) -> SuperOperator:
    """Instantiate a builtin by name; matrix-valued params are numpy arrays."""
    if name not in BUILTINS:
        raise SchemaError("repr.builtin", f"unknown builtin {name!r}; known: {sorted(BUILTINS)}")
    if name == "conjugation":
        return conjugation_map(params["u"])
    if name == "schur":
        return schur_map(params["phi"])
    n = params.get("n", dim)
    if n is None:
        raise SchemaError("dim_in", f"builtin {name!r} needs a dimension")
    if name == "zero":
        return zero_map(int(n), int(params.get("m", n)))
    return BUILTINS[name](int(n))


def kraus_to_choi(kraus: Sequence[np.ndarray]) -> np.ndarray:
    """Choi matrix of a -> sum K a K*."""
    ks = [as_matrix(k) for k in kraus]
    vecs = [k.T.reshape(-1) for k in ks]  # index (i, k) -> K[k, i]
    return sum(np.outer(v, v.conj()) for v in vecs)


def choi_to_kraus(choi, dim_in: int, dim_out: int) -> list[np.ndarray]:
    """Kraus elements from the eigen-decomposition of a PSD Choi matrix."""
    j = as_matrix(choi)
    w, v = np.linalg.eigh((j + j.conj().T) / 2)
    top = max(float(w[-1]), 0.0)
    out = []
    for lam, vec in zip(w[::-1], v[:, ::-1].T):
        if lam <= RANK_CUT * top or lam <= 0:
            break
        out.append(np.sqrt(lam) * vec.reshape(dim_in, dim_out).T)
    return out
