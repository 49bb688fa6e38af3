"""Finite-dimensional complex Hilbert-space arithmetic.

States are dense complex vectors, operators dense complex matrices.
Tensor products use Kronecker ordering with the first factor major
(``tensor_product(a, b)`` indexes ``i_a * b.dim + i_b``), consistently
everywhere in the package.  Global phase is never canonicalized; use
:func:`fidelity` for phase-insensitive comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import DimensionMismatchError

#: Default absolute tolerance for all numeric checks (double precision on
#: dims up to ~1e3).
DEFAULT_ATOL = 1e-10


def max_abs(values: np.ndarray) -> float:
    """Max-norm of an array, 0.0 for empty input."""
    arr = np.asarray(values)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def _frozen_complex_array(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Ket:
    """Normalized-or-near state vector in a labeled Hilbert space.

    Amplitudes are dimensionless; the constructor does not normalize,
    call :meth:`normalize` to enforce unit norm.
    """

    amplitudes: np.ndarray
    space_label: str = "H"

    def __post_init__(self) -> None:
        object.__setattr__(self, "amplitudes", _frozen_complex_array(self.amplitudes, 1))
        if self.dim < 1:
            raise ValueError("a Ket needs at least one amplitude")

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self, atol: float = DEFAULT_ATOL) -> "Ket":
        """Return a unit-norm copy; error on (near-)zero vectors."""
        n = self.norm
        if n < atol:
            raise ValueError("cannot normalize a zero vector")
        return Ket(self.amplitudes / n, self.space_label)

    def isclose(self, other: "Ket", atol: float = DEFAULT_ATOL) -> bool:
        """Entrywise comparison, phase-sensitive."""
        if self.dim != other.dim:
            return False
        return max_abs(self.amplitudes - other.amplitudes) <= atol

    @classmethod
    def basis_state(cls, dim: int, index: int, space_label: str = "H") -> "Ket":
        if not 0 <= index < dim:
            raise ValueError(f"basis index {index} out of range for dim {dim}")
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1.0
        return cls(amps, space_label)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Ket({self.space_label!r}, dim={self.dim}, {np.array2string(self.amplitudes, precision=4)})"


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense complex matrix with optional unitarity/hermiticity guarantees.

    Flagged properties are verified at construction within ``atol``.
    """

    entries: np.ndarray
    unitary: bool = False
    hermitian: bool = False
    atol: float = field(default=DEFAULT_ATOL, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _frozen_complex_array(self.entries, 2))
        if self.unitary and self.deviation_from_unitarity() >= self.atol:
            raise ValueError(
                f"matrix flagged unitary but ||M^dag M - I||_max = {self.deviation_from_unitarity():.3e}"
            )
        if self.hermitian and self.deviation_from_hermiticity() >= self.atol:
            raise ValueError(
                f"matrix flagged hermitian but ||M - M^dag||_max = {self.deviation_from_hermiticity():.3e}"
            )

    @property
    def dim_out(self) -> int:
        return self.entries.shape[0]

    @property
    def dim_in(self) -> int:
        return self.entries.shape[1]

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, unitary=self.unitary, hermitian=self.hermitian)

    def deviation_from_unitarity(self) -> float:
        if self.dim_out != self.dim_in:
            return float("inf")
        eye = np.eye(self.dim_in)
        return max_abs(self.entries.conj().T @ self.entries - eye)

    def deviation_from_hermiticity(self) -> float:
        if self.dim_out != self.dim_in:
            return float("inf")
        return max_abs(self.entries - self.entries.conj().T)

    @classmethod
    def identity(cls, dim: int) -> "OperatorMatrix":
        return cls(np.eye(dim, dtype=complex), unitary=True, hermitian=True)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix (all within atol)."""

    entries: np.ndarray
    atol: float = field(default=DEFAULT_ATOL, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _frozen_complex_array(self.entries, 2))
        if self.entries.shape[0] != self.entries.shape[1]:
            raise ValueError("density matrix must be square")
        if max_abs(self.entries - self.entries.conj().T) >= self.atol:
            raise ValueError("density matrix is not hermitian within tolerance")
        if abs(np.trace(self.entries) - 1.0) >= self.atol:
            raise ValueError(f"density matrix trace {np.trace(self.entries):.6g} != 1")
        eigenvalues = np.linalg.eigvalsh(self.entries)
        if eigenvalues.min() < -self.atol:
            raise ValueError(f"density matrix has negative eigenvalue {eigenvalues.min():.3e}")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_ket(cls, ket: Ket, atol: float = DEFAULT_ATOL) -> "DensityMatrix":
        v = ket.normalize(atol).amplitudes
        return cls(np.outer(v, v.conj()), atol=atol)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)


def tensor_product(a: Ket, b: Ket) -> Ket:
    """Kronecker product of two kets, first factor major; norm multiplies."""
    return Ket(np.kron(a.amplitudes, b.amplitudes), f"{a.space_label}*{b.space_label}")


def inner_product(a: Ket, b: Ket) -> complex:
    """<a|b> with conjugation on the first argument."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"inner product between dims {a.dim} and {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: Ket, b: Ket) -> float:
    """|<a|b>|^2, invariant under global phase of either argument."""
    return abs(inner_product(a, b)) ** 2


def apply(m: OperatorMatrix, k: Ket) -> Ket:
    """Matrix-vector product; unitary operators preserve the norm."""
    if m.dim_in != k.dim:
        raise DimensionMismatchError(f"operator expects dim {m.dim_in}, ket has dim {k.dim}")
    return Ket(m.entries @ k.amplitudes, k.space_label)


def partial_trace(
    rho: DensityMatrix, dims: tuple[int, int], keep: str, atol: float = DEFAULT_ATOL
) -> DensityMatrix:
    """Reduced density matrix over subsystem ``keep`` ("A" or "B").

    ``dims = (d_A, d_B)`` must factor ``rho.dim`` with A the major
    (first) tensor factor.
    """
    d_a, d_b = dims
    if d_a < 1 or d_b < 1 or d_a * d_b != rho.dim:
        raise DimensionMismatchError(f"dims {dims} do not factor density matrix of dim {rho.dim}")
    if keep not in ("A", "B"):
        raise ValueError("keep must be 'A' or 'B'")
    blocks = rho.entries.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        reduced = np.einsum("ijkj->ik", blocks)
    else:
        reduced = np.einsum("ijil->jl", blocks)
    return DensityMatrix(reduced, atol=atol)


def random_ket(dim: int, rng: np.random.Generator, space_label: str = "H") -> Ket:
    """Seeded random state: draw a real Gaussian vector, then an imaginary
    Gaussian vector (two consecutive ``standard_normal(dim)`` calls), then
    normalize.  This exact draw order is the reproducibility contract for
    seeded experiment fixtures.
    """
    real = rng.standard_normal(dim)
    imag = rng.standard_normal(dim)
    return Ket(real + 1j * imag, space_label).normalize()


def gram_matrix(kets: Iterable[Ket]) -> np.ndarray:
    """Matrix of pairwise inner products <k_i|k_j>."""
    vectors = [k.amplitudes for k in kets]
    stacked = np.array(vectors)
    return stacked.conj() @ stacked.T
