"""Parameters, bases and the matrix containers shared by every other module.

Two matrix representations are used throughout:

* :class:`SymTridiag` -- a real symmetric tridiagonal matrix stored as its
  diagonal and single off-diagonal. The coordinate operator of the fuzzy
  circle and every fixed-``m`` block of the fuzzy sphere live here.
* :class:`OperatorRep` -- a (dense or sparse) complex matrix over a labelled
  basis, used for the operator algebra checks.

Basis orderings are fixed conventions:

* circle: ``n = Λ, Λ-1, ..., -Λ`` (descending),
* sphere: pairs ``(m, l)`` in lexicographic order, ``m`` from ``-Λ`` to ``Λ``
  and ``l`` from ``|m|`` to ``Λ``, so each fixed-``m`` block is contiguous.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
import scipy.linalg
import scipy.sparse

ATOL = 1e-12


class SpaceKind(str, enum.Enum):
    CIRCLE = "circle"
    SPHERE = "sphere"
    MADORE = "madore"


class ParameterError(ValueError):
    """Raised for parameters outside the admissible range."""


def k_floor(lam: int) -> float:
    """Smallest admissible stiffness ``Λ²(Λ+1)²``."""
    return float(lam * lam * (lam + 1) * (lam + 1))


@dataclass(frozen=True)
class FuzzyParams:
    lam: int
    k: float | None
    kind: SpaceKind

    def __post_init__(self):
        if not isinstance(self.lam, (int, np.integer)) or self.lam < 1:
            raise ParameterError(f"cutoff must be an integer >= 1, got {self.lam!r}")
        if self.kind is SpaceKind.MADORE:
            if self.k is not None:
                raise ParameterError("the Madore sphere takes no stiffness k")
        else:
            if self.k is None or not np.isfinite(self.k):
                raise ParameterError("k must be a finite real")
            floor = k_floor(self.lam)
            # relative slack so that k computed as a float product still passes
            if self.k < floor * (1 - 1e-15):
                raise ParameterError(
                    f"k={self.k} violates k >= Λ²(Λ+1)² = {floor:g} for Λ={self.lam}"
                )

    @property
    def dim(self) -> int:
        if self.kind is SpaceKind.SPHERE:
            return (self.lam + 1) ** 2
        return 2 * self.lam + 1


def make_params(lam: int, k: float | None = None, kind: SpaceKind | str = SpaceKind.CIRCLE) -> FuzzyParams:
    """Build validated parameters, defaulting ``k`` to the floor ``Λ²(Λ+1)²``."""
    kind = SpaceKind(kind)
    if kind is not SpaceKind.MADORE and k is None:
        if isinstance(lam, (int, np.integer)) and lam >= 1:
            k = k_floor(int(lam))
    if k is not None:
        k = float(k)
    return FuzzyParams(int(lam) if isinstance(lam, (int, np.integer)) else lam, k, kind)


@dataclass(frozen=True, eq=False)
class SymTridiag:
    """Real symmetric tridiagonal matrix ``(diag, offdiag)``."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.array(self.diag, dtype=float).ravel()
        e = np.array(self.offdiag, dtype=float).ravel()
        if d.size < 1:
            raise ValueError("empty matrix")
        if e.size != d.size - 1:
            raise ValueError(f"offdiag must have length {d.size - 1}, got {e.size}")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("matrix entries must be finite")
        d.flags.writeable = False
        e.flags.writeable = False
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @classmethod
    def toeplitz(cls, n: int, a: float, b: float) -> "SymTridiag":
        """Symmetric Toeplitz matrix ``P_n(a, b, b)``."""
        return cls(np.full(n, float(a)), np.full(n - 1, float(b)))

    @property
    def n(self) -> int:
        return self.diag.size

    def leading(self, size: int) -> "SymTridiag":
        """Leading principal submatrix of the given size."""
        if not 1 <= size <= self.n:
            raise ValueError(f"size {size} outside 1..{self.n}")
        return SymTridiag(self.diag[:size], self.offdiag[: size - 1])

    def scaled(self, factor: float) -> "SymTridiag":
        return SymTridiag(self.diag * factor, self.offdiag * factor)

    def to_dense(self) -> np.ndarray:
        out = np.diag(self.diag)
        if self.n > 1:
            i = np.arange(self.n - 1)
            out[i, i + 1] = self.offdiag
            out[i + 1, i] = self.offdiag
        return out

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out

    def __eq__(self, other):
        if not isinstance(other, SymTridiag):
            return NotImplemented
        return np.array_equal(self.diag, other.diag) and np.array_equal(self.offdiag, other.offdiag)

    __hash__ = None


def circle_basis(lam: int) -> tuple[int, ...]:
    return tuple(range(lam, -lam - 1, -1))


def sphere_basis(lam: int) -> tuple[tuple[int, int], ...]:
    return tuple((m, l) for m in range(-lam, lam + 1) for l in range(abs(m), lam + 1))


@dataclass(frozen=True, eq=False)
class OperatorRep:
    """Operator matrix over an ordered basis of labels.

    ``entries`` is a dense complex array, or a ``scipy.sparse`` matrix for
    the large-cutoff builds where a dense matrix would not fit.
    """

    basis: tuple
    entries: Union[np.ndarray, scipy.sparse.spmatrix]

    def __post_init__(self):
        shape = self.entries.shape
        if shape != (len(self.basis), len(self.basis)):
            raise ValueError(f"entries shape {shape} does not match basis size {len(self.basis)}")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_sparse(self) -> bool:
        return scipy.sparse.issparse(self.entries)

    def dense(self) -> np.ndarray:
        if self.is_sparse:
            return self.entries.toarray()
        return np.asarray(self.entries)

    def index(self, label) -> int:
        return self.basis.index(label)

    def block(self, labels: Sequence) -> np.ndarray:
        """Dense sub-matrix on the given basis labels (rows and columns)."""
        pos = {b: i for i, b in enumerate(self.basis)}
        idx = np.array([pos[lab] for lab in labels])
        return self.dense()[np.ix_(idx, idx)]

    def __matmul__(self, other: "OperatorRep") -> "OperatorRep":
        return OperatorRep(self.basis, self.entries @ other.entries)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues sorted in descending order."""

    values: np.ndarray
    min_gap: float = field(init=False)

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float).ravel())[::-1].copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        gap = float(np.min(v[:-1] - v[1:])) if v.size > 1 else float("inf")
        object.__setattr__(self, "min_gap", gap)

    def __len__(self):
        return self.values.size

    @property
    def top(self) -> float:
        return float(self.values[0])

    def is_simple(self, tol: float = 0.0) -> bool:
        return self.min_gap > tol


@dataclass(frozen=True, eq=False)
class StateVector:
    coefficients: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex).ravel().copy()
        if self.normalized:
            nrm = np.linalg.norm(c)
            if nrm == 0:
                raise ValueError("cannot normalize the zero vector")
            c /= nrm
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def __len__(self):
        return self.coefficients.size


def spectral_norm(m: SymTridiag | OperatorRep | np.ndarray) -> float:
    """Largest singular value.

    Tridiagonal input goes through LAPACK's tridiagonal eigensolver, which
    keeps this independent of the bisection solver in :mod:`.eigen`.
    """
    if isinstance(m, SymTridiag):
        if m.n == 1:
            return float(abs(m.diag[0]))
        w = scipy.linalg.eigvalsh_tridiagonal(m.diag, m.offdiag)
        return float(max(abs(w[0]), abs(w[-1])))
    a = m.dense() if isinstance(m, OperatorRep) else np.asarray(m)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return float(np.linalg.norm(a, 2))


def entrywise_dominates(a: SymTridiag, b: SymTridiag) -> bool:
    """True iff ``0 <= a_ij <= b_ij`` for all entries (``a`` below ``b``)."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    for t in (a, b):
        if np.any(t.diag < 0) or np.any(t.offdiag < 0):
            raise ValueError("entrywise comparison requires nonnegative entries")
    return bool(np.all(a.diag <= b.diag) and np.all(a.offdiag <= b.offdiag))
