"""Operators of the O(2)-covariant fuzzy circle.

Basis ``ψ_Λ, ψ_{Λ-1}, ..., ψ_{-Λ}`` (index ``i`` holds ``n = Λ - i``), with

    x₊ψ_n = b_{n+1} ψ_{n+1},   x₋ψ_n = b_n ψ_{n-1},   Lψ_n = n ψ_n,
    b_n = √(1 + n(n-1)/k)  for 1-Λ <= n <= Λ,  0 otherwise,

and ``x₁ = (x₊ + x₋)/2``, ``x₂ = (x₊ - x₋)/(2i)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.sparse

from .core import FuzzyParams, OperatorRep, SpaceKind, SymTridiag, circle_basis, spectral_norm


def _require_circle(p: FuzzyParams) -> None:
    if p.kind is not SpaceKind.CIRCLE:
        raise ValueError(f"expected circle parameters, got {p.kind.value}")


@dataclass(frozen=True, eq=False)
class CircleCoefficients:
    """``b_n`` for ``n = -Λ..Λ+1`` (boundary zeros stored explicitly)."""

    lam: int
    values: np.ndarray

    def __call__(self, n: int) -> float:
        if -self.lam <= n <= self.lam + 1:
            return float(self.values[n + self.lam])
        return 0.0

    @property
    def n_range(self) -> np.ndarray:
        return np.arange(-self.lam, self.lam + 2)


def circle_coefficients(p: FuzzyParams) -> CircleCoefficients:
    _require_circle(p)
    lam = p.lam
    n = np.arange(-lam, lam + 2, dtype=float)
    b = np.sqrt(1.0 + n * (n - 1.0) / p.k)
    b[0] = 0.0  # n = -Λ
    b[-1] = 0.0  # n = Λ+1
    b.flags.writeable = False
    return CircleCoefficients(lam, b)


def build_x1(p: FuzzyParams) -> SymTridiag:
    """Tridiagonal matrix of ``x₁``: zero diagonal, off-diagonal ``b_Λ/2, ..., b_{1-Λ}/2``."""
    coef = circle_coefficients(p)
    lam = p.lam
    # b_n for n = Λ down to 1-Λ sits at offsets n + Λ
    off = coef.values[2 * lam : 0 : -1] / 2.0
    return SymTridiag(np.zeros(2 * lam + 1), off)


class CircleOperators(NamedTuple):
    x_plus: OperatorRep
    x_minus: OperatorRep
    L: OperatorRep

    @property
    def x1(self) -> OperatorRep:
        return OperatorRep(self.x_plus.basis, (self.x_plus.entries + self.x_minus.entries) / 2)

    @property
    def x2(self) -> OperatorRep:
        return OperatorRep(self.x_plus.basis, (self.x_plus.entries - self.x_minus.entries) / 2j)


def build_circle_operators(p: FuzzyParams, sparse: bool = False) -> CircleOperators:
    coef = circle_coefficients(p)
    lam = p.lam
    basis = circle_basis(lam)
    dim = len(basis)
    # x₊ maps ψ_n (index Λ-n) to ψ_{n+1} (index Λ-n-1): superdiagonal b_{n+1}
    sup = np.array([coef(n + 1) for n in basis[1:]], dtype=complex)
    xp = scipy.sparse.diags(sup, 1, shape=(dim, dim), format="csr", dtype=complex)
    xm = xp.conj().T.tocsr()
    L = scipy.sparse.diags(np.array(basis, dtype=complex), 0, format="csr")
    if not sparse:
        xp, xm, L = xp.toarray(), xm.toarray(), L.toarray()
    return CircleOperators(OperatorRep(basis, xp), OperatorRep(basis, xm), OperatorRep(basis, L))


def circle_x_squared(p: FuzzyParams) -> np.ndarray:
    """Diagonal of ``x² = 1 + L²/k - (1 + Λ(Λ+1)/k)(P̃_Λ + P̃_{-Λ})/2``."""
    _require_circle(p)
    n = np.array(circle_basis(p.lam), dtype=float)
    out = 1.0 + n**2 / p.k
    edge = 1.0 + p.lam * (p.lam + 1) / p.k
    out[0] -= edge / 2
    out[-1] -= edge / 2
    return out


def circle_algebra_residuals(p: FuzzyParams) -> dict[str, float]:
    """Spectral-norm residuals of the O(2)-equivariant relations.

    Every value should vanish up to rounding. The two ``*_power`` entries are
    exact: the powers are compared entrywise against zero and reported as
    0.0 or inf.
    """
    ops = build_circle_operators(p)
    xp, xm, L = ops.x_plus.entries, ops.x_minus.entries, ops.L.entries
    lam, k = p.lam, p.k
    dim = xp.shape[0]
    eye = np.eye(dim)
    P_top = np.zeros((dim, dim))
    P_top[0, 0] = 1.0
    P_bot = np.zeros((dim, dim))
    P_bot[-1, -1] = 1.0
    edge = 1.0 + lam * (lam + 1) / k
    x1, x2 = ops.x1.entries, ops.x2.entries
    xsq = x1 @ x1 + x2 @ x2

    prod = eye.astype(complex)
    for m in range(-lam, lam + 1):
        prod = prod @ (L - m * eye)

    def _power_is_zero(a):
        return 0.0 if not np.any(np.linalg.matrix_power(a, 2 * lam + 1)) else float("inf")

    return {
        "L_xplus": spectral_norm(L @ xp - xp @ L - xp),
        "L_xminus": spectral_norm(L @ xm - xm @ L + xm),
        "xplus_adjoint": spectral_norm(xp.conj().T - xm),
        "L_hermitian": spectral_norm(L.conj().T - L),
        "xplus_xminus": spectral_norm(xp @ xm - xm @ xp + 2 * L / k - edge * (P_top - P_bot)),
        "x_squared": spectral_norm(xsq - eye - (L @ L) / k + edge * (P_top + P_bot) / 2),
        "x_squared_sum_form": spectral_norm(xsq - (xp @ xm + xm @ xp) / 2),
        "L_spectrum_product": spectral_norm(prod),
        "xplus_power": _power_is_zero(xp),
        "xminus_power": _power_is_zero(xm),
    }
