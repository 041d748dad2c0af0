"""Operators of the O(3)-covariant fuzzy sphere.

Basis ``ψ_l^m`` with ``|m| <= l <= Λ``, ordered lexicographically in
``(m, l)`` so that the fixed-``m`` blocks of ``x₀`` are contiguous. The
coordinates act as

    x_a ψ_l^m = c_l A_l^{a,m} ψ_{l-1}^{m+a} + c_{l+1} B_l^{a,m} ψ_{l+1}^{m+a},

with ``a ∈ {0, +, -}``, ``c_l = √(1 + l²/k)`` for ``1 <= l <= Λ`` and
``c_0 = c_{Λ+1} = 0``. The raising coefficients are fixed by hermiticity,
``B_l^{a,m} = A_{l+1}^{-a,m+a}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.sparse

from .core import FuzzyParams, OperatorRep, SpaceKind, SymTridiag, sphere_basis, spectral_norm

SQRT2 = math.sqrt(2.0)


class AlgebraError(RuntimeError):
    """A computed operator fails a structural relation."""


def _require_sphere(p: FuzzyParams) -> None:
    if p.kind is not SpaceKind.SPHERE:
        raise ValueError(f"expected sphere parameters, got {p.kind.value}")


def clebsch_A(a: int, l: int, m: int) -> float:
    """``A_l^{a,m}`` for ``a`` in {0, +1, -1}; zero outside ``|m| <= l``, ``l >= 1``."""
    if l < 1 or abs(m) > l:
        return 0.0
    den = (2 * l + 1) * (2 * l - 1)
    if a == 0:
        return math.sqrt((l + m) * (l - m) / den)
    s = 1 if a > 0 else -1
    return s / SQRT2 * math.sqrt((l - s * m) * (l - s * m - 1) / den)


def clebsch_B(a: int, l: int, m: int) -> float:
    """``B_l^{a,m} = A_{l+1}^{-a,m+a}``."""
    return clebsch_A(-a, l + 1, m + a)


@dataclass(frozen=True, eq=False)
class SphereCoefficients:
    """``c_l`` for ``l = 0..Λ+1`` and ``A_l^{a,m}`` tables indexed ``[l, m + Λ]``."""

    lam: int
    c: np.ndarray
    A0: np.ndarray
    Aplus: np.ndarray
    Aminus: np.ndarray

    def A(self, a: int, l: int, m: int) -> float:
        if not (0 <= l <= self.lam and abs(m) <= l):
            return clebsch_A(a, l, m)
        table = {0: self.A0, 1: self.Aplus, -1: self.Aminus}[a]
        return float(table[l, m + self.lam])

    def B(self, a: int, l: int, m: int) -> float:
        return self.A(-a, l + 1, m + a)


def sphere_coefficients(p: FuzzyParams) -> SphereCoefficients:
    _require_sphere(p)
    lam = p.lam
    l = np.arange(lam + 2, dtype=float)
    c = np.sqrt(1.0 + l**2 / p.k)
    c[0] = 0.0
    c[-1] = 0.0
    tables = []
    for a in (0, 1, -1):
        t = np.zeros((lam + 1, 2 * lam + 1))
        for ll in range(lam + 1):
            for m in range(-ll, ll + 1):
                t[ll, m + lam] = clebsch_A(a, ll, m)
        t.flags.writeable = False
        tables.append(t)
    c.flags.writeable = False
    return SphereCoefficients(lam, c, *tables)


def build_Bm(p: FuzzyParams, m: int) -> SymTridiag:
    """Block of ``x₀`` at ``L₃ = m``: size ``Λ-|m|+1``, off-diagonal ``c_l A_l^{0,m}``."""
    _require_sphere(p)
    lam = p.lam
    if abs(m) > lam:
        raise ValueError(f"|m| = {abs(m)} exceeds the cutoff {lam}")
    am = abs(m)
    l = np.arange(am + 1, lam + 1, dtype=float)
    off = np.sqrt(1.0 + l**2 / p.k) * np.sqrt((l + am) * (l - am) / ((2 * l + 1) * (2 * l - 1)))
    return SymTridiag(np.zeros(lam - am + 1), off)


def block_family(p: FuzzyParams) -> dict[int, SymTridiag]:
    return {m: build_Bm(p, m) for m in range(-p.lam, p.lam + 1)}


class SphereOperators(NamedTuple):
    x0: OperatorRep
    x_plus: OperatorRep
    x_minus: OperatorRep
    L3: OperatorRep
    L_plus: OperatorRep
    L_minus: OperatorRep
    Lsq: OperatorRep

    def cartesian(self):
        """``(x₁, x₂, x₃), (L₁, L₂, L₃)`` as raw matrices."""
        xp, xm = self.x_plus.entries, self.x_minus.entries
        lp, lm = self.L_plus.entries, self.L_minus.entries
        x = ((xp + xm) / SQRT2, (xp - xm) / (1j * SQRT2), self.x0.entries)
        L = ((lp + lm) / SQRT2, (lp - lm) / (1j * SQRT2), self.L3.entries)
        return x, L


def _clebsch_A_array(a: int, l: np.ndarray, m: np.ndarray) -> np.ndarray:
    l = l.astype(float)
    m = m.astype(float)
    valid = (l >= 1) & (np.abs(m) <= l)
    den = np.where(valid, (2 * l + 1) * (2 * l - 1), 1.0)
    if a == 0:
        num = (l + m) * (l - m)
        sign = 1.0
    else:
        sign = 1.0 if a > 0 else -1.0
        num = (l - sign * m) * (l - sign * m - 1)
    out = sign / (SQRT2 if a else 1.0) * np.sqrt(np.where(valid, np.maximum(num, 0.0), 0.0) / den)
    return np.where(valid, out, 0.0)


def _sphere_index(lam: int, m: np.ndarray, l: np.ndarray) -> np.ndarray:
    """Position of ``(m, l)`` in the lexicographic basis; -1 where out of range."""
    sizes = lam - np.abs(np.arange(-lam, lam + 1)) + 1
    offsets = np.concatenate(([0], np.cumsum(sizes)[:-1]))
    ok = (np.abs(m) <= l) & (l <= lam) & (l >= 0)
    out = np.full(m.shape, -1, dtype=np.int64)
    out[ok] = offsets[m[ok] + lam] + l[ok] - np.abs(m[ok])
    return out


def build_sphere_operators(p: FuzzyParams, sparse: bool = False) -> SphereOperators:
    """All sphere operators over the ``(m, l)`` basis.

    ``sparse=True`` returns CSR matrices, needed well before Λ reaches the
    hundreds; dense output is meant for the algebra checks at small Λ.
    """
    _require_sphere(p)
    lam = p.lam
    basis = sphere_basis(lam)
    dim = len(basis)
    M = np.array([b[0] for b in basis], dtype=np.int64)
    Lv = np.array([b[1] for b in basis], dtype=np.int64)
    cols = np.arange(dim)
    lgrid = np.arange(lam + 2, dtype=float)
    c = np.sqrt(1.0 + lgrid**2 / p.k)
    c[0] = c[-1] = 0.0

    def mat(r, cc, v):
        keep = (r >= 0) & (v != 0)
        out = scipy.sparse.csr_matrix(
            (v[keep].astype(complex), (r[keep], cc[keep])), shape=(dim, dim)
        )
        return out if sparse else out.toarray()

    xs = {}
    for a in (0, 1, -1):
        down = _sphere_index(lam, M + a, Lv - 1)
        up = _sphere_index(lam, M + a, Lv + 1)
        v_down = c[Lv] * _clebsch_A_array(a, Lv, M)
        # B_l^{a,m} = A_{l+1}^{-a,m+a}
        v_up = c[Lv + 1] * _clebsch_A_array(-a, Lv + 1, M + a)
        r = np.concatenate((down, up))
        v = np.concatenate((v_down, v_up))
        xs[a] = mat(r, np.concatenate((cols, cols)), v)
    raise_to = _sphere_index(lam, M + 1, Lv)
    lp_v = np.sqrt(np.maximum((Lv - M) * (Lv + M + 1), 0)) / SQRT2
    L_plus = mat(raise_to, cols, lp_v)
    if sparse:
        diag = lambda d: scipy.sparse.diags(d, 0, format="csr")  # noqa: E731
        L_minus = L_plus.conj().T.tocsr()
    else:
        diag = np.diag
        L_minus = L_plus.conj().T.copy()
    return SphereOperators(
        OperatorRep(basis, xs[0]),
        OperatorRep(basis, xs[1]),
        OperatorRep(basis, xs[-1]),
        OperatorRep(basis, diag(M.astype(complex))),
        OperatorRep(basis, L_plus),
        OperatorRep(basis, L_minus),
        OperatorRep(basis, diag((Lv * (Lv + 1)).astype(complex))),
    )


def sphere_x_squared(p: FuzzyParams) -> np.ndarray:
    """Diagonal of ``x² = 1 + (L²+1)/k - (1+(Λ+1)²/k)(Λ+1)/(2Λ+1) P̃_Λ`` in basis order."""
    _require_sphere(p)
    lam, k = p.lam, p.k
    ls = np.array([l for _, l in sphere_basis(lam)], dtype=float)
    out = 1.0 + (ls * (ls + 1) + 1) / k
    out[ls == lam] -= (1 + (lam + 1) ** 2 / k) * (lam + 1) / (2 * lam + 1)
    return out


def _levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    return eps


def _top_projector(p: FuzzyParams) -> np.ndarray:
    return np.diag([1.0 if l == p.lam else 0.0 for _, l in sphere_basis(p.lam)])


def sphere_algebra_residuals(p: FuzzyParams) -> dict[str, float]:
    """Spectral-norm residuals of the O(3)-equivariant relations (dense; keep Λ small).

    The ``[x_i, x_j]`` relation is checked separately by :func:`fit_commutator_K`.
    """
    ops = build_sphere_operators(p)
    lam, k = p.lam, p.k
    x, L = ops.cartesian()
    dim = x[0].shape[0]
    eye = np.eye(dim)
    eps = _levi_civita()
    res: dict[str, float] = {}
    res["L_x"] = max(
        spectral_norm(L[i] @ x[j] - x[j] @ L[i] - 1j * sum(eps[i, j, h] * x[h] for h in range(3)))
        for i in range(3)
        for j in range(3)
    )
    res["L_L"] = max(
        spectral_norm(L[i] @ L[j] - L[j] @ L[i] - 1j * sum(eps[i, j, h] * L[h] for h in range(3)))
        for i in range(3)
        for j in range(3)
    )
    res["x_hermitian"] = max(spectral_norm(a.conj().T - a) for a in x)
    res["L_hermitian"] = max(spectral_norm(a.conj().T - a) for a in L)
    res["xplus_adjoint"] = spectral_norm(ops.x_plus.entries.conj().T - ops.x_minus.entries)
    res["x_dot_L"] = spectral_norm(sum(x[i] @ L[i] for i in range(3)))
    Lsq = ops.Lsq.entries
    res["Lsq_sum_form"] = spectral_norm(sum(a @ a for a in L) - Lsq)
    xsq = sum(a @ a for a in x)
    P = _top_projector(p)
    res["x_squared"] = spectral_norm(
        xsq - eye - (Lsq + eye) / k + (1 + (lam + 1) ** 2 / k) * (lam + 1) / (2 * lam + 1) * P
    )
    prod = eye.astype(complex)
    for l in range(lam + 1):
        prod = prod @ (Lsq - l * (l + 1) * eye)
    res["Lsq_spectrum_product"] = spectral_norm(prod)
    L3 = ops.L3.entries
    worst = 0.0
    for l in range(lam + 1):
        Pl = np.diag([1.0 if ll == l else 0.0 for _, ll in sphere_basis(lam)])
        prod = eye.astype(complex)
        for m in range(-l, l + 1):
            prod = prod @ (L3 - m * eye)
        worst = max(worst, spectral_norm(prod @ Pl))
    res["L3_spectrum_product"] = worst
    for name, a in (("xplus_power", ops.x_plus.entries), ("xminus_power", ops.x_minus.entries)):
        res[name] = 0.0 if not np.any(np.linalg.matrix_power(a, 2 * lam + 1)) else float("inf")
    res["x0_L3_commutator"] = spectral_norm(ops.x0.entries @ L3 - L3 @ ops.x0.entries)
    return res


@dataclass(frozen=True)
class CommutatorFit:
    """Fit of ``[x_i, x_j] + (i/k) ε_ijh L_h = i K ε_ijh P̃_Λ L_h``."""

    K: float
    per_pair: dict
    off_support: float
    fit_residual: float


def commutator_fit(p: FuzzyParams, tol: float = 1e-10) -> CommutatorFit:
    ops = build_sphere_operators(p)
    x, L = ops.cartesian()
    P = _top_projector(p)
    per_pair = {}
    off = resid = 0.0
    for i, j, h in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        C = x[i] @ x[j] - x[j] @ x[i] + (1j / p.k) * L[h]
        off = max(off, spectral_norm(C - P @ C @ P))
        D = 1j * P @ L[h] @ P
        Kij = float(np.vdot(D, C).real / np.vdot(D, D).real)
        resid = max(resid, spectral_norm(C - Kij * D))
        per_pair[f"{i + 1}{j + 1}"] = Kij
    Ks = list(per_pair.values())
    fit = CommutatorFit(float(np.mean(Ks)), per_pair, off, resid)
    if off > tol:
        raise AlgebraError(f"[x_i,x_j] + (i/k)L_h has support off the l=Λ block: {off:g}")
    if resid > tol or max(Ks) - min(Ks) > tol:
        raise AlgebraError(f"[x_i,x_j] is not proportional to P̃_Λ L_h (residual {resid:g})")
    return fit


def fit_commutator_K(p: FuzzyParams) -> float:
    """Scalar ``K`` in ``[x_i,x_j] = iε_ijh(-I/k + K P̃_Λ)L_h``, fitted from the matrices."""
    return commutator_fit(p).K


def coefficient_inequality_check(p: FuzzyParams) -> bool:
    """``c_l A_l^{0,m-1} > c_{l+1} A_{l+1}^{0,m}`` for all ``1 <= m <= l <= Λ``."""
    _require_sphere(p)
    coef = sphere_coefficients(p)
    lam = p.lam
    for m in range(1, lam + 1):
        for l in range(m, lam + 1):
            lhs = coef.c[l] * coef.A(0, l, m - 1)
            rhs = coef.c[l + 1] * coef.A(0, l + 1, m)
            if not lhs > rhs:
                return False
    return True
