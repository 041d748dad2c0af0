"""Spectra of the coordinate operators and their structural checks."""

from __future__ import annotations

import math

import numpy as np

from ..circle import build_x1
from ..core import FuzzyParams, Spectrum, SymTridiag, entrywise_dominates, make_params, spectral_norm
from ..eigen import DEFAULT_TOL, eigen_all, toeplitz_eigs, top_eigenvalue
from ..sphere import build_Bm, build_sphere_operators


def toeplitz_reference(n: int) -> Spectrum:
    """Spectrum of ``P_n(0, ½, ½)``: ``cos(hπ/(n+1))``."""
    return toeplitz_eigs(n, 0.0, 0.5, 0.5)


def near_toeplitz_spectrum(t: SymTridiag, tol: float = DEFAULT_TOL) -> Spectrum:
    """``eigen_all`` seeded with Weyl brackets around ``P_n(0, ½, ½)``.

    ``||t - P||_2`` is bounded by the Gershgorin radius of the difference,
    which for the coordinate matrices is small; the brackets are verified by
    Sturm counts anyway, so a poor bound only costs speed.
    """
    if t.n == 1:
        return eigen_all(t, tol)
    diff = SymTridiag(t.diag, t.offdiag - 0.5)
    radius = float(np.max(np.abs(diff.diag)) + 2.0 * np.max(np.abs(diff.offdiag)))
    return eigen_all(t, tol, reference=toeplitz_reference(t.n), radius=radius)


def circle_spectrum(p: FuzzyParams, tol: float = DEFAULT_TOL) -> Spectrum:
    return near_toeplitz_spectrum(build_x1(p), tol)


def sphere_block_spectrum(p: FuzzyParams, m: int, tol: float = DEFAULT_TOL) -> Spectrum:
    return near_toeplitz_spectrum(build_Bm(p, m), tol)


def sphere_spectrum(p: FuzzyParams, tol: float = DEFAULT_TOL) -> Spectrum:
    """Spectrum of ``x₀`` as the multiset union of its ``m``-blocks."""
    parts = [sphere_block_spectrum(p, m, tol).values for m in range(-p.lam, p.lam + 1)]
    return Spectrum(np.concatenate(parts))


def madore_spectrum(lam: int) -> Spectrum:
    """``m/√(Λ²+Λ)`` for ``m = -Λ..Λ``."""
    if lam < 1:
        raise ValueError("cutoff must be >= 1")
    return Spectrum(np.arange(-lam, lam + 1) / math.sqrt(lam * lam + lam))


def parity_check(s: Spectrum, tol: float = 1e-10) -> bool:
    """True iff every ``α`` in ``s`` has a partner ``-α`` within ``tol``."""
    v = np.sort(s.values)
    if v.size == 0:
        return True
    pos = np.clip(np.searchsorted(v, -v), 0, v.size - 1)
    near = np.minimum(np.abs(v[pos] + v), np.abs(v[np.maximum(pos - 1, 0)] + v))
    return bool(np.all(near <= tol))


def simplicity_check(s: Spectrum, tol: float = DEFAULT_TOL) -> bool:
    """Consecutive eigenvalues separated by more than ``10·tol``."""
    return s.is_simple(10 * tol)


def interlacing_check(outer: SymTridiag, tol: float = DEFAULT_TOL) -> bool:
    """Strict Cauchy interlacing between ``outer`` and its leading ``n-1`` block.

    With ``λ`` the descending spectrum of ``outer`` and ``μ`` that of the
    submatrix, checks ``λ_i > μ_i > λ_{i+1}`` for every ``i``: each gap of
    either spectrum then holds exactly one eigenvalue of the other.
    """
    if outer.n < 2:
        raise ValueError("interlacing needs size >= 2")
    lam = eigen_all(outer, tol).values
    mu = eigen_all(outer.leading(outer.n - 1), tol).values
    return bool(np.all(lam[:-1] > mu) and np.all(mu > lam[1:]))


def union_residual(p: FuzzyParams) -> float:
    """Largest deviation between ``eig(dense x₀)`` and the union of block spectra."""
    x0 = build_sphere_operators(p).x0.dense()
    dense = np.sort(np.linalg.eigvalsh(x0))
    blocks = np.sort(sphere_spectrum(p).values)
    if dense.size != blocks.size:
        return math.inf
    return float(np.max(np.abs(dense - blocks)))


def norm_chain(p: FuzzyParams) -> list[dict]:
    """``||B_m||``, ``||B_{m-1}^{n(Λ;m)}||`` and ``||B_{m-1}||`` for ``m = 1..Λ``.

    ``chain`` asserts ``||B_m|| < ||B_{m-1}^{n}|| < ||B_{m-1}||``. At ``m = Λ``
    both ``B_Λ`` and the leading ``1×1`` block of ``B_{Λ-1}`` are the zero
    matrix, so the first inequality is an equality there and only the second
    is asserted.
    """
    out = []
    for m in range(1, p.lam + 1):
        bm = build_Bm(p, m)
        prev = build_Bm(p, m - 1)
        sub = prev.leading(bm.n)
        n_bm, n_sub, n_prev = spectral_norm(bm), spectral_norm(sub), spectral_norm(prev)
        first = n_bm < n_sub if bm.n > 1 else n_bm == n_sub == 0.0
        out.append({
            "m": m,
            "norm_Bm": n_bm,
            "norm_sub": n_sub,
            "norm_prev": n_prev,
            "dominated": entrywise_dominates(bm, sub),
            "chain": bool(first and n_sub < n_prev),
        })
    return out


def circle_top(lam: int, k: float, tol: float = DEFAULT_TOL) -> float:
    return top_eigenvalue(build_x1(make_params(lam, k, "circle")), tol)


def sphere_top(lam: int, k: float, m: int = 0, tol: float = DEFAULT_TOL) -> float:
    return top_eigenvalue(build_Bm(make_params(lam, k, "sphere"), m), tol)
