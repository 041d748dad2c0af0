"""Dispersion of states and the most localized coordinate eigenstates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse

from ..circle import build_circle_operators, build_x1
from ..core import FuzzyParams, OperatorRep, SpaceKind, StateVector, make_params
from ..eigen import eigenvector_of, top_eigenvalue
from ..sphere import build_Bm, build_sphere_operators

NORM_TOL = 1e-12
CIRCLE_C = math.pi**2 / 4
SPHERE_C = math.pi**2 - 1


def dispersion(x_ops, state: StateVector) -> float:
    """``Σ_i <x_i²> - Σ_i <x_i>²`` for hermitian ``x_i``.

    Works with dense or sparse operator matrices: only products ``x_i ψ``
    are formed, and ``<x_i²> = ||x_i ψ||²``.
    """
    v = state.coefficients
    if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
        raise ValueError("state must be normalized")
    total = 0.0
    for op in x_ops:
        mat = op.entries if isinstance(op, OperatorRep) else op
        if mat.shape != (v.size, v.size):
            raise ValueError(f"operator shape {mat.shape} does not match state size {v.size}")
        w = mat @ v
        mean = float(np.vdot(v, w).real)
        total += float(np.vdot(w, w).real) - mean * mean
    return total


def madore_operators(lam: int) -> tuple[OperatorRep, OperatorRep, OperatorRep]:
    """``x_i = L_i/√(Λ²+Λ)`` in the spin-Λ irrep, basis ``m = Λ..-Λ``."""
    if lam < 1:
        raise ValueError("cutoff must be >= 1")
    m = np.arange(lam, -lam - 1, -1, dtype=float)
    # L₊ raises m: superdiagonal √((Λ-m)(Λ+m+1)) in descending-m order
    up = np.sqrt((lam - m[1:]) * (lam + m[1:] + 1))
    Lp = np.diag(up, 1).astype(complex)
    Lm = Lp.conj().T
    L1 = (Lp + Lm) / 2
    L2 = (Lp - Lm) / 2j
    L3 = np.diag(m).astype(complex)
    r = math.sqrt(lam * lam + lam)
    basis = tuple(int(x) for x in m)
    return tuple(OperatorRep(basis, a / r) for a in (L1, L2, L3))


@dataclass(frozen=True, eq=False)
class LocalizedState:
    state: StateVector
    eigenvalue: float
    dispersion: float
    L_expectation: float


def _circle_state(p: FuzzyParams) -> LocalizedState:
    t = build_x1(p)
    a1 = top_eigenvalue(t)
    pair = eigenvector_of(t, a1)
    ops = build_circle_operators(p, sparse=True)
    v = pair.vector
    n = np.array(ops.L.basis, dtype=float)
    L_exp = float(np.sum(np.abs(v.coefficients) ** 2 * n))
    return LocalizedState(v, a1, dispersion([ops.x1, ops.x2], v), L_exp)


def _sphere_state(p: FuzzyParams) -> LocalizedState:
    t = build_Bm(p, 0)
    a1 = top_eigenvalue(t)
    pair = eigenvector_of(t, a1)
    ops = build_sphere_operators(p, sparse=True)
    basis = ops.x0.basis
    full = np.zeros(len(basis), dtype=complex)
    start = basis.index((0, 0))
    full[start : start + t.n] = pair.vector.coefficients
    v = StateVector(full)
    x_ops = ops.cartesian()[0]
    L3 = ops.L3.entries
    L_exp = float(np.vdot(full, L3 @ full).real)
    return LocalizedState(v, a1, dispersion(x_ops, v), L_exp)


def _madore_state(p: FuzzyParams) -> LocalizedState:
    lam = p.lam
    ops = madore_operators(lam)
    v = np.zeros(2 * lam + 1, dtype=complex)
    v[0] = 1.0  # m = Λ, the top eigenvector of x₃
    state = StateVector(v)
    m = np.array(ops[2].basis, dtype=float)
    return LocalizedState(
        state,
        lam / math.sqrt(lam * lam + lam),
        dispersion(ops, state),
        float(np.sum(np.abs(v) ** 2 * m)),
    )


def most_localized(p: FuzzyParams) -> LocalizedState:
    """Top eigenvector of ``x₁`` (circle) or ``x₀``/``x₃`` (sphere, Madore).

    For the fuzzy sphere the state lives in the ``m = 0`` block, so its
    ``<L₃>`` vanishes identically; the Madore top state has ``<L₃> = Λ``.
    """
    if p.kind is SpaceKind.CIRCLE:
        return _circle_state(p)
    if p.kind is SpaceKind.SPHERE:
        return _sphere_state(p)
    return _madore_state(p)


def localization_row(kind: str, lam: int, k: float | None = None) -> dict:
    """Dispersion of the top state against ``C/Λ²``.

    No bound is claimed for the Madore sphere; its ``bound``, ``ratio`` and
    ``pass`` fields are left empty.
    """
    p = make_params(lam, k, kind)
    s = most_localized(p)
    row = {
        "lambda": lam,
        "top_eigenvalue": s.eigenvalue,
        "dispersion": s.dispersion,
        "bound": None,
        "ratio": None,
        "L_expectation": s.L_expectation,
        "pass": None,
    }
    if p.kind is not SpaceKind.MADORE:
        c = CIRCLE_C if p.kind is SpaceKind.CIRCLE else SPHERE_C
        row.update(bound=c / lam**2, ratio=s.dispersion * lam**2 / c, **{"pass": bool(s.dispersion < c / lam**2)})
    return row


def madore_comparison(lam: int, k: float | None = None) -> dict:
    """Top-eigenvalue state of the fuzzy sphere next to the Madore one."""
    fuzzy = most_localized(make_params(lam, k, "sphere"))
    madore = most_localized(make_params(lam, kind="madore"))
    return {
        "lambda": lam,
        "top_eig_fuzzy": fuzzy.eigenvalue,
        "top_eig_madore": madore.eigenvalue,
        "L3_fuzzy": fuzzy.L_expectation,
        "L3_madore": madore.L_expectation,
        "dispersion_fuzzy": fuzzy.dispersion,
        "dispersion_madore": madore.dispersion,
    }


def rotate_operators(x_ops, rotation: np.ndarray) -> list:
    """``x'_i = Σ_j R_ij x_j``, for an orthogonal ``R``."""
    mats = [op.entries if isinstance(op, OperatorRep) else op for op in x_ops]
    out = []
    for row in np.asarray(rotation):
        acc = sum(r * m for r, m in zip(row, mats))
        out.append(acc.tocsr() if scipy.sparse.issparse(acc) else acc)
    return out
