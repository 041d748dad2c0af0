"""Symmetric tridiagonal eigensolver: Sturm counts, bisection, inverse iteration.

The characteristic polynomials of the leading principal submatrices of
``T - xI`` obey the three-term recursion

    p_h(x) = (d_h - x) p_{h-1}(x) - e_{h-1}^2 p_{h-2}(x),

and the number of sign changes in ``p_0, ..., p_n`` is the number of
eigenvalues below ``x``. The raw minors overflow quickly, so the counts are
taken from the ratios ``q_h = p_h / p_{h-1}`` instead, which obey
``q_h = (d_h - x) - e_{h-1}^2 / q_{h-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np
import scipy.linalg

from .core import ATOL, Spectrum, StateVector, SymTridiag

DEFAULT_TOL = 1e-13


class ConvergenceError(RuntimeError):
    """An iteration failed to converge within its budget."""


@numba.njit(cache=True, nogil=True)
def _count_below(d, e2, x, pivmin):
    count = 0
    q = d[0] - x
    if q == 0.0:
        q = pivmin
    elif abs(q) < pivmin:
        q = math.copysign(pivmin, q)
    if q < 0.0:
        count += 1
    for i in range(1, d.size):
        q = (d[i] - x) - e2[i - 1] / q
        if q == 0.0:
            q = pivmin
        elif abs(q) < pivmin:
            q = math.copysign(pivmin, q)
        if q < 0.0:
            count += 1
    return count


@numba.njit(cache=True, nogil=True)
def _bisect(d, e2, targets, lo, hi, tol, pivmin, maxit):
    # All brackets advance together; rows outermost, brackets innermost.
    m = targets.size
    n = d.size
    mid = np.empty(m)
    q = np.empty(m)
    cnt = np.empty(m, dtype=np.int64)
    it = 0
    while it < maxit:
        width = 0.0
        for j in range(m):
            w = hi[j] - lo[j]
            if w > width:
                width = w
        if width <= tol:
            return lo, hi, it
        stuck = True
        for j in range(m):
            mid[j] = 0.5 * (lo[j] + hi[j])
            if mid[j] != lo[j] and mid[j] != hi[j]:
                stuck = False
        if stuck:
            return lo, hi, -1
        for j in range(m):
            v = d[0] - mid[j]
            if v == 0.0:
                v = pivmin
            elif abs(v) < pivmin:
                v = math.copysign(pivmin, v)
            q[j] = v
            cnt[j] = 1 if v < 0.0 else 0
        for i in range(1, n):
            di = d[i]
            ei = e2[i - 1]
            for j in range(m):
                v = (di - mid[j]) - ei / q[j]
                if abs(v) < pivmin:
                    v = -pivmin if v < 0.0 else pivmin
                q[j] = v
                cnt[j] += v < 0.0
        for j in range(m):
            # targets[j] is the 0-based ascending index of the eigenvalue
            if cnt[j] > targets[j]:
                hi[j] = mid[j]
            else:
                lo[j] = mid[j]
        it += 1
    return lo, hi, -2


def _pivmin(e2: np.ndarray) -> float:
    top = float(e2.max()) if e2.size else 0.0
    return np.finfo(float).tiny * max(1.0, top)


def gershgorin_radius(t: SymTridiag) -> float:
    """``max|d| + 2 max|e|``, a bound on the spectral radius."""
    e = float(np.max(np.abs(t.offdiag))) if t.n > 1 else 0.0
    return float(np.max(np.abs(t.diag))) + 2.0 * e


@dataclass(frozen=True, eq=False)
class SturmSequence:
    """Sturm data of ``matrix`` at ``x``.

    ``ratios[h] = p_{h+1}(x) / p_h(x)`` with ``p_0 = 1``; a negative ratio
    marks a sign change of the minor sequence.
    """

    matrix: SymTridiag
    x: float
    ratios: np.ndarray

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.ratios < 0))


def sturm_sequence(t: SymTridiag, x: float) -> SturmSequence:
    e2 = t.offdiag**2
    piv = _pivmin(e2)
    q = np.empty(t.n)
    prev = 1.0
    for h in range(t.n):
        v = t.diag[h] - x
        if h:
            v -= e2[h - 1] / prev
        if v == 0.0:
            v = piv
        elif abs(v) < piv:
            v = math.copysign(piv, v)
        q[h] = prev = v
    return SturmSequence(t, float(x), q)


def characteristic_minors(t: SymTridiag, x: float) -> np.ndarray:
    """Unscaled leading minors ``p_0..p_n`` of ``T - xI``; small ``n`` only."""
    p = np.empty(t.n + 1)
    p[0] = 1.0
    p[1] = t.diag[0] - x
    for h in range(2, t.n + 1):
        p[h] = (t.diag[h - 1] - x) * p[h - 1] - t.offdiag[h - 2] ** 2 * p[h - 2]
    return p


def sturm_count(t: SymTridiag, x: float) -> int:
    """Number of eigenvalues of ``t`` strictly below ``x``."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("evaluation point must be finite")
    e2 = np.ascontiguousarray(t.offdiag**2)
    return int(_count_below(t.diag, e2, x, _pivmin(e2)))


def eigen_select(t: SymTridiag, indices, tol: float = DEFAULT_TOL, lo=None, hi=None) -> np.ndarray:
    """Eigenvalues with the given 0-based *ascending* indices, by bisection.

    ``lo``/``hi`` optionally give a starting bracket per index. Each one is
    checked with Sturm counts; any that does not contain its eigenvalue is
    replaced by the Gershgorin interval.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    targets = np.asarray(indices, dtype=np.int64).ravel()
    if targets.size and (targets.min() < 0 or targets.max() >= t.n):
        raise IndexError(f"eigenvalue index out of range 0..{t.n - 1}")
    if t.n == 1:
        return np.full(targets.size, float(t.diag[0]))
    r = gershgorin_radius(t)
    pad = 4 * np.finfo(float).eps * max(r, 1.0)
    e2 = np.ascontiguousarray(t.offdiag**2)
    piv = _pivmin(e2)
    glo, ghi = -r - pad, r + pad
    lo0 = np.full(targets.size, glo)
    hi0 = np.full(targets.size, ghi)
    if lo is not None or hi is not None:
        lo_in = np.broadcast_to(np.asarray(glo if lo is None else lo, dtype=float), targets.shape)
        hi_in = np.broadcast_to(np.asarray(ghi if hi is None else hi, dtype=float), targets.shape)
        for j, idx in enumerate(targets):
            a, b = float(lo_in[j]), float(hi_in[j])
            if a < b and _count_below(t.diag, e2, a, piv) <= idx < _count_below(t.diag, e2, b, piv):
                lo0[j], hi0[j] = a, b
    maxit = int(math.ceil(math.log2((ghi - glo) / tol))) + 8
    lo_out, hi_out, it = _bisect(t.diag, e2, targets, lo0, hi0, float(tol), piv, maxit)
    if it < 0:
        raise ConvergenceError(
            f"bisection brackets stopped shrinking before width {tol:g} "
            f"(reached {float(np.max(hi_out - lo_out)):g})"
        )
    return 0.5 * (lo_out + hi_out)


def eigen_all(t: SymTridiag, tol: float = DEFAULT_TOL, reference: Spectrum | None = None,
              radius: float | None = None) -> Spectrum:
    """All eigenvalues of ``t``, each bracketed to width ``<= tol``.

    If ``reference`` is the spectrum of a symmetric matrix ``A`` with
    ``||t - A||_2 <= radius``, Weyl's inequality puts each eigenvalue within
    ``radius`` of its reference counterpart and bisection starts there.
    """
    idx = np.arange(t.n)
    if reference is None:
        return Spectrum(eigen_select(t, idx, tol))
    if len(reference) != t.n or radius is None:
        raise ValueError("reference needs matching size and a radius")
    asc = reference.values[::-1]
    slack = radius + 4 * np.finfo(float).eps * max(1.0, gershgorin_radius(t))
    return Spectrum(eigen_select(t, idx, tol, asc - slack, asc + slack))


def top_eigenvalue(t: SymTridiag, tol: float = DEFAULT_TOL) -> float:
    return float(eigen_select(t, [t.n - 1], tol)[0])


def toeplitz_eigs(n: int, a: float, b: float, c: float) -> Spectrum:
    """Closed-form spectrum of ``P_n(a, b, c)``: ``a + 2√(bc) cos(hπ/(n+1))``.

    ``b`` sits on the super-diagonal and ``c`` on the sub-diagonal. The
    cosine is evaluated as ``sin((n+1-2h)π/(2(n+1)))`` so that the middle
    eigenvalue of an odd-sized matrix comes out as exactly ``a``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if b * c < 0:
        raise ValueError("bc < 0 gives a complex spectrum, not supported")
    h = np.arange(1, n + 1)
    return Spectrum(a + 2.0 * math.sqrt(b * c) * np.sin((n + 1 - 2 * h) * np.pi / (2 * (n + 1))))


def toeplitz_eigvec(n: int, h: int, b: float, c: float) -> StateVector:
    """Normalized eigenvector ``h`` (1-based, descending) of ``P_n(a, b, c)``."""
    if not 1 <= h <= n:
        raise ValueError(f"h must lie in 1..{n}")
    if b * c <= 0:
        raise ValueError("requires bc > 0")
    k = np.arange(1, n + 1)
    raw = (c / b) ** (k / 2) * np.sin(h * k * np.pi / (n + 1))
    return StateVector(raw, normalized=True)


@dataclass(frozen=True, eq=False)
class Eigenpair:
    value: float
    vector: StateVector
    residual: float


def _fix_sign(v: np.ndarray) -> np.ndarray:
    big = np.max(np.abs(v))
    first = np.flatnonzero(np.abs(v) > 1e-12 * big)[0]
    return -v if v[first] < 0 else v


def eigenvector_of(t: SymTridiag, lam: float, maxit: int = 8) -> Eigenpair:
    """Inverse iteration on ``T - λI``.

    The returned vector is real, unit length, and its first non-negligible
    component is positive.
    """
    n = t.n
    if n == 1:
        return Eigenpair(float(lam), StateVector(np.ones(1)), abs(float(t.diag[0]) - lam))
    scale = max(1.0, gershgorin_radius(t))
    target = 1e-10 * scale
    shift = float(lam)
    ab = np.zeros((3, n))
    ab[0, 1:] = t.offdiag
    ab[2, :-1] = t.offdiag
    v = np.random.default_rng(0).uniform(0.5, 1.5, n)
    v /= np.linalg.norm(v)
    res = np.inf
    for _ in range(maxit):
        ab[1] = t.diag - shift
        try:
            w = scipy.linalg.solve_banded((1, 1), ab, v, check_finite=False)
        except np.linalg.LinAlgError:
            # exactly singular: nudge the shift by one ulp-scale step
            shift += 8 * np.finfo(float).eps * scale
            continue
        v = w / np.linalg.norm(w)
        res = float(np.linalg.norm(t.matvec(v) - lam * v))
        if res <= target:
            break
    if not res <= target:
        raise ConvergenceError(f"inverse iteration residual {res:g} above {target:g}")
    v = _fix_sign(v)
    return Eigenpair(float(lam), StateVector(v), res)


__all__ = [
    "ATOL",
    "ConvergenceError",
    "DEFAULT_TOL",
    "Eigenpair",
    "SturmSequence",
    "characteristic_minors",
    "eigen_all",
    "eigen_select",
    "eigenvector_of",
    "gershgorin_radius",
    "sturm_count",
    "sturm_sequence",
    "toeplitz_eigs",
    "toeplitz_eigvec",
    "top_eigenvalue",
]
