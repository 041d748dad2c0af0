"""The spectral map ``G_Λ`` and the density / perturbation metrics.

``G_Λ`` carries the Toeplitz reference eigenvalues ``α̃_i = cos(iπ/(n+1))``
onto the true eigenvalues ``α_i`` of the coordinate matrix, joining the
knots by straight lines, extended as an odd function and held constant at
``±α₁`` beyond ``±α̃₁``. If ``G_Λ`` approaches the identity uniformly and
the reference spectrum becomes dense in ``[-1, 1]``, so does the true one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..circle import build_x1
from ..core import FuzzyParams, SpaceKind, Spectrum, SymTridiag, spectral_norm
from ..eigen import DEFAULT_TOL
from ..sphere import build_Bm
from .spectra import near_toeplitz_spectrum, parity_check, toeplitz_reference

_PARITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralMap:
    """Odd piecewise-linear map through ``(α̃_i, α_i)``, capped at ``±α₁``.

    ``ref`` and ``act`` hold the nonnegative half of the knots in ascending
    order, starting at the origin.
    """

    ref: np.ndarray
    act: np.ndarray

    @property
    def knots(self) -> list[tuple[float, float]]:
        """All knots in ascending order, mirrored through the origin."""
        r = np.concatenate((-self.ref[:0:-1], self.ref))
        a = np.concatenate((-self.act[:0:-1], self.act))
        return list(zip(r.tolist(), a.tolist()))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        # np.interp holds the end value beyond the last knot: the flat cap
        y = np.sign(x) * np.interp(np.abs(x), self.ref, self.act)
        return y if y.ndim else float(y)

    def sup_deviation(self) -> float:
        """``max_i |G(α̃_i) - α̃_i|``, the largest knot deviation."""
        return float(np.max(np.abs(self.act - self.ref)))


def build_spectral_map(reference: Spectrum, actual: Spectrum, tol: float = _PARITY_TOL) -> SpectralMap:
    if len(reference) != len(actual):
        raise ValueError(f"size mismatch: {len(reference)} vs {len(actual)}")
    for name, s in (("reference", reference), ("actual", actual)):
        if len(s) > 1 and not s.is_simple():
            raise ValueError(f"{name} spectrum is not simple")
        if not parity_check(s, tol):
            raise ValueError(f"{name} spectrum is not symmetric about 0")
    r = reference.values[::-1]
    a = actual.values[::-1]
    n = r.size
    # nonnegative half; an odd-sized spectrum has its middle value at 0
    half = slice(n // 2 + 1, None) if n % 2 else slice(n // 2, None)
    ref = np.concatenate(([0.0], r[half]))
    act = np.concatenate(([0.0], a[half]))
    ref.flags.writeable = False
    act.flags.writeable = False
    return SpectralMap(ref, act)


@dataclass(frozen=True)
class DensityMetrics:
    """Density and perturbation measurements for one coordinate matrix.

    ``hw_lhs = √Σ(α_i - α̃_i)²`` and ``hw_rhs`` is the closed-form cap being
    tested. ``frobenius`` and ``spectral`` are ``||X - P||_F`` and
    ``||X - P||_2``; they bound ``hw_lhs`` and ``max|α_i - α̃_i|``
    respectively by the Hoffman-Wielandt and Weyl inequalities.
    """

    lam: int
    size: int
    sup_dev: float
    max_gap: float
    hw_lhs: float
    hw_rhs: float
    max_abs_dev: float
    frobenius: float
    spectral: float

    @property
    def hw_bound_holds(self) -> bool:
        return self.hw_lhs < self.hw_rhs

    def as_row(self) -> dict:
        row = dict(self.__dict__)
        row["lambda"] = row.pop("lam")
        return {"lambda": row.pop("lambda"), **row}


def _matrix_for(p: FuzzyParams, m: int) -> SymTridiag:
    if p.kind is SpaceKind.CIRCLE:
        if m:
            raise ValueError("m applies to the sphere only")
        return build_x1(p)
    if p.kind is SpaceKind.SPHERE:
        return build_Bm(p, m)
    raise ValueError("density metrics are defined for the circle and the sphere")


def density_metrics(p: FuzzyParams, m: int = 0, tol: float = DEFAULT_TOL) -> DensityMetrics:
    t = _matrix_for(p, m)
    n = t.n
    ref = toeplitz_reference(n)
    act = near_toeplitz_spectrum(t, tol)
    smap = build_spectral_map(ref, act)
    dev = act.values - ref.values
    lam = p.lam
    if p.kind is SpaceKind.CIRCLE:
        rhs = 1.0 / (2 * (lam + 1) ** 2)
    else:
        rhs = 2 * (math.sqrt(1 + 1 / (lam + 1) ** 2) * (0.5 + 1 / 12) - 0.5)
    diff = SymTridiag(t.diag, t.offdiag - 0.5)
    gaps = act.values[:-1] - act.values[1:]
    return DensityMetrics(
        lam=lam,
        size=n,
        sup_dev=smap.sup_deviation(),
        max_gap=float(gaps.max()) if gaps.size else 0.0,
        hw_lhs=float(np.sqrt(np.sum(dev * dev))),
        hw_rhs=rhs,
        max_abs_dev=float(np.max(np.abs(dev))),
        frobenius=math.sqrt(float(np.sum(diff.diag**2) + 2 * np.sum(diff.offdiag**2))),
        spectral=spectral_norm(diff),
    )
